"""
Transfer cases and bounded completeness evidence
================================================

Running this takes a minute or so.
"""

# %%
from qcprop.rewrite import Budget
from qcprop.transfer import SHIPPED_CASES, check_decenc, check_encdec, load_transfer

for name in SHIPPED_CASES[:-1]:
    case = load_transfer(name)
    enc = all(r.ok for r in check_encdec(case))
    dec = check_decenc(case, Budget(max_depth=12))
    print(name, "encdec", enc, "decenc", all(r.ok for r in dec))

# %%
from qcprop import load_fragment
from qcprop.harness import completeness_evidence

rep = completeness_evidence(load_fragment("Cliff"), 1, 6, Budget(max_depth=12))
print(rep.to_json())

# %%
# independence: one separating interpretation per axiom
from qcprop.models import TABLES, independence_check

cliff = load_fragment("Cliff")
for ax in cliff.axioms:
    interp = TABLES["Cliff"][ax.name][0]
    print(ax.name, interp, independence_check(cliff, ax.name, interp).witness is not None)
