"""
Scalars, hidden phases and group closures
=========================================
"""

# %%
from qcprop import load_fragment
from qcprop.harness import group_closure
from qcprop.scalars import hidden_phase_scan, rotation_toy, visible_scalars

for name in ("Cliff", "RCliff", "Cliff3"):
    g = visible_scalars(load_fragment(name))
    print(name, g.generators, "order", g.order)

# %%
# R_X(2 pi) is -I, yet no scalar generator produces -1
for h in hidden_phase_scan(rotation_toy(), 1, 4):
    print(h.phase.to_complex(), h.word)

print(hidden_phase_scan(load_fragment("Cliff"), 1, 8))

# %%
rep = group_closure(load_fragment("Cliff"), 1)
print(rep.order, "=", rep.projective_order, "x", rep.scalar_order)

rep = group_closure(load_fragment("Cliff3"), 1)
print(rep.order, "=", rep.projective_order, "x", rep.scalar_order)

# %%
# adjoin a square root of the qutrit scalar -zeta3
from qcprop.field import CycQ
from qcprop.scalars import refine

ref = refine(load_fragment("Cliff3"), "mw", CycQ.zeta(2), 6, 2, 10, s_value=-CycQ.zeta(8))
print(ref.to_json())
