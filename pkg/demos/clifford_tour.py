"""
A tour of the qubit Clifford fragment
=====================================

Parse circuits, normalize them, evaluate them exactly and prove a small
equation by rewriting.
"""

# %%
from qcprop import circuit, load_fragment, print_term, to_canonical, to_term

cliff = load_fragment("Cliff")
print(cliff.generators)
print(len(cliff.axioms), "axioms")

# %%
# Two ways of writing the same diagram give one canonical form.
a = circuit("H:1 H:2 CNOT:1,2", 2)
b = circuit("H:2 H:1 CNOT:1,2", 2)
print(to_canonical(a) == to_canonical(b))
print(print_term(to_term(to_canonical(a))))

# %%
# Exact semantics, entries live in Q(zeta24)
u = cliff.eval(circuit("H:1 S:1 S:1 H:1", 1))
print(u.to_complex())

# %%
from qcprop.rewrite import Budget, search_equal

lhs = cliff.canonical(circuit("S:1 S:1 S:1 S:1", 1))
rhs = cliff.canonical(circuit("", 1))
res = search_equal(lhs, rhs, cliff, Budget(max_depth=8))
print(res.found)
for step in res.script.steps:
    print(step)
