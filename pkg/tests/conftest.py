from __future__ import annotations

import random

from qcprop.diagram import Id, Par, Seq, Swap, Term, par, placed
from qcprop.field import ONE, ZERO, CycMatrix, kron

# filled by test_acceptance, printed at the end of the run
ACCEPTANCE: dict[int, tuple[str, bool, str]] = {}

CLIFF_GATES = (("H", 1), ("S", 1), ("CNOT", 2), ("w", 0))


def random_term(rng: random.Random, n: int, size: int, gates=CLIFF_GATES) -> Term:
    """A random n-wire term with about ``size`` leaves, swaps included."""
    if size <= 1:
        opts = [(g, a) for g, a in gates if a <= n]
        r = rng.random()
        if r < 0.15 or not opts:
            return Id(n)
        if n >= 2 and r < 0.3:
            k = rng.randrange(n - 1)
            return par(*([Id(k)] if k else []), Swap(), *([Id(n - k - 2)] if n - k - 2 else []))
        g, a = rng.choice(opts)
        return placed(g, rng.sample(range(1, n + 1), a), n, a)
    half = size // 2
    if rng.random() < 0.55:
        return Seq(random_term(rng, n, half, gates), random_term(rng, n, size - half, gates))
    k = rng.randint(0, n)
    return Par(random_term(rng, k, half, gates), random_term(rng, n - k, size - half, gates))


def _swap_matrix(d: int) -> CycMatrix:
    rows = [[ZERO] * (d * d) for _ in range(d * d)]
    for x in range(d):
        for y in range(d):
            rows[y * d + x][x * d + y] = ONE
    return CycMatrix(rows)


def term_matrix(t: Term, sem) -> CycMatrix:
    """Reference evaluator straight from the term: seq is a product, par a Kronecker product."""
    d = sem.dim
    if isinstance(t, Id):
        return CycMatrix.identity(t.n, d)
    if isinstance(t, Swap):
        return _swap_matrix(d)
    if isinstance(t, Seq):
        return term_matrix(t.second, sem) @ term_matrix(t.first, sem)
    if isinstance(t, Par):
        return kron(term_matrix(t.left, sem), term_matrix(t.right, sem))
    return sem[t.name]


def pytest_terminal_summary(terminalreporter):
    if not ACCEPTANCE:
        return
    terminalreporter.section("acceptance criteria")
    for k in sorted(ACCEPTANCE):
        name, ok, detail = ACCEPTANCE[k]
        terminalreporter.write_line(f"criterion {k} {name}: {'PASS' if ok else 'FAIL'}  {detail}")
