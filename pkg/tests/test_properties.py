"""Randomized structural-congruence and semantics properties (the acceptance suite reruns them at 10^4)."""

from __future__ import annotations

import random

import pytest
from conftest import random_term, term_matrix

from qcprop.diagram import Id, Par, Seq, Swap, gen, par, permutation_term, to_canonical, to_term, width
from qcprop.field import CycMatrix
from qcprop.fragments import load_fragment
from qcprop.semantics import eval_diagram

N = 2_000


def _piece(rng, n):
    return random_term(rng, n, rng.randint(1, 4))


def _in_context(rng, n, x, y):
    """Put two same-width terms into one random context."""
    k = rng.randint(0, 2)
    pre, post = _piece(rng, n + k), _piece(rng, n + k)
    if rng.random() < 0.5:
        return Seq(Seq(pre, Par(x, Id(k))), post), Seq(Seq(pre, Par(y, Id(k))), post)
    return Seq(Seq(pre, Par(Id(k), x)), post), Seq(Seq(pre, Par(Id(k), y)), post)


def _swap_at(n, k):
    return par(*([Id(k)] if k else []), Swap(), *([Id(n - k - 2)] if n - k - 2 else []))


def _block_swap(m, n):
    # track t of the left block moves past the right block
    return permutation_term([t + n for t in range(1, m + 1)] + [t for t in range(1, n + 1)])


def m_identity(rng):
    n = rng.randint(0, 3)
    t = _piece(rng, n)
    return t, (Seq(Id(n), t) if rng.random() < 0.5 else Seq(t, Id(n)))


def m_par_unit(rng):
    n = rng.randint(0, 3)
    t = _piece(rng, n)
    return t, (Par(Id(0), t) if rng.random() < 0.5 else Par(t, Id(0)))


def m_assoc(rng):
    if rng.random() < 0.5:
        n = rng.randint(1, 3)
        a, b, c = (_piece(rng, n) for _ in range(3))
        return Seq(Seq(a, b), c), Seq(a, Seq(b, c))
    a, b, c = (_piece(rng, rng.randint(0, 2)) for _ in range(3))
    return Par(Par(a, b), c), Par(a, Par(b, c))


def m_interchange(rng):
    m, n = rng.randint(0, 2), rng.randint(0, 2)
    a, b = _piece(rng, m), _piece(rng, m)
    c, d = _piece(rng, n), _piece(rng, n)
    return Par(Seq(a, b), Seq(c, d)), Seq(Par(a, c), Par(b, d))


def m_involution(rng):
    n = rng.randint(2, 4)
    t = _piece(rng, n)
    s = _swap_at(n, rng.randrange(n - 1))
    return t, Seq(Seq(t, s), s)


def m_naturality(rng):
    m, n = rng.randint(0, 2), rng.randint(0, 2)
    a, b = _piece(rng, m), _piece(rng, n)
    return Seq(Par(a, b), _block_swap(m, n)), Seq(_block_swap(m, n), Par(b, a))


MOVES = [m_identity, m_par_unit, m_assoc, m_interchange, m_involution, m_naturality]


@pytest.mark.parametrize("move", MOVES, ids=lambda m: m.__name__[2:])
def test_structural_move_preserves_canonical_form(move):
    rng = random.Random(100 + MOVES.index(move))
    failures = 0
    for _ in range(N):
        x, y = move(rng)
        if rng.random() < 0.5:
            x, y = _in_context(rng, width(x), x, y)
        if to_canonical(x) != to_canonical(y):
            failures += 1
    assert failures == 0


def test_canonicalization_idempotent():
    rng = random.Random(7)
    for _ in range(N):
        n = rng.randint(0, 4)
        c = to_canonical(random_term(rng, n, rng.randint(1, 12)))
        assert to_canonical(to_term(c)) == c


@pytest.fixture(scope="module")
def cliff_sem():
    return load_fragment("Cliff").semantics


def _samples(seed, count=N, max_wires=3):
    rng = random.Random(seed)
    for _ in range(count):
        n = rng.randint(0, max_wires)
        yield n, random_term(rng, n, rng.randint(1, 8))


def test_functoriality_against_reference_evaluator(cliff_sem):
    # the reference multiplies and tensors along the term; eval works on the canonical form
    for _, t in _samples(11):
        assert eval_diagram(to_canonical(t), cliff_sem) == term_matrix(t, cliff_sem)


def test_unitarity(cliff_sem):
    for _, t in _samples(12):
        assert eval_diagram(to_canonical(t), cliff_sem).is_unitary()


def test_invariance_under_canonicalization(cliff_sem):
    for _, t in _samples(13):
        c = to_canonical(t)
        assert eval_diagram(to_term(c), cliff_sem) == eval_diagram(c, cliff_sem)


def test_scalar_centrality(cliff_sem):
    w = cliff_sem["w"].rows[0][0]
    for n, t in _samples(14):
        u = eval_diagram(to_canonical(t), cliff_sem)
        wn = Par(gen("w", 0), Id(n))
        before = eval_diagram(to_canonical(Seq(wn, t)), cliff_sem)
        after = eval_diagram(to_canonical(Seq(t, wn)), cliff_sem)
        assert before == after == u.scale(w)


def test_qutrit_functoriality():
    sem = load_fragment("Cliff3").semantics
    gates = (("H", 1), ("S", 1), ("CNOT", 2), ("w", 0))
    rng = random.Random(15)
    for _ in range(2000):
        n = rng.randint(0, 2)
        t = random_term(rng, n, rng.randint(1, 6), gates)
        u = eval_diagram(to_canonical(t), sem)
        assert u == term_matrix(t, sem)
        assert u.is_unitary()


def test_kronecker_of_identities_is_identity():
    assert CycMatrix.identity(1).kron(CycMatrix.identity(1)) == CycMatrix.identity(2)
