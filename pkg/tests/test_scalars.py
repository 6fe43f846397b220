import pytest

from qcprop.diagram import CanonicalDiagram, circuit, to_canonical
from qcprop.field import ONE, CycMatrix, CycQ
from qcprop.fragments import FRAGMENT_NAMES, custom_fragment, load_fragment
from qcprop.rewrite import Budget
from qcprop.scalars import (
    RefinementError,
    conservativity_probe,
    extract_scalar,
    hidden_phase_scan,
    parse_refine_text,
    refine,
    refined_fragment,
    rotation_toy,
    visible_scalars,
)
from qcprop.semantics import eval_diagram


def test_extract_examples():
    c = to_canonical(circuit("w H w", 1))
    ex, rest = extract_scalar(c)
    assert ex == {"w": 2} and rest == to_canonical(circuit("H", 1))
    nine = to_canonical(circuit("w " * 9, 0))
    assert extract_scalar(nine, 8)[0] == {"w": 1}
    free = to_canonical(circuit("H:1 CNOT:1,2", 2))
    assert extract_scalar(free) == ({}, free)


def test_extract_round_trip():
    f = load_fragment("Cliff")
    w = f.semantics["w"].rows[0][0]
    for spec in ["w H:1 w S:2 w", "CNOT:1,2 w w w", "w w w w w w w w w w H:2 H:1"]:
        c = f.canonical(circuit(spec, 2))
        ex, rest = extract_scalar(c)
        rebuilt = CanonicalDiagram(c.width, [("w", ())] * ex.get("w", 0) + list(rest.events), rest.perm)
        assert rebuilt == c
        assert f.eval(rest).scale(w ** ex.get("w", 0)) == f.eval(c)


def test_visible_orders():
    expected = {"Cliff": 8, "RCliff": 2, "Cliff3": 12, "CliffT": 8, "CliffCS": 8, "CNOTdihe": 8}
    for name in FRAGMENT_NAMES:
        assert visible_scalars(load_fragment(name)).order == expected[name]
    assert CycQ.zeta(3) in visible_scalars(load_fragment("Cliff")).elements


def test_hidden_phase_toy():
    (h,) = hidden_phase_scan(rotation_toy(), 1, 3)
    assert h.phase == -ONE and h.word == [("RX2pi", (1,))]


@pytest.mark.parametrize("name", ["Cliff", "Cliff3"])
def test_no_hidden_phases(name):
    assert hidden_phase_scan(load_fragment(name), 1, 8) == []


def test_hidden_phase_without_scalars():
    # drop w from Cliff: (H S)^3 = w I becomes a hidden phase
    f = load_fragment("Cliff")
    sem = f.semantics.restrict(["H", "S"])
    phases = {h.phase for h in hidden_phase_scan(sem, 1, 8)}
    assert CycQ.zeta(3) in phases


def test_refinement_instances():
    c3, cs = load_fragment("Cliff3"), load_fragment("CliffCS")
    # qutrit: base scalar -omega, new root of order 12, tenth power back to the base
    r = refine(c3, "mw", CycQ.zeta(2), 6, 2, 10, s_value=-CycQ.zeta(8))
    assert r.zeta**12 == ONE and r.zeta**10 == -CycQ.zeta(8)
    # Clifford+CS: base i, new root omega with omega^2 = i
    r2 = refine(cs, "i", CycQ.zeta(3), 4, 2, 2, s_value=CycQ.zeta(6))
    assert r2.order == 8 and [n for n, _, _ in r2.relations] == ["root_order", "root_power"]


def test_refinement_guards():
    cs = load_fragment("CliffCS")
    with pytest.raises(RefinementError, match="refinement relation fails"):
        refine(cs, "i", CycQ.zeta(6), 4, 2, 2, s_value=CycQ.zeta(6))  # zeta of order 4
    with pytest.raises(RefinementError, match="refinement relation fails"):
        refine(cs, "i", CycQ.zeta(3), 4, 2, 3, s_value=CycQ.zeta(6))
    with pytest.raises(RefinementError):
        refine(cs, "nope", CycQ.zeta(3), 4, 2, 2)


def test_refined_extraction_mod_order():
    c3 = load_fragment("Cliff3")
    r = refine(c3, "w", CycQ.zeta(1), 12, 2, 2)
    c = CanonicalDiagram(1, [("w", ()), ("w", ()), ("H", (1,))] + [("wr", ())] * 25)
    e, rest = r.extract(c)
    assert e == (4 + 25) % 24 and rest.events == (("H", (1,)),)


def test_refined_fragment_sound():
    c3 = load_fragment("Cliff3")
    g = refined_fragment(c3, refine(c3, "w", CycQ.zeta(1), 12, 2, 2))
    for ax in g.axioms:
        lc, rc = g.sides(ax)
        assert g.eval(lc) == g.eval(rc), ax.name


def test_conservativity_probe():
    c3 = load_fragment("Cliff3")
    r = refine(c3, "w", CycQ.zeta(1), 12, 2, 2)
    rep = conservativity_probe(c3, r, 1, 6)
    assert rep.pairs > 0 and rep.all_confirmed
    assert conservativity_probe(c3, r, 1, 0).pairs == 0
    tight = conservativity_probe(c3, r, 1, 3, budget=Budget(max_depth=0))
    assert tight.pairs > 0 and len(tight.inconclusive) == tight.pairs


def test_refine_file():
    text = "(refine (fragment CliffCS) (scalar i (0 0 0 0 0 0 1 0)) (zeta (0 0 0 1 0 0 0 0)) (m 4) (ell 2) (r 2))"
    r = parse_refine_text(text)
    assert r.base == "CliffCS" and r.r == 2
    with pytest.raises(Exception):
        parse_refine_text("(refine (fragment CliffCS))")


def test_custom_fragment_eval():
    f = custom_fragment("Toy", 2, {"Neg": CycMatrix.scalar(-ONE, 2)})
    assert eval_diagram(f.canonical(circuit("Neg Neg", 1)), f.semantics).is_identity()
