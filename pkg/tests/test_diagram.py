import pytest

from qcprop.diagram import (
    CanonicalDiagram,
    DiagramError,
    Id,
    Par,
    ParseError,
    Seq,
    Swap,
    canonical_text,
    circuit,
    gen,
    identity_canonical,
    par,
    par_c,
    parse,
    permutation_canonical,
    placed,
    seq,
    seq_c,
    structurally_equal,
    swap_parity,
    to_canonical,
    to_term,
    to_text,
    width,
)

H, S, CNOT = gen("H", 1), gen("S", 1), gen("CNOT", 2)


def test_width():
    assert width(Id(3)) == 3
    assert width(Par(H, Id(1))) == 2
    assert width(Seq(H, S)) == 1


def test_seq_width_mismatch():
    with pytest.raises(DiagramError):
        width(Seq(H, CNOT))


def test_interchange():
    a = to_canonical(Seq(Par(H, Id(1)), Par(Id(1), H)))
    assert a == to_canonical(Par(H, H))


def test_swap_involution():
    c = to_canonical(Seq(Swap(), Swap()))
    assert c.width == 2 and c.events == () and c.perm == (1, 2)


def test_naturality():
    assert to_canonical(Seq(Par(H, Id(1)), Swap())) == to_canonical(Seq(Swap(), Par(Id(1), H)))


def test_unit_laws():
    c = to_canonical(seq(CNOT, Par(H, S)))
    assert seq_c(c, identity_canonical(2)) == c
    assert seq_c(identity_canonical(2), c) == c
    assert par_c(c, identity_canonical(0)) == c
    sw = permutation_canonical((2, 1))
    assert seq_c(sw, sw) == identity_canonical(2)


def test_structural_equality():
    assert structurally_equal(seq(Par(H, Id(1)), Par(Id(1), H)), Par(H, H))
    assert not structurally_equal(Seq(H, S), Seq(S, H))
    assert structurally_equal(seq(Swap(), CNOT, Swap()), placed("CNOT", (2, 1), 2))


def test_swap_parity():
    assert swap_parity(to_canonical(Swap())) == 1
    assert swap_parity(to_canonical(Seq(Swap(), Swap()))) == 0
    # naturality absorbs both swaps into the event
    assert swap_parity(to_canonical(placed("CNOT", (2, 1), 2))) == 0


def test_scalars_sit_first():
    c = to_canonical(seq(H, Par(gen("w", 0), Id(1)), S))
    assert ("w", ()) in c.blocks[0]


def test_foata_levels_are_maximal_parallel_blocks():
    c = to_canonical(seq(Par(H, Id(1)), CNOT, Par(Id(1), S)))
    assert c.blocks[0] == (("H", (1,)),)
    c2 = to_canonical(Par(H, S))
    assert len(c2.blocks) == 1


def test_parse_examples():
    assert parse("(seq (gen H) (gen H))") == Seq(H, H)
    t = parse("(par (id 1) (swap))")
    assert t == Par(Id(1), Swap()) and width(t) == 3


def test_parse_errors_have_positions():
    with pytest.raises(ParseError) as e:
        parse("(gen CNOT")
    assert "unbalanced parenthesis" in str(e.value)
    with pytest.raises(ParseError) as e:
        parse("(seq (gen H)\n  (gen Q))")
    assert e.value.line == 2 and "unknown generator" in str(e.value)
    with pytest.raises(ParseError):
        parse("(seq (gen H) (gen CNOT))")
    with pytest.raises(ParseError):
        parse("(gen H) (gen S)")


def test_print_parse_round_trip():
    for s in ["(id 0)", "(swap)", "(seq (gen H) (gen S) (gen H))", "(par (gen CNOT) (id 2) (gen w))"]:
        assert to_text(parse(s)) == s
        assert to_text(parse(to_text(parse(s)))) == s


def test_to_term_round_trip():
    c = to_canonical(seq(Par(Swap(), H), placed("CNOT", (3, 1), 3), Par(Id(1), Swap())))
    assert to_canonical(to_term(c)) == c
    assert parse(canonical_text(c)) == to_term(c)


def test_canonical_rejects_bad_events():
    with pytest.raises(DiagramError):
        CanonicalDiagram(2, [("CNOT", (1, 1))])
    with pytest.raises(DiagramError):
        CanonicalDiagram(1, [("H", (2,))])


def test_circuit_shorthand():
    assert structurally_equal(circuit("H:2 CNOT:1,2 H:2", 2), seq(Par(Id(1), H), CNOT, Par(Id(1), H)))
    assert structurally_equal(circuit("SWAP:1,2", 2), Swap())
    assert circuit("", 3) == Id(3)
    assert structurally_equal(circuit("w H", 1), seq(Par(gen("w", 0), Id(1)), H))
    with pytest.raises(DiagramError):
        circuit("Q:1", 1)


def test_par_helper_flattens():
    assert width(par(H, S, CNOT)) == 4
