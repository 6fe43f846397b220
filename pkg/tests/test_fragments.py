import pytest

from qcprop.diagram import circuit
from qcprop.fragments import (
    EXPECTED_AXIOM_COUNTS,
    FRAGMENT_NAMES,
    FragmentError,
    load_fragment,
    parse_fragment_text,
    soundness_check,
    truncate,
)


@pytest.mark.parametrize("name", FRAGMENT_NAMES)
def test_rule_counts(name):
    assert len(load_fragment(name).axioms) == EXPECTED_AXIOM_COUNTS[name]


@pytest.mark.parametrize("name", FRAGMENT_NAMES)
def test_every_axiom_sound(name):
    rep = soundness_check(load_fragment(name))
    assert rep["all_sound"], [r for r in rep["axioms"] if not r["sound"]]
    assert len(rep["hash"]) == 16


def test_cliff_rules():
    f = load_fragment("Cliff")
    assert f.axiom_names() == ["w8", "H2", "S4", "E", "CPh", "B", "CZ", "I"]
    assert f.eval(circuit("w " * 8, 0)).is_identity()
    lhs, rhs = f.sides(f.axiom("B"))
    assert f.eval(lhs) == f.eval(circuit("SWAP:1,2 CNOT:1,2", 2)) == f.eval(rhs)


def test_cliff3_s_cubed():
    f = load_fragment("Cliff3")
    assert f.eval(circuit("S S S", 1)).is_identity()


def test_sh_family_unfolds_to_four():
    f = load_fragment("CliffCS")
    assert [a for a in f.axiom_names() if a.startswith("SH")] == ["SH0", "SH1", "SH2", "SH3"]


def test_truncation():
    c3 = load_fragment("Cliff3")
    assert sorted(a.name for a in truncate(c3, 1).axioms) == sorted(["w12", "H4", "S3", "E", "SSp"])
    for name in FRAGMENT_NAMES:
        assert all(a.width == 0 for a in truncate(load_fragment(name), 0).axioms)
    cd = load_fragment("CNOTdihe")
    assert [a.name for a in cd.axioms if a not in truncate(cd, 3).axioms] == ["C3T"]
    assert truncate(cd, None) is cd


def test_unknown_axiom():
    with pytest.raises(KeyError, match="unknown rule"):
        load_fragment("Cliff").axiom("nope")


def test_generators_outside_fragment_rejected():
    with pytest.raises(FragmentError):
        load_fragment("Cliff").canonical(circuit("T:1", 1))


def test_unsound_user_fragment_blocked(tmp_path):
    p = tmp_path / "bad.frag"
    p.write_text("(fragment Bad dim 2)\n(generators H S)\n(axiom oops lhs (gen H) rhs (gen S))\n")
    with pytest.raises(FragmentError, match="soundness gate failed in Bad: oops"):
        load_fragment(str(p))
    assert load_fragment(str(p), check=False).axiom_names() == ["oops"]


def test_fragment_text_errors():
    with pytest.raises(Exception):
        parse_fragment_text("(generators H)")
    with pytest.raises(FragmentError, match="widths differ"):
        parse_fragment_text("(fragment X dim 2)\n(generators H CNOT)\n(axiom a lhs (gen H) rhs (gen CNOT))")


def test_hash_changes_with_text():
    a = parse_fragment_text("(fragment X dim 2)\n(generators H)\n(axiom H2 lhs (seq (gen H) (gen H)) rhs (id 1))")
    b = parse_fragment_text("(fragment X dim 2)\n(generators H)\n(axiom H2' lhs (seq (gen H) (gen H)) rhs (id 1))")
    assert a.content_hash() != b.content_hash()
