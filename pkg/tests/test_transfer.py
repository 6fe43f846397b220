from pathlib import Path

import pytest

from qcprop.diagram import Id, Par, Seq, Swap, circuit, gen, structurally_equal, to_canonical
from qcprop.fragments import Axiom, load_fragment
from qcprop.rewrite import Budget
from qcprop.transfer import (
    SHIPPED_CASES,
    GenTranslation,
    TransferError,
    check_decenc,
    check_decrelations,
    check_encdec,
    load_transfer,
    parse_transfer_text,
    pro_to_prop_lift,
    translate,
)


@pytest.fixture(scope="module")
def cliff_case():
    return load_transfer("Cliff")


def test_encode_cnot(cliff_case):
    t = translate(gen("CNOT", 2), cliff_case.encode)
    assert structurally_equal(t, circuit("H:2 CZ:1,2 H:2", 2))


def test_translate_is_a_functor(cliff_case):
    enc = cliff_case.encode
    assert translate(Id(3), enc) == Id(3)
    a, b = gen("H", 1), gen("S", 1)
    assert translate(Seq(a, b), enc) == Seq(translate(a, enc), translate(b, enc))
    assert translate(Par(a, Swap()), enc) == Par(translate(a, enc), Swap())


def test_missing_translation():
    with pytest.raises(TransferError, match="no translation"):
        translate(gen("T", 1), GenTranslation({}))
    with pytest.raises(TransferError, match="width"):
        translate(gen("H", 1), GenTranslation({"H": Id(2)}))


def test_encdec_cliff(cliff_case):
    rows = check_encdec(cliff_case)
    assert all(r.ok for r in rows)
    f = load_fragment("Cliff")
    assert f.eval(circuit("CNOT:1,2", 2)) == f.eval(circuit("H:2 CZ:1,2 H:2", 2))


def test_wrong_encoding_fails(cliff_case):
    text = cliff_case.text.replace("(CNOT (seq (par (id 1) (gen H)) (gen CZ) (par (id 1) (gen H))))", "(CNOT (gen CZ))")
    assert text != cliff_case.text
    rows = check_encdec(parse_transfer_text(text))
    bad = [r for r in rows if not r.ok]
    assert [(r.check, r.item) for r in bad] == [("E", "CNOT")]
    assert bad[0].detail == "semantics differ"


def test_identity_case_is_trivial():
    case = load_transfer("CNOTdihe")
    assert all(r.ok for r in check_encdec(case))
    rows = check_decenc(case)
    assert all(r.ok and r.steps == [] for r in rows)


@pytest.mark.parametrize("name", [n for n in SHIPPED_CASES if n != "CNOTdihe"])
def test_lemma_one_instances(name):
    case = load_transfer(name)
    assert all(r.ok for r in check_encdec(case))
    rows = check_decenc(case, Budget(max_depth=12))
    assert all(r.ok for r in rows), [r.to_json() for r in rows if not r.ok]


def test_decenc_rules_used():
    rows = {r.item: r for r in check_decenc(load_transfer("Cliff"))}
    assert {s[0] for s in rows["CNOT"].steps} == {"H2"}
    q = {r.item: r for r in check_decenc(load_transfer("Cliff3"))}
    assert {s[0] for s in q["S"].steps} == {"w12", "S3"}
    assert {s[0] for s in q["CNOT"].steps} == {"H4", "w12"}
    cs = {r.item: r for r in check_decenc(load_transfer("CliffCS"))}
    assert [s[0] for s in cs["H"].steps] == ["w8"]


def test_old_cnot_dihedral_axioms_derivable():
    rows = check_decrelations(load_transfer("CNOTdihe"), Budget(max_depth=12))
    assert [r.item for r in rows] == ["R2", "R3", "R4", "R5", "R8", "R11old"]
    assert all(r.ok for r in rows)


def test_source_axiom_guards(cliff_case):
    h = gen("H", 1)
    cliff_case_copy = load_transfer("Cliff")
    cliff_case_copy.source_axioms = [Axiom("same", h, h, 1), Axiom("wrong", h, gen("S", 1), 1)]
    rows = check_decrelations(cliff_case_copy, Budget(max_depth=4, max_states=5000))
    assert rows[0].ok and rows[0].steps == []
    assert not rows[1].ok and "semantically distinct" in rows[1].detail


def test_case_file_errors(tmp_path: Path):
    with pytest.raises(Exception):
        parse_transfer_text("(transfer X (target Cliff))")
    with pytest.raises(Exception):
        parse_transfer_text("(transfer X (E) (D (Q (gen H))) (target Cliff))")


def test_swap_lift():
    f = load_fragment("Cliff")
    tau = circuit("CNOT:1,2 NOTC:1,2 CNOT:1,2", 2)
    lift = pro_to_prop_lift(f, tau)
    assert lift.added and lift.fragment.axiom("swap_lift")
    lhs, rhs = lift.fragment.sides(lift.fragment.axiom("swap_lift"))
    assert f.eval(lhs) == f.eval(rhs)
    t = lift.translate(Seq(Swap(), gen("CNOT", 2)))
    assert f.eval(to_canonical(f.expand(t))) == f.eval(to_canonical(Seq(Swap(), gen("CNOT", 2))))
    assert not pro_to_prop_lift(f, Swap()).added
    with pytest.raises(TransferError, match="τ is not a swap"):
        pro_to_prop_lift(f, gen("CNOT", 2))
