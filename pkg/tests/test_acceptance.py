"""The nine acceptance criteria. Each test records one PASS/FAIL line, printed at the end of the run."""

from __future__ import annotations

import random
import time
from importlib import resources

import pytest
from conftest import ACCEPTANCE, random_term, term_matrix
from test_properties import MOVES, _in_context

from qcprop.diagram import CanonicalDiagram, Id, Par, Seq, gen, to_canonical, to_term, width
from qcprop.field import ONE, CycQ
from qcprop.fragments import FRAGMENT_NAMES, load_fragment, parse_fragment_text, soundness_check
from qcprop.harness import completeness_evidence, group_closure
from qcprop.models import TABLES, independence_check
from qcprop.rewrite import Budget, check_corpus, parse_derivations
from qcprop.scalars import extract_scalar, hidden_phase_scan, refine, rotation_toy, visible_scalars
from qcprop.semantics import eval_diagram
from qcprop.transfer import check_decenc, check_encdec, load_transfer

N = 10_000


def record(k: int, name: str, ok: bool, detail: str = "") -> None:
    ACCEPTANCE[k] = (name, ok, detail)
    print(f"criterion {k} {name}: {'PASS' if ok else 'FAIL'}  {detail}")
    assert ok, detail


def test_1_soundness():
    t0 = time.perf_counter()
    bad, total = [], 0
    for name in FRAGMENT_NAMES:
        # a fresh parse so no cached verdict is reused
        f = parse_fragment_text(load_fragment(name, check=False).source_text, resources.files("qcprop") / "data")
        rep = soundness_check(f)
        total += len(rep["axioms"])
        bad += [f"{name}/{r['axiom']}" for r in rep["axioms"] if not r["sound"]]
    sh = [a for a in load_fragment("CliffCS").axiom_names() if a.startswith("SH")]
    dt = time.perf_counter() - t0
    ok = not bad and len(sh) == 4 and dt < 10
    record(1, "soundness", ok, f"{total} axioms, unsound={bad}, SH instances={len(sh)}, {dt:.2f}s")


# axioms that must obtain witnesses
REQUIRED = {
    "Cliff": "all",
    "RCliff": "all",
    "CNOTdihe": "all",
    "CliffT": ("width1", ["CPh", "B", "CZ"]),
    "CliffCS": ("width2", ["I"]),
    "Cliff3": ("width2", ["SSp"]),
}


def test_2_independence():
    missing, disagreements = [], []
    for name in FRAGMENT_NAMES:
        f = load_fragment(name)
        witnessed = set()
        for ax in f.axioms:
            fig, summ = TABLES[name][ax.name]
            if fig is None:
                continue
            rep = independence_check(f, ax.name, fig)
            if rep.witness:
                witnessed.add(ax.name)
            if summ is not None and summ != fig:
                alt = independence_check(f, ax.name, summ)
                disagreements.append(f"{name}/{ax.name}: {fig}={'witness' if rep.witness else 'no'}, {summ}={'witness' if alt.witness else 'no'}")
        req = REQUIRED[name]
        if req == "all":
            need = set(f.axiom_names())
        else:
            kind, extra = req
            k = 1 if kind == "width1" else 2
            need = {a.name for a in f.axioms if a.width <= k} | set(extra)
        missing += [f"{name}/{a}" for a in sorted(need - witnessed)]
    record(2, "independence", not missing, f"missing={missing}; table variants: {'; '.join(disagreements)}")


def test_3_structural_coherence():
    failures = 0
    for i, move in enumerate(MOVES):
        rng = random.Random(1000 + i)
        for _ in range(N):
            x, y = move(rng)
            if rng.random() < 0.5:
                x, y = _in_context(rng, width(x), x, y)
            failures += to_canonical(x) != to_canonical(y)
    rng = random.Random(2000)
    for _ in range(N):
        c = to_canonical(random_term(rng, rng.randint(0, 4), rng.randint(1, 12)))
        failures += to_canonical(to_term(c)) != c
    record(3, "structural coherence", failures == 0, f"{len(MOVES)} moves x {N} + {N} idempotence checks, failures={failures}")


def test_4_semantics_properties():
    sem = load_fragment("Cliff").semantics
    w = sem["w"].rows[0][0]
    rng = random.Random(4000)
    failures = 0
    for _ in range(N):
        n = rng.randint(0, 3)
        t = random_term(rng, n, rng.randint(1, 8))
        c = to_canonical(t)
        u = eval_diagram(c, sem)
        failures += u != term_matrix(t, sem)  # product / Kronecker functoriality
        failures += not u.is_unitary()
        failures += eval_diagram(to_term(c), sem) != u
        wn = Par(gen("w", 0), Id(n))
        failures += eval_diagram(to_canonical(Seq(t, wn)), sem) != u.scale(w)
        failures += eval_diagram(to_canonical(Seq(wn, t)), sem) != u.scale(w)
    record(4, "semantics properties", failures == 0, f"{N} random diagrams, failures={failures}")


def test_5_scalar_machinery():
    notes = []
    f = load_fragment("Cliff")
    rng = random.Random(5000)
    wv = f.semantics["w"].rows[0][0]
    rt_ok = True
    for _ in range(2000):
        c = to_canonical(random_term(rng, rng.randint(0, 2), rng.randint(1, 8)))
        ex, rest = extract_scalar(c)
        k = ex.get("w", 0)
        back = CanonicalDiagram(c.width, [("w", ())] * k + list(rest.events), rest.perm)
        rt_ok &= back == c and f.eval(rest).scale(wv**k) == f.eval(c)
    notes.append(f"round trip {'ok' if rt_ok else 'FAILED'}")
    q = refine(load_fragment("Cliff3"), "mw", CycQ.zeta(2), 6, 2, 10, s_value=-CycQ.zeta(8))
    qok = q.zeta**12 == ONE and q.zeta**10 == -CycQ.zeta(8)
    c = refine(load_fragment("CliffCS"), "i", CycQ.zeta(3), 4, 2, 2, s_value=CycQ.zeta(6))
    cok = c.zeta**8 == ONE and c.zeta**2 == CycQ.zeta(6)
    notes.append(f"mu6->mu12 {'ok' if qok else 'FAILED'}, mu4->mu8 {'ok' if cok else 'FAILED'}")
    toy = [h.phase for h in hidden_phase_scan(rotation_toy(), 1, 4)]
    hid = {n: hidden_phase_scan(load_fragment(n), 1, 8) for n in ("Cliff", "Cliff3")}
    hok = toy == [-ONE] and all(v == [] for v in hid.values())
    notes.append(f"toy hidden phases={[str(p.to_complex()) for p in toy]}, Cliff/Cliff3 none={hok}")
    record(5, "scalar machinery", rt_ok and qok and cok and hok, "; ".join(notes))


def test_6_closures():
    res, ok = [], True
    for name, expected, proj, sc in (("Cliff", 192, 24, 8), ("Cliff3", 2592, 216, 12)):
        t0 = time.perf_counter()
        rep = group_closure(load_fragment(name), 1)
        dt = time.perf_counter() - t0
        ok &= rep.order == expected and rep.projective_order == proj and rep.scalar_order == sc and rep.consistent and dt < 60
        res.append(f"{name}: {rep.order} = {rep.projective_order} x {rep.scalar_order} ({dt:.1f}s)")
    orders = {}
    for name in FRAGMENT_NAMES:
        f = load_fragment(name)
        orders[name] = group_closure(f, 0).order
        ok &= orders[name] == visible_scalars(f).order
    ok &= [orders[n] for n in ("Cliff", "RCliff", "Cliff3", "CliffT", "CliffCS", "CNOTdihe")] == [8, 2, 12, 8, 8, 8]
    record(6, "closures", ok, f"{'; '.join(res)}; scalar orders {orders}")


def test_7_completeness_evidence():
    out, ok = [], True
    for name in ("Cliff", "RCliff", "CNOTdihe"):
        rep = completeness_evidence(load_fragment(name), 1, 6, Budget(max_depth=12))
        ok &= not rep.failures and rep.connected == rep.pairs
        out.append(f"{name}: {rep.pairs} pairs in {rep.classes} classes, {len(rep.failures)} exhausted")
    record(7, "bounded completeness evidence", ok, "; ".join(out))


def test_8_derivation_replay():
    base = resources.files("qcprop") / "data" / "derivations"
    names, ok = [], True
    for frag in ("Cliff", "CNOTdihe"):
        scripts = parse_derivations((base / f"{frag}.deriv").read_text())
        results = check_corpus(scripts)
        ok &= all(r.ok for r in results)
        names += [f"{frag}/{r.name}" for r in results if r.ok]
    need = {"Cliff/Z2", "Cliff/X2", "Cliff/CX2", "Cliff/C"} | {f"CNOTdihe/{n}" for n in ("R2", "R3", "R5", "R8", "R11old")}
    ok &= need <= set(names)
    record(8, "derivation replay", ok, f"checked {names}")


def test_9_transfer_checklists():
    out, ok = [], True
    for name in ("Cliff", "RCliff", "Cliff3", "CliffT", "CliffCS"):
        case = load_transfer(name)
        enc = all(r.ok for r in check_encdec(case))
        dec = check_decenc(case, Budget(max_depth=12))
        ok &= enc and all(r.ok for r in dec)
        rules = sorted({s[0] for r in dec if r.steps for s in r.steps})
        out.append(f"{name}: encdec {'ok' if enc else 'FAILED'}, decenc via {rules}")
    record(9, "transfer checklists", ok, "; ".join(out))


@pytest.fixture(autouse=True, scope="module")
def _warm():
    for name in FRAGMENT_NAMES:
        load_fragment(name)
