"""qcprop command line. Every subcommand prints one JSON report on stdout.

Exit status: 0 all verdicts positive, 1 a negative verdict, 2 usage or
parse error, 3 a search budget ran out.
"""

from __future__ import annotations

import argparse
import json
import sys
import time
from pathlib import Path
from typing import Optional, Sequence

from . import __version__
from .diagram import DiagramError, canonical_text, parse
from .fragments import FRAGMENT_NAMES, FragmentError, load_fragment, soundness_check

OK, NEGATIVE, USAGE, EXHAUSTED = 0, 1, 2, 3


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        print(f"qcprop: error: {message}", file=sys.stderr)
        raise SystemExit(USAGE)


def _fragment_arg(p, name="fragment"):
    p.add_argument(name, help=f"one of {', '.join(FRAGMENT_NAMES)} or a fragment file")


def build_parser() -> argparse.ArgumentParser:
    ap = _Parser(prog="qcprop", description=__doc__.splitlines()[0])
    ap.add_argument("--version", action="version", version=f"qcprop {__version__}")
    sub = ap.add_subparsers(dest="command", required=True, parser_class=_Parser)

    p = sub.add_parser("soundness", help="check every axiom semantically")
    _fragment_arg(p)

    p = sub.add_parser("independence", help="run separating interpretations")
    _fragment_arg(p)
    p.add_argument("--axiom", help="only this axiom")
    p.add_argument("--interp", help="interpretation to use instead of the published one")
    p.add_argument("--truncate", type=int, help="truncation level k (default: width of the axiom, -1: none)")

    p = sub.add_parser("minimality", help="independence of every axiom with both published tables")
    _fragment_arg(p)

    for name, hlp in (("normalize", "print the canonical form of a diagram file"), ("eval", "exact unitary of a diagram file")):
        p = sub.add_parser(name, help=hlp)
        p.add_argument("file")
        p.add_argument("--fragment", default="Cliff", help="fragment whose shortcuts and gates apply (default Cliff)")

    p = sub.add_parser("equal", help="decide semantic equality and search for a derivation")
    p.add_argument("a")
    p.add_argument("b")
    p.add_argument("--fragment", required=True)
    p.add_argument("--depth", type=int, default=12)
    p.add_argument("--states", type=int, default=1_000_000)

    p = sub.add_parser("check-derivation", help="replay derivation scripts")
    p.add_argument("file")

    p = sub.add_parser("closure", help="order of the generated unitary group")
    _fragment_arg(p)
    p.add_argument("--wires", type=int, required=True)
    p.add_argument("--cap", type=int, default=200_000)

    p = sub.add_parser("evidence", help="connect all short equal circuits by search")
    _fragment_arg(p)
    p.add_argument("--wires", type=int, required=True)
    p.add_argument("--len", dest="length", type=int, required=True)
    p.add_argument("--depth", type=int, default=12)

    p = sub.add_parser("scalars", help="visible scalar group and hidden phase scan")
    _fragment_arg(p)
    p.add_argument("--wires", type=int, default=1)
    p.add_argument("--depth", type=int, default=8)

    p = sub.add_parser("refine", help="validate a scalar refinement file")
    p.add_argument("file")
    p.add_argument("--probe", action="store_true", help="also run the conservativity probe at 1 wire")

    p = sub.add_parser("transfer", help="run a transfer case file (or a shipped case name)")
    p.add_argument("file")
    p.add_argument("--depth", type=int, default=12)
    return ap


def _read_term(path: str):
    return parse(Path(path).read_text())


def _cmd_soundness(a):
    f = load_fragment(a.fragment, check=False)
    rep = soundness_check(f)
    return (OK if rep["all_sound"] else NEGATIVE), rep


def _cmd_independence(a):
    from .models import TABLES, independence_check

    f = load_fragment(a.fragment)
    names = [a.axiom] if a.axiom else f.axiom_names()
    rows = []
    for name in names:
        f.axiom(name)
        spec = a.interp or TABLES.get(f.name, {}).get(name, (None, None))[0]
        if spec is None:
            rows.append({"axiom": name, "interp": None, "witness": False, "verdict": "no interpretation provided"})
            continue
        rows.append(independence_check(f, name, spec, a.truncate).to_json())
    tested = [r for r in rows if r["interp"] is not None]
    code = OK if all(r["witness"] for r in tested) else NEGATIVE
    return code, {"fragment": f.name, "hash": f.content_hash(), "rows": rows}


def _cmd_minimality(a):
    from .models import minimality_suite

    f = load_fragment(a.fragment)
    rep = minimality_suite(f)
    # an axiom fails when it has interpretations and none of them separates it
    tested = {r["axiom"] for r in rep["rows"] if r["interp"] is not None}
    failed = sorted(tested - set(rep["witnessed"]))
    rep["failed"] = failed
    return (NEGATIVE if failed else OK), rep


def _cmd_normalize(a):
    f = load_fragment(a.fragment)
    c = f.canonical(_read_term(a.file))
    return OK, {"fragment": f.name, "hash": f.content_hash(), "canonical": canonical_text(c), "width": c.width}


def _cmd_eval(a):
    f = load_fragment(a.fragment)
    m = f.eval(_read_term(a.file))
    return OK, {"fragment": f.name, "hash": f.content_hash(), "dim": m.dim, "matrix": m.serialize()}


def _cmd_equal(a):
    from .rewrite import Budget, search_equal

    f = load_fragment(a.fragment)
    ta, tb = _read_term(a.a), _read_term(a.b)
    ca, cb = f.canonical(ta), f.canonical(tb)
    rep = {"fragment": f.name, "hash": f.content_hash(), "a": canonical_text(ca), "b": canonical_text(cb)}
    if ca.width != cb.width or f.eval(ca) != f.eval(cb):
        rep.update(verdict="semantically distinct")
        print("semantically distinct", file=sys.stderr)
        return NEGATIVE, rep
    res = search_equal(ca, cb, f, Budget(max_depth=a.depth, max_states=a.states), initial_term=ta, final_term=tb)
    rep["states"] = res.states
    if not res.found:
        rep.update(verdict="budget exhausted", reason=res.reason)
        return EXHAUSTED, rep
    rep.update(verdict="derivable", derivation=res.script.to_text())
    return OK, rep


def _cmd_check_derivation(a):
    from .rewrite import check_corpus, parse_derivations

    scripts = parse_derivations(Path(a.file).read_text())
    results = check_corpus(scripts)
    hashes = {s.fragment: load_fragment(s.fragment).content_hash() for s in scripts}
    rows = [r.to_json() for r in results]
    for r in results:
        if not r.ok:
            print(r.message, file=sys.stderr)
    return (OK if all(r.ok for r in results) else NEGATIVE), {"hashes": hashes, "results": rows}


def _cmd_closure(a):
    from .harness import group_closure

    f = load_fragment(a.fragment)
    rep = group_closure(f, a.wires, a.cap)
    out = {"hash": f.content_hash(), **rep.to_json()}
    if not rep.complete:
        return EXHAUSTED, out
    return (OK if rep.consistent else NEGATIVE), out


def _cmd_evidence(a):
    from .harness import completeness_evidence
    from .rewrite import Budget

    f = load_fragment(a.fragment)
    rep = completeness_evidence(f, a.wires, a.length, Budget(max_depth=a.depth))
    return (EXHAUSTED if rep.failures else OK), {"hash": f.content_hash(), **rep.to_json()}


def _cmd_scalars(a):
    from .harness import group_closure
    from .scalars import hidden_phase_scan, visible_scalars

    f = load_fragment(a.fragment)
    vis = visible_scalars(f)
    hidden = hidden_phase_scan(f, a.wires, a.depth)
    closure0 = group_closure(f, 0)
    rep = {
        "hash": f.content_hash(),
        **vis.to_json(),
        "closure_order": closure0.order,
        "elements": [list(x.serialize()) for x in vis.elements],
        "hidden_phases": [h.to_json() for h in hidden],
        "scan": {"wires": a.wires, "depth": a.depth},
    }
    return (OK if closure0.order == vis.order and not hidden else NEGATIVE), rep


def _cmd_refine(a):
    from .scalars import conservativity_probe, parse_refine_text

    ref = parse_refine_text(Path(a.file).read_text())
    f = load_fragment(ref.base)
    rep = {"hash": f.content_hash(), "valid": True, **ref.to_json()}
    code = OK
    if a.probe:
        pr = conservativity_probe(f, ref)
        rep["probe"] = pr.to_json()
        code = OK if pr.all_confirmed else EXHAUSTED
    return code, rep


def _cmd_transfer(a):
    from .rewrite import Budget
    from .transfer import check_decenc, check_decrelations, check_encdec, load_transfer

    case = load_transfer(a.file)
    f = case.target_fragment()
    budget = Budget(max_depth=a.depth)
    sem_rows = check_encdec(case)
    search_rows = check_decenc(case, budget) + check_decrelations(case, budget)
    rows = [r.to_json() for r in sem_rows + search_rows]
    rep = {"case": case.name, "target": f.name, "hash": f.content_hash(), "rows": rows}
    if not all(r.ok for r in sem_rows):
        return NEGATIVE, rep
    if any(not r.ok and "distinct" in r.detail for r in search_rows):
        return NEGATIVE, rep
    return (OK if all(r.ok for r in search_rows) else EXHAUSTED), rep


COMMANDS = {
    "soundness": _cmd_soundness,
    "independence": _cmd_independence,
    "minimality": _cmd_minimality,
    "normalize": _cmd_normalize,
    "eval": _cmd_eval,
    "equal": _cmd_equal,
    "check-derivation": _cmd_check_derivation,
    "closure": _cmd_closure,
    "evidence": _cmd_evidence,
    "scalars": _cmd_scalars,
    "refine": _cmd_refine,
    "transfer": _cmd_transfer,
}


def run(argv: Optional[Sequence[str]] = None, out=None) -> int:
    out = out or sys.stdout
    try:
        a = build_parser().parse_args(argv)
    except SystemExit as e:
        return int(e.code or 0)
    t0 = time.perf_counter()
    try:
        code, body = COMMANDS[a.command](a)
    except (DiagramError, FragmentError, KeyError, ValueError, OSError) as e:
        msg = e.args[0] if isinstance(e, KeyError) and e.args else e
        print(f"qcprop {a.command}: {msg}", file=sys.stderr)
        return USAGE
    inputs = {k: v for k, v in vars(a).items() if k != "command"}
    report = {
        "command": a.command,
        "inputs": inputs,
        "result": body,
        "exit": code,
        "timings": {"seconds": f"{time.perf_counter() - t0:.3f}"},
        "version": __version__,
    }
    out.write(json.dumps(report, indent=2, sort_keys=True) + "\n")
    return code


def main() -> None:
    raise SystemExit(run())


if __name__ == "__main__":
    main()
