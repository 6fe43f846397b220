"""Regenerate the shipped derivation scripts.

Each entry lists the rule sequence of a hand derivation. Match ordinals are
not part of a hand proof, so they are recovered here by depth-first search
over the matches of each listed rule (either direction when "?" is given).
Entries whose listed sequence does not close fall back to proof search, and
the tool says so.

    python3 tools/gen_derivations.py
"""

from __future__ import annotations

import sys
from pathlib import Path

ROOT = Path(__file__).resolve().parent.parent
sys.path.insert(0, str(ROOT / "src"))

from qcprop.diagram import circuit  # noqa: E402
from qcprop.fragments import load_fragment  # noqa: E402
from qcprop.rewrite import Budget, DerivationScript, apply, check_corpus, find_matches, find_rule, search_equal  # noqa: E402

OUT = ROOT / "src" / "qcprop" / "data" / "derivations"

# fragment -> [(name, width, initial, final, [(rule, dir)])]
CORPUS = {
    "Cliff": [
        ("Z2", 1, "Z:1 Z:1", "", [("S4", "lr")]),
        ("X2", 1, "X:1 X:1", "", [("H2", "lr"), ("S4", "lr"), ("H2", "lr")]),
        ("CX2", 2, "CNOT:1,2 CNOT:1,2", "", [("S4", "rl"), ("CPh", "rl"), ("B", "lr"), ("B", "lr"), ("CPh", "lr"), ("S4", "lr")]),
        ("C", 2, "S:1 CNOT:1,2", "CNOT:1,2 S:1", [("CPh", "rl"), ("CX2", "lr")]),
    ],
    "CNOTdihe": [
        ("R4", 2, "CNOT:1,2 CNOT:1,2", "", [("T8", "rl"), ("CPh", "rl"), ("B", "lr"), ("B", "lr"), ("CPh", "lr"), ("T8", "lr")]),
        ("R2", 2, "CNOT:1,2 X:2 CNOT:1,2", "X:2",
         [("XC", "?"), ("X2", "?"), ("XC", "?"), ("X2", "?"), ("R4", "?"), ("X2", "?")]),
        ("R3", 2, "CNOT:1,2 X:1 CNOT:1,2", "X:1 X:2", [("XC", "?"), ("R4", "?")]),
        ("R5", 2, "CNOT:1,2 NOTC:1,2 CNOT:1,2", "SWAP:1,2", [("B", "?"), ("R4", "?")]),
        ("R8", 2, "CNOT:1,2 Z:2 CNOT:1,2", "Z:1 Z:2", [("ZC", "?"), ("R4", "?")]),
        ("R11old", 1, "X:1 T:1 X:1", "w Tdg:1", [("TX", "?"), ("X2", "?")]),
    ],
}


def _dfs(f, cur, goal, plan, lemmas, acc):
    if not plan:
        return list(acc) if cur == goal else None
    rname, d = plan[0]
    for dd in (("lr", "rl") if d == "?" else (d,)):
        rule = find_rule(f, rname, dd, lemmas)
        for i, m in enumerate(find_matches(cur, rule.lhs)):
            acc.append((rname, dd, i))
            got = _dfs(f, apply(cur, rule, m), goal, plan[1:], lemmas, acc)
            acc.pop()
            if got is not None:
                return got
    return None


def build(frag_name):
    f = load_fragment(frag_name)
    lemmas = {}
    scripts = []
    for name, n, a, b, plan in CORPUS[frag_name]:
        ta, tb = circuit(a, n), circuit(b, n)
        ca, cb = f.canonical(ta), f.canonical(tb)
        steps = _dfs(f, ca, cb, plan, lemmas, [])
        if steps is None:
            print(f"{frag_name}/{name}: listed sequence does not close, searching")
            res = search_equal(ca, cb, f, Budget(max_depth=14), lemmas=lemmas, initial_term=ta, final_term=tb)
            if not res.found:
                raise SystemExit(f"{frag_name}/{name}: no derivation found")
            steps = res.script.steps
        s = DerivationScript(frag_name, ta, steps, tb, name)
        scripts.append(s)
        lemmas[name] = (ca, cb)
        print(f"{frag_name}/{name}: {len(steps)} steps")
    assert all(r.ok for r in check_corpus(scripts))
    return scripts


def main() -> None:
    OUT.mkdir(parents=True, exist_ok=True)
    for frag_name in CORPUS:
        scripts = build(frag_name)
        text = "\n\n".join(s.to_text() for s in scripts) + "\n"
        (OUT / f"{frag_name}.deriv").write_text(text)


if __name__ == "__main__":
    main()
