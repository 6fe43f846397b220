"""Regenerate src/qcprop/data from the compact rule listings below.

Each rule is written as a left-to-right gate list, e.g. "H:2 CNOT:1,2 H:2".
SWAP:a,b is the structural swap. Every shortcut carries an intended matrix
computed here from a closed formula, never from its expansion, so the load-time
check compares two independent descriptions.

    python3 tools/gen_fragments.py
"""

from __future__ import annotations

import sys
from pathlib import Path

ROOT = Path(__file__).resolve().parent.parent
sys.path.insert(0, str(ROOT / "src"))

from qcprop.diagram import Id, gen, par, permutation_term, placed, register_arity, seq, to_text, width  # noqa: E402
from qcprop.field import ONE, ZERO, CycMatrix, CycQ, embed_constant  # noqa: E402
from qcprop.fragments import matrix_text  # noqa: E402

DATA = ROOT / "src" / "qcprop" / "data"

i_ = embed_constant("i")
w8 = embed_constant("omega8")
z3 = embed_constant("zeta3")
r2 = embed_constant("inv_sqrt2")
r3 = embed_constant("inv_sqrt3")


def basis(n, d):
    for idx in range(d**n):
        yield idx, [(idx // d ** (n - 1 - t)) % d for t in range(n)]


def diag_fn(n, d, f):
    return CycMatrix.diag([f(*bits) for _, bits in basis(n, d)])


def perm_fn(n, d, f):
    imgs = []
    for _, bits in basis(n, d):
        out = f(*bits)
        j = 0
        for x in out:
            j = j * d + x
        imgs.append(j)
    return CycMatrix.permutation(imgs)


def controlled(u: CycMatrix, on: int = 1) -> CycMatrix:
    """Two-qubit gate applying u to wire 2 when wire 1 is |on>."""
    rows = [[ZERO] * 4 for _ in range(4)]
    for c in range(2):
        for a in range(2):
            for b in range(2):
                if c == on:
                    rows[2 * c + a][2 * c + b] = u[a, b]
                else:
                    rows[2 * c + a][2 * c + b] = ONE if a == b else ZERO
    return CycMatrix(rows)


HADAMARD = CycMatrix([[r2, r2], [r2, -r2]])

# closed forms for every shortcut name (qubit)
QUBIT_INTENDED = {
    "Z": diag_fn(1, 2, lambda x: (-ONE) ** x),
    "X": perm_fn(1, 2, lambda x: (1 - x,)),
    "S": diag_fn(1, 2, lambda x: i_**x),
    "Sdg": diag_fn(1, 2, lambda x: (-i_) ** x),
    "Tdg": diag_fn(1, 2, lambda x: w8.conj() ** x),
    "CZ": diag_fn(2, 2, lambda x, y: (-ONE) ** (x * y)),
    "CS": diag_fn(2, 2, lambda x, y: i_ ** (x * y)),
    "CSz": diag_fn(2, 2, lambda x, y: i_ ** (x * y) * (-ONE) ** x),
    "CSzz": diag_fn(2, 2, lambda x, y: i_ ** (x * y) * (-ONE) ** (x + y)),
    "CNOT": perm_fn(2, 2, lambda x, y: (x, x ^ y)),
    "NOTC": perm_fn(2, 2, lambda x, y: (x ^ y, y)),
    "CH": controlled(HADAMARD, 1),
    "CHw": controlled(HADAMARD, 0),
}

QUTRIT_INTENDED = {
    "K": perm_fn(1, 3, lambda x: ((-x) % 3,)),
    "Hd": CycMatrix([[r3 * z3 ** ((-x * k) % 3) for x in range(3)] for k in range(3)]),
    "Sp": diag_fn(1, 3, lambda x: z3 ** ((((-x) % 3) * (((-x) % 3) - 1) // 2) % 3)),
    "Z": diag_fn(1, 3, lambda x: z3**x),
    "X": perm_fn(1, 3, lambda x: ((x + 1) % 3,)),
    "CZ": diag_fn(2, 3, lambda x, y: z3 ** ((x * y) % 3)),
    "NOTC": perm_fn(2, 3, lambda x, y: ((x + y) % 3, y)),
}
# S then X as a circuit: |x> -> S(x) |x+1>
QUTRIT_INTENDED["SX"] = CycMatrix.permutation([1, 2, 0]) @ diag_fn(1, 3, lambda x: z3 ** ((x * (x - 1) // 2) % 3))


def rep(s: str, k: int) -> str:
    return " ".join([s] * k)


def term(spec: str, n: int, arities: dict[str, int]):
    parts = []
    for tok in spec.split():
        name, _, ws = tok.partition(":")
        wires = tuple(int(x) for x in ws.split(",")) if ws else ()
        if name == "SWAP":
            a, b = wires
            perm = list(range(1, n + 1))
            perm[a - 1], perm[b - 1] = b, a
            parts.append(permutation_term(perm))
            continue
        if name not in arities:
            raise KeyError(name)
        if not wires and arities[name] == 1 and n == 1:
            wires = (1,)
        if not wires and arities[name] == 2 and n == 2:
            wires = (1, 2)
        parts.append(placed(name, wires, n, arities[name]))
    if not parts:
        return Id(n)
    return seq(*parts)


BASE = {"w": 0, "minus": 0, "H": 1, "Z": 1, "S": 1, "T": 1, "X": 1, "CNOT": 2, "CS": 2}

# name, dim, generators, shortcuts [(name, arity, expansion)], axioms [(name, width, lhs, rhs)]
FRAGMENTS = {
    "Cliff": (
        2,
        ["w", "H", "S", "CNOT"],
        [
            ("Z", 1, "S S"),
            ("Sdg", 1, "S S S"),
            ("X", 1, "H Z H"),
            ("CZ", 2, "S:1 S:2 CNOT:1,2 Sdg:2 CNOT:1,2"),
            ("NOTC", 2, "SWAP:1,2 CNOT:1,2 SWAP:1,2"),
        ],
        [
            ("w8", 0, rep("w", 8), ""),
            ("H2", 1, "H H", ""),
            ("S4", 1, "S S S S", ""),
            ("E", 1, "H S H", "w Sdg H Sdg"),
            ("CPh", 2, "CNOT:1,2 S:1 CNOT:1,2", "S:1"),
            ("B", 2, "CNOT:1,2 NOTC:1,2", "SWAP:1,2 CNOT:1,2"),
            ("CZ", 2, "H:2 CNOT:1,2 H:2", "CZ:1,2"),
            ("I", 3, "CNOT:2,3 CNOT:1,2 CNOT:1,3", "CNOT:1,2 CNOT:2,3"),
        ],
    ),
    "RCliff": (
        2,
        ["minus", "H", "Z", "CNOT"],
        [
            ("X", 1, "H Z H"),
            ("CZ", 2, "H:2 CNOT:1,2 H:2"),
            ("NOTC", 2, "SWAP:1,2 CNOT:1,2 SWAP:1,2"),
        ],
        [
            ("minus2", 0, "minus minus", ""),
            ("H2", 1, "H H", ""),
            ("Z2", 1, "Z Z", ""),
            ("F", 1, "Z H Z H", "minus H Z H Z"),
            ("CX2", 2, "CNOT:1,2 CNOT:1,2", ""),
            ("B", 2, "CNOT:1,2 NOTC:1,2", "SWAP:1,2 CNOT:1,2"),
            ("ZC", 2, "Z:2 CNOT:1,2 Z:2", "CNOT:1,2 Z:1"),
            ("CZr", 2, "H:1 H:2 CNOT:1,2 H:1 H:2", "NOTC:1,2"),
            ("CF", 2, "CZ:1,2 Z:2 CNOT:1,2", "CNOT:1,2 Z:2 CZ:1,2"),
            ("I", 3, "CNOT:2,3 CNOT:1,2 CNOT:1,3", "CNOT:1,2 CNOT:2,3"),
        ],
    ),
    "CliffT": (
        2,
        ["w", "H", "T", "CNOT"],
        [
            ("S", 1, "T T"),
            ("Z", 1, "T T T T"),
            ("Sdg", 1, rep("T", 6)),
            ("Tdg", 1, rep("T", 7)),
            ("X", 1, "H Z H"),
            ("CZ", 2, "S:1 S:2 CNOT:1,2 Sdg:2 CNOT:1,2"),
            ("NOTC", 2, "SWAP:1,2 CNOT:1,2 SWAP:1,2"),
            ("CS", 2, "T:1 T:2 CNOT:1,2 Tdg:2 CNOT:1,2"),
            ("CH", 2, "S:2 H:2 T:2 CNOT:1,2 Tdg:2 H:2 Sdg:2"),
            ("CHw", 2, "X:1 CH:1,2 X:1"),
        ],
        [
            ("w8", 0, rep("w", 8), ""),
            ("T8", 1, rep("T", 8), ""),
            ("H2", 1, "H H", ""),
            ("E", 1, "H S H", "w Sdg H Sdg"),
            ("TX", 1, "X T", "w Tdg X"),
            ("CPh", 2, "CNOT:1,2 T:1 CNOT:1,2", "T:1"),
            ("B", 2, "CNOT:1,2 NOTC:1,2", "SWAP:1,2 CNOT:1,2"),
            ("CZ", 2, "H:2 CNOT:1,2 H:2", "CZ:1,2"),
            ("CSH", 2, "CS:1,2 CHw:1,2", "CHw:1,2 CS:1,2"),
            ("HT2", 2, rep("H:1 CS:1,2", 3), rep("CS:1,2 H:1", 3)),
            ("HTH", 2, rep("T:1 CS:1,2 H:2", 3), rep("H:2 T:1 CS:1,2", 3)),
        ],
    ),
    "CliffCS": (
        2,
        ["w", "H", "S", "CS"],
        [
            ("Z", 1, "S S"),
            ("Sdg", 1, "S S S"),
            ("X", 1, "H Z H"),
            ("CNOT", 2, "H:2 CS:1,2 CS:1,2 H:2"),
            ("NOTC", 2, "SWAP:1,2 CNOT:1,2 SWAP:1,2"),
            ("CZ", 2, "CS:1,2 CS:1,2"),
            ("CSz", 2, "CS:1,2 Z:1"),
            ("CSzz", 2, "CS:1,2 Z:1 Z:2"),
        ],
        [
            ("w8", 0, rep("w", 8), ""),
            ("H2", 1, "H H", ""),
            ("S4", 1, "S S S S", ""),
            ("E", 1, "H S H", "w Sdg H Sdg"),
            ("CPh", 2, "CS:1,2 CS:1,2 S:1 CS:1,2 CS:1,2", "S:1"),
            ("CSr", 2, "CS:1,2", "CS:2,1"),
            ("B", 2, "CNOT:1,2 NOTC:1,2", "SWAP:1,2 CNOT:1,2"),
            ("XCS", 2, "X:1 CS:1,2 X:1", "CS:1,2 CS:1,2 CS:1,2 S:2"),
            ("CE", 2, "S:2 H:2 CS:1,2 H:2 CS:1,2", "CS:1,2 H:2 CS:1,2 H:2 S:2"),
            ("I", 3, "CNOT:2,3 CNOT:1,2 CNOT:1,3", "CNOT:1,2 CNOT:2,3"),
        ]
        + [
            (
                f"SH{k}",
                3,
                " ".join(["H:3", "CS:2,3"] + ["S:1"] * k + ["CS:1,2", "H:3"]),
                " ".join(["H:3", "CS:1,2"] + ["S:1"] * k + ["CS:2,3", "H:3"]),
            )
            for k in range(4)
        ],
    ),
    "CNOTdihe": (
        2,
        ["w", "X", "T", "CNOT"],
        [
            ("S", 1, "T T"),
            ("Z", 1, "T T T T"),
            ("Tdg", 1, rep("T", 7)),
            ("NOTC", 2, "SWAP:1,2 CNOT:1,2 SWAP:1,2"),
        ],
        [
            ("w8", 0, rep("w", 8), ""),
            ("X2", 1, "X X", ""),
            ("T8", 1, rep("T", 8), ""),
            ("TX", 1, "X T", "w Tdg X"),
            ("XC", 2, "X:1 CNOT:1,2", "CNOT:1,2 X:1 X:2"),
            ("B", 2, "CNOT:1,2 NOTC:1,2", "SWAP:1,2 CNOT:1,2"),
            ("ZC", 2, "CNOT:1,2 Z:2", "Z:1 Z:2 CNOT:1,2"),
            ("CPh", 2, "CNOT:1,2 T:1 CNOT:1,2", "T:1"),
            ("I", 3, "CNOT:2,3 CNOT:1,2 CNOT:1,3", "CNOT:1,2 CNOT:2,3"),
            # phase polynomials: S on x, y, z, x+y+z  vs  S on x+y, x+z, y+z
            (
                "C2T",
                3,
                "S:1 S:2 S:3 CNOT:1,3 CNOT:2,3 S:3 CNOT:2,3 CNOT:1,3",
                "CNOT:1,2 S:2 CNOT:1,2 CNOT:1,3 S:3 CNOT:1,3 CNOT:2,3 S:3 CNOT:2,3",
            ),
            # T on singles and triples  vs  T on pairs and the quadruple
            (
                "C3T",
                4,
                "T:1 T:2 T:3 T:4 "
                + " ".join(
                    f"CNOT:{a},{c} CNOT:{b},{c} T:{c} CNOT:{b},{c} CNOT:{a},{c}"
                    for a, b, c in [(1, 2, 3), (1, 2, 4), (1, 3, 4), (2, 3, 4)]
                ),
                " ".join(f"CNOT:{a},{b} T:{b} CNOT:{a},{b}" for a, b in [(1, 2), (1, 3), (1, 4), (2, 3), (2, 4), (3, 4)])
                + " CNOT:1,4 CNOT:2,4 CNOT:3,4 T:4 CNOT:3,4 CNOT:2,4 CNOT:1,4",
            ),
        ],
    ),
    "Cliff3": (
        3,
        ["w", "H", "S", "CNOT"],
        [
            ("K", 1, "H H"),
            ("Hd", 1, "H H H"),
            ("Sp", 1, "K S K"),
            ("Z", 1, "S S Sp"),
            ("X", 1, "H Z Hd"),
            ("CZ", 2, "Hd:2 CNOT:1,2 H:2"),
            ("NOTC", 2, "SWAP:1,2 CNOT:1,2 SWAP:1,2"),
            ("SX", 1, "S X"),
        ],
        [
            ("w12", 0, rep("w", 12), ""),
            ("H4", 1, "H H H H", ""),
            ("S3", 1, "S S S", ""),
            ("E", 1, "S H S", "w Hd S S Hd"),
            ("SSp", 1, "S Sp", "Sp S"),
            ("CPh", 2, "CNOT:1,2 S:1 K:2 CNOT:1,2", "S:1 K:2"),
            ("KC", 2, "K:1 CNOT:1,2", "CNOT:1,2 CNOT:1,2 K:1"),
            ("CZ", 2, "CZ:1,2", "S:1 S:1 S:2 S:2 CNOT:1,2 S:2 CNOT:1,2 CNOT:1,2"),
            ("B", 2, "SWAP:1,2 CNOT:1,2", "CNOT:1,2 NOTC:1,2 NOTC:1,2 K:1"),
            ("I", 3, "CNOT:2,3 CNOT:1,2 CNOT:1,3", "CNOT:1,2 CNOT:2,3"),
        ],
    ),
}


def main() -> None:
    from qcprop.fragments import FragmentError, load_fragment  # noqa: F401

    DATA.mkdir(parents=True, exist_ok=True)
    for fname, (dim, gens, shortcuts, axioms) in FRAGMENTS.items():
        ar = {g: BASE[g] for g in gens}
        intended = QUBIT_INTENDED if dim == 2 else QUTRIT_INTENDED
        lines = []
        for name, k, body in shortcuts:
            t = term(body, k, ar)
            assert width(t) == k, name
            ar[name] = k
            register_arity(name, k)
            lines.append(f"(shortcut {name} (expansion {to_text(t)}) (intended {matrix_text(intended[name])}))")
        (DATA / f"{fname}.shortcuts").write_text("\n".join(lines) + "\n")
        out = [f"(fragment {fname} dim {dim})", "(generators " + " ".join(gens) + ")", f"(shortcuts {fname}.shortcuts)"]
        for name, k, lhs, rhs in axioms:
            lt, rt = term(lhs, k, ar), term(rhs, k, ar)
            out.append(f"; {name}: {lhs} = {rhs or 'id'}")
            out.append(f"(axiom {name}\n  lhs {to_text(lt)}\n  rhs {to_text(rt)})")
        (DATA / f"{fname}.frag").write_text("\n".join(out) + "\n")
        print("wrote", fname)


if __name__ == "__main__":
    main()
