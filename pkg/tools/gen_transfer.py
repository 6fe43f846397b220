"""Regenerate the shipped transfer cases in src/qcprop/data/transfer.

Source-only gates get their matrices from closed forms here; everything else
a source names is read from the target fragment.

    python3 tools/gen_transfer.py
"""

from __future__ import annotations

import sys
from pathlib import Path

ROOT = Path(__file__).resolve().parent.parent
sys.path.insert(0, str(ROOT / "src"))

from qcprop.diagram import circuit, register_arity, to_text  # noqa: E402
from qcprop.field import CycQ  # noqa: E402
from qcprop.fragments import load_fragment, matrix_text  # noqa: E402
from qcprop.semantics import signature_for_dim  # noqa: E402

OUT = ROOT / "src" / "qcprop" / "data" / "transfer"


def rep(s, k):
    return " ".join([s] * k)


Q = signature_for_dim(2)[1]
T = signature_for_dim(3)[1]

# name -> (target, source gates {name: matrix}, E {g: (width, spec)}, D {g: (width, spec)}, source axioms)
CZ_E = {"CNOT": (2, "H:2 CZ:1,2 H:2")}
CZ_D = {"CZ": (2, "H:2 CNOT:1,2 H:2")}
CASES = {
    "Cliff": ("Cliff", {}, {"w": (0, "w"), "H": (1, "H"), "S": (1, "S"), **CZ_E}, {"w": (0, "w"), "H": (1, "H"), "S": (1, "S"), **CZ_D}, None),
    "RCliff": ("RCliff", {}, {"minus": (0, "minus"), "H": (1, "H"), "Z": (1, "Z"), **CZ_E}, {"minus": (0, "minus"), "H": (1, "H"), "Z": (1, "Z"), **CZ_D}, None),
    "CliffT": ("CliffT", {}, {"w": (0, "w"), "H": (1, "H"), "T": (1, "T"), **CZ_E}, {"w": (0, "w"), "H": (1, "H"), "T": (1, "T"), **CZ_D}, None),
    # source Hadamard and phase gates differ from the target ones by phases
    "Cliff3": (
        "Cliff3",
        {"Hs": T["H"].scale(CycQ.zeta(6)), "Ss": (T["S"] @ T["S"]).scale(CycQ.zeta(2))},
        {"w": (0, "w"), "H": (1, "Hs " + rep("w", 9)), "S": (1, "Ss Ss " + rep("w", 10)), "CNOT": (2, "Hs:2 CZ:1,2 " + rep("Hs:2", 3))},
        {"w": (0, "w"), "Hs": (1, "H " + rep("w", 3)), "Ss": (1, "S S w"), "CZ": (2, rep("H:2", 3) + " CNOT:1,2 H:2")},
        None,
    ),
    "CliffCS": (
        "CliffCS",
        {"K": Q["H"].scale(CycQ.zeta(6))},
        {"w": (0, "w"), "H": (1, "K " + rep("w", 6)), "S": (1, "S"), "CS": (2, "CS")},
        {"w": (0, "w"), "K": (1, "H w w"), "S": (1, "S"), "CS": (2, "CS")},
        None,
    ),
    # the earlier CNOT-dihedral axioms, decoded by the identity translation
    "CNOTdihe": (
        "CNOTdihe",
        {},
        {g: (a, g) for g, a in [("w", 0), ("X", 1), ("T", 1), ("CNOT", 2)]},
        {g: (a, g) for g, a in [("w", 0), ("X", 1), ("T", 1), ("CNOT", 2)]},
        (
            "CNOTdihe_old.axioms",
            [
                ("R2", 2, "CNOT:1,2 X:2 CNOT:1,2", "X:2"),
                ("R3", 2, "CNOT:1,2 X:1 CNOT:1,2", "X:1 X:2"),
                ("R4", 2, "CNOT:1,2 CNOT:1,2", ""),
                ("R5", 2, "CNOT:1,2 NOTC:1,2 CNOT:1,2", "SWAP:1,2"),
                ("R8", 2, "CNOT:1,2 Z:2 CNOT:1,2", "Z:1 Z:2"),
                ("R11old", 1, "X:1 T:1 X:1", "w Tdg:1"),
            ],
        ),
    ),
}


def main() -> None:
    OUT.mkdir(parents=True, exist_ok=True)
    for name, (target, gates, enc, dec, axioms) in CASES.items():
        load_fragment(target)  # registers shortcut arities
        f = load_fragment(target)
        for g, m in gates.items():
            register_arity(g, 1)
        lines = [f"(transfer {name}", f"  (target {target})"]
        for g, m in gates.items():
            lines.append(f"  (source-gate {g} {matrix_text(m)})")
        lines.append("  (E " + "\n     ".join(f"({g} {to_text(circuit(s, n))})" for g, (n, s) in enc.items()) + ")")
        lines.append("  (D " + "\n     ".join(f"({g} {to_text(circuit(s, n))})" for g, (n, s) in dec.items()) + ")")
        if axioms:
            fname, rows = axioms
            text = "\n".join(f"(axiom {a}\n  lhs {to_text(circuit(l, n))}\n  rhs {to_text(circuit(r, n))})" for a, n, l, r in rows) + "\n"
            (OUT / fname).write_text(text)
            lines.append(f"  (source-axioms {fname})")
        (OUT / f"{name}.transfer").write_text("\n".join(lines) + ")\n")
        print("wrote", name, f.name)


if __name__ == "__main__":
    main()
