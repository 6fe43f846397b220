"""Generator signatures, their exact unitary semantics, and evaluation."""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from typing import Mapping, Optional, Sequence

from .diagram import (
    CanonicalDiagram,
    DiagramError,
    Gen,
    Term,
    map_generators,
    register_arity,
    to_canonical,
)
from .field import ONE, ZERO, CycMatrix, CycQ, embed_constant


@dataclass(frozen=True)
class Signature:
    dim: int
    generators: tuple[tuple[str, int], ...]

    def __post_init__(self):
        names = [g for g, _ in self.generators]
        if len(set(names)) != len(names):
            raise ValueError("duplicate generator names")
        if any(a < 0 for _, a in self.generators):
            raise ValueError("negative arity")

    @property
    def arities(self) -> dict[str, int]:
        return dict(self.generators)

    def names(self) -> list[str]:
        return [g for g, _ in self.generators]

    def restrict(self, names: Sequence[str]) -> "Signature":
        ar = self.arities
        missing = [n for n in names if n not in ar]
        if missing:
            raise KeyError(f"generators not in signature: {missing}")
        return Signature(self.dim, tuple((n, ar[n]) for n in names))


@dataclass(frozen=True)
class GateSemantics:
    dim: int
    matrices: Mapping[str, CycMatrix] = field(default_factory=dict)

    def __getitem__(self, name: str) -> CycMatrix:
        try:
            return self.matrices[name]
        except KeyError:
            raise KeyError(f"unknown generator {name!r}") from None

    def __contains__(self, name: str) -> bool:
        return name in self.matrices

    def with_overrides(self, overrides: Mapping[str, CycMatrix]) -> "GateSemantics":
        m = dict(self.matrices)
        m.update(overrides)
        return GateSemantics(self.dim, m)

    def restrict(self, names) -> "GateSemantics":
        return GateSemantics(self.dim, {n: self.matrices[n] for n in names})


def _z(k: int) -> CycQ:
    return CycQ.zeta(k)


def _qubit_gates() -> dict[str, CycMatrix]:
    r = embed_constant("inv_sqrt2")
    w = embed_constant("omega8")
    i = embed_constant("i")
    return {
        "w": CycMatrix.scalar(w),
        "minus": CycMatrix.scalar(-ONE),
        "H": CycMatrix([[r, r], [r, -r]]),
        "Z": CycMatrix.diag([1, -1]),
        "S": CycMatrix.diag([ONE, i]),
        "T": CycMatrix.diag([ONE, w]),
        "X": CycMatrix.permutation([1, 0]),
        # |x,y> -> |x, x xor y>, big-endian index 2x+y
        "CNOT": CycMatrix.permutation([0, 1, 3, 2]),
        "CS": CycMatrix.diag([ONE, ONE, ONE, i]),
    }


def _qutrit_gates() -> dict[str, CycMatrix]:
    r = embed_constant("inv_sqrt3")
    z3 = embed_constant("zeta3")
    h = [[r * z3 ** ((x * k) % 3) for x in range(3)] for k in range(3)]
    cnot = [0] * 9
    for x in range(3):
        for y in range(3):
            cnot[3 * x + y] = 3 * x + (x + y) % 3
    return {
        "w": CycMatrix.scalar(embed_constant("zeta12")),
        "H": CycMatrix(h),
        # exp(i pi x(x-1)/3) = zeta3^(x(x-1)/2)
        "S": CycMatrix.diag([z3 ** ((x * (x - 1) // 2) % 3) for x in range(3)]),
        "CNOT": CycMatrix.permutation(cnot),
    }


QUBIT_GENERATORS = (("w", 0), ("minus", 0), ("H", 1), ("Z", 1), ("S", 1), ("T", 1), ("X", 1), ("CNOT", 2), ("CS", 2))
QUTRIT_GENERATORS = (("w", 0), ("H", 1), ("S", 1), ("CNOT", 2))

for _n, _a in QUBIT_GENERATORS + QUTRIT_GENERATORS:
    register_arity(_n, _a)

_MASTER = (Signature(2, QUBIT_GENERATORS), GateSemantics(2, _qubit_gates()))
_QUTRIT = (Signature(3, QUTRIT_GENERATORS), GateSemantics(3, _qutrit_gates()))


def master_signature() -> tuple[Signature, GateSemantics]:
    return _MASTER


def qutrit_signature() -> tuple[Signature, GateSemantics]:
    return _QUTRIT


def signature_for_dim(d: int) -> tuple[Signature, GateSemantics]:
    if d == 2:
        return _MASTER
    if d == 3:
        return _QUTRIT
    raise ValueError(f"unsupported dimension {d}")


# ---------------------------------------------------------------------------
# Evaluation


def _apply_gate(m: list[list[CycQ]], g: CycMatrix, wires: tuple[int, ...], n: int, d: int) -> list[list[CycQ]]:
    """Left-multiply the dense matrix m by g acting on ``wires``."""
    size = d**n
    k = len(wires)
    strides = [d ** (n - w) for w in wires]
    local = d**k
    offs = []
    for l in range(local):
        o, rem = 0, l
        for s in reversed(strides):
            o += (rem % d) * s
            rem //= d
        offs.append(o)
    grows = g.rows
    out = []
    for r in range(size):
        loc = 0
        base = r
        for s in strides:
            digit = (r // s) % d
            loc = loc * d + digit
            base -= digit * s
        coeffs = [(base + offs[l], x) for l, x in enumerate(grows[loc]) if x]
        if len(coeffs) == 1 and coeffs[0][1].is_one():
            out.append(m[coeffs[0][0]])
            continue
        row = [ZERO] * size
        for src, x in coeffs:
            srow = m[src]
            for c in range(size):
                y = srow[c]
                if y:
                    row[c] = row[c] + x * y
        out.append(row)
    return out


def permutation_matrix(perm: Sequence[int], d: int) -> CycMatrix:
    """Matrix of the wire permutation: track t is carried to position perm[t-1]."""
    n = len(perm)
    size = d**n
    images = []
    for idx in range(size):
        digits = [(idx // d ** (n - 1 - t)) % d for t in range(n)]
        out = [0] * n
        for t, p in enumerate(perm):
            out[p - 1] = digits[t]
        j = 0
        for x in out:
            j = j * d + x
        images.append(j)
    return CycMatrix.permutation(images)


def eval_diagram(c, sem: GateSemantics) -> CycMatrix:
    """Exact unitary of a canonical diagram (or term)."""
    if not isinstance(c, CanonicalDiagram):
        c = to_canonical(c)
    d = sem.dim
    n = c.width
    size = d**n
    m = [[ONE if i == j else ZERO for j in range(size)] for i in range(size)]
    phase = ONE
    for name, wires in c.events:
        g = sem[name]
        if g.dim != d ** len(wires):
            raise DiagramError(f"generator {name} has wrong size for {len(wires)} wires")
        if not wires:
            phase = phase * g.rows[0][0]
            continue
        m = _apply_gate(m, g, wires, n, d)
    if c.perm != tuple(range(1, n + 1)):
        p = permutation_matrix(c.perm, d)
        m = [list(r) for r in (p @ CycMatrix._raw(tuple(tuple(r) for r in m))).rows]
    res = CycMatrix._raw(tuple(tuple(r) for r in m))
    return res if phase.is_one() else res.scale(phase)


# the documented name
eval = eval_diagram  # noqa: A001


# ---------------------------------------------------------------------------
# Shortcuts


class ShortcutError(ValueError):
    pass


@dataclass
class Shortcut:
    name: str
    expansion: Term
    intended: CycMatrix


@dataclass
class ShortcutTable:
    dim: int
    entries: dict[str, Shortcut] = field(default_factory=dict)

    def __contains__(self, name: str) -> bool:
        return name in self.entries

    def names(self) -> list[str]:
        return list(self.entries)

    def add(self, sc: Shortcut, sem: GateSemantics) -> None:
        expanded = expand_shortcuts(sc.expansion, self)
        got = eval_diagram(to_canonical(expanded), sem)
        if got != sc.intended:
            raise ShortcutError(f"shortcut semantic mismatch {sc.name}")
        register_arity(sc.name, _arity_of(sc))
        self.entries[sc.name] = sc

    def merged(self, other: "ShortcutTable") -> "ShortcutTable":
        t = ShortcutTable(self.dim, dict(self.entries))
        t.entries.update(other.entries)
        return t


def _arity_of(sc: Shortcut) -> int:
    from .diagram import width

    return width(sc.expansion)


def expand_shortcuts(t: Term, tbl: Optional[ShortcutTable]) -> Term:
    if tbl is None or not tbl.entries:
        return t

    def f(g: Gen) -> Term:
        sc = tbl.entries.get(g.name)
        if sc is None:
            return g
        return expand_shortcuts(sc.expansion, tbl)

    return map_generators(t, f)


def load_shortcuts(source=2) -> ShortcutTable:
    """Shortcut table for a dimension (2 or 3) or a fragment name."""
    from . import fragments

    if isinstance(source, int):
        return fragments.load_shortcut_file(fragments.DEFAULT_SHORTCUTS[source], source)
    return fragments.load_fragment(source).shortcuts


def proj_equal(a: CycMatrix, b: CycMatrix) -> bool:
    """A = lambda * B for a unit-modulus lambda."""
    if a.dim != b.dim:
        raise ValueError("size mismatch")
    lam = (a @ b.dagger()).scalar_multiple_of_identity()
    return lam is not None and (lam * lam.conj()).is_one()


def phase_q(x: CycQ) -> Optional[Fraction]:
    """Return q with x = exp(i*pi*q) when x is a 24th root of unity."""
    for k in range(24):
        if CycQ.zeta(k) == x:
            return Fraction(k, 12)
    return None
