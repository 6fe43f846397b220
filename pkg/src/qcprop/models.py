"""Separating interpretations and the axiom-independence checker."""

from __future__ import annotations

import re
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Mapping, Optional, Union

from .diagram import CanonicalDiagram, swap_parity
from .field import CycMatrix
from .fragments import Fragment, truncate
from .semantics import eval_diagram, phase_q, permutation_matrix, proj_equal


class InterpretationError(ValueError):
    pass


@dataclass(frozen=True)
class MonoidInterp:
    """A strict monoidal functor into a one-object commutative monoid.

    target is "bool" (or, for ?-interpretations), "Z" (integers mod ``modulus``)
    or "phase" (rationals q standing for q*pi, mod 2).
    """

    target: str
    weights: Mapping[str, Union[int, bool, Fraction]]
    swap: Union[int, bool, Fraction] = 0
    modulus: int = 0
    label: str = ""

    def zero(self):
        return False if self.target == "bool" else (Fraction(0) if self.target == "phase" else 0)

    def add(self, a, b):
        if self.target == "bool":
            return bool(a) or bool(b)
        if self.target == "phase":
            return (Fraction(a) + Fraction(b)) % 2
        return (a + b) % self.modulus

    def __post_init__(self):
        if self.target not in ("bool", "Z", "phase"):
            raise InterpretationError(f"unknown target {self.target!r}")
        if self.target == "Z" and self.modulus < 2:
            raise InterpretationError("counting target needs a modulus >= 2")
        if self.add(self.swap, self.swap) != self.zero():
            raise InterpretationError("swap value must satisfy e + e = 0")


def eval_monoid(c: CanonicalDiagram, m: MonoidInterp):
    acc = m.zero()
    for name, _ in c.events:
        try:
            acc = m.add(acc, m.weights[name])
        except KeyError:
            raise InterpretationError(f"missing weight for generator {name!r}") from None
    if swap_parity(c):
        acc = m.add(acc, m.swap)
    return acc


def has(*gens: str) -> MonoidInterp:
    return MonoidInterp("bool", _Default({g: True for g in gens}, False), False, label="?" + ",".join(gens))


def count(gens, modulus: int) -> MonoidInterp:
    """#{...}_[k]; repeated names count with multiplicity, SWAP weights the swap."""
    w: dict[str, int] = {}
    for g in gens:
        w[g] = w.get(g, 0) + 1
    sw = w.pop("SWAP", 0) % modulus
    return MonoidInterp("Z", _Default(w, 0), sw, modulus, label="#{" + ",".join(gens) + "}_[" + str(modulus) + "]")


class _Default(dict):
    def __init__(self, d, default):
        super().__init__(d)
        self.default = default

    def __missing__(self, key):
        return self.default

    def __hash__(self):
        return hash(tuple(sorted(self.items())))


# ---------------------------------------------------------------------------
# arg det


def argdet(u: CycMatrix) -> Fraction:
    """q with det(u) = exp(i*pi*q)."""
    q = phase_q(u.det())
    if q is None:
        raise InterpretationError("determinant is not a 24th root of unity")
    return q


@dataclass(frozen=True)
class ArgDetInterp:
    level: int
    dim: int
    weights: Mapping[str, Fraction]
    swap: Fraction

    @property
    def label(self) -> str:
        return f"argdet_{self.level}"


def argdet_interp(k: int, f: Fragment) -> ArgDetInterp:
    d = f.dim
    w = {}
    for g, n in f.signature.generators:
        w[g] = (Fraction(d) ** (k - n) * argdet(f.semantics[g])) % 2
    sw = (Fraction(d) ** (k - 2) * argdet(permutation_matrix((2, 1), d))) % 2
    return ArgDetInterp(k, d, w, sw)


def eval_argdet(c: CanonicalDiagram, a: ArgDetInterp) -> Fraction:
    acc = Fraction(0)
    for name, _ in c.events:
        acc += a.weights[name]
    if swap_parity(c):
        acc += a.swap
    return acc % 2


# ---------------------------------------------------------------------------
# projective substitutions


@dataclass
class ProjInterp:
    overrides: Mapping[str, CycMatrix]
    label: str = ""
    _cache: dict = field(default_factory=dict, repr=False)

    def semantics(self, f: Fragment):
        for g, m in self.overrides.items():
            if g not in f.generators:
                raise InterpretationError(f"{g} is not a generator of {f.name}")
            if m.dim != f.dim ** f.signature.arities[g] or not m.is_unitary():
                raise InterpretationError(f"substitute for {g} is not a unitary of the right size")
        return f.semantics.with_overrides(self.overrides)


def eval_projective(c: CanonicalDiagram, p: ProjInterp, f: Fragment) -> CycMatrix:
    return eval_diagram(c, p.semantics(f))


Interp = Union[MonoidInterp, ArgDetInterp, ProjInterp]


# ---------------------------------------------------------------------------
# interpretation specs: "?H", "#{CNOT,SWAP}_[2]", "argdet_3", "Z->I", "S->SX"

_COUNT_RE = re.compile(r"#\{([^}]*)\}_\[(\d+)\]$")


def parse_interp(spec: str, f: Fragment) -> Interp:
    s = spec.replace(" ", "")
    if s.startswith("?"):
        return has(*s[1:].split(","))
    m = _COUNT_RE.match(s)
    if m:
        return count(m.group(1).split(","), int(m.group(2)))
    if s.startswith("argdet_"):
        return argdet_interp(int(s[len("argdet_") :]), f)
    if "->" in s:
        g, tgt = s.split("->")
        if tgt == "I":
            mat = CycMatrix.identity(f.signature.arities[g], f.dim)
        elif tgt in f.shortcuts:
            mat = f.shortcuts.entries[tgt].intended
        else:
            raise InterpretationError(f"unknown substitute {tgt!r}")
        return ProjInterp({g: mat}, label=spec)
    raise InterpretationError(f"cannot parse interpretation {spec!r}")


def interp_label(it: Interp) -> str:
    return it.label


def _value(c: CanonicalDiagram, it: Interp, f: Fragment):
    if isinstance(it, MonoidInterp):
        return eval_monoid(c, it)
    if isinstance(it, ArgDetInterp):
        return eval_argdet(c, it)
    return eval_projective(c, it, f)


def _equal(a, b, it: Interp) -> bool:
    if isinstance(it, ProjInterp):
        return proj_equal(a, b)
    return a == b


def equalizes(f: Fragment, axiom: str, it: Interp) -> bool:
    lc, rc = f.sides(f.axiom(axiom))
    return _equal(_value(lc, it, f), _value(rc, it, f), it)


@dataclass
class IndependenceReport:
    fragment: str
    axiom: str
    interp: str
    truncation: Optional[int]
    equalized: dict[str, bool]
    separated: bool

    @property
    def witness(self) -> bool:
        return self.separated and all(v for k, v in self.equalized.items())

    def to_json(self) -> dict:
        return {
            "axiom": self.axiom,
            "interp": self.interp,
            "truncation": self.truncation,
            "equalized": [k for k, v in self.equalized.items() if v],
            "not_equalized": [k for k, v in self.equalized.items() if not v],
            "separated": self.separated,
            "witness": self.witness,
        }


def independence_check(f: Fragment, axiom: str, interp: Union[str, Interp], k: Optional[int] = None) -> IndependenceReport:
    """k defaults to the width of the target axiom; pass k=-1 for no truncation."""
    it = parse_interp(interp, f) if isinstance(interp, str) else interp
    target = f.axiom(axiom)
    if k is None:
        k = target.width
    tf = truncate(f, None if k < 0 else k)
    eq = {a.name: equalizes(f, a.name, it) for a in tf.axioms if a.name != axiom}
    sep = not equalizes(f, axiom, it)
    label = interp if isinstance(interp, str) else interp_label(it)
    return IndependenceReport(f.name, axiom, label, None if k < 0 else k, eq, sep)


# ---------------------------------------------------------------------------
# the published tables
#
# Each entry: axiom -> (figure-8 interpretation, summary-table interpretation).
# None marks a row with no interpretation. Where a published name does not
# exist as a generator of the fragment, the substitution is listed in NOTES.

TABLES: dict[str, dict[str, tuple[Optional[str], Optional[str]]]] = {
    "Cliff": {
        "w8": ("?w", "?w"),
        "H2": ("?H", "?H"),
        "S4": ("?S", "?S"),
        "E": ("#{H}_[2]", "#{H}_[2]"),
        "CPh": ("?CNOT", "?CNOT"),
        "B": ("#{SWAP}_[2]", "#{SWAP}_[2]"),
        "CZ": ("#{CNOT,SWAP}_[2]", "#{CNOT,SWAP}_[2]"),
        "I": ("argdet_2", "argdet_3"),
    },
    "RCliff": {
        "minus2": ("?minus", "?minus"),
        "H2": ("?H", "?H"),
        "Z2": ("?Z", "?Z"),
        "F": ("#{minus}_[2]", "#{minus}_[2]"),
        "CX2": ("?CNOT", "?CNOT"),
        "B": ("#{SWAP}_[2]", "#{SWAP}_[2]"),
        "ZC": ("#{Z}_[2]", "#{Z}_[2]"),
        "CF": ("Z->I", "Z->I"),
        "CZr": ("H->I", "H->I"),
        "I": ("argdet_2", "argdet_3"),
    },
    "Cliff3": {
        "w12": ("?w", "?w"),
        "H4": ("?H", "?H"),
        "S3": ("?S", "?S"),
        "E": ("#{H}_[2]", "#{H}_[2]"),
        "SSp": ("S->SX", "S->SX"),
        "CPh": ("?CNOT", "?CNOT"),
        "B": ("#{SWAP}_[2]", "#{SWAP}_[2]"),
        "CZ": ("#{S}_[3]", "#{S}_[3]"),
        "KC": ("#{CNOT}_[2]", "#{CNOT}_[2]"),
        "I": (None, None),
    },
    "CliffT": {
        "w8": ("?w", "?w"),
        "H2": ("?H", "?H"),
        "T8": ("?T", "?T"),
        "E": ("#{H}_[2]", "#{H}_[2]"),
        "TX": ("#{H,T,w}_[2]", "#{H,w}_[2]"),
        "CPh": ("?CNOT", "?CNOT"),
        "B": ("#{SWAP}_[2]", "#{SWAP}_[2]"),
        "CZ": ("#{CNOT,SWAP}_[2]", "#{CNOT,SWAP}_[2]"),
        "CSH": (None, None),
        "HT2": (None, None),
        "HTH": (None, None),
    },
    "CliffCS": {
        "w8": ("?w", "?w"),
        "H2": ("?H", "?H"),
        "S4": ("?S", "?S"),
        "E": ("#{H}_[2]", "#{H}_[2]"),
        "CPh": ("?CS", "?CS"),
        "B": ("#{SWAP}_[2]", "#{SWAP}_[2]"),
        "XCS": ("#{S,H}_[2]", "#{S,H}_[2]"),
        "CSr": ("CS->CSz", "CS->CSz"),
        "CE": ("CS->CSzz", "CS->CSzz"),
        "I": ("argdet_2", "argdet_3"),
        "SH0": (None, None),
        "SH1": (None, None),
        "SH2": (None, None),
        "SH3": (None, None),
    },
    "CNOTdihe": {
        "w8": ("?w", "?w"),
        "T8": ("?T", "?T"),
        "X2": ("?X", "?X"),
        "TX": ("#{w}_[2]", "#{w}_[2]"),
        "XC": ("#{X}_[2]", "#{X}_[2]"),
        "CPh": ("?CNOT", "?CNOT"),
        "B": ("#{SWAP}_[2]", "#{SWAP}_[2]"),
        "ZC": ("#{T,w,w}_[8]", "#{T,w,w}_[8]"),
        "I": ("#{CNOT,SWAP}_[2]", "#{CNOT,SWAP}_[2]"),
        "C2T": ("#{T,w,w}_[4]", "#{T,w,w}_[4]"),
        "C3T": ("argdet_3", "argdet_4"),
    },
}

NOTES = {
    ("RCliff", "F"): "the tables count the scalar as w; the real fragment's scalar generator is minus",
    ("CliffCS", "CPh"): "the tables write ?CNOT; CNOT is a shortcut here, so the CS occurrence is tested",
}

NO_INTERP = "no interpretation provided"


def minimality_suite(f: Fragment) -> dict:
    rows = []
    table = TABLES.get(f.name, {})
    for ax in f.axioms:
        fig, summ = table.get(ax.name, (None, None))
        specs = []
        if fig is not None:
            specs.append(("primary", fig))
        if summ is not None and summ != fig:
            specs.append(("summary", summ))
        elif summ is not None and fig is not None:
            specs[-1] = ("both", fig)
        if not specs:
            rows.append({"axiom": ax.name, "source": None, "interp": None, "verdict": NO_INTERP, "witness": False})
            continue
        for source, spec in specs:
            rep = independence_check(f, ax.name, spec)
            row = {"source": source, "verdict": "witness" if rep.witness else "no witness", **rep.to_json()}
            note = NOTES.get((f.name, ax.name))
            if note:
                row["note"] = note
            rows.append(row)
    witnessed = sorted({r["axiom"] for r in rows if r["witness"]})
    return {
        "fragment": f.name,
        "hash": f.content_hash(),
        "rows": rows,
        "witnessed": witnessed,
        "unwitnessed": [a.name for a in f.axioms if a.name not in witnessed],
    }
