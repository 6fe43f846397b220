"""The six presented fragments: signatures, rule sets, soundness, truncation."""

from __future__ import annotations

import hashlib
from dataclasses import dataclass, field
from functools import lru_cache
from importlib import resources
from pathlib import Path
from typing import Optional, Union

from .diagram import (
    ARITIES,
    CanonicalDiagram,
    ParseError,
    SExpr,
    Term,
    Token,
    parse_sexprs,
    register_arity,
    sexpr_to_term,
    to_canonical,
    width,
)
from .field import CycMatrix, CycQ
from .semantics import (
    GateSemantics,
    Shortcut,
    ShortcutTable,
    Signature,
    eval_diagram,
    expand_shortcuts,
    signature_for_dim,
)

FRAGMENT_NAMES = ("Cliff", "RCliff", "CliffT", "CliffCS", "CNOTdihe", "Cliff3")
DEFAULT_SHORTCUTS = {2: "Cliff.shortcuts", 3: "Cliff3.shortcuts"}
# rule counts of the comparison table
EXPECTED_AXIOM_COUNTS = {"Cliff": 8, "RCliff": 10, "Cliff3": 10, "CliffT": 11, "CliffCS": 14, "CNOTdihe": 11}


class FragmentError(ValueError):
    pass


@dataclass
class Axiom:
    name: str
    lhs: Term
    rhs: Term
    width: int
    # expanded canonical forms, filled lazily
    _lhs_c: Optional[CanonicalDiagram] = field(default=None, repr=False)
    _rhs_c: Optional[CanonicalDiagram] = field(default=None, repr=False)


@dataclass
class Fragment:
    name: str
    dim: int
    generators: tuple[str, ...]
    axioms: list[Axiom]
    shortcuts: ShortcutTable
    source_text: str = ""
    # generators outside the master signature (refinements, toy fragments)
    extra: dict[str, CycMatrix] = field(default_factory=dict)

    @property
    def signature(self) -> Signature:
        base = signature_for_dim(self.dim)[0]
        ar = base.arities
        gens = []
        for g in self.generators:
            if g in self.extra:
                gens.append((g, _arity_of_matrix(self.extra[g], self.dim)))
            elif g in ar:
                gens.append((g, ar[g]))
            else:
                raise KeyError(f"generators not in signature: {[g]}")
        return Signature(self.dim, tuple(gens))

    @property
    def semantics(self) -> GateSemantics:
        base = signature_for_dim(self.dim)[1]
        return GateSemantics(self.dim, {g: self.extra[g] if g in self.extra else base[g] for g in self.generators})

    def axiom(self, name: str) -> Axiom:
        for a in self.axioms:
            if a.name == name:
                return a
        raise KeyError(f"unknown rule {name!r} in {self.name}")

    def axiom_names(self) -> list[str]:
        return [a.name for a in self.axioms]

    def expand(self, t: Term) -> Term:
        return expand_shortcuts(t, self.shortcuts)

    def canonical(self, t: Term) -> CanonicalDiagram:
        """Canonical form after shortcut expansion."""
        c = to_canonical(self.expand(t))
        bad = c.generators() - set(self.generators)
        if bad:
            raise FragmentError(f"generators {sorted(bad)} are not in fragment {self.name}")
        return c

    def sides(self, ax: Axiom) -> tuple[CanonicalDiagram, CanonicalDiagram]:
        if ax._lhs_c is None:
            ax._lhs_c = self.canonical(ax.lhs)
            ax._rhs_c = self.canonical(ax.rhs)
        return ax._lhs_c, ax._rhs_c

    def eval(self, t) -> CycMatrix:
        c = t if isinstance(t, CanonicalDiagram) else self.canonical(t)
        return eval_diagram(c, self.semantics)

    def content_hash(self) -> str:
        return hashlib.sha256(self.source_text.encode()).hexdigest()[:16]


def _arity_of_matrix(m: CycMatrix, d: int) -> int:
    k, size = 0, 1
    while size < m.dim:
        size *= d
        k += 1
    if size != m.dim:
        raise FragmentError(f"matrix of size {m.dim} is not a {d}-level gate")
    return k


def custom_fragment(name: str, dim: int, gates: dict[str, CycMatrix], axioms=()) -> Fragment:
    """A fragment over user-supplied gates (registered under their arities)."""
    for g, m in gates.items():
        register_arity(g, _arity_of_matrix(m, dim))
    f = Fragment(name, dim, tuple(gates), [], ShortcutTable(dim), f"custom {name}", dict(gates))
    for ax_name, lhs, rhs in axioms:
        f.axioms.append(Axiom(ax_name, lhs, rhs, width(lhs)))
    return f


# ---------------------------------------------------------------------------
# File formats


def _data_path(name: str) -> Path:
    return Path(str(resources.files("qcprop") / "data" / name))


def _read(path_or_name: Union[str, Path]) -> tuple[str, Path]:
    p = Path(path_or_name)
    if not p.exists():
        p = _data_path(str(path_or_name))
    return p.read_text(), p


def _head(x) -> str:
    if isinstance(x, SExpr) and x.items and isinstance(x.items[0], Token):
        return x.items[0].text
    return ""


def parse_cycq(x) -> CycQ:
    if not isinstance(x, SExpr) or len(x.items) != 8 or not all(isinstance(t, Token) for t in x.items):
        line, col = (x.line, x.col)
        raise ParseError("a CycQ is a list of 8 rationals", line, col, ["(num/den ...)"])
    return CycQ.deserialize([t.text for t in x.items])


def cycq_text(q: CycQ) -> str:
    return "(" + " ".join(q.serialize()) + ")"


def parse_matrix(items: list) -> CycMatrix:
    if not items or not isinstance(items[0], Token) or not items[0].text.isdigit():
        raise ParseError("matrix starts with its dimension", 0, 0, ["INT"])
    n = int(items[0].text)
    vals = [parse_cycq(v) for v in items[1:]]
    if len(vals) != n * n:
        raise ParseError(f"matrix of dimension {n} needs {n * n} entries", items[0].line, items[0].col)
    return CycMatrix([vals[i * n : (i + 1) * n] for i in range(n)])


def matrix_text(m: CycMatrix) -> str:
    return " ".join([str(m.dim)] + [cycq_text(x) for r in m.rows for x in r])


def load_shortcut_file(path_or_name, dim: Optional[int] = None) -> ShortcutTable:
    text, p = _read(path_or_name)
    exprs = parse_sexprs(text)
    if dim is None:
        dim = 3 if "qutrit" in p.name or p.name.startswith("Cliff3") else 2
    sem = signature_for_dim(dim)[1]
    tbl = ShortcutTable(dim)
    for x in exprs:
        if _head(x) != "shortcut":
            raise ParseError("expected (shortcut NAME (expansion TERM) (intended MATRIX))", x.line, x.col, ["shortcut"])
        name = x.items[1].text
        exp = intended = None
        for part in x.items[2:]:
            if _head(part) == "expansion":
                exp = sexpr_to_term(part.items[1], {**ARITIES})
            elif _head(part) == "intended":
                intended = parse_matrix(part.items[1:])
        if exp is None or intended is None:
            raise ParseError(f"shortcut {name} needs expansion and intended", x.line, x.col)
        tbl.add(Shortcut(name, exp, intended), sem)
    return tbl


def parse_fragment_text(text: str, base_dir: Optional[Path] = None) -> Fragment:
    exprs = parse_sexprs(text)
    if not exprs or _head(exprs[0]) != "fragment":
        raise ParseError("fragment file must start with (fragment NAME dim D)", 1, 1, ["fragment"])
    hdr = exprs[0].items
    name = hdr[1].text
    dim = int(hdr[3].text)
    gens: tuple[str, ...] = ()
    shortcuts = ShortcutTable(dim)
    axioms: list[Axiom] = []
    sig = signature_for_dim(dim)[0]
    for x in exprs[1:]:
        h = _head(x)
        if h == "generators":
            gens = tuple(t.text for t in x.items[1:])
            sig.restrict(gens)
        elif h == "shortcuts":
            ref = x.items[1].text
            path = (base_dir / ref) if base_dir is not None and (base_dir / ref).exists() else ref
            shortcuts = shortcuts.merged(load_shortcut_file(path, dim))
        elif h == "axiom":
            it = x.items
            if len(it) != 6 or it[2].text != "lhs" or it[4].text != "rhs":
                raise ParseError("expected (axiom NAME lhs TERM rhs TERM)", x.line, x.col, ["lhs", "rhs"])
            lhs = sexpr_to_term(it[3])
            rhs = sexpr_to_term(it[5])
            wl, wr = width(lhs), width(rhs)
            if wl != wr:
                raise FragmentError(f"axiom {it[1].text}: side widths differ ({wl} vs {wr})")
            axioms.append(Axiom(it[1].text, lhs, rhs, wl))
        else:
            raise ParseError(f"unknown fragment entry {h!r}", x.line, x.col, ["generators", "shortcuts", "axiom"])
    return Fragment(name, dim, gens, axioms, shortcuts, text)


@lru_cache(maxsize=None)
def _load_named(name: str) -> Fragment:
    text, p = _read(f"{name}.frag")
    return parse_fragment_text(text, p.parent)


def load_fragment(name_or_path: str, check: bool = True) -> Fragment:
    """Load a shipped fragment by name, or a user fragment file by path."""
    if name_or_path in FRAGMENT_NAMES:
        f = _load_named(name_or_path)
    else:
        text, p = _read(name_or_path)
        f = parse_fragment_text(text, p.parent)
    if check:
        rep = soundness_check(f)
        bad = [r["axiom"] for r in rep["axioms"] if not r["sound"]]
        if bad:
            raise FragmentError(f"soundness gate failed in {f.name}: {', '.join(bad)}")
    return f


_SOUND_CACHE: dict[int, dict] = {}


def soundness_check(f: Fragment) -> dict:
    if id(f) in _SOUND_CACHE:
        return _SOUND_CACHE[id(f)]
    rows = []
    for ax in f.axioms:
        lc, rc = f.sides(ax)
        ok = f.eval(lc) == f.eval(rc)
        rows.append({"axiom": ax.name, "width": ax.width, "sound": ok})
    rep = {"fragment": f.name, "hash": f.content_hash(), "axioms": rows, "all_sound": all(r["sound"] for r in rows)}
    _SOUND_CACHE[id(f)] = rep
    return rep


def truncate(f: Fragment, k: Optional[int]) -> Fragment:
    if k is None:
        return f
    keep = [a for a in f.axioms if a.width <= k]
    return Fragment(f.name, f.dim, f.generators, keep, f.shortcuts, f.source_text, f.extra)


def all_fragments() -> list[Fragment]:
    return [load_fragment(n) for n in FRAGMENT_NAMES]
