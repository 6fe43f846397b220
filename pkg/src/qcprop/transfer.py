"""Completeness transfer between presentations through generator translations.

A case pairs a source presentation (its generators, their semantics and
axioms) with a shipped target fragment through two translations: E sends
target generators to source circuits and D sends source generators back.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from pathlib import Path
from typing import Optional

from .diagram import (
    ARITIES,
    Gen,
    Par,
    ParseError,
    SExpr,
    Seq,
    Swap,
    Term,
    Token,
    map_generators,
    parse_sexprs,
    register_arity,
    sexpr_to_term,
    to_canonical,
    to_text,
    width,
)
from .field import CycMatrix
from .fragments import Axiom, Fragment, _arity_of_matrix, _read, load_fragment, parse_matrix
from .semantics import GateSemantics, ShortcutTable, eval_diagram, expand_shortcuts, permutation_matrix


class TransferError(ValueError):
    pass


@dataclass
class GenTranslation:
    """Generator-wise translation; extends to diagrams as a strict monoidal functor."""

    images: dict[str, Term]

    def __call__(self, t: Term) -> Term:
        return translate(t, self)


def translate(t: Term, tr: GenTranslation) -> Term:
    def f(g: Gen) -> Term:
        if g.name not in tr.images:
            raise TransferError(f"no translation for generator {g.name}")
        img = tr.images[g.name]
        if width(img) != g.arity:
            raise TransferError(f"image of {g.name} has width {width(img)}, expected {g.arity}")
        return img

    return map_generators(t, f)


@dataclass
class TransferCase:
    name: str
    target: str
    encode: GenTranslation  # target -> source
    decode: GenTranslation  # source -> target
    source_gates: dict[str, CycMatrix]
    source_axioms: list[Axiom] = field(default_factory=list)
    text: str = ""

    def target_fragment(self) -> Fragment:
        return load_fragment(self.target)

    def source_semantics(self) -> GateSemantics:
        return GateSemantics(self.target_fragment().dim, self.source_gates)


def _resolve_source_gate(name: str, f: Fragment, explicit: dict[str, CycMatrix]) -> CycMatrix:
    if name in explicit:
        return explicit[name]
    if name in f.generators:
        return f.semantics[name]
    if name in f.shortcuts:
        return f.shortcuts.entries[name].intended
    raise TransferError(f"source generator {name} has no semantics")


def _head(x) -> str:
    if isinstance(x, SExpr) and x.items and isinstance(x.items[0], Token):
        return x.items[0].text
    return ""


def _pairs(x: SExpr) -> list[tuple[str, SExpr]]:
    out = []
    for p in x.items[1:]:
        if not isinstance(p, SExpr) or len(p.items) != 2 or not isinstance(p.items[0], Token):
            raise ParseError("expected (GENERATOR TERM)", p.line, p.col, ["(g TERM)"])
        out.append((p.items[0].text, p.items[1]))
    return out


def _parse_axioms(text: str) -> list[Axiom]:
    out = []
    for x in parse_sexprs(text):
        it = x.items
        if _head(x) != "axiom" or len(it) != 6 or it[2].text != "lhs" or it[4].text != "rhs":
            raise ParseError("expected (axiom NAME lhs TERM rhs TERM)", x.line, x.col, ["axiom"])
        lhs, rhs = sexpr_to_term(it[3]), sexpr_to_term(it[5])
        out.append(Axiom(it[1].text, lhs, rhs, width(lhs)))
    return out


def parse_transfer_text(text: str, base_dir: Optional[Path] = None) -> TransferCase:
    """``(transfer NAME (E (g TERM)*) (D (g TERM)*) (source-gate NAME MATRIX)* (source-axioms FILE)? (target F))``"""
    exprs = parse_sexprs(text)
    if len(exprs) != 1 or _head(exprs[0]) != "transfer":
        raise ParseError("expected one (transfer NAME ...) form", 1, 1, ["transfer"])
    top = exprs[0].items
    name = top[1].text
    parts = top[2:]
    target = None
    for p in parts:
        if _head(p) == "target":
            target = p.items[1].text
    if target is None:
        raise ParseError("transfer case needs (target FRAGMENT)", 1, 1, ["target"])
    f = load_fragment(target)
    # source gates first: their arities are needed to read the terms
    explicit = {}
    for p in parts:
        if _head(p) == "source-gate":
            m = parse_matrix(p.items[2:])
            g = p.items[1].text
            register_arity(g, _arity_of_matrix(m, f.dim))
            explicit[g] = m
    enc = dec = None
    axioms: list[Axiom] = []
    for p in parts:
        h = _head(p)
        if h == "E":
            enc = GenTranslation({g: sexpr_to_term(t) for g, t in _pairs(p)})
        elif h == "D":
            dec = GenTranslation({g: sexpr_to_term(t) for g, t in _pairs(p)})
        elif h == "source-axioms":
            ref = p.items[1].text
            path = base_dir / ref if base_dir is not None and (base_dir / ref).exists() else ref
            axioms = _parse_axioms(_read(path)[0])
        elif h not in ("target", "source-gate"):
            raise ParseError(f"unknown transfer entry {h!r}", p.line, p.col, ["E", "D", "source-gate", "source-axioms", "target"])
    if enc is None or dec is None:
        raise ParseError("transfer case needs both E and D", 1, 1, ["E", "D"])
    gates = {g: _resolve_source_gate(g, f, explicit) for g in dec.images}
    for g, a in [(g, ARITIES.get(g)) for g in gates]:
        if a is None:
            register_arity(g, _arity_of_matrix(gates[g], f.dim))
    return TransferCase(name, target, enc, dec, gates, axioms, text)


def load_transfer(path_or_name: str) -> TransferCase:
    """A case file by path, or a shipped case by name (e.g. ``Cliff``)."""
    p = Path(path_or_name)
    if not p.exists():
        p = Path(_read(f"transfer/{path_or_name}.transfer")[1])
    return parse_transfer_text(p.read_text(), p.parent)


SHIPPED_CASES = ("Cliff", "RCliff", "Cliff3", "CliffT", "CliffCS", "CNOTdihe")


@dataclass
class CheckRow:
    check: str
    item: str
    ok: bool
    detail: str = ""
    steps: Optional[list] = None

    def to_json(self) -> dict:
        d = {"check": self.check, "item": self.item, "ok": self.ok, "detail": self.detail}
        if self.steps is not None:
            d["steps"] = [list(s) for s in self.steps]
        return d


def _eval_source(case: TransferCase, t: Term) -> CycMatrix:
    return eval_diagram(to_canonical(t), case.source_semantics())


def _target_gens(f: Fragment) -> list[str]:
    return list(f.generators)


def check_encdec(case: TransferCase) -> list[CheckRow]:
    """Both translations preserve semantics generator by generator."""
    f = case.target_fragment()
    rows = []
    for g in _target_gens(f):
        if g not in case.encode.images:
            rows.append(CheckRow("E", g, False, "no translation"))
            continue
        ok = _eval_source(case, case.encode.images[g]) == f.semantics[g]
        rows.append(CheckRow("E", g, ok, "" if ok else "semantics differ"))
    for g, img in case.decode.images.items():
        ok = f.eval(img) == case.source_gates[g]
        rows.append(CheckRow("D", g, ok, "" if ok else "semantics differ"))
    return rows


def _gen_term(g: str) -> Term:
    return Gen(g, ARITIES[g])


def check_decenc(case: TransferCase, budget=None) -> list[CheckRow]:
    """D(E(g)) = g in the target theory, for every target generator."""
    from .rewrite import Budget, search_equal

    f = case.target_fragment()
    budget = budget or Budget()
    rows = []
    for g in _target_gens(f):
        t = _gen_term(g)
        back = translate(translate(t, case.encode), case.decode)
        res = search_equal(f.canonical(back), f.canonical(t), f, budget, initial_term=back, final_term=t)
        rows.append(CheckRow("DE", g, res.found, res.reason, res.script.steps if res.found else None))
    return rows


def check_decrelations(case: TransferCase, budget=None) -> list[CheckRow]:
    """D(l) = D(r) in the target theory, for every source axiom l = r."""
    from .rewrite import Budget, search_equal

    f = case.target_fragment()
    budget = budget or Budget()
    rows = []
    # source axioms may use target shortcuts that are not source generators
    tbl = ShortcutTable(f.dim, {k: v for k, v in f.shortcuts.entries.items() if k not in case.decode.images})
    for ax in case.source_axioms:
        dl = translate(expand_shortcuts(ax.lhs, tbl), case.decode)
        dr = translate(expand_shortcuts(ax.rhs, tbl), case.decode)
        cl, cr = f.canonical(dl), f.canonical(dr)
        if f.eval(cl) != f.eval(cr):
            rows.append(CheckRow("D-axiom", ax.name, False, "translated sides are semantically distinct"))
            continue
        res = search_equal(cl, cr, f, budget, initial_term=dl, final_term=dr)
        rows.append(CheckRow("D-axiom", ax.name, res.found, res.reason, res.script.steps if res.found else None))
    return rows


def run_case(case: TransferCase, budget=None) -> dict:
    f = case.target_fragment()
    rows = check_encdec(case) + check_decenc(case, budget) + check_decrelations(case, budget)
    return {"case": case.name, "target": case.target, "hash": f.content_hash(), "ok": all(r.ok for r in rows), "rows": [r.to_json() for r in rows]}


# ---------------------------------------------------------------------------
# PRO to PROP


def replace_swaps(t: Term, tau: Term) -> Term:
    if isinstance(t, Swap):
        return tau
    if isinstance(t, Seq):
        return Seq(replace_swaps(t.first, tau), replace_swaps(t.second, tau))
    if isinstance(t, Par):
        return Par(replace_swaps(t.left, tau), replace_swaps(t.right, tau))
    return t


@dataclass
class Lift:
    fragment: Fragment
    tau: Term
    added: bool  # False when tau is the structural swap itself

    def translate(self, t: Term) -> Term:
        """A PRO-side diagram, with each swap read as the chosen circuit tau."""
        return replace_swaps(t, self.tau)


def pro_to_prop_lift(f: Fragment, tau: Term) -> Lift:
    """Read a swap-free presentation in the symmetric setting.

    ``tau`` is a circuit implementing the swap. The lifted presentation gains
    the axiom swap = tau, so any PRO derivation between translated circuits
    survives and the swap gets its structural meaning.
    """
    if width(tau) != 2:
        raise TransferError("τ is not a swap: width is not 2")
    c = f.canonical(tau)
    if f.eval(c) != permutation_matrix((2, 1), f.dim):
        raise TransferError("τ is not a swap")
    if not c.events and c.perm == (2, 1):
        return Lift(f, tau, False)
    lifted = Fragment(f.name + "+swap", f.dim, f.generators, list(f.axioms), f.shortcuts, f.source_text + f"\n; swap lift {to_text(tau)}", f.extra)
    lifted.axioms.append(Axiom("swap_lift", Swap(), tau, 2))
    return Lift(lifted, tau, True)

