"""Scalars: extraction, the visible scalar group, hidden phases, refinement."""

from __future__ import annotations

from collections import Counter
from dataclasses import dataclass, field
from typing import Mapping, Optional, Union

from .diagram import CanonicalDiagram, Term, circuit, register_arity
from .field import ONE, CycMatrix, CycQ
from .fragments import Axiom, Fragment, FragmentError, custom_fragment
from .semantics import GateSemantics, eval_diagram


class RefinementError(ValueError):
    pass


def scalar_generators(f: Fragment) -> list[str]:
    return [g for g in f.generators if f.signature.arities[g] == 0]


def extract_scalar(c: CanonicalDiagram, order: Union[int, Mapping[str, int], None] = None) -> tuple[dict[str, int], CanonicalDiagram]:
    """Split a diagram into scalar exponents and its scalar-free part.

    ``order`` reduces exponents (one modulus for all scalars, or per name).
    """
    cnt = Counter(name for name, wires in c.events if not wires)
    if isinstance(order, int):
        cnt = Counter({k: v % order for k, v in cnt.items()})
    elif order:
        cnt = Counter({k: v % order[k] if k in order else v for k, v in cnt.items()})
    rest = CanonicalDiagram(c.width, [e for e in c.events if e[1]], c.perm)
    return {k: v for k, v in sorted(cnt.items()) if v}, rest


def _order(x: CycQ, cap: int = 240) -> Optional[int]:
    y = x
    for k in range(1, cap + 1):
        if y.is_one():
            return k
        y = y * x
    return None


@dataclass
class ScalarGroup:
    fragment: str
    generators: dict[str, int]  # scalar generator -> its multiplicative order
    order: int
    elements: list[CycQ]

    def contains(self, x: CycQ) -> bool:
        return x in self.elements

    def to_json(self) -> dict:
        return {"fragment": self.fragment, "generators": self.generators, "order": self.order}


def _closure(values: list[CycQ]) -> list[CycQ]:
    seen = [ONE]
    frontier = [ONE]
    while frontier:
        nxt = []
        for a in frontier:
            for v in values:
                b = a * v
                if b not in seen:
                    seen.append(b)
                    nxt.append(b)
        frontier = nxt
    return seen


def visible_scalars(f: Fragment) -> ScalarGroup:
    """The group generated by the fragment's scalar generators."""
    sem = f.semantics
    vals = {g: sem[g].rows[0][0] for g in scalar_generators(f)}
    orders = {}
    for g, v in vals.items():
        o = _order(v)
        if o is None:
            raise FragmentError(f"scalar {g} has infinite order")
        orders[g] = o
    els = _closure(list(vals.values()))
    return ScalarGroup(f.name, orders, len(els), els)


def _placements(sem: GateSemantics, n: int) -> list[tuple[str, tuple[int, ...], CycMatrix]]:
    """Every non-scalar generator on every ordered choice of distinct wires, as an n-wire matrix."""
    from itertools import permutations

    out = []
    for g, m in sem.matrices.items():
        k = 0
        size = 1
        while size < m.dim:
            size *= sem.dim
            k += 1
        if k == 0 or k > n:
            continue
        for wires in permutations(range(1, n + 1), k):
            u = eval_diagram(CanonicalDiagram(n, [(g, wires)]), sem)
            out.append((g, wires, u))
    return out


@dataclass
class HiddenPhase:
    phase: CycQ
    word: list[tuple[str, tuple[int, ...]]]

    def to_json(self) -> dict:
        return {"phase": self.phase.serialize(), "word": [[g, list(w)] for g, w in self.word]}


def hidden_phase_scan(f_or_sem: Union[Fragment, GateSemantics], n: int, depth: int, visible: Optional[list[CycQ]] = None) -> list[HiddenPhase]:
    """Scalar-free words up to ``depth`` whose unitary is a global phase outside the visible group.

    Breadth-first over distinct unitaries, so each phase is reported with a
    shortest witness word.
    """
    if isinstance(f_or_sem, Fragment):
        sem = f_or_sem.semantics
        if visible is None:
            visible = visible_scalars(f_or_sem).elements
    else:
        sem = f_or_sem
        if visible is None:
            visible = _closure([m.rows[0][0] for m in sem.matrices.values() if m.dim == 1])
    gens = _placements(sem, n)
    start = CycMatrix.identity(n, sem.dim)
    seen = {start: []}
    frontier = [start]
    found: dict[CycQ, HiddenPhase] = {}
    for _ in range(depth):
        nxt = []
        for u in frontier:
            w = seen[u]
            for g, wires, m in gens:
                v = m @ u
                if v in seen:
                    continue
                seen[v] = w + [(g, wires)]
                nxt.append(v)
                lam = v.scalar_multiple_of_identity()
                if lam is not None and lam not in visible and lam not in found:
                    found[lam] = HiddenPhase(lam, seen[v])
        frontier = nxt
    return list(found.values())


def rotation_toy() -> Fragment:
    """A one-gate toy whose only gate, R_X(2*pi), equals -I."""
    return custom_fragment("RX2pi", 2, {"RX2pi": CycMatrix.scalar(-ONE, 2)})


# ---------------------------------------------------------------------------
# refinement


def _exact_order(z: CycQ, n: int) -> bool:
    if not (z**n).is_one():
        return False
    p, m = 2, n
    primes = set()
    while p * p <= m:
        while m % p == 0:
            primes.add(p)
            m //= p
        p += 1
    if m > 1:
        primes.add(m)
    return all(not (z ** (n // q)).is_one() for q in primes)


@dataclass
class RefinedPresentation:
    base: str
    scalar: str
    scalar_value: CycQ
    new_gen: str
    zeta: CycQ
    m: int
    ell: int
    r: int
    relations: list[tuple[str, Term, Term]] = field(default_factory=list)

    @property
    def order(self) -> int:
        return self.m * self.ell

    def extract(self, c: CanonicalDiagram) -> tuple[int, CanonicalDiagram]:
        """Exponent of the new scalar (mod m*ell) after rewriting s as new^r."""
        ex, rest = extract_scalar(c)
        others = set(ex) - {self.new_gen, self.scalar}
        if others:
            raise RefinementError(f"scalars {sorted(others)} are outside the refined syntax")
        e = ex.get(self.new_gen, 0) + self.r * ex.get(self.scalar, 0)
        return e % self.order, rest

    def to_json(self) -> dict:
        return {
            "base": self.base,
            "scalar": self.scalar,
            "new_generator": self.new_gen,
            "zeta": self.zeta.serialize(),
            "m": self.m,
            "ell": self.ell,
            "r": self.r,
            "relations": [name for name, _, _ in self.relations],
        }


def refine(f: Fragment, s: str, zeta: CycQ, m: int, ell: int, r: int, s_value: Optional[CycQ] = None, new_gen: Optional[str] = None) -> RefinedPresentation:
    """Adjoin a root zeta of order m*ell with zeta^r = [[s]] to a presentation.

    ``s`` is a scalar generator of ``f``; ``s_value`` overrides its value
    when the base scalar lives in a source presentation instead.
    """
    if s_value is not None and s not in f.generators:
        register_arity(s, 0)
    if s_value is None:
        if s not in f.generators:
            raise RefinementError(f"{s} is not a scalar generator of {f.name}")
        s_value = f.semantics[s].rows[0][0]
    if _order(s_value) != m:
        raise RefinementError(f"refinement relation fails: {s} does not have order {m}")
    if not _exact_order(zeta, m * ell):
        raise RefinementError(f"refinement relation fails: zeta does not have order {m * ell}")
    if zeta**r != s_value:
        raise RefinementError(f"refinement relation fails: zeta^{r} != {s}")
    new_gen = new_gen or f"{s}r"
    register_arity(new_gen, 0)
    rels = [
        ("root_order", circuit(" ".join([new_gen] * (m * ell)), 0), circuit("", 0)),
        ("root_power", circuit(" ".join([new_gen] * r), 0), circuit(s, 0)),
    ]
    return RefinedPresentation(f.name, s, s_value, new_gen, zeta, m, ell, r, rels)


def refined_fragment(f: Fragment, ref: RefinedPresentation) -> Fragment:
    """The base fragment extended by the new scalar and its two relations."""
    if ref.scalar not in f.generators:
        raise RefinementError("the refined fragment needs the base scalar as a generator")
    g = Fragment(
        f"{f.name}+{ref.new_gen}",
        f.dim,
        f.generators + (ref.new_gen,),
        list(f.axioms),
        f.shortcuts,
        f.source_text + f"\n; refined by {ref.new_gen}",
        {**f.extra, ref.new_gen: CycMatrix.scalar(ref.zeta)},
    )
    for name, lhs, rhs in ref.relations:
        g.axioms.append(Axiom(name, lhs, rhs, 0))
    return g


@dataclass
class ProbeReport:
    fragment: str
    pairs: int
    confirmed: int
    inconclusive: list[tuple[str, str]]

    @property
    def all_confirmed(self) -> bool:
        return not self.inconclusive

    def to_json(self) -> dict:
        return {"fragment": self.fragment, "pairs": self.pairs, "confirmed": self.confirmed, "inconclusive": [list(p) for p in self.inconclusive]}


def conservativity_probe(f: Fragment, ref: RefinedPresentation, n: int = 1, depth: int = 6, budget=None, refined_budget=None, max_pairs: Optional[int] = None) -> ProbeReport:
    """Pairs of new-scalar-free circuits equal in the refined system must be equal in the base.

    Each enumerated circuit is paired with the shortest circuit of the same
    unitary. A pair is sampled when search derives it in the refined system,
    and confirmed when search derives it in the base system too; the rest are
    inconclusive (not derived within ``budget``).
    """
    from .diagram import canonical_text
    from .harness import classify_circuits
    from .rewrite import Budget, search_equal

    budget = budget or Budget(max_depth=10, max_states=200_000)
    refined_budget = refined_budget or Budget(max_depth=10, max_states=200_000)
    g = refined_fragment(f, ref)
    pairs = confirmed = 0
    bad = []
    for reps in classify_circuits(f, n, depth).values():
        base = reps[0]
        for other in reps[1:]:
            if max_pairs is not None and pairs >= max_pairs:
                return ProbeReport(f.name, pairs, confirmed, bad)
            if not search_equal(base, other, g, refined_budget).found:
                continue
            pairs += 1
            if search_equal(base, other, f, budget).found:
                confirmed += 1
            else:
                bad.append((canonical_text(base), canonical_text(other)))
    return ProbeReport(f.name, pairs, confirmed, bad)


def parse_refine_text(text: str) -> RefinedPresentation:
    """``(refine (fragment F) (scalar s [VALUE]) (zeta VALUE) (m INT) (ell INT) (r INT))``"""
    from .diagram import ParseError, SExpr, Token, parse_sexprs
    from .fragments import load_fragment, parse_cycq

    exprs = parse_sexprs(text)
    if len(exprs) != 1 or not isinstance(exprs[0], SExpr) or not exprs[0].items or getattr(exprs[0].items[0], "text", "") != "refine":
        raise ParseError("expected one (refine ...) form", 1, 1, ["refine"])
    vals: dict = {}
    for part in exprs[0].items[1:]:
        if not isinstance(part, SExpr) or not part.items or not isinstance(part.items[0], Token):
            raise ParseError("expected (KEY VALUE)", part.line, part.col)
        key = part.items[0].text
        args = part.items[1:]
        if key in ("fragment", "m", "ell", "r"):
            vals[key] = args[0].text
        elif key == "scalar":
            vals["scalar"] = args[0].text
            if len(args) > 1:
                vals["s_value"] = parse_cycq(args[1])
        elif key == "zeta":
            vals["zeta"] = parse_cycq(args[0])
        else:
            raise ParseError(f"unknown refine entry {key!r}", part.line, part.col, ["fragment", "scalar", "zeta", "m", "ell", "r"])
    missing = {"fragment", "scalar", "zeta", "m", "ell", "r"} - set(vals)
    if missing:
        raise ParseError(f"refine is missing {sorted(missing)}", 1, 1, sorted(missing))
    f = load_fragment(vals["fragment"])
    return refine(f, vals["scalar"], vals["zeta"], int(vals["m"]), int(vals["ell"]), int(vals["r"]), vals.get("s_value"))
