"""Exhaustive checks: finite group closures, circuit classes, completeness evidence."""

from __future__ import annotations

from dataclasses import dataclass, field
from itertools import permutations
from typing import Optional

from .diagram import CanonicalDiagram, canonical_text, identity_canonical, seq_c
from .field import CycMatrix
from .fragments import Fragment
from .semantics import eval_diagram


def placements(f: Fragment, n: int) -> list[tuple[str, tuple[int, ...], CycMatrix]]:
    """Each generator on each ordered tuple of distinct wires, with its n-wire unitary."""
    sem = f.semantics
    ar = f.signature.arities
    out = []
    for g in f.generators:
        if ar[g] > n:
            continue
        for wires in permutations(range(1, n + 1), ar[g]):
            out.append((g, wires, eval_diagram(CanonicalDiagram(n, [(g, wires)]), sem)))
    return out


def _proj_key(u: CycMatrix):
    for row in u.rows:
        for x in row:
            if x:
                return u.scale(x.inv())
    return u


@dataclass
class ClosureReport:
    fragment: str
    wires: int
    order: int
    projective_order: int
    scalar_order: int
    complete: bool  # False when the cap stopped the closure

    @property
    def consistent(self) -> bool:
        return self.order == self.projective_order * self.scalar_order

    def to_json(self) -> dict:
        return {
            "fragment": self.fragment,
            "wires": self.wires,
            "order": self.order,
            "projective_order": self.projective_order,
            "scalar_order": self.scalar_order,
            "consistent": self.consistent,
            "complete": self.complete,
        }


def group_closure(f: Fragment, n: int, cap: int = 200_000) -> ClosureReport:
    """Order of the group generated by the fragment's gates on n wires."""
    gens = [u for _, _, u in placements(f, n)]
    start = CycMatrix.identity(n, f.dim)
    seen = {start}
    frontier = [start]
    complete = True
    while frontier:
        nxt = []
        for u in frontier:
            for g in gens:
                v = g @ u
                if v not in seen:
                    seen.add(v)
                    nxt.append(v)
        frontier = nxt
        if len(seen) > cap:
            complete = False
            break
    proj = {_proj_key(u) for u in seen}
    scal = sum(1 for u in seen if u.scalar_multiple_of_identity() is not None)
    return ClosureReport(f.name, n, len(seen), len(proj), scal, complete)


def classify_circuits(f: Fragment, n: int, max_len: int) -> dict[CycMatrix, list[CanonicalDiagram]]:
    """All circuits of at most ``max_len`` gates, as distinct canonical forms grouped by unitary.

    Enumeration is breadth-first, so the first member of each class is a
    shortest circuit for it.
    """
    gens = placements(f, n)
    start = identity_canonical(n)
    classes: dict[CycMatrix, list[CanonicalDiagram]] = {CycMatrix.identity(n, f.dim): [start]}
    seen = {start}
    frontier = [(start, CycMatrix.identity(n, f.dim))]
    for _ in range(max_len):
        nxt = []
        for c, u in frontier:
            for g, wires, m in gens:
                c2 = seq_c(c, CanonicalDiagram(n, [(g, wires)]))
                if c2 in seen:
                    continue
                seen.add(c2)
                v = m @ u
                classes.setdefault(v, []).append(c2)
                nxt.append((c2, v))
        frontier = nxt
    return classes


@dataclass
class EvidenceReport:
    fragment: str
    wires: int
    max_len: int
    classes: int
    circuits: int
    pairs: int
    connected: int
    failures: list[tuple[str, str, str]] = field(default_factory=list)

    def to_json(self) -> dict:
        return {
            "fragment": self.fragment,
            "wires": self.wires,
            "max_len": self.max_len,
            "classes": self.classes,
            "circuits": self.circuits,
            "pairs": self.pairs,
            "connected": self.connected,
            "failures": [{"representative": a, "member": b, "reason": r} for a, b, r in self.failures],
        }


def completeness_evidence(f: Fragment, n: int, max_len: int, budget=None, limit: Optional[int] = None) -> EvidenceReport:
    """Connect every enumerated circuit to its class representative by proof search.

    A member already reached as an intermediate state of an earlier proof in
    its class is counted without a fresh search.
    """
    from .rewrite import Budget, check_derivation, search_equal

    budget = budget or Budget(max_depth=12)
    classes = classify_circuits(f, n, max_len)
    rep = EvidenceReport(f.name, n, max_len, len(classes), sum(len(v) for v in classes.values()), 0, 0)
    for members in classes.values():
        base = members[0]
        linked = {canonical_text(base)}
        for c in members[1:]:
            if limit is not None and rep.pairs >= limit:
                return rep
            rep.pairs += 1
            if canonical_text(c) in linked:
                rep.connected += 1
                continue
            res = search_equal(c, base, f, budget)
            if res.found:
                rep.connected += 1
                linked.update(check_derivation(res.script, f).states)
            else:
                rep.failures.append((canonical_text(base), canonical_text(c), res.reason))
    return rep
