"""Rule application modulo structural congruence, script checking, proof search.

Diagrams are traces of gate events on tracks. A match of a pattern is a map
from pattern wires to host tracks together with a convex set S of host events
that is a copy of the pattern's events. The host then factors as D ; S ; U
(D the events below S, U the rest) and rewriting swaps S for the other side.
Pattern wires that carry no events still need a position; it is encoded by
enlarging D.
"""

from __future__ import annotations

from collections import Counter
from dataclasses import dataclass, field
from itertools import permutations
from typing import Iterable, Iterator, Optional, Sequence, Union

from .diagram import (
    CanonicalDiagram,
    DiagramError,
    ParseError,
    SExpr,
    Term,
    Token,
    canonical_text,
    parse_sexprs,
    permutation_canonical,
    seq_c,
    sexpr_to_term,
    to_text,
    width,
)
from .fragments import Fragment, load_fragment

LR, RL = "lr", "rl"


class RewriteError(DiagramError):
    pass


class StaleMatch(RewriteError):
    pass


@dataclass(frozen=True)
class Rule:
    name: str
    direction: str
    lhs: CanonicalDiagram
    rhs: CanonicalDiagram

    def __post_init__(self):
        if self.lhs.width != self.rhs.width:
            raise RewriteError(f"rule {self.name}: widths differ")

    def flipped(self) -> "Rule":
        return Rule(self.name, RL if self.direction == LR else LR, self.rhs, self.lhs)


def rules_of(f: Fragment, lemmas: Optional[dict[str, tuple[CanonicalDiagram, CanonicalDiagram]]] = None) -> list[Rule]:
    out = []
    for ax in f.axioms:
        lc, rc = f.sides(ax)
        out.append(Rule(ax.name, LR, lc, rc))
        out.append(Rule(ax.name, RL, rc, lc))
    for name, (lc, rc) in (lemmas or {}).items():
        out.append(Rule(name, LR, lc, rc))
        out.append(Rule(name, RL, rc, lc))
    return out


def find_rule(f: Fragment, name: str, direction: str, lemmas=None) -> Rule:
    if direction not in (LR, RL):
        raise RewriteError(f"direction must be {LR!r} or {RL!r}, got {direction!r}")
    if lemmas and name in lemmas:
        lc, rc = lemmas[name]
    else:
        try:
            lc, rc = f.sides(f.axiom(name))
        except KeyError:
            raise RewriteError(f"unknown rule {name!r}") from None
    r = Rule(name, LR, lc, rc)
    return r if direction == LR else r.flipped()


# ---------------------------------------------------------------------------
# host analysis


class _Host:
    __slots__ = ("c", "ev", "track", "pos", "nxt", "up", "down", "track_mask", "scalars", "by_name")

    def __init__(self, c: CanonicalDiagram):
        self.c = c
        ev = self.ev = c.events
        self.track = {w: [] for w in range(1, c.width + 1)}
        self.pos = {}
        for i, (_, ws) in enumerate(ev):
            for w in ws:
                self.pos[(i, w)] = len(self.track[w])
                self.track[w].append(i)
        self.nxt = {}
        for w, lst in self.track.items():
            for a, b in zip(lst, lst[1:]):
                self.nxt[(a, w)] = b
        m = len(ev)
        up = [0] * m
        for i in range(m - 1, -1, -1):
            acc = 0
            for w in ev[i][1]:
                j = self.nxt.get((i, w))
                if j is not None:
                    acc |= (1 << j) | up[j]
            up[i] = acc
        down = [0] * m
        for i in range(m):
            for w in ev[i][1]:
                p = self.pos[(i, w)]
                if p:
                    j = self.track[w][p - 1]
                    down[i] |= (1 << j) | down[j]
        self.up, self.down = up, down
        self.track_mask = {w: sum(1 << i for i in lst) for w, lst in self.track.items()}
        self.scalars: dict[str, list[int]] = {}
        self.by_name: dict[str, list[int]] = {}
        for i, (name, ws) in enumerate(ev):
            (self.scalars if not ws else self.by_name).setdefault(name, []).append(i)


class _Pattern:
    __slots__ = ("c", "events", "prev", "scalars", "free")

    def __init__(self, c: CanonicalDiagram):
        self.c = c
        self.events = [e for e in c.events if e[1]]
        self.scalars = Counter(e[0] for e in c.events if not e[1])
        last: dict[int, int] = {}
        self.prev = []
        for j, (_, ws) in enumerate(self.events):
            self.prev.append(tuple(last.get(w) for w in ws))
            for w in ws:
                last[w] = j
        self.free = [w for w in range(1, c.width + 1) if w not in last]


_HOST_CACHE: dict = {}
_PAT_CACHE: dict = {}


def _host(c: CanonicalDiagram) -> _Host:
    h = _HOST_CACHE.get(c)
    if h is None:
        if len(_HOST_CACHE) > 4096:
            _HOST_CACHE.clear()
        h = _HOST_CACHE[c] = _Host(c)
    return h


def _pattern(c: CanonicalDiagram) -> _Pattern:
    p = _PAT_CACHE.get(c)
    if p is None:
        p = _PAT_CACHE[c] = _Pattern(c)
    return p


@dataclass(frozen=True)
class Match:
    wire_map: tuple[int, ...]  # pattern wire i+1 -> host track
    events: tuple[int, ...]  # selected host event indices (sorted)
    down: int  # bitmask of host events placed before the match
    anchor: int
    host_key: tuple = field(repr=False, compare=False, default=())

    def sort_key(self):
        return (self.anchor, self.wire_map, bin(self.down).count("1"), self.down)


def _popcount(x: int) -> int:
    return bin(x).count("1")


def find_matches(host: CanonicalDiagram, pattern: CanonicalDiagram) -> list[Match]:
    if pattern.width > host.width:
        return []
    H = _host(host)
    P = _pattern(pattern)
    # scalars: take the first occurrences of each needed name
    scal: list[int] = []
    for name, k in P.scalars.items():
        have = H.scalars.get(name, [])
        if len(have) < k:
            return []
        scal.extend(have[:k])
    scal_mask = sum(1 << i for i in scal)
    k = pattern.width
    out: list[Match] = []
    m = len(P.events)
    assign = [0] * m
    phi: dict[int, int] = {}
    used: set[int] = set()

    def finish():
        S = scal_mask
        for i in assign:
            S |= 1 << i
        up = down = 0
        for i in assign:
            up |= H.up[i]
            down |= H.down[i]
        if (up & down) & ~S:
            return
        D = down & ~S
        free_tracks = [t for t in range(1, host.width + 1) if t not in used]
        for img in permutations(free_tracks, len(P.free)):
            for positions in _positions([len(H.track[t]) for t in img]):
                Dx = D
                for t, p in zip(img, positions):
                    if p:
                        e = H.track[t][p - 1]
                        Dx |= (1 << e) | H.down[e]
                if Dx & S:
                    continue
                if any(_popcount(Dx & H.track_mask[t]) != p for t, p in zip(img, positions)):
                    continue
                full = dict(phi)
                full.update(zip(P.free, img))
                wm = tuple(full[w] for w in range(1, k + 1))
                sel = tuple(sorted(set(assign) | set(scal)))
                anchor = min(assign) if assign else (min(scal) if scal else -1)
                out.append(Match(wm, sel, Dx, anchor, host.key()))

    def bt(j: int):
        if j == m:
            finish()
            return
        name, ws = P.events[j]
        preds = P.prev[j]
        cand = None
        for w, p in zip(ws, preds):
            if p is not None:
                c = H.nxt.get((assign[p], phi[w]))
                if c is None or (cand is not None and c != cand):
                    return
                cand = c
        cands = [cand] if cand is not None else H.by_name.get(name, [])
        for h in cands:
            hname, hws = H.ev[h]
            if hname != name or len(hws) != len(ws) or h in assign[:j]:
                continue
            added = []
            ok = True
            for w, hw in zip(ws, hws):
                if w in phi:
                    if phi[w] != hw:
                        ok = False
                        break
                elif hw in used:
                    ok = False
                    break
                else:
                    phi[w] = hw
                    used.add(hw)
                    added.append(w)
            if ok:
                assign[j] = h
                bt(j + 1)
            for w in added:
                used.discard(phi.pop(w))

    bt(0)
    out.sort(key=Match.sort_key)
    # identical (wire map, selection, cut) can arise only once; keep order stable
    return out


def _positions(lengths: Sequence[int]) -> Iterator[tuple[int, ...]]:
    if not lengths:
        yield ()
        return
    for p in range(lengths[0] + 1):
        for rest in _positions(lengths[1:]):
            yield (p,) + rest


def _embed_perm(perm: Sequence[int], wm: Sequence[int], n: int) -> tuple[int, ...]:
    q = list(range(1, n + 1))
    for i, p in enumerate(perm):
        q[wm[i] - 1] = wm[p - 1]
    return tuple(q)


def _inverse(perm: Sequence[int]) -> tuple[int, ...]:
    inv = [0] * len(perm)
    for t, p in enumerate(perm, 1):
        inv[p - 1] = t
    return tuple(inv)


def apply(host: CanonicalDiagram, rule: Rule, match: Match) -> CanonicalDiagram:
    if match.host_key != host.key():
        raise StaleMatch("stale match: the host diagram has changed")
    n = host.width
    ev = host.events
    sel = set(match.events)
    D = [ev[i] for i in range(len(ev)) if (match.down >> i) & 1]
    U = [ev[i] for i in range(len(ev)) if not (match.down >> i) & 1 and i not in sel]
    wm = match.wire_map
    r_events = [(nm, tuple(wm[w - 1] for w in ws)) for nm, ws in rule.rhs.events]
    c = CanonicalDiagram(n, D + r_events)
    residue = _embed_perm(rule.rhs.perm, wm, n)
    undo = _inverse(_embed_perm(rule.lhs.perm, wm, n))
    c = seq_c(c, permutation_canonical(residue))
    c = seq_c(c, permutation_canonical(undo))
    c = seq_c(c, CanonicalDiagram(n, U))
    return seq_c(c, permutation_canonical(host.perm))


def rewrite_all(host: CanonicalDiagram, rules: Iterable[Rule]) -> Iterator[tuple[Rule, int, CanonicalDiagram]]:
    for r in rules:
        for i, mt in enumerate(find_matches(host, r.lhs)):
            yield r, i, apply(host, r, mt)


# ---------------------------------------------------------------------------
# derivation scripts


@dataclass
class DerivationScript:
    fragment: str
    initial: Term
    steps: list[tuple[str, str, int]]
    final: Term
    name: Optional[str] = None

    def to_text(self) -> str:
        lines = ["(derivation"]
        if self.name:
            lines.append(f"  (name {self.name})")
        lines.append(f"  (fragment {self.fragment})")
        lines.append(f"  (initial {to_text(self.initial)})")
        for r, d, i in self.steps:
            lines.append(f"  (step {r} {d} {i})")
        lines.append(f"  (final {to_text(self.final)}))")
        return "\n".join(lines)


@dataclass
class DerivationResult:
    ok: bool
    name: Optional[str] = None
    failed_step: Optional[int] = None
    message: str = ""
    states: list[str] = field(default_factory=list)

    def to_json(self) -> dict:
        return {"name": self.name, "ok": self.ok, "failed_step": self.failed_step, "message": self.message}


def _head(x) -> str:
    if isinstance(x, SExpr) and x.items and isinstance(x.items[0], Token):
        return x.items[0].text
    return ""


def parse_derivations(text: str) -> list[DerivationScript]:
    """Parse one or more (derivation ...) forms. Fragment shortcuts must be known."""
    out = []
    for x in parse_sexprs(text):
        if _head(x) != "derivation":
            raise ParseError("expected (derivation ...)", x.line, x.col, ["derivation"])
        name = frag = init = fin = None
        steps = []
        pending = []
        for part in x.items[1:]:
            h = _head(part)
            if h == "name":
                name = part.items[1].text
            elif h == "fragment":
                frag = part.items[1].text
                try:
                    load_fragment(frag)
                except (OSError, KeyError):
                    pass
            elif h in ("initial", "final"):
                pending.append((h, part.items[1]))
            elif h == "step":
                it = part.items
                if len(it) != 4 or not it[3].text.lstrip("-").isdigit():
                    raise ParseError("expected (step RULE DIR INT)", part.line, part.col, ["RULE", "lr|rl", "INT"])
                steps.append((it[1].text, it[2].text, int(it[3].text)))
            else:
                raise ParseError(f"unknown derivation entry {h!r}", part.line, part.col, ["name", "fragment", "initial", "step", "final"])
        for h, sx in pending:
            t = sexpr_to_term(sx)
            if h == "initial":
                init = t
            else:
                fin = t
        if frag is None or init is None or fin is None:
            raise ParseError("derivation needs fragment, initial and final", x.line, x.col)
        out.append(DerivationScript(frag, init, steps, fin, name))
    return out


def check_derivation(script: DerivationScript, f: Optional[Fragment] = None, lemmas=None) -> DerivationResult:
    f = f or load_fragment(script.fragment)
    try:
        cur = f.canonical(script.initial)
        goal = f.canonical(script.final)
    except Exception as e:  # bad generator or width
        return DerivationResult(False, script.name, None, str(e))
    states = [canonical_text(cur)]
    for k, (rname, d, idx) in enumerate(script.steps):
        try:
            rule = find_rule(f, rname, d, lemmas)
        except RewriteError as e:
            return DerivationResult(False, script.name, k, f"step {k}: {e}", states)
        ms = find_matches(cur, rule.lhs)
        if not 0 <= idx < len(ms):
            return DerivationResult(
                False, script.name, k, f"step {k}: rule {rname} {d} has {len(ms)} matches, no match {idx}; host {canonical_text(cur)}", states
            )
        cur = apply(cur, rule, ms[idx])
        states.append(canonical_text(cur))
    if cur != goal:
        return DerivationResult(
            False,
            script.name,
            len(script.steps),
            f"final form differs\n  got:      {canonical_text(cur)}\n  expected: {canonical_text(goal)}",
            states,
        )
    return DerivationResult(True, script.name, None, "ok", states)


def check_corpus(scripts: Sequence[DerivationScript]) -> list[DerivationResult]:
    """Check scripts in order; a named script that checks becomes a lemma for later ones."""
    lemmas: dict[str, dict] = {}
    out = []
    for s in scripts:
        f = load_fragment(s.fragment)
        lem = lemmas.setdefault(s.fragment, {})
        r = check_derivation(s, f, lem)
        out.append(r)
        if r.ok and s.name:
            lem[s.name] = (f.canonical(s.initial), f.canonical(s.final))
    return out


# ---------------------------------------------------------------------------
# search


@dataclass
class Budget:
    max_depth: int = 12
    max_states: int = 1_000_000
    # states with more events than the larger endpoint plus this slack are
    # pruned; None picks one more than the largest applicable rule side
    slack: Optional[int] = None


@dataclass
class SearchResult:
    found: bool
    script: Optional[DerivationScript]
    states: int
    reason: str = ""

    @property
    def exhausted(self) -> bool:
        return not self.found


def _step_between(x: CanonicalDiagram, y: CanonicalDiagram, rules: Sequence[Rule]) -> tuple[str, str, int]:
    for r in rules:
        for i, mt in enumerate(find_matches(x, r.lhs)):
            if apply(x, r, mt) == y:
                return r.name, r.direction, i
    raise RewriteError("internal: no forward step reproduces a backward edge")


def search_equal(
    a: Union[Term, CanonicalDiagram],
    b: Union[Term, CanonicalDiagram],
    f: Fragment,
    budget: Optional[Budget] = None,
    lemmas=None,
    initial_term: Optional[Term] = None,
    final_term: Optional[Term] = None,
) -> SearchResult:
    budget = budget or Budget()
    ca = a if isinstance(a, CanonicalDiagram) else f.canonical(a)
    cb = b if isinstance(b, CanonicalDiagram) else f.canonical(b)
    if ca.width != cb.width:
        raise RewriteError(f"width mismatch: {ca.width} vs {cb.width}")
    ta = initial_term if initial_term is not None else (a if not isinstance(a, CanonicalDiagram) else _term(ca))
    tb = final_term if final_term is not None else (b if not isinstance(b, CanonicalDiagram) else _term(cb))
    if ca == cb:
        return SearchResult(True, DerivationScript(f.name, ta, [], tb), 1)
    rules = [r for r in rules_of(f, lemmas) if r.lhs.width <= ca.width]
    slack = budget.slack
    if slack is None:
        slack = max([6] + [len(r.lhs) + 1 for r in rules])
    cap = max(len(ca), len(cb)) + slack
    # parent maps: state -> (previous state, rule, dir, ordinal)
    par_a: dict = {ca: None}
    par_b: dict = {cb: None}
    fa, fb = [ca], [cb]
    da = db = 0
    meet = None
    while fa and fb and da + db < budget.max_depth and meet is None:
        forward = len(fa) <= len(fb)
        frontier, parents, other = (fa, par_a, par_b) if forward else (fb, par_b, par_a)
        nxt = []
        for s in frontier:
            for r in rules:
                for i, mt in enumerate(find_matches(s, r.lhs)):
                    t = apply(s, r, mt)
                    if t in parents or len(t) > cap:
                        continue
                    parents[t] = (s, r.name, r.direction, i)
                    if t in other:
                        meet = t
                        break
                    nxt.append(t)
                    if len(par_a) + len(par_b) > budget.max_states:
                        return SearchResult(False, None, len(par_a) + len(par_b), "state budget exhausted")
                if meet is not None:
                    break
            if meet is not None:
                break
        if forward:
            fa, da = nxt, da + 1
        else:
            fb, db = nxt, db + 1
    if meet is None:
        why = "depth budget exhausted" if fa and fb else "search space exhausted within size cap"
        return SearchResult(False, None, len(par_a) + len(par_b), why)
    # forward half
    steps = []
    x = meet
    chain = []
    while par_a[x] is not None:
        s, rn, d, i = par_a[x]
        chain.append((rn, d, i))
        x = s
    steps.extend(reversed(chain))
    # backward half: edges were found from the b side, re-derive forward ordinals
    x = meet
    while par_b[x] is not None:
        s, rn, d, i = par_b[x]
        rule = find_rule(f, rn, RL if d == LR else LR, lemmas)
        ms = find_matches(x, rule.lhs)
        idx = next((k for k, mt in enumerate(ms) if apply(x, rule, mt) == s), None)
        if idx is None:
            rn, d2, idx = _step_between(x, s, rules)
            steps.append((rn, d2, idx))
        else:
            steps.append((rn, rule.direction, idx))
        x = s
    script = DerivationScript(f.name, ta, steps, tb)
    res = check_derivation(script, f, lemmas)
    if not res.ok:
        raise RewriteError(f"internal: search produced an invalid script: {res.message}")
    return SearchResult(True, script, len(par_a) + len(par_b))


def _term(c: CanonicalDiagram) -> Term:
    from .diagram import to_term

    return to_term(c)
