"""Free-PROP terms, their canonical trace form, and the s-expression format.

Every generator is an endomorphism, so a diagram is a trace of gate events
over labelled tracks followed by a single output permutation.  Tracks are
named by input position.  Two terms are structurally congruent exactly when
their Foata normal forms and boundary permutations coincide.
"""

from __future__ import annotations

import re
from dataclasses import dataclass
from typing import Callable, Iterable, Mapping, Optional, Sequence, Union

# Default arities for every generator and shortcut name shipped with the
# package.  User files may register more with ``register_arity``.
ARITIES: dict[str, int] = {}


def register_arity(name: str, arity: int) -> None:
    old = ARITIES.get(name)
    if old is not None and old != arity:
        raise ValueError(f"generator {name!r} already registered with arity {old}")
    ARITIES[name] = arity


class DiagramError(ValueError):
    pass


# ---------------------------------------------------------------------------
# Terms


@dataclass(frozen=True)
class Id:
    n: int

    def __post_init__(self):
        if self.n < 0:
            raise DiagramError("identity width must be >= 0")


@dataclass(frozen=True)
class Gen:
    name: str
    arity: int


@dataclass(frozen=True)
class Swap:
    pass


@dataclass(frozen=True)
class Seq:
    first: "Term"
    second: "Term"


@dataclass(frozen=True)
class Par:
    left: "Term"
    right: "Term"


Term = Union[Id, Gen, Swap, Seq, Par]


def gen(name: str, arity: Optional[int] = None) -> Gen:
    if arity is None:
        if name not in ARITIES:
            raise DiagramError(f"unknown generator {name!r}")
        arity = ARITIES[name]
    return Gen(name, arity)


def seq(*terms: Term) -> Term:
    if not terms:
        raise DiagramError("seq needs at least one term")
    out = terms[0]
    for t in terms[1:]:
        out = Seq(out, t)
    return out


def par(*terms: Term) -> Term:
    if not terms:
        return Id(0)
    out = terms[0]
    for t in terms[1:]:
        out = Par(out, t)
    return out


def width(t: Term) -> int:
    if isinstance(t, Id):
        return t.n
    if isinstance(t, Gen):
        return t.arity
    if isinstance(t, Swap):
        return 2
    if isinstance(t, Seq):
        a, b = width(t.first), width(t.second)
        if a != b:
            raise DiagramError(f"width mismatch in seq: {a} vs {b}")
        return a
    if isinstance(t, Par):
        return width(t.left) + width(t.right)
    raise TypeError(f"not a term: {t!r}")


def generators_of(t: Term) -> set[str]:
    if isinstance(t, Gen):
        return {t.name}
    if isinstance(t, Seq):
        return generators_of(t.first) | generators_of(t.second)
    if isinstance(t, Par):
        return generators_of(t.left) | generators_of(t.right)
    return set()


def map_generators(t: Term, f: Callable[[Gen], Term]) -> Term:
    """Homomorphic image of t, fixing identities and swaps."""
    if isinstance(t, Gen):
        return f(t)
    if isinstance(t, Seq):
        return Seq(map_generators(t.first, f), map_generators(t.second, f))
    if isinstance(t, Par):
        return Par(map_generators(t.left, f), map_generators(t.right, f))
    return t


def placed(name: str, wires: Sequence[int], n: int, arity: Optional[int] = None) -> Term:
    """Generator ``name`` acting on the given 1-based wires of an n-wire diagram."""
    g = gen(name, arity if arity is not None else len(wires))
    if g.arity != len(wires):
        raise DiagramError(f"{name} has arity {g.arity}, got wires {tuple(wires)}")
    return _embed_event(g, tuple(wires), n)


def _adjacent_swaps(order: Sequence[int]) -> list[int]:
    """Adjacent transpositions (0-based positions) that sort ``order``."""
    arr = list(order)
    out = []
    for i in range(len(arr)):
        for j in range(len(arr) - 1 - i):
            if arr[j] > arr[j + 1]:
                arr[j], arr[j + 1] = arr[j + 1], arr[j]
                out.append(j)
    return out


def _swap_at(j: int, n: int) -> Term:
    return par(*([Id(j)] if j else []), Swap(), *([Id(n - j - 2)] if n - j - 2 else []))


def _embed_event(g: Gen, wires: tuple[int, ...], n: int) -> Term:
    k = len(wires)
    if k == 0:
        return g if n == 0 else Par(g, Id(n))
    lo = min(wires)
    if wires == tuple(range(lo, lo + k)):
        parts = []
        if lo > 1:
            parts.append(Id(lo - 1))
        parts.append(g)
        if lo + k - 1 < n:
            parts.append(Id(n - lo - k + 1))
        return par(*parts)
    # route the wires next to each other at the top, apply, route back
    rest = [w for w in range(1, n + 1) if w not in wires]
    target = list(wires) + rest  # wire at new position p is target[p]
    # we need a permutation term moving wire target[p] to position p
    rank = {w: p for p, w in enumerate(target)}
    swaps = _adjacent_swaps([rank[w] for w in range(1, n + 1)])
    fwd = [_swap_at(j, n) for j in swaps]
    body = par(g, Id(n - k)) if n > k else g
    back = list(reversed(fwd))
    return seq(*fwd, body, *back) if fwd else body


# ---------------------------------------------------------------------------
# Canonical form

Event = tuple  # (name, wires tuple)


def _event_key(e: Event):
    return (e[0], e[1])


def foata(events: Iterable[Event]) -> tuple[tuple[Event, ...], ...]:
    """Foata normal form of a linear event sequence."""
    level_of_wire: dict[int, int] = {}
    blocks: list[list[Event]] = []
    for e in events:
        lvl = 1 + max((level_of_wire.get(w, 0) for w in e[1]), default=0)
        for w in e[1]:
            level_of_wire[w] = lvl
        while len(blocks) < lvl:
            blocks.append([])
        blocks[lvl - 1].append(e)
    return tuple(tuple(sorted(b, key=_event_key)) for b in blocks)


class CanonicalDiagram:
    """Foata-normal event trace plus boundary permutation.

    ``perm[t-1]`` is the output position reached by the track entering at
    input position ``t``.
    """

    __slots__ = ("width", "blocks", "perm", "_hash")

    def __init__(self, width: int, events: Iterable[Event] = (), perm: Optional[Sequence[int]] = None):
        evs = []
        for name, wires in events:
            wires = tuple(wires)
            if len(set(wires)) != len(wires) or any(not 1 <= w <= width for w in wires):
                raise DiagramError(f"bad wires {wires} for width {width}")
            evs.append((name, wires))
        self.width = width
        self.blocks = foata(evs)
        perm = tuple(perm) if perm is not None else tuple(range(1, width + 1))
        if sorted(perm) != list(range(1, width + 1)):
            raise DiagramError(f"not a permutation: {perm}")
        self.perm = perm
        self._hash = None

    @classmethod
    def _make(cls, width, blocks, perm):
        c = cls.__new__(cls)
        c.width, c.blocks, c.perm, c._hash = width, blocks, perm, None
        return c

    @property
    def events(self) -> tuple[Event, ...]:
        return tuple(e for b in self.blocks for e in b)

    def __len__(self) -> int:
        return sum(len(b) for b in self.blocks)

    def key(self):
        return (self.width, self.blocks, self.perm)

    def __eq__(self, other) -> bool:
        return isinstance(other, CanonicalDiagram) and self.key() == other.key()

    def __hash__(self) -> int:
        if self._hash is None:
            self._hash = hash(self.key())
        return self._hash

    def __repr__(self) -> str:
        return f"CanonicalDiagram(width={self.width}, events={list(self.events)}, perm={self.perm})"

    def generators(self) -> set[str]:
        return {e[0] for e in self.events}


def identity_canonical(n: int) -> CanonicalDiagram:
    return CanonicalDiagram._make(n, (), tuple(range(1, n + 1)))


def _inverse(perm: Sequence[int]) -> tuple[int, ...]:
    inv = [0] * len(perm)
    for t, p in enumerate(perm, 1):
        inv[p - 1] = t
    return tuple(inv)


def seq_c(a: CanonicalDiagram, b: CanonicalDiagram) -> CanonicalDiagram:
    """a first, then b."""
    if a.width != b.width:
        raise DiagramError(f"width mismatch in seq: {a.width} vs {b.width}")
    if not len(b) and b.perm == tuple(range(1, b.width + 1)):
        return a
    inv = _inverse(a.perm)
    evs = list(a.events)
    for name, wires in b.events:
        evs.append((name, tuple(inv[w - 1] for w in wires)))
    perm = tuple(b.perm[a.perm[t] - 1] for t in range(a.width))
    return CanonicalDiagram._make(a.width, foata(evs), perm)


def par_c(a: CanonicalDiagram, b: CanonicalDiagram) -> CanonicalDiagram:
    k = a.width
    evs = list(a.events) + [(n, tuple(w + k for w in ws)) for n, ws in b.events]
    perm = a.perm + tuple(p + k for p in b.perm)
    return CanonicalDiagram._make(k + b.width, foata(evs), perm)


def permutation_canonical(perm: Sequence[int]) -> CanonicalDiagram:
    return CanonicalDiagram(len(perm), (), perm)


def to_canonical(t: Term) -> CanonicalDiagram:
    if isinstance(t, Id):
        return identity_canonical(t.n)
    if isinstance(t, Gen):
        return CanonicalDiagram._make(t.arity, ((((t.name, tuple(range(1, t.arity + 1)))),),), tuple(range(1, t.arity + 1)))
    if isinstance(t, Swap):
        return CanonicalDiagram._make(2, (), (2, 1))
    if isinstance(t, Seq):
        return seq_c(to_canonical(t.first), to_canonical(t.second))
    if isinstance(t, Par):
        return par_c(to_canonical(t.left), to_canonical(t.right))
    raise TypeError(f"not a term: {t!r}")


def structurally_equal(a, b) -> bool:
    ca = a if isinstance(a, CanonicalDiagram) else to_canonical(a)
    cb = b if isinstance(b, CanonicalDiagram) else to_canonical(b)
    return ca == cb


def perm_parity(perm: Sequence[int]) -> int:
    seen = [False] * len(perm)
    parity = 0
    for i in range(len(perm)):
        if not seen[i]:
            j, length = i, 0
            while not seen[j]:
                seen[j] = True
                j = perm[j] - 1
                length += 1
            parity ^= (length - 1) & 1
    return parity


def swap_parity(c: CanonicalDiagram) -> int:
    return perm_parity(c.perm)


def permutation_term(perm: Sequence[int]) -> Term:
    """Term of swaps realising the permutation (track t ends at perm[t-1])."""
    n = len(perm)
    swaps = _adjacent_swaps(perm)
    if not swaps:
        return Id(n)
    return seq(*[_swap_at(j, n) for j in swaps])


def to_term(c: CanonicalDiagram) -> Term:
    """A term whose canonical form is c (events in Foata order)."""
    n = c.width
    parts: list[Term] = []
    for b in c.blocks:
        for name, wires in b:
            parts.append(_embed_event(Gen(name, len(wires)), wires, n))
    if c.perm != tuple(range(1, n + 1)):
        parts.append(permutation_term(c.perm))
    if not parts:
        return Id(n)
    return seq(*parts)


# ---------------------------------------------------------------------------
# Text format

NAME_RE = re.compile(r"[A-Za-z0-9_']+")
_TOKEN_RE = re.compile(r"\s+|\(|\)|[A-Za-z0-9_'\-./]+|.", re.S)


class ParseError(DiagramError):
    def __init__(self, message: str, line: int, col: int, expected: Iterable[str] = ()):
        self.message = message
        self.line = line
        self.col = col
        self.expected = sorted(set(expected))
        exp = f"; expected one of {', '.join(self.expected)}" if self.expected else ""
        super().__init__(f"{message} at line {line}, column {col}{exp}")


@dataclass
class Token:
    text: str
    line: int
    col: int


def tokenize(s: str) -> list[Token]:
    toks = []
    line, col = 1, 1
    i = 0
    while i < len(s):
        ch = s[i]
        if ch == ";":  # comment to end of line
            j = s.find("\n", i)
            j = len(s) if j < 0 else j
            col += j - i
            i = j
            continue
        m = _TOKEN_RE.match(s, i)
        text = m.group(0)
        if not text.isspace():
            toks.append(Token(text, line, col))
        for c in text:
            if c == "\n":
                line, col = line + 1, 1
            else:
                col += 1
        i = m.end()
    return toks


@dataclass
class SExpr:
    """Generic s-expression node used by all file formats."""

    items: list
    line: int
    col: int


def parse_sexprs(s: str) -> list:
    """Parse a sequence of s-expressions.  Atoms are Tokens."""
    toks = tokenize(s)
    pos = 0
    out = []

    def parse_one():
        nonlocal pos
        t = toks[pos]
        if t.text == ")":
            raise ParseError("unexpected ')'", t.line, t.col, ["(", "atom"])
        if t.text != "(":
            pos += 1
            return t
        pos += 1
        items = []
        while True:
            if pos >= len(toks):
                raise ParseError("unbalanced parenthesis", t.line, t.col, [")"])
            if toks[pos].text == ")":
                pos += 1
                return SExpr(items, t.line, t.col)
            items.append(parse_one())

    while pos < len(toks):
        out.append(parse_one())
    return out


def _atom(x, what: str, expected: Iterable[str] = ()) -> Token:
    if not isinstance(x, Token):
        raise ParseError(f"expected {what}", x.line, x.col, expected or [what])
    return x


def sexpr_to_term(x, arities: Optional[Mapping[str, int]] = None) -> Term:
    heads = ["id", "gen", "swap", "seq", "par"]
    if isinstance(x, Token):
        raise ParseError(f"unexpected atom {x.text!r}", x.line, x.col, ["("])
    if not x.items:
        raise ParseError("empty term", x.line, x.col, heads)
    head = _atom(x.items[0], "term head", heads)
    args = x.items[1:]
    h = head.text
    if h == "id":
        if len(args) != 1:
            raise ParseError("id takes one integer", head.line, head.col, ["INT"])
        a = _atom(args[0], "INT")
        if not a.text.isdigit():
            raise ParseError(f"bad integer {a.text!r}", a.line, a.col, ["INT"])
        return Id(int(a.text))
    if h == "gen":
        if len(args) != 1:
            raise ParseError("gen takes one name", head.line, head.col, ["NAME"])
        a = _atom(args[0], "NAME")
        if not NAME_RE.fullmatch(a.text):
            raise ParseError(f"bad generator name {a.text!r}", a.line, a.col, ["NAME"])
        table = ARITIES if arities is None else arities
        if a.text not in table:
            raise ParseError(f"unknown generator {a.text!r}", a.line, a.col, sorted(table))
        return Gen(a.text, table[a.text])
    if h == "swap":
        if args:
            raise ParseError("swap takes no arguments", head.line, head.col, [")"])
        return Swap()
    if h in ("seq", "par"):
        if len(args) < 2:
            raise ParseError(f"{h} needs at least two terms", head.line, head.col, ["("])
        terms = [sexpr_to_term(a, arities) for a in args]
        if h == "seq":
            t = seq(*terms)
            try:
                width(t)
            except DiagramError as e:
                raise ParseError(str(e), x.line, x.col) from None
            return t
        return par(*terms)
    raise ParseError(f"unknown term head {h!r}", head.line, head.col, heads)


def parse(s: str, arities: Optional[Mapping[str, int]] = None) -> Term:
    exprs = parse_sexprs(s)
    if not exprs:
        raise ParseError("empty input", 1, 1, ["("])
    if len(exprs) > 1:
        x = exprs[1]
        raise ParseError("trailing input after term", x.line, x.col, ["end of input"])
    return sexpr_to_term(exprs[0], arities)


def _flatten(t: Term, cls) -> list[Term]:
    if isinstance(t, cls):
        a = t.first if cls is Seq else t.left
        b = t.second if cls is Seq else t.right
        return _flatten(a, cls) + [b]
    return [t]


def to_text(t: Term) -> str:
    """Deterministic printer; left-nested seq/par chains print n-ary."""
    if isinstance(t, Id):
        return f"(id {t.n})"
    if isinstance(t, Gen):
        return f"(gen {t.name})"
    if isinstance(t, Swap):
        return "(swap)"
    if isinstance(t, Seq):
        return "(seq " + " ".join(to_text(x) for x in _flatten(t, Seq)) + ")"
    if isinstance(t, Par):
        return "(par " + " ".join(to_text(x) for x in _flatten(t, Par)) + ")"
    raise TypeError(f"not a term: {t!r}")


# ``print`` is the documented name; keep the builtin reachable elsewhere.
print_term = to_text


def canonical_text(c: CanonicalDiagram) -> str:
    return to_text(to_term(c))


def circuit(spec: str, n: int, arities: Optional[Mapping[str, int]] = None) -> Term:
    """Gate-list shorthand, applied left to right: ``"H:2 CNOT:1,2 w SWAP:1,2"``.

    A bare name is a scalar, or a gate on all n wires when its arity is n.
    """
    table = ARITIES if arities is None else arities
    parts: list[Term] = []
    for tok in spec.split():
        name, _, ws = tok.partition(":")
        wires = tuple(int(x) for x in ws.split(",")) if ws else ()
        if name == "SWAP":
            if len(wires) != 2:
                raise DiagramError("SWAP needs two wires")
            a, b = wires
            p = list(range(1, n + 1))
            p[a - 1], p[b - 1] = b, a
            parts.append(permutation_term(p))
            continue
        if name not in table:
            raise DiagramError(f"unknown generator {name!r}")
        if not wires and table[name] == n:
            wires = tuple(range(1, n + 1))
        parts.append(placed(name, wires, n, table[name]))
    return seq(*parts) if parts else Id(n)
