"""Exact arithmetic in the cyclotomic field Q(zeta24) and matrices over it.

An element is stored as eight integer numerators over one positive common
denominator, in the power basis 1, z, ..., z^7 with z = exp(2*pi*i/24) and
z^8 = z^4 - 1.  Keeping a shared denominator is only an internal speedup; the
public view (``coeffs``) is the list of reduced rationals.
"""

from __future__ import annotations

import cmath
from fractions import Fraction
from functools import reduce
from math import gcd
from typing import Iterable, Sequence

DEG = 8
ORDER = 24
# (Z/24Z)^* indexes the Galois group.
_UNITS = (1, 5, 7, 11, 13, 17, 19, 23)


def _reduce_poly(p: list[int]) -> list[int]:
    # fold x^k for k >= 8 using x^8 = x^4 - 1
    for k in range(len(p) - 1, DEG - 1, -1):
        c = p[k]
        if c:
            p[k - 4] += c
            p[k - 8] -= c
    return p[:DEG]


def _power_table() -> list[tuple[int, ...]]:
    table = []
    for k in range(ORDER):
        p = [0] * (k + 1)
        p[k] = 1
        p = _reduce_poly(p) if k >= DEG else p + [0] * (DEG - len(p))
        table.append(tuple(p))
    return table


_ZPOW = _power_table()


class CycQ:
    """Element of Q(zeta24).  Immutable and hashable."""

    __slots__ = ("_n", "_d", "_hash")

    def __init__(self, nums: Sequence[int] = (0,) * DEG, den: int = 1, _normal: bool = False):
        if not _normal:
            nums = tuple(int(x) for x in nums)
            if len(nums) != DEG:
                raise ValueError("CycQ needs exactly 8 coefficients")
            if den == 0:
                raise ZeroDivisionError("division by zero")
            if den < 0:
                nums, den = tuple(-x for x in nums), -den
            g = reduce(gcd, nums, den)
            if g > 1:
                nums, den = tuple(x // g for x in nums), den // g
        self._n = nums
        self._d = den
        self._hash = None

    # construction -----------------------------------------------------

    @classmethod
    def from_rationals(cls, coeffs: Iterable) -> "CycQ":
        fr = [Fraction(c) for c in coeffs]
        if len(fr) != DEG:
            raise ValueError("CycQ needs exactly 8 coefficients")
        den = reduce(lambda a, b: a * b // gcd(a, b), (f.denominator for f in fr), 1)
        return cls([f.numerator * (den // f.denominator) for f in fr], den)

    @classmethod
    def rational(cls, q) -> "CycQ":
        q = Fraction(q)
        return cls((q.numerator, 0, 0, 0, 0, 0, 0, 0), q.denominator)

    @classmethod
    def zeta(cls, k: int) -> "CycQ":
        """zeta24 ** k."""
        return cls(_ZPOW[k % ORDER], 1, _normal=True)

    @property
    def coeffs(self) -> tuple[Fraction, ...]:
        return tuple(Fraction(x, self._d) for x in self._n)

    # predicates ------------------------------------------------------

    def is_zero(self) -> bool:
        return not any(self._n)

    def is_one(self) -> bool:
        return self._d == 1 and self._n == (1, 0, 0, 0, 0, 0, 0, 0)

    def __bool__(self) -> bool:
        return any(self._n)

    def __eq__(self, other) -> bool:
        if isinstance(other, (int, Fraction)):
            other = CycQ.rational(other)
        if not isinstance(other, CycQ):
            return NotImplemented
        return self._d == other._d and self._n == other._n

    def __hash__(self) -> int:
        if self._hash is None:
            self._hash = hash((self._n, self._d))
        return self._hash

    # arithmetic ------------------------------------------------------

    @staticmethod
    def _coerce(x) -> "CycQ":
        if isinstance(x, CycQ):
            return x
        if isinstance(x, (int, Fraction)):
            return CycQ.rational(x)
        raise TypeError(f"cannot coerce {type(x).__name__} to CycQ")

    def __add__(self, other) -> "CycQ":
        o = self._coerce(other)
        a, b = self._d, o._d
        if a == b:
            return CycQ([x + y for x, y in zip(self._n, o._n)], a)
        return CycQ([x * b + y * a for x, y in zip(self._n, o._n)], a * b)

    __radd__ = __add__

    def __neg__(self) -> "CycQ":
        return CycQ(tuple(-x for x in self._n), self._d, _normal=True)

    def __sub__(self, other) -> "CycQ":
        return self + (-self._coerce(other))

    def __rsub__(self, other) -> "CycQ":
        return self._coerce(other) - self

    def __mul__(self, other) -> "CycQ":
        o = self._coerce(other)
        p = [0] * (2 * DEG - 1)
        for i, x in enumerate(self._n):
            if x:
                for j, y in enumerate(o._n):
                    if y:
                        p[i + j] += x * y
        return CycQ(_reduce_poly(p), self._d * o._d)

    __rmul__ = __mul__

    def galois(self, k: int) -> "CycQ":
        """Apply the automorphism zeta -> zeta**k (k a unit mod 24)."""
        acc = [0] * DEG
        for j, x in enumerate(self._n):
            if x:
                for t, z in enumerate(_ZPOW[(j * k) % ORDER]):
                    if z:
                        acc[t] += x * z
        return CycQ(acc, self._d)

    def conj(self) -> "CycQ":
        return self.galois(ORDER - 1)

    def norm(self) -> Fraction:
        prod = self
        for k in _UNITS[1:]:
            prod = prod * self.galois(k)
        if any(prod._n[1:]):
            raise ArithmeticError("field norm is not rational")
        return Fraction(prod._n[0], prod._d)

    def inv(self) -> "CycQ":
        if self.is_zero():
            raise ZeroDivisionError("division by zero")
        rest = CycQ.rational(1)
        for k in _UNITS[1:]:
            rest = rest * self.galois(k)
        nrm = self * rest
        q = Fraction(nrm._n[0], nrm._d)
        return rest * CycQ.rational(1 / q)

    def __truediv__(self, other) -> "CycQ":
        return self * self._coerce(other).inv()

    def __rtruediv__(self, other) -> "CycQ":
        return self._coerce(other) * self.inv()

    def __pow__(self, e: int) -> "CycQ":
        if e < 0:
            return self.inv() ** (-e)
        result, base = CycQ.rational(1), self
        while e:
            if e & 1:
                result = result * base
            base = base * base
            e >>= 1
        return result

    # views -----------------------------------------------------------

    def to_complex(self) -> complex:
        z = cmath.exp(2j * cmath.pi / ORDER)
        return sum(x * z**j for j, x in enumerate(self._n)) / self._d

    def serialize(self) -> tuple[str, ...]:
        out = []
        for c in self.coeffs:
            out.append(f"{c.numerator}/{c.denominator}")
        return tuple(out)

    @classmethod
    def deserialize(cls, parts: Sequence[str]) -> "CycQ":
        return cls.from_rationals(Fraction(p) for p in parts)

    def key(self) -> str:
        return ",".join(self.serialize())

    def __repr__(self) -> str:
        terms = []
        for j, c in enumerate(self.coeffs):
            if c:
                terms.append(f"{c}" if j == 0 else f"{c}*z^{j}")
        return "CycQ(" + (" + ".join(terms) or "0") + ")"


ZERO = CycQ.rational(0)
ONE = CycQ.rational(1)


def embed_constant(name: str) -> CycQ:
    """Named constants used by the gate semantics."""
    if name == "one":
        return ONE
    if name == "minus_one":
        return -ONE
    if name == "omega8":
        return CycQ.zeta(3)
    if name == "i":
        return CycQ.zeta(6)
    if name == "zeta12":
        return CycQ.zeta(2)
    if name == "zeta3":
        return CycQ.zeta(8)
    if name == "inv_sqrt2":
        z = CycQ.zeta(3)
        return (z + z.conj()) * Fraction(1, 2)
    if name == "inv_sqrt3":
        z = CycQ.zeta(2)
        return (z + z.conj()) * Fraction(1, 3)
    raise KeyError(f"unknown constant {name!r}")


CONSTANTS = ("one", "minus_one", "omega8", "i", "zeta12", "zeta3", "inv_sqrt2", "inv_sqrt3")


class CycMatrix:
    """Square matrix over Q(zeta24)."""

    __slots__ = ("dim", "rows", "_key")

    def __init__(self, rows: Sequence[Sequence]):
        rows = tuple(tuple(CycQ._coerce(x) for x in r) for r in rows)
        n = len(rows)
        if n == 0 or any(len(r) != n for r in rows):
            raise ValueError("matrix must be square and non-empty")
        self.dim = n
        self.rows = rows
        self._key = None

    @classmethod
    def _raw(cls, rows: tuple) -> "CycMatrix":
        m = cls.__new__(cls)
        m.dim = len(rows)
        m.rows = rows
        m._key = None
        return m

    @classmethod
    def identity(cls, n_wires: int = 1, d: int = 2) -> "CycMatrix":
        size = d**n_wires
        return cls._raw(tuple(tuple(ONE if i == j else ZERO for j in range(size)) for i in range(size)))

    @classmethod
    def scalar(cls, value: CycQ, size: int = 1) -> "CycMatrix":
        return cls._raw(tuple(tuple(value if i == j else ZERO for j in range(size)) for i in range(size)))

    @classmethod
    def permutation(cls, images: Sequence[int]) -> "CycMatrix":
        """Matrix sending basis vector j to basis vector images[j]."""
        size = len(images)
        rows = [[ZERO] * size for _ in range(size)]
        for j, i in enumerate(images):
            rows[i][j] = ONE
        return cls._raw(tuple(tuple(r) for r in rows))

    @classmethod
    def diag(cls, values: Sequence) -> "CycMatrix":
        values = [CycQ._coerce(v) for v in values]
        n = len(values)
        return cls._raw(tuple(tuple(values[i] if i == j else ZERO for j in range(n)) for i in range(n)))

    def __getitem__(self, ij):
        i, j = ij
        return self.rows[i][j]

    def __matmul__(self, other: "CycMatrix") -> "CycMatrix":
        if self.dim != other.dim:
            raise ValueError(f"dimension mismatch: {self.dim} vs {other.dim}")
        n = self.dim
        cols = list(zip(*other.rows))
        out = []
        for r in self.rows:
            nz = [(k, x) for k, x in enumerate(r) if x]
            row = []
            for c in cols:
                acc = ZERO
                for k, x in nz:
                    y = c[k]
                    if y:
                        acc = acc + x * y
                row.append(acc)
            out.append(tuple(row))
        return CycMatrix._raw(tuple(out))

    matmul = __matmul__

    def kron(self, other: "CycMatrix") -> "CycMatrix":
        out = []
        for ra in self.rows:
            for rb in other.rows:
                row = []
                for a in ra:
                    if a:
                        row.extend(a * b if b else ZERO for b in rb)
                    else:
                        row.extend([ZERO] * other.dim)
                out.append(tuple(row))
        return CycMatrix._raw(tuple(out))

    def scale(self, c: CycQ) -> "CycMatrix":
        return CycMatrix._raw(tuple(tuple(c * x if x else ZERO for x in r) for r in self.rows))

    def dagger(self) -> "CycMatrix":
        return CycMatrix._raw(tuple(tuple(x.conj() for x in col) for col in zip(*self.rows)))

    def is_identity(self) -> bool:
        return all(
            (x.is_one() if i == j else x.is_zero()) for i, r in enumerate(self.rows) for j, x in enumerate(r)
        )

    def is_unitary(self) -> bool:
        return (self @ self.dagger()).is_identity()

    def scalar_multiple_of_identity(self):
        """Return lambda if the matrix is lambda*I, else None."""
        lam = self.rows[0][0]
        for i, r in enumerate(self.rows):
            for j, x in enumerate(r):
                if i == j:
                    if x != lam:
                        return None
                elif x:
                    return None
        return lam

    def det(self) -> CycQ:
        # Bareiss fraction-free elimination; divisions are exact.
        n = self.dim
        a = [list(r) for r in self.rows]
        sign = 1
        prev = ONE
        for k in range(n - 1):
            if a[k][k].is_zero():
                piv = next((i for i in range(k + 1, n) if a[i][k]), None)
                if piv is None:
                    return ZERO
                a[k], a[piv] = a[piv], a[k]
                sign = -sign
            pinv = prev.inv()
            for i in range(k + 1, n):
                for j in range(k + 1, n):
                    a[i][j] = (a[i][j] * a[k][k] - a[i][k] * a[k][j]) * pinv
            prev = a[k][k]
        d = a[n - 1][n - 1]
        return -d if sign < 0 else d

    def __eq__(self, other) -> bool:
        if not isinstance(other, CycMatrix):
            return NotImplemented
        return self.rows == other.rows

    def __hash__(self) -> int:
        return hash(self.rows)

    def key(self) -> str:
        """Bit-exact serialization used for hashing closures."""
        if self._key is None:
            self._key = ";".join("|".join(x.key() for x in r) for r in self.rows)
        return self._key

    def serialize(self) -> list[list[list[str]]]:
        return [[list(x.serialize()) for x in r] for r in self.rows]

    def to_complex(self) -> list[list[complex]]:
        return [[x.to_complex() for x in r] for r in self.rows]

    def __repr__(self) -> str:
        return f"CycMatrix(dim={self.dim})"


def matmul(a: CycMatrix, b: CycMatrix) -> CycMatrix:
    return a @ b


def kron(a: CycMatrix, b: CycMatrix) -> CycMatrix:
    return a.kron(b)


def dagger(a: CycMatrix) -> CycMatrix:
    return a.dagger()


def det(a: CycMatrix) -> CycQ:
    return a.det()


def identity(n: int, d: int = 2) -> CycMatrix:
    return CycMatrix.identity(n, d)
