"""Exact scalars: arbitrary-precision rationals, real quadratic surds a + b*sqrt(d),
and monic-up-to-sign integer cubics.

Every comparison is decided by exact sign analysis; no floating point enters any
result. Rationals are `fractions.Fraction`; a surd with d in {0, 1} collapses to
a rational, so a single scalar type flows through the whole library.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from functools import total_ordering

from .errors import ComplexRoots, IncompatibleFields


def squarefree_decompose(n: int) -> tuple[int, int]:
    """Write n = s * f**2 with s squarefree; returns (s, f). Requires n >= 0."""
    if n < 0:
        raise ValueError("negative radicand")
    if n in (0, 1):
        return n, 1
    s, f = n, 1
    p = 2
    while p * p <= s:
        while s % (p * p) == 0:
            s //= p * p
            f *= p
        p += 1
    return s, f


@total_ordering
class QuadSurd:
    """a + b*sqrt(d) with a, b rational and d a squarefree nonnegative integer.

    Canonical form: square factors of d are pulled into b, and d <= 1 collapses
    to a rational (b = 0, d = 0). Instances are immutable by convention.
    """

    __slots__ = ("a", "b", "d")

    def __init__(self, a=0, b=0, d: int = 0):
        a = Fraction(a)
        b = Fraction(b)
        d = int(d)
        if d < 0:
            raise ValueError("negative field discriminant")
        if b == 0:
            d = 0
        elif d <= 1:
            a += b * d  # sqrt(0) = 0, sqrt(1) = 1
            b = Fraction(0)
            d = 0
        else:
            s, f = squarefree_decompose(d)
            b *= f
            d = s
            if d == 1:
                a += b
                b = Fraction(0)
                d = 0
        self.a = a
        self.b = b
        self.d = d

    # -- coercion ----------------------------------------------------------

    @staticmethod
    def _coerce(x) -> "QuadSurd | None":
        if isinstance(x, QuadSurd):
            return x
        if isinstance(x, (int, Fraction)):
            return QuadSurd(x)
        return None

    def _common_d(self, other: "QuadSurd") -> int:
        if self.d == 0:
            return other.d
        if other.d == 0 or other.d == self.d:
            return self.d
        raise IncompatibleFields(f"sqrt({self.d}) vs sqrt({other.d})")

    # -- predicates ---------------------------------------------------------

    @property
    def is_rational(self) -> bool:
        return self.d == 0

    def to_fraction(self) -> Fraction:
        if self.d != 0:
            raise ValueError(f"{self} is irrational")
        return self.a

    def sign(self) -> int:
        """Exact sign, by squaring with sign tracking; no floating point."""
        sa = (self.a > 0) - (self.a < 0)
        sb = (self.b > 0) - (self.b < 0)
        if sb == 0:
            return sa
        if sa == 0 or sa == sb:
            return sb if sa == 0 else sa
        # a and b*sqrt(d) have opposite signs: compare a^2 against b^2*d
        lhs, rhs = self.a * self.a, self.b * self.b * self.d
        if lhs == rhs:
            return 0
        return sa if lhs > rhs else sb

    def norm(self) -> Fraction:
        """Field norm a^2 - b^2*d."""
        return self.a * self.a - self.b * self.b * self.d

    def conjugate(self) -> "QuadSurd":
        return QuadSurd(self.a, -self.b, self.d)

    # -- arithmetic ----------------------------------------------------------

    def __add__(self, other):
        other = self._coerce(other)
        if other is None:
            return NotImplemented
        d = self._common_d(other)
        return QuadSurd(self.a + other.a, self.b + other.b, d)

    __radd__ = __add__

    def __neg__(self):
        return QuadSurd(-self.a, -self.b, self.d)

    def __sub__(self, other):
        other = self._coerce(other)
        if other is None:
            return NotImplemented
        return self + (-other)

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        other = self._coerce(other)
        if other is None:
            return NotImplemented
        d = self._common_d(other)
        return QuadSurd(
            self.a * other.a + self.b * other.b * d,
            self.a * other.b + self.b * other.a,
            d,
        )

    __rmul__ = __mul__

    def inverse(self) -> "QuadSurd":
        n = self.norm()
        if n == 0:
            raise ZeroDivisionError("surd has zero norm")
        return QuadSurd(self.a / n, -self.b / n, self.d)

    def __truediv__(self, other):
        other = self._coerce(other)
        if other is None:
            return NotImplemented
        return self * other.inverse()

    def __rtruediv__(self, other):
        other = self._coerce(other)
        if other is None:
            return NotImplemented
        return other * self.inverse()

    def __pow__(self, n: int):
        if not isinstance(n, int):
            return NotImplemented
        base = self if n >= 0 else self.inverse()
        n = abs(n)
        out = QuadSurd(1)
        while n:
            if n & 1:
                out = out * base
            base = base * base
            n >>= 1
        return out

    # -- comparisons ----------------------------------------------------------

    def __eq__(self, other):
        other = self._coerce(other)
        if other is None:
            return NotImplemented
        return (self.a, self.b, self.d) == (other.a, other.b, other.d)

    def __lt__(self, other):
        other = self._coerce(other)
        if other is None:
            return NotImplemented
        return (self - other).sign() < 0

    def __hash__(self):
        if self.d == 0:
            return hash(self.a)
        return hash((self.a, self.b, self.d))

    def __bool__(self):
        return self.a != 0 or self.b != 0

    # -- display ----------------------------------------------------------

    def __float__(self):
        import math

        return float(self.a) + float(self.b) * math.sqrt(self.d)

    def __repr__(self):
        return f"QuadSurd({self.a!r}, {self.b!r}, {self.d})"

    def __str__(self):
        if self.d == 0:
            return str(self.a)
        root = f"√{self.d}"
        bs = "" if abs(self.b) == 1 else str(abs(self.b))
        tail = f"{bs}{root}"
        if self.a == 0:
            return tail if self.b > 0 else f"-{tail}"
        op = "+" if self.b > 0 else "-"
        return f"{self.a} {op} {tail}"


def surd_normalize(a, b, d: int) -> QuadSurd:
    """Canonical surd: square factors of d pulled into b, d <= 1 made rational."""
    return QuadSurd(a, b, d)


def surd_compare(x: QuadSurd, y: QuadSurd) -> int:
    """Exact three-way comparison: -1, 0 or +1. Raises IncompatibleFields for
    surds over distinct quadratic fields."""
    x = QuadSurd._coerce(x)
    y = QuadSurd._coerce(y)
    return (x - y).sign()


def solve_unit_quadratic(s: int) -> tuple[QuadSurd, QuadSurd]:
    """The two real roots (alpha, 1/alpha) of t^2 - s*t + 1, alpha >= 1/alpha.

    Raises ComplexRoots when s^2 < 4 (the finite-order candidate range)."""
    disc = s * s - 4
    if disc < 0:
        raise ComplexRoots(f"t^2 - {s}t + 1 has complex roots")
    half = Fraction(s, 2)
    alpha = QuadSurd(half, Fraction(1, 2), disc)
    beta = QuadSurd(half, Fraction(-1, 2), disc)
    return alpha, beta


@dataclass(frozen=True)
class CubicPolyZ:
    """Integer cubic c3*t^3 + c2*t^2 + c1*t + c0 with c3 = +-1."""

    c3: int
    c2: int
    c1: int
    c0: int

    def __post_init__(self):
        if self.c3 not in (1, -1):
            raise ValueError("leading coefficient must be +-1")

    def __call__(self, t):
        return ((self.c3 * t + self.c2) * t + self.c1) * t + self.c0

    def coefficients(self) -> tuple[int, int, int, int]:
        return (self.c3, self.c2, self.c1, self.c0)

    def __str__(self):
        terms = []
        for c, mon in zip(self.coefficients(), ("t^3", "t^2", "t", "")):
            if c == 0:
                continue
            cs = "" if abs(c) == 1 and mon else str(abs(c))
            terms.append(("- " if c < 0 else "+ ") + (cs + mon if mon else str(abs(c))))
        s = " ".join(terms) if terms else "0"
        return s[2:] if s.startswith("+ ") else ("-" + s[2:] if s.startswith("- ") else s)
