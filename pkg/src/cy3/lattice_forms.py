"""The rank-3 lattice layer: symmetric trilinear (cubic) forms, integral linear
forms, unimodular lattice maps, and the invariance predicates tying them together.

On disk a cubic is a vector of 10 integer monomial coefficients; internally each
trilinear entry t[ijk] is the monomial coefficient divided by its multinomial
weight, stored as an exact rational.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from itertools import combinations_with_replacement, product
from typing import Iterable, Mapping, NamedTuple, Sequence

from .core_arith import QuadSurd
from .errors import NotUnimodular, ZeroVector

# Monomial key -> sorted index triple (1-based: 1=x, 2=y, 3=z).
MONOMIAL_INDICES: dict[str, tuple[int, int, int]] = {
    "x3": (1, 1, 1),
    "x2y": (1, 1, 2),
    "x2z": (1, 1, 3),
    "xy2": (1, 2, 2),
    "xyz": (1, 2, 3),
    "xz2": (1, 3, 3),
    "y3": (2, 2, 2),
    "y2z": (2, 2, 3),
    "yz2": (2, 3, 3),
    "z3": (3, 3, 3),
}

INDEX_MONOMIALS = {v: k for k, v in MONOMIAL_INDICES.items()}

ENTRY_KEYS = tuple(sorted(INDEX_MONOMIALS))


def multinomial(i: int, j: int, k: int) -> int:
    """Number of permutations of the multiset {i, j, k}."""
    if i == j == k:
        return 1
    if i == j or j == k or i == k:
        return 3
    return 6


class TrilinearForm:
    """Fully symmetric trilinear form on the rank-3 lattice, exact entries."""

    __slots__ = ("_t",)

    def __init__(self, entries: Mapping[tuple[int, int, int], Fraction]):
        t = {}
        for key in ENTRY_KEYS:
            t[key] = Fraction(entries.get(key, 0))
        self._t = t

    @classmethod
    def from_cubic_coefficients(cls, coeffs: Mapping[str, int]) -> "TrilinearForm":
        """Build from integer monomial coefficients of C(x, y, z); missing keys are 0."""
        unknown = set(coeffs) - set(MONOMIAL_INDICES)
        if unknown:
            raise KeyError(f"unknown monomial keys: {sorted(unknown)}")
        entries = {}
        for name, (i, j, k) in MONOMIAL_INDICES.items():
            entries[(i, j, k)] = Fraction(coeffs.get(name, 0), multinomial(i, j, k))
        return cls(entries)

    def entry(self, i: int, j: int, k: int) -> Fraction:
        return self._t[tuple(sorted((i, j, k)))]

    def entries(self) -> dict[tuple[int, int, int], Fraction]:
        return dict(self._t)

    def cubic_coefficients(self) -> dict[str, Fraction]:
        """Monomial coefficients of the induced cubic (integers for valid input)."""
        return {
            INDEX_MONOMIALS[key]: self._t[key] * multinomial(*key)
            for key in ENTRY_KEYS
        }

    def __eq__(self, other):
        if not isinstance(other, TrilinearForm):
            return NotImplemented
        return self._t == other._t

    def __hash__(self):
        return hash(tuple(self._t[k] for k in ENTRY_KEYS))

    def __repr__(self):
        nonzero = {INDEX_MONOMIALS[k]: str(v * multinomial(*k))
                   for k, v in self._t.items() if v}
        return f"TrilinearForm({nonzero})"


@dataclass(frozen=True)
class LinearForm:
    """Integral covector; pairs a lattice vector with the c2-class."""

    l1: int
    l2: int
    l3: int

    def coefficients(self) -> tuple[int, int, int]:
        return (self.l1, self.l2, self.l3)

    def __call__(self, v: Sequence):
        c = self.coefficients()
        return sum((x * ci for x, ci in zip(v, c)), start=QuadSurd(0)) \
            if any(isinstance(x, QuadSurd) for x in v) \
            else sum(x * ci for x, ci in zip(v, c))

    def is_zero(self) -> bool:
        return self.coefficients() == (0, 0, 0)

    def compose(self, g: "LatticeMap") -> "LinearForm":
        """The covector L∘g, i.e. v -> L(g v)."""
        row = self.coefficients()
        new = tuple(sum(row[p] * g.rows[p][i] for p in range(3)) for i in range(3))
        return LinearForm(*new)


class LatticeMap:
    """3x3 integer matrix with determinant +-1, acting on column vectors."""

    __slots__ = ("rows",)

    def __init__(self, rows: Iterable[Iterable[int]]):
        rows = tuple(tuple(int(x) for x in r) for r in rows)
        if len(rows) != 3 or any(len(r) != 3 for r in rows):
            raise ValueError("expected a 3x3 matrix")
        self.rows = rows
        if self.det not in (1, -1):
            raise NotUnimodular(f"determinant {self.det}")

    @classmethod
    def identity(cls) -> "LatticeMap":
        return cls(((1, 0, 0), (0, 1, 0), (0, 0, 1)))

    @property
    def det(self) -> int:
        return _det3(self.rows)

    @property
    def trace(self) -> int:
        return self.rows[0][0] + self.rows[1][1] + self.rows[2][2]

    def apply(self, v: Sequence) -> tuple:
        """Matrix-vector product; exact for int, Fraction or QuadSurd entries."""
        return tuple(
            sum((v[j] * self.rows[i][j] for j in range(3)), start=v[0] * 0)
            for i in range(3)
        )

    def __matmul__(self, other: "LatticeMap") -> "LatticeMap":
        a, b = self.rows, other.rows
        return LatticeMap(
            tuple(
                tuple(sum(a[i][k] * b[k][j] for k in range(3)) for j in range(3))
                for i in range(3)
            )
        )

    def inverse(self) -> "LatticeMap":
        d = self.det
        adj = _adjugate3(self.rows)
        return LatticeMap(tuple(tuple(x * d for x in row) for row in adj))

    def __pow__(self, n: int) -> "LatticeMap":
        if n < 0:
            return self.inverse() ** (-n)
        out = LatticeMap.identity()
        base = self
        while n:
            if n & 1:
                out = out @ base
            base = base @ base
            n >>= 1
        return out

    def transpose(self) -> "LatticeMap":
        return LatticeMap(tuple(zip(*self.rows)))

    def is_identity(self) -> bool:
        return self.rows == LatticeMap.identity().rows

    def __eq__(self, other):
        if not isinstance(other, LatticeMap):
            return NotImplemented
        return self.rows == other.rows

    def __hash__(self):
        return hash(self.rows)

    def __repr__(self):
        return f"LatticeMap({list(list(r) for r in self.rows)})"


def _det3(rows) -> int:
    (a, b, c), (d, e, f), (g, h, i) = rows
    return a * (e * i - f * h) - b * (d * i - f * g) + c * (d * h - e * g)


def _adjugate3(rows):
    (a, b, c), (d, e, f), (g, h, i) = rows
    return (
        (e * i - f * h, c * h - b * i, b * f - c * e),
        (f * g - d * i, a * i - c * g, c * d - a * f),
        (d * h - e * g, b * g - a * h, a * e - b * d),
    )


# -- evaluation ---------------------------------------------------------------


def _as_surd(x) -> QuadSurd:
    return x if isinstance(x, QuadSurd) else QuadSurd(x)


def trilinear_eval(T: TrilinearForm, a: Sequence, b: Sequence, c: Sequence) -> QuadSurd:
    """Fully symmetric exact evaluation T(a, b, c)."""
    a = tuple(_as_surd(x) for x in a)
    b = tuple(_as_surd(x) for x in b)
    c = tuple(_as_surd(x) for x in c)
    total = QuadSurd(0)
    for i, j, k in product(range(3), repeat=3):
        t = T.entry(i + 1, j + 1, k + 1)
        if t:
            total = total + a[i] * b[j] * c[k] * t
    return total


def cubic_eval(T: TrilinearForm, v: Sequence) -> QuadSurd:
    """C(v) = T(v, v, v), evaluated via the monomial coefficients."""
    x, y, z = (_as_surd(c) for c in v)
    mono = {
        "x3": x * x * x, "x2y": x * x * y, "x2z": x * x * z,
        "xy2": x * y * y, "xyz": x * y * z, "xz2": x * z * z,
        "y3": y * y * y, "y2z": y * y * z, "yz2": y * z * z,
        "z3": z * z * z,
    }
    total = QuadSurd(0)
    for name, coeff in T.cubic_coefficients().items():
        if coeff:
            total = total + mono[name] * coeff
    return total


def transform_cubic(T: TrilinearForm, g: LatticeMap) -> TrilinearForm:
    """Pullback (g·T)(a, b, c) = T(g a, g b, g c), exact."""
    cols = [g.apply((1 if i == 0 else 0, 1 if i == 1 else 0, 1 if i == 2 else 0))
            for i in range(3)]
    entries = {}
    for i, j, k in combinations_with_replacement((1, 2, 3), 3):
        val = Fraction(0)
        for p, q, r in product(range(3), repeat=3):
            t = T.entry(p + 1, q + 1, r + 1)
            if t:
                val += t * cols[i - 1][p] * cols[j - 1][q] * cols[k - 1][r]
        entries[(i, j, k)] = val
    return TrilinearForm(entries)


def preserves_pair(g: LatticeMap, T: TrilinearForm, L: LinearForm) -> bool:
    """True iff g leaves both the cubic and the linear form invariant."""
    return L.compose(g) == L and transform_cubic(T, g) == T


# -- vectors -------------------------------------------------------------------


class PrimitivePart(NamedTuple):
    vector: tuple[int, int, int]
    scale: int
    flipped: bool  # True when the sign convention negated the input


def primitive_part(v: Sequence[int]) -> PrimitivePart:
    """v = +-scale * vector with gcd(vector) = 1 and first nonzero coordinate
    positive; `flipped` records whether the orientation was reversed."""
    from math import gcd

    v = tuple(int(x) for x in v)
    if all(x == 0 for x in v):
        raise ZeroVector("primitive part of the zero vector")
    g = gcd(gcd(abs(v[0]), abs(v[1])), abs(v[2]))
    w = tuple(x // g for x in v)
    first = next(x for x in w if x != 0)
    if first < 0:
        return PrimitivePart(tuple(-x for x in w), g, True)
    return PrimitivePart(w, g, False)


def projective_normalize(v: Sequence) -> tuple[QuadSurd, QuadSurd, QuadSurd]:
    """Scale so the first nonzero coordinate is 1 (line identity normal form)."""
    v = tuple(_as_surd(x) for x in v)
    pivot = next((x for x in v if x), None)
    if pivot is None:
        raise ZeroVector("cannot normalize the zero vector")
    inv = pivot.inverse()
    return tuple(x * inv for x in v)


def same_line(u: Sequence, v: Sequence) -> bool:
    return projective_normalize(u) == projective_normalize(v)


def cross(r1: Sequence, r2: Sequence) -> tuple:
    """Cross product; exact for int, Fraction or QuadSurd entries."""
    return (
        r1[1] * r2[2] - r1[2] * r2[1],
        r1[2] * r2[0] - r1[0] * r2[2],
        r1[0] * r2[1] - r1[1] * r2[0],
    )
