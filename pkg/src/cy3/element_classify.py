"""Classify a single unimodular lattice map: finite order, hyperbolic (a real
eigenvalue alpha > 1 in a real quadratic field), or unipotent with full or
deficient Jordan block. All eigen-data is computed exactly.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

from .core_arith import CubicPolyZ, QuadSurd, solve_unit_quadratic
from .errors import (
    DoesNotPreserveL,
    InconsistentTag,
    IsIdentity,
    NotFiniteOrder,
    NotUnipotent,
)
from .lattice_forms import (
    LatticeMap,
    LinearForm,
    cross,
    primitive_part,
    projective_normalize,
)

# Conjugate eigenvalue pair tags, keyed by s = lambda + conj(lambda).
LAMBDA_TAGS = {
    -2: "-1",
    -1: "(-1±i√3)/2",
    0: "±i",
    1: "(1±i√3)/2",
}

# Order of the pair as roots of unity, keyed by the same s.
_TAG_ORDERS = {-2: 2, -1: 3, 0: 4, 1: 6}

ALLOWED_TAGS = frozenset(LAMBDA_TAGS.values()) | {"real-pair"}


@dataclass(frozen=True)
class Identity:
    pass


@dataclass(frozen=True)
class FiniteOrder:
    n: int
    lambda_tag: str


@dataclass(frozen=True)
class Hyperbolic:
    s: int  # trace of the quadratic factor t^2 - s*t + 1
    alpha: QuadSurd  # the root > 1
    u: tuple  # eigenvector for 1/alpha, projective
    v: tuple  # eigenvector for alpha, projective
    w: tuple[int, int, int]  # primitive integer eigenvector for 1


@dataclass(frozen=True)
class UnipotentFull:
    w: tuple[int, int, int]
    w1: tuple[int, int, int]
    w2: tuple[int, int, int]


@dataclass(frozen=True)
class UnipotentDeficient:
    rank_of_g_minus_id: int = 1


@dataclass(frozen=True)
class OutOfTheory:
    reason: str


ElementClass = (
    Identity | FiniteOrder | Hyperbolic | UnipotentFull | UnipotentDeficient | OutOfTheory
)

ORDER_SEARCH_BOUND = 12  # covers det -1 elements; the det-1 bound is 6


def char_poly(g: LatticeMap) -> CubicPolyZ:
    """det(tI - g) = t^3 - tr*t^2 + m*t - det, m the sum of principal 2x2 minors."""
    r = g.rows
    m = (
        r[0][0] * r[1][1] - r[0][1] * r[1][0]
        + r[0][0] * r[2][2] - r[0][2] * r[2][0]
        + r[1][1] * r[2][2] - r[1][2] * r[2][1]
    )
    return CubicPolyZ(1, -g.trace, m, -g.det)


def finite_order(g: LatticeMap) -> int | None:
    """Smallest n <= 12 with g^n = id, or None."""
    p = g
    for n in range(1, ORDER_SEARCH_BOUND + 1):
        if p.is_identity():
            return n
        p = p @ g
    return None


def _minus_id(g: LatticeMap):
    return tuple(
        tuple(g.rows[i][j] - (1 if i == j else 0) for j in range(3)) for i in range(3)
    )


def _nilpotent_rank(n_rows) -> int:
    """Rank of a 3x3 nilpotent integer matrix (0, 1 or 2)."""
    if all(x == 0 for row in n_rows for x in row):
        return 0
    for i in range(3):
        for j in range(i + 1, 3):
            if any(cross(n_rows[i], n_rows[j])):
                return 2
    return 1


def unipotent_frame(g: LatticeMap):
    """Jordan frame (w, w1, w2) of a full unipotent block, or UnipotentDeficient.

    w2 is the first standard basis vector with (g-id)^2 w2 != 0, w1 = (g-id)w2,
    w = (g-id)w1. The deficient (rank-1) block cannot arise from a geometric
    action; it is returned as a verdict, not raised.
    """
    cp = char_poly(g)
    if cp.coefficients() != (1, -3, 3, -1):
        raise NotUnipotent(f"characteristic polynomial {cp} is not (t-1)^3")
    if g.is_identity():
        raise IsIdentity("the identity has no Jordan frame")
    n = _minus_id(g)

    def napply(v):
        return tuple(sum(n[i][j] * v[j] for j in range(3)) for i in range(3))

    for basis_index in range(3):
        e = tuple(1 if i == basis_index else 0 for i in range(3))
        w1 = napply(e)
        w = napply(w1)
        if any(w):
            assert not any(napply(w)), "nilpotency violated"
            return (w, w1, e)
    return UnipotentDeficient(rank_of_g_minus_id=_nilpotent_rank(n))


def _eigenvector_1(g: LatticeMap) -> tuple[int, int, int]:
    """Primitive integer eigenvector for eigenvalue 1 (assumes eigenspace dim 1)."""
    n = _minus_id(g)
    for i in range(3):
        for j in range(i + 1, 3):
            c = cross(n[i], n[j])
            if any(c):
                return primitive_part(c).vector
    raise ArithmeticError("eigenspace for 1 is not one-dimensional")


def _eigenvector_surd(g: LatticeMap, lam: QuadSurd) -> tuple:
    """Projective kernel vector of (g - lam*id) over the quadratic field."""
    rows = [
        tuple(QuadSurd(g.rows[i][j]) - (lam if i == j else QuadSurd(0)) for j in range(3))
        for i in range(3)
    ]
    for i in range(3):
        for j in range(i + 1, 3):
            c = cross(rows[i], rows[j])
            if any(c):
                return projective_normalize(c)
    raise ArithmeticError(f"eigenspace for {lam} is not one-dimensional")


def finite_eigenvalue_tag(g: LatticeMap) -> str:
    """Tag of the non-unit conjugate eigenvalue pair of a finite-order map that
    fixes a vector; validated against the computed order."""
    n = finite_order(g)
    if n is None or n < 2:
        raise NotFiniteOrder(f"order {n} outside [2, 12]")
    cp = char_poly(g)
    if g.det != 1 or cp(1) != 0:
        raise NotFiniteOrder("needs determinant 1 and a fixed vector")
    s = g.trace - 1
    tag = LAMBDA_TAGS.get(s)
    if tag is None:
        raise InconsistentTag(f"quadratic trace {s} outside the finite range")
    if _TAG_ORDERS[s] != n:
        raise InconsistentTag(f"order {n} does not match eigenvalue pair {tag}")
    return tag


def classify(g: LatticeMap, L: LinearForm | None = None) -> ElementClass:
    """Trichotomy verdict with exact eigen-data.

    When L is given it must be preserved (L∘g = L) and nonzero, which forces the
    eigenvalue 1. With L = None the same spectral split is computed from the
    characteristic polynomial alone (used by the randomized oracle tests).
    """
    if L is not None:
        if L.is_zero():
            raise DoesNotPreserveL("the zero covector is not admitted")
        if L.compose(g) != L:
            raise DoesNotPreserveL(f"{g!r} does not fix {L}")

    if g.is_identity():
        return Identity()

    if g.det == -1:
        n = finite_order(g)
        if n is not None:
            return FiniteOrder(n, "real-pair")
        return OutOfTheory("determinant -1 element of infinite order")

    cp = char_poly(g)
    if cp(1) != 0:
        # A finite-order det-1 map always has eigenvalue 1, so this is infinite order.
        return OutOfTheory("no eigenvalue 1 (infinite order, cubic eigenvalue field)")

    s = g.trace - 1  # char poly = (t - 1)(t^2 - s*t + 1)

    if s * s > 4:
        alpha, beta = solve_unit_quadratic(s)
        u = _eigenvector_surd(g, beta)
        v = _eigenvector_surd(g, alpha)
        w = _eigenvector_1(g)
        inv_alpha = alpha.inverse()
        assert g.apply(u) == tuple(x * inv_alpha for x in u)
        assert g.apply(v) == tuple(x * alpha for x in v)
        assert g.apply(w) == w
        assert alpha * beta == 1 and alpha + beta == s
        return Hyperbolic(s=s, alpha=alpha, u=u, v=v, w=w)

    if s == 2:
        frame = unipotent_frame(g)
        if isinstance(frame, UnipotentDeficient):
            return frame
        w, w1, w2 = frame
        return UnipotentFull(w=w, w1=w1, w2=w2)

    n = finite_order(g)
    if n is None:
        # s = -2 with a Jordan block at -1: quasi-unipotent, outside the theory.
        return OutOfTheory("infinite order with eigenvalue -1 Jordan block")
    return FiniteOrder(n, finite_eigenvalue_tag(g))


def is_finite_class(c: ElementClass) -> bool:
    return isinstance(c, (Identity, FiniteOrder))
