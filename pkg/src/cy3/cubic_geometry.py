"""Intersection-relation checks and factorization certificates for the cubic.

A hyperbolic frame (u, v, w) splits the cubic as z(A z^2 + 6 B x y) in frame
coordinates; a full unipotent frame (w, w1, w2) splits it as
z(F z^2 + 2 E x z - E y^2 + E y z). Both certificates carry the frame so the
split can be re-expanded and compared against the original coefficients.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from itertools import combinations_with_replacement, product
from typing import Sequence

from .core_arith import QuadSurd
from .errors import (
    GeometricInconsistency,
    NotOnQuadric,
    RelationsNotVerified,
    SingularPoint,
)
from .lattice_forms import (
    ENTRY_KEYS,
    LinearForm,
    TrilinearForm,
    _as_surd,
    projective_normalize,
    trilinear_eval,
)

HODGE_INDEX = "Hodge index theorem (triple product u·v·w must be nonzero)"
LEFSCHETZ = "Lefschetz hyperplane theorem (w·w2^2 must be nonzero)"
FULL_JORDAN = (
    "full Jordan block requirement (rank(g - id) = 2 for geometric unipotent actions)"
)


@dataclass(frozen=True)
class RelationRow:
    name: str
    left: QuadSurd
    right: QuadSurd
    holds: bool


@dataclass(frozen=True)
class RelationReport:
    rows: tuple[RelationRow, ...]
    overall: bool

    @classmethod
    def from_rows(cls, rows) -> "RelationReport":
        rows = tuple(rows)
        return cls(rows=rows, overall=all(r.holds for r in rows))


def _eq_row(name: str, left, right=QuadSurd(0)) -> RelationRow:
    left = _as_surd(left)
    right = _as_surd(right)
    return RelationRow(name, left, right, left == right)


def _neq_row(name: str, left, right=QuadSurd(0)) -> RelationRow:
    left = _as_surd(left)
    right = _as_surd(right)
    return RelationRow(name, left, right, left != right)


class QuadraticForm:
    """Symmetric 3x3 matrix of exact scalars."""

    __slots__ = ("m",)

    def __init__(self, m: Sequence[Sequence]):
        m = tuple(tuple(_as_surd(x) for x in row) for row in m)
        if len(m) != 3 or any(len(r) != 3 for r in m):
            raise ValueError("expected a 3x3 matrix")
        for i in range(3):
            for j in range(i + 1, 3):
                if m[i][j] != m[j][i]:
                    raise ValueError("matrix is not symmetric")
        self.m = m

    def eval(self, v: Sequence) -> QuadSurd:
        v = tuple(_as_surd(x) for x in v)
        total = QuadSurd(0)
        for i, j in product(range(3), repeat=2):
            if self.m[i][j]:
                total = total + self.m[i][j] * v[i] * v[j]
        return total

    def gradient(self, v: Sequence) -> tuple:
        v = tuple(_as_surd(x) for x in v)
        return tuple(
            sum((self.m[i][j] * v[j] * 2 for j in range(3)), start=QuadSurd(0))
            for i in range(3)
        )

    def det(self) -> QuadSurd:
        m = self.m
        return (
            m[0][0] * (m[1][1] * m[2][2] - m[1][2] * m[2][1])
            - m[0][1] * (m[1][0] * m[2][2] - m[1][2] * m[2][0])
            + m[0][2] * (m[1][0] * m[2][1] - m[1][1] * m[2][0])
        )

    def __eq__(self, other):
        if not isinstance(other, QuadraticForm):
            return NotImplemented
        return self.m == other.m

    def __repr__(self):
        return f"QuadraticForm({[[str(x) for x in row] for row in self.m]})"


@dataclass(frozen=True)
class ThreeLines:
    """C = L1 * L2 * L in frame coordinates (x, y, z) = (u, v, w)-coordinates:
    L2 = x, L1 = 6B y, L = z."""

    cubic: TrilinearForm
    frame: tuple  # columns (u, v, w)
    b: QuadSurd  # B = T(u, v, w)
    l1: tuple  # covectors in frame coordinates
    l2: tuple
    l: tuple


@dataclass(frozen=True)
class QuadricLine:
    """C = Q * L in frame coordinates; tangency points listed in standard
    coordinates. `tangent` marks the unipotent single-tangency split."""

    cubic: TrilinearForm
    frame: tuple
    quadric: QuadraticForm  # in frame coordinates
    a: QuadSurd  # A = T(w, w, w); for the unipotent split this holds F
    b: QuadSurd  # B = T(u, v, w); for the unipotent split this holds E
    tangency_points: tuple
    tangent: bool = False


@dataclass(frozen=True)
class UnipotentSplit:
    """Result of the unipotent factorization: C = z(Fz^2 + 2Exz - Ey^2 + Eyz)."""

    cubic: TrilinearForm
    frame: tuple  # (w, w1, w2) integer vectors
    e: Fraction
    f: Fraction
    quadric: QuadraticForm
    linear_in_frame: tuple  # the covector z


Factorization = ThreeLines | QuadricLine | UnipotentSplit


def check_hyperbolic_relations(
    T: TrilinearForm, L: LinearForm, u: Sequence, v: Sequence, w: Sequence
) -> RelationReport:
    """The eight vanishing triple products of a hyperbolic frame plus
    L(u) = L(v) = 0, all exact."""
    tv = lambda a, b, c: trilinear_eval(T, a, b, c)
    rows = [
        _eq_row("u^3", tv(u, u, u)),
        _eq_row("v^3", tv(v, v, v)),
        _eq_row("u^2·v", tv(u, u, v)),
        _eq_row("u·v^2", tv(u, v, v)),
        _eq_row("u^2·w", tv(u, u, w)),
        _eq_row("u·w^2", tv(u, w, w)),
        _eq_row("v^2·w", tv(v, v, w)),
        _eq_row("v·w^2", tv(v, w, w)),
        _eq_row("L(u)", L(u)),
        _eq_row("L(v)", L(v)),
    ]
    return RelationReport.from_rows(rows)


def hyperbolic_factorization(
    T: TrilinearForm,
    u: Sequence,
    v: Sequence,
    w: Sequence,
    *,
    relation_report: RelationReport | None = None,
) -> Factorization:
    """Split C as three planes (A = 0) or quadric-plus-plane (A != 0).

    A = T(w,w,w), B = T(u,v,w). B = 0 contradicts the Hodge index theorem for
    genuine geometric inputs and raises GeometricInconsistency.
    """
    if relation_report is not None and not relation_report.overall:
        failing = [r.name for r in relation_report.rows if not r.holds]
        raise RelationsNotVerified(f"failing relations: {failing}")
    a = trilinear_eval(T, w, w, w)
    b = trilinear_eval(T, u, v, w)
    if not b:
        raise GeometricInconsistency(HODGE_INDEX, "B = T(u, v, w) = 0")
    frame = (tuple(_as_surd(x) for x in u), tuple(_as_surd(x) for x in v),
             tuple(_as_surd(x) for x in w))
    if not a:
        six_b = b * 6
        return ThreeLines(
            cubic=T,
            frame=frame,
            b=b,
            l1=(QuadSurd(0), six_b, QuadSurd(0)),
            l2=(QuadSurd(1), QuadSurd(0), QuadSurd(0)),
            l=(QuadSurd(0), QuadSurd(0), QuadSurd(1)),
        )
    three_b = b * 3
    q = QuadraticForm(
        (
            (QuadSurd(0), three_b, QuadSurd(0)),
            (three_b, QuadSurd(0), QuadSurd(0)),
            (QuadSurd(0), QuadSurd(0), a),
        )
    )
    return QuadricLine(
        cubic=T, frame=frame, quadric=q, a=a, b=b,
        tangency_points=(frame[0], frame[1]), tangent=False,
    )


def quadric_signature(Q: QuadraticForm) -> tuple[int, int, int]:
    """Sylvester inertia (positive, negative, zero) via exact symmetric
    congruence reduction."""
    m = [list(row) for row in Q.m]

    def swap(i, j):
        m[i], m[j] = m[j], m[i]
        for row in m:
            row[i], row[j] = row[j], row[i]

    def add_into(i, j, factor):
        # row_i += factor * row_j, then the same on columns
        m[i] = [m[i][k] + m[j][k] * factor for k in range(3)]
        for row in m:
            row[i] = row[i] + row[j] * factor

    for i in range(3):
        if not m[i][i]:
            pivot_row = next((j for j in range(i + 1, 3) if m[j][j]), None)
            if pivot_row is not None:
                swap(i, pivot_row)
            else:
                off = next((j for j in range(i + 1, 3) if m[i][j]), None)
                if off is None:
                    continue
                add_into(i, off, QuadSurd(1))
        pivot = m[i][i]
        for j in range(i + 1, 3):
            if m[i][j]:
                add_into(j, i, -(m[i][j] / pivot))
    signs = [m[i][i].sign() for i in range(3)]
    return (signs.count(1), signs.count(-1), signs.count(0))


def tangent_plane(Q: QuadraticForm, pt: Sequence) -> tuple:
    """Projective gradient covector of Q at a smooth point of the quadric."""
    if Q.eval(pt) != 0:
        raise NotOnQuadric(f"Q({[str(_as_surd(x)) for x in pt]}) != 0")
    grad = Q.gradient(pt)
    if not any(grad):
        raise SingularPoint("vanishing gradient")
    return projective_normalize(grad)


def check_unipotent_relations(
    T: TrilinearForm, L: LinearForm, w: Sequence, w1: Sequence, w2: Sequence
) -> RelationReport:
    """Vanishing and chain relations of a full unipotent frame.

    The cycle identity "w^2 = 0" lives in codimension 2; its lattice shadow is
    T(w, w, x) = 0 for every basis vector x, which is the only consequence the
    certification needs.
    """
    tv = lambda a, b, c: trilinear_eval(T, a, b, c)
    basis = ((1, 0, 0), (0, 1, 0), (0, 0, 1))
    ww22 = tv(w, w2, w2)
    w1w22 = tv(w1, w2, w2)
    w12w2 = tv(w1, w1, w2)
    rows = [
        _eq_row("L(w)", L(w)),
        _eq_row("L(w1)", L(w1)),
        *[_eq_row(f"w^2·e{i + 1}", tv(w, w, basis[i])) for i in range(3)],
        _eq_row("w1^3", tv(w1, w1, w1)),
        _eq_row("w·w1^2", tv(w, w1, w1)),
        _eq_row("w·w1·w2", tv(w, w1, w2)),
        _eq_row("w·w2^2 = 2·w1·w2^2", ww22, w1w22 * 2),
        _eq_row("w·w2^2 = -2·w1^2·w2", ww22, w12w2 * (-2)),
        _neq_row("w·w2^2 ≠ 0", ww22),
    ]
    return RelationReport.from_rows(rows)


def unipotent_factorization(
    T: TrilinearForm,
    w: Sequence,
    w1: Sequence,
    w2: Sequence,
    *,
    relation_report: RelationReport | None = None,
) -> UnipotentSplit:
    """E = 3 T(w,w2,w2)/2, F = T(w2,w2,w2); E = 0 contradicts the Lefschetz
    hyperplane theorem and raises GeometricInconsistency."""
    e_surd = trilinear_eval(T, w, w2, w2) * Fraction(3, 2)
    if not e_surd:
        raise GeometricInconsistency(LEFSCHETZ, "E = 3·T(w, w2, w2)/2 = 0")
    if relation_report is not None and not relation_report.overall:
        failing = [r.name for r in relation_report.rows if not r.holds]
        raise RelationsNotVerified(f"failing relations: {failing}")
    f_surd = trilinear_eval(T, w2, w2, w2)
    e = e_surd.to_fraction()
    f = f_surd.to_fraction()
    q = QuadraticForm(
        (
            (Fraction(0), Fraction(0), e),
            (Fraction(0), -e, e / 2),
            (e, e / 2, f),
        )
    )
    # L in frame coordinates is z; it must be tangent to Q at w = (1, 0, 0).
    plane = tangent_plane(q, (1, 0, 0))
    assert plane == (QuadSurd(0), QuadSurd(0), QuadSurd(1))
    frame = (tuple(int(x) for x in w), tuple(int(x) for x in w1),
             tuple(int(x) for x in w2))
    return UnipotentSplit(
        cubic=T, frame=frame, e=e, f=f, quadric=q,
        linear_in_frame=(QuadSurd(0), QuadSurd(0), QuadSurd(1)),
    )


# -- reconstruction and singular loci -----------------------------------------


def _frame_entries(fact: Factorization) -> dict[tuple[int, int, int], QuadSurd]:
    """Trilinear entries of the split cubic in frame coordinates."""
    zero = QuadSurd(0)
    entries = {key: zero for key in ENTRY_KEYS}
    if isinstance(fact, ThreeLines):
        entries[(1, 2, 3)] = fact.b  # C = 6Bxyz
    elif isinstance(fact, QuadricLine):
        entries[(1, 2, 3)] = fact.b  # C = z(Az^2 + 6Bxy)
        entries[(3, 3, 3)] = fact.a
    else:
        e, f = QuadSurd(fact.e), QuadSurd(fact.f)
        third = QuadSurd(Fraction(1, 3))
        entries[(3, 3, 3)] = f  # C = z(Fz^2 + 2Exz - Ey^2 + Eyz)
        entries[(1, 3, 3)] = e * third * 2
        entries[(2, 2, 3)] = -(e * third)
        entries[(2, 3, 3)] = e * third
    return entries


def _surd_matrix_inverse(cols) -> tuple:
    """Inverse of the 3x3 matrix whose columns are the given surd vectors."""
    m = tuple(tuple(_as_surd(cols[j][i]) for j in range(3)) for i in range(3))
    det = (
        m[0][0] * (m[1][1] * m[2][2] - m[1][2] * m[2][1])
        - m[0][1] * (m[1][0] * m[2][2] - m[1][2] * m[2][0])
        + m[0][2] * (m[1][0] * m[2][1] - m[1][1] * m[2][0])
    )
    if not det:
        raise ArithmeticError("frame is degenerate")
    inv_det = det.inverse()
    cof = [[None] * 3 for _ in range(3)]
    for i in range(3):
        for j in range(3):
            r = [k for k in range(3) if k != i]
            c = [k for k in range(3) if k != j]
            minor = m[r[0]][c[0]] * m[r[1]][c[1]] - m[r[0]][c[1]] * m[r[1]][c[0]]
            sign = 1 if (i + j) % 2 == 0 else -1
            cof[j][i] = minor * sign * inv_det  # adjugate transpose
    return tuple(tuple(row) for row in cof)


def reconstructed_entries(fact: Factorization) -> dict[tuple[int, int, int], QuadSurd]:
    """Expand the factorization in frame coordinates and change basis back to
    the standard one: the result must match the original trilinear entries."""
    frame_t = _frame_entries(fact)
    minv = _surd_matrix_inverse(fact.frame)
    # columns of minv are the frame coordinates of the standard basis vectors
    coords = [tuple(minv[i][j] for i in range(3)) for j in range(3)]

    def t_frame(p, q, r):
        return frame_t[tuple(sorted((p, q, r)))]

    out = {}
    for i, j, k in combinations_with_replacement((1, 2, 3), 3):
        total = QuadSurd(0)
        for p, q, r in product(range(3), repeat=3):
            t = t_frame(p + 1, q + 1, r + 1)
            if t:
                total = total + t * coords[i - 1][p] * coords[j - 1][q] * coords[k - 1][r]
        out[(i, j, k)] = total
    return out


def reconstruction_matches(fact: Factorization) -> bool:
    """True iff re-expanding the factors reproduces all 10 original entries."""
    rebuilt = reconstructed_entries(fact)
    original = fact.cubic.entries()
    return all(rebuilt[key] == QuadSurd(original[key]) for key in ENTRY_KEYS)


def singular_locus(fact: Factorization) -> list[tuple]:
    """Projective singular lines of the split cubic, in standard coordinates.

    Every returned line is post-checked to annihilate the exact gradient of C."""
    if isinstance(fact, ThreeLines):
        lines = [fact.frame[0], fact.frame[1], fact.frame[2]]
    elif isinstance(fact, QuadricLine):
        # Q = Az^2 + 6Bxy restricted to z = 0 cuts the two frame axes.
        lines = [fact.frame[0], fact.frame[1]]
    else:
        # z = 0 forces -E y^2 = 0, leaving only the tangency line.
        w = tuple(QuadSurd(x) for x in fact.frame[0])
        lines = [w]
    basis = ((1, 0, 0), (0, 1, 0), (0, 0, 1))
    out = []
    for line in lines:
        pt = projective_normalize(line)
        for e in basis:
            grad_component = trilinear_eval(fact.cubic, pt, pt, e)
            if grad_component:
                raise ArithmeticError(
                    f"gradient does not vanish on claimed singular line {pt}"
                )
        out.append(pt)
    return out
