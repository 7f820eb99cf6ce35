import random
from fractions import Fraction

import pytest

from conftest import GOLDEN_ALPHA
from cy3.core_arith import QuadSurd
from cy3.element_classify import (
    FiniteOrder,
    Hyperbolic,
    Identity,
    ORDER_SEARCH_BOUND,
    OutOfTheory,
    UnipotentDeficient,
    UnipotentFull,
    char_poly,
    classify,
    finite_eigenvalue_tag,
    finite_order,
    is_finite_class,
    unipotent_frame,
)
from cy3.errors import (
    DoesNotPreserveL,
    InconsistentTag,
    IsIdentity,
    NotFiniteOrder,
    NotUnipotent,
)
from cy3.lattice_forms import LatticeMap, LinearForm
from test_lattice_forms import random_unimodular


class TestCharPoly:
    def test_identity(self):
        assert char_poly(LatticeMap.identity()).coefficients() == (1, -3, 3, -1)

    def test_golden(self, golden_generator):
        cp = char_poly(golden_generator)
        # (t - 1)(t^2 - 3t + 1) = t^3 - 4t^2 + 4t - 1
        assert cp.coefficients() == (1, -4, 4, -1)
        assert cp(1) == 0

    def test_char_poly_matches_eigen_product(self):
        rng = random.Random(33)
        for _ in range(100):
            g = random_unimodular(rng)
            cp = char_poly(g)
            # Cayley-Hamilton on integer matrices: g^3 - tr*g^2 + m*g - det = 0
            _, c2, c1, c0 = cp.coefficients()
            g2, g3 = g @ g, g @ g @ g
            for i in range(3):
                for j in range(3):
                    val = (
                        g3.rows[i][j]
                        + c2 * g2.rows[i][j]
                        + c1 * g.rows[i][j]
                        + c0 * (1 if i == j else 0)
                    )
                    assert val == 0


class TestFiniteOrder:
    def test_rotation_order_4(self):
        g = LatticeMap([[0, -1, 0], [1, 0, 0], [0, 0, 1]])
        assert finite_order(g) == 4
        verdict = classify(g)
        assert verdict == FiniteOrder(4, "±i")

    def test_order_6(self):
        g = LatticeMap([[1, -1, 0], [1, 0, 0], [0, 0, 1]])
        assert classify(g) == FiniteOrder(6, "(1±i√3)/2")

    def test_order_3(self):
        g = LatticeMap([[0, -1, 0], [1, -1, 0], [0, 0, 1]])
        assert classify(g) == FiniteOrder(3, "(-1±i√3)/2")

    def test_order_2(self):
        g = LatticeMap([[-1, 0, 0], [0, -1, 0], [0, 0, 1]])
        assert classify(g) == FiniteOrder(2, "-1")

    def test_det_minus_one_involution(self):
        g = LatticeMap([[0, 1, 0], [1, 0, 0], [0, 0, 1]])
        assert classify(g) == FiniteOrder(2, "real-pair")

    def test_infinite_order_is_none(self, golden_generator):
        assert finite_order(golden_generator) is None

    def test_tag_requires_finite_order(self, golden_generator):
        with pytest.raises(NotFiniteOrder):
            finite_eigenvalue_tag(golden_generator)

    def test_tag_requires_det_one(self):
        g = LatticeMap([[0, 1, 0], [1, 0, 0], [0, 0, 1]])
        with pytest.raises(NotFiniteOrder):
            finite_eigenvalue_tag(g)


class TestHyperbolic:
    def test_golden_verdict(self, golden_generator, L_z):
        verdict = classify(golden_generator, L_z)
        assert isinstance(verdict, Hyperbolic)
        assert verdict.s == 3
        assert verdict.alpha == GOLDEN_ALPHA
        phi_minus = QuadSurd(Fraction(-1, 2), Fraction(-1, 2), 5)
        phi_plus = QuadSurd(Fraction(-1, 2), Fraction(1, 2), 5)
        assert verdict.u == (QuadSurd(1), phi_minus, QuadSurd(0))
        assert verdict.v == (QuadSurd(1), phi_plus, QuadSurd(0))
        assert verdict.w == (0, 0, 1)

    def test_eigen_equations(self, golden_generator, L_z):
        verdict = classify(golden_generator, L_z)
        g, alpha = golden_generator, verdict.alpha
        assert g.apply(verdict.v) == tuple(x * alpha for x in verdict.v)
        assert g.apply(verdict.u) == tuple(x * alpha.inverse() for x in verdict.u)
        assert g.apply(verdict.w) == verdict.w

    def test_inverse_swaps_expansion_lines(self, golden_generator, L_z):
        fwd = classify(golden_generator, L_z)
        bwd = classify(golden_generator.inverse(), L_z)
        assert bwd.alpha == fwd.alpha  # same alpha > 1
        assert bwd.u == fwd.v and bwd.v == fwd.u

    def test_power_scales_trace(self, golden_generator, L_z):
        sq = classify(golden_generator**2, L_z)
        assert isinstance(sq, Hyperbolic)
        assert sq.alpha == GOLDEN_ALPHA**2
        assert sq.s == 7


class TestUnipotent:
    def test_frame(self, unipotent_generator):
        w, w1, w2 = unipotent_frame(unipotent_generator)
        assert w2 == (1, 0, 0) or w2 == (0, 0, 1)
        # for this generator only e3 survives two applications of (g - id)
        assert (w, w1, w2) == ((1, 0, 0), (0, 1, 0), (0, 0, 1))

    def test_classify_full(self, unipotent_generator, L_z):
        verdict = classify(unipotent_generator, L_z)
        assert verdict == UnipotentFull(w=(1, 0, 0), w1=(0, 1, 0), w2=(0, 0, 1))

    def test_deficient(self, L_z):
        g = LatticeMap([[1, 0, 1], [0, 1, 0], [0, 0, 1]])
        assert classify(g, L_z) == UnipotentDeficient(rank_of_g_minus_id=1)

    def test_identity_raises(self):
        with pytest.raises(IsIdentity):
            unipotent_frame(LatticeMap.identity())

    def test_not_unipotent_raises(self, golden_generator):
        with pytest.raises(NotUnipotent):
            unipotent_frame(golden_generator)

    def test_frame_conjugation_covariance(self, unipotent_generator):
        rng = random.Random(88)
        for _ in range(20):
            p = random_unimodular(rng, steps=4)
            h = p @ unipotent_generator @ p.inverse()
            frame = unipotent_frame(h)
            if isinstance(frame, UnipotentDeficient):
                pytest.fail("conjugate of a full block stayed full")
            w, w1, w2 = frame
            n = lambda v: tuple(
                sum((h.rows[i][j] - (1 if i == j else 0)) * v[j] for j in range(3))
                for i in range(3)
            )
            assert n(w2) == w1 and n(w1) == w and n(w) == (0, 0, 0)


class TestGuards:
    def test_zero_covector_rejected(self, golden_generator):
        with pytest.raises(DoesNotPreserveL):
            classify(golden_generator, LinearForm(0, 0, 0))

    def test_non_preserving_rejected(self, golden_generator):
        with pytest.raises(DoesNotPreserveL):
            classify(golden_generator, LinearForm(1, 0, 0))

    def test_out_of_theory_minus_two_block(self, L_z):
        g = LatticeMap([[-1, 1, 0], [0, -1, 0], [0, 0, 1]])
        verdict = classify(g, L_z)
        assert isinstance(verdict, OutOfTheory)


def _order_oracle(g, bound=2 * ORDER_SEARCH_BOUND):
    """Independent finiteness oracle: raw power iteration on tuples of tuples."""
    ident = ((1, 0, 0), (0, 1, 0), (0, 0, 1))
    rows = ident
    for n in range(1, bound + 1):
        rows = tuple(
            tuple(sum(rows[i][k] * g.rows[k][j] for k in range(3)) for j in range(3))
            for i in range(3)
        )
        if rows == ident:
            return n
        # entries of an infinite-order unimodular map grow or cycle; a large
        # entry certifies infinite order well before the bound
        if max(abs(x) for r in rows for x in r) > 10**6:
            return None
    return None


def test_finite_infinite_split_against_oracle():
    """500 seeded unimodular words: classify's finite/infinite split must agree
    with an independent power-iteration oracle."""
    rng = random.Random(424242)
    finite_seen = infinite_seen = 0
    for _ in range(500):
        g = random_unimodular(rng, steps=rng.randint(1, 6))
        if rng.random() < 0.3:
            flip = LatticeMap([[0, 1, 0], [1, 0, 0], [0, 0, 1]])
            g = g @ flip  # mix in det -1
        oracle_order = _order_oracle(g)
        verdict = classify(g)
        if oracle_order is None:
            assert not is_finite_class(verdict)
            infinite_seen += 1
        else:
            assert is_finite_class(verdict)
            if isinstance(verdict, FiniteOrder):
                assert verdict.n == oracle_order
            else:
                assert oracle_order == 1
            finite_seen += 1
    assert finite_seen > 10 and infinite_seen > 10
