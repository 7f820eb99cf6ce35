import random
from fractions import Fraction

import pytest

from conftest import surd
from cy3.cubic_geometry import (
    FULL_JORDAN,
    HODGE_INDEX,
    LEFSCHETZ,
    QuadraticForm,
    QuadricLine,
    RelationReport,
    ThreeLines,
    UnipotentSplit,
    check_hyperbolic_relations,
    check_unipotent_relations,
    hyperbolic_factorization,
    quadric_signature,
    reconstruction_matches,
    singular_locus,
    tangent_plane,
    unipotent_factorization,
)
from cy3.element_classify import Hyperbolic, UnipotentFull, classify
from cy3.errors import (
    GeometricInconsistency,
    NotOnQuadric,
    RelationsNotVerified,
    SingularPoint,
)
from cy3.lattice_forms import (
    LatticeMap,
    TrilinearForm,
    projective_normalize,
    transform_cubic,
)
from test_lattice_forms import random_unimodular


@pytest.fixture
def golden_frame(golden_generator, L_z):
    verdict = classify(golden_generator, L_z)
    assert isinstance(verdict, Hyperbolic)
    return verdict.u, verdict.v, verdict.w


@pytest.fixture
def unipotent_frame_vectors(unipotent_generator, L_z):
    verdict = classify(unipotent_generator, L_z)
    assert isinstance(verdict, UnipotentFull)
    return verdict.w, verdict.w1, verdict.w2


class TestHyperbolicRelations:
    def test_golden_all_hold(self, golden_cubic, L_z, golden_frame):
        u, v, w = golden_frame
        rep = check_hyperbolic_relations(golden_cubic, L_z, u, v, w)
        assert rep.overall
        assert len(rep.rows) == 10
        assert {r.name for r in rep.rows} == {
            "u^3", "v^3", "u^2·v", "u·v^2", "u^2·w", "u·w^2",
            "v^2·w", "v·w^2", "L(u)", "L(v)",
        }

    def test_wrong_frame_fails(self, golden_cubic, L_z):
        rep = check_hyperbolic_relations(
            golden_cubic, L_z, (1, 0, 0), (0, 1, 0), (0, 0, 1)
        )
        assert not rep.overall
        failing = {r.name for r in rep.rows if not r.holds}
        assert "u^2·w" in failing

    def test_failed_report_blocks_factorization(self, golden_cubic, golden_frame, L_z):
        u, v, w = golden_frame
        bad = check_hyperbolic_relations(
            golden_cubic, L_z, (1, 0, 0), (0, 1, 0), (0, 0, 1)
        )
        with pytest.raises(RelationsNotVerified):
            hyperbolic_factorization(golden_cubic, u, v, w, relation_report=bad)


class TestHyperbolicFactorization:
    def test_three_lines(self, golden_cubic, golden_frame):
        u, v, w = golden_frame
        fact = hyperbolic_factorization(golden_cubic, u, v, w)
        assert isinstance(fact, ThreeLines)
        assert fact.b == surd(Fraction(5, 6))
        assert fact.l == (surd(0), surd(0), surd(1))
        assert reconstruction_matches(fact)

    def test_quadric_line(self, golden_cubic_quadric, golden_frame):
        u, v, w = golden_frame
        fact = hyperbolic_factorization(golden_cubic_quadric, u, v, w)
        assert isinstance(fact, QuadricLine)
        assert fact.a == 1
        assert fact.b == surd(Fraction(5, 6))
        assert fact.tangent is False
        assert fact.tangency_points == (fact.frame[0], fact.frame[1])
        assert quadric_signature(fact.quadric) == (2, 1, 0)
        assert reconstruction_matches(fact)

    def test_hodge_index_violation(self, golden_frame):
        u, v, w = golden_frame
        # x^2 z vanishes on T(u, v, w)? No: pick a cubic with T(u,v,w) = 0,
        # e.g. z^3 alone (all xy-mixing entries vanish).
        T = TrilinearForm.from_cubic_coefficients({"z3": 1})
        with pytest.raises(GeometricInconsistency) as exc:
            hyperbolic_factorization(T, u, v, w)
        assert exc.value.mechanism == HODGE_INDEX

    def test_tangency_points_on_quadric(self, golden_cubic_quadric, golden_frame):
        u, v, w = golden_frame
        fact = hyperbolic_factorization(golden_cubic_quadric, u, v, w)
        # in frame coordinates u, v are the first two axes
        assert fact.quadric.eval((1, 0, 0)) == 0
        assert fact.quadric.eval((0, 1, 0)) == 0
        assert tangent_plane(fact.quadric, (1, 0, 0)) == (surd(0), surd(1), surd(0))
        assert tangent_plane(fact.quadric, (0, 1, 0)) == (surd(1), surd(0), surd(0))


class TestSignature:
    def test_diagonal(self):
        q = QuadraticForm(((1, 0, 0), (0, -2, 0), (0, 0, 0)))
        assert quadric_signature(q) == (1, 1, 1)

    def test_hyperbolic_plane_block(self):
        q = QuadraticForm(((0, 1, 0), (1, 0, 0), (0, 0, 3)))
        assert quadric_signature(q) == (2, 1, 0)

    def test_surd_entries(self):
        s5 = surd(0, 1, 5)
        q = QuadraticForm(((s5, 0, 0), (0, -s5, 0), (0, 0, s5)))
        assert quadric_signature(q) == (2, 1, 0)

    def test_invariance_under_unimodular_congruence(self):
        """Sylvester's law: inertia is stable under 20 random congruences."""
        q = QuadraticForm(((0, 3, 0), (3, 0, 0), (0, 0, 7)))
        base = quadric_signature(q)
        rng = random.Random(314)
        for _ in range(20):
            p = random_unimodular(rng, steps=5).rows
            conj = [
                [
                    sum(
                        p[k][i] * q.m[k][l] * p[l][j]
                        for k in range(3)
                        for l in range(3)
                    )
                    for j in range(3)
                ]
                for i in range(3)
            ]
            assert quadric_signature(QuadraticForm(conj)) == base


class TestTangentPlane:
    def test_off_quadric_rejected(self):
        q = QuadraticForm(((1, 0, 0), (0, 1, 0), (0, 0, -1)))
        with pytest.raises(NotOnQuadric):
            tangent_plane(q, (1, 0, 0))

    def test_singular_point_rejected(self):
        q = QuadraticForm(((1, 0, 0), (0, 1, 0), (0, 0, 0)))
        with pytest.raises(SingularPoint):
            tangent_plane(q, (0, 0, 1))


class TestUnipotentRelations:
    def test_example_all_hold(self, unipotent_cubic, L_z, unipotent_frame_vectors):
        w, w1, w2 = unipotent_frame_vectors
        rep = check_unipotent_relations(unipotent_cubic, L_z, w, w1, w2)
        assert rep.overall
        assert any(r.name == "w·w2^2 ≠ 0" for r in rep.rows)

    def test_chain_values(self, unipotent_cubic, unipotent_frame_vectors):
        from cy3.lattice_forms import trilinear_eval

        w, w1, w2 = unipotent_frame_vectors
        assert trilinear_eval(unipotent_cubic, w, w2, w2) == 2
        assert trilinear_eval(unipotent_cubic, w1, w2, w2) == 1
        assert trilinear_eval(unipotent_cubic, w1, w1, w2) == -1

    def test_wrong_cubic_fails(self, golden_cubic, L_z, unipotent_frame_vectors):
        w, w1, w2 = unipotent_frame_vectors
        rep = check_unipotent_relations(golden_cubic, L_z, w, w1, w2)
        assert not rep.overall


class TestUnipotentFactorization:
    def test_example(self, unipotent_cubic, unipotent_frame_vectors):
        w, w1, w2 = unipotent_frame_vectors
        fact = unipotent_factorization(unipotent_cubic, w, w1, w2)
        assert isinstance(fact, UnipotentSplit)
        assert fact.e == 3
        assert fact.f == 1
        assert fact.linear_in_frame == (surd(0), surd(0), surd(1))
        assert reconstruction_matches(fact)

    def test_quadric_matrix(self, unipotent_cubic, unipotent_frame_vectors):
        w, w1, w2 = unipotent_frame_vectors
        fact = unipotent_factorization(unipotent_cubic, w, w1, w2)
        e, f = Fraction(3), Fraction(1)
        assert fact.quadric == QuadraticForm(
            ((0, 0, e), (0, -e, e / 2), (e, e / 2, f))
        )

    def test_lefschetz_violation_precedes_relation_gate(
        self, split_cubic, unipotent_frame_vectors
    ):
        """E = 0 is a geometric inconsistency even when the relation report
        fails: the deeper obstruction is reported first."""
        w, w1, w2 = unipotent_frame_vectors
        bad_report = RelationReport.from_rows([])  # trivially passing
        with pytest.raises(GeometricInconsistency) as exc:
            unipotent_factorization(split_cubic, w, w1, w2, relation_report=bad_report)
        assert exc.value.mechanism == LEFSCHETZ

    def test_failed_report_blocks_when_e_nonzero(
        self, unipotent_cubic, golden_cubic, L_z, unipotent_frame_vectors
    ):
        w, w1, w2 = unipotent_frame_vectors
        bad = check_unipotent_relations(golden_cubic, L_z, w, w1, w2)
        # golden cubic has T(w, w2, w2) = T(e1, e3, e3) = 0, so Lefschetz fires
        with pytest.raises(GeometricInconsistency):
            unipotent_factorization(golden_cubic, w, w1, w2, relation_report=bad)

    def test_tangency(self, unipotent_cubic, unipotent_frame_vectors):
        w, w1, w2 = unipotent_frame_vectors
        fact = unipotent_factorization(unipotent_cubic, w, w1, w2)
        # w = (1,0,0) in frame coordinates lies on Q and the tangent there is z
        assert fact.quadric.eval((1, 0, 0)) == 0
        assert tangent_plane(fact.quadric, (1, 0, 0)) == fact.linear_in_frame


class TestReconstructionAndSingularLocus:
    def test_three_lines_singular_lines(self, golden_cubic, golden_frame):
        u, v, w = golden_frame
        fact = hyperbolic_factorization(golden_cubic, u, v, w)
        lines = singular_locus(fact)
        assert len(lines) == 3
        expected = {projective_normalize(p) for p in (u, v, w)}
        assert set(lines) == expected

    def test_quadric_line_singular_lines(self, golden_cubic_quadric, golden_frame):
        u, v, w = golden_frame
        fact = hyperbolic_factorization(golden_cubic_quadric, u, v, w)
        lines = singular_locus(fact)
        assert set(lines) == {projective_normalize(u), projective_normalize(v)}

    def test_unipotent_singular_line(self, unipotent_cubic, unipotent_frame_vectors):
        w, w1, w2 = unipotent_frame_vectors
        fact = unipotent_factorization(unipotent_cubic, w, w1, w2)
        assert singular_locus(fact) == [projective_normalize(w)]

    def test_reconstruction_survives_base_change(
        self, unipotent_cubic, unipotent_generator, L_z
    ):
        """Conjugated inputs factor and reconstruct exactly."""
        rng = random.Random(77)
        for _ in range(10):
            p = random_unimodular(rng, steps=4)
            # transported pair: cubic pulled back by p, generator conjugated
            T2 = transform_cubic(unipotent_cubic, p)
            g2 = p.inverse() @ unipotent_generator @ p
            L2 = L_z.compose(p)
            verdict = classify(g2, L2)
            assert isinstance(verdict, UnipotentFull)
            rep = check_unipotent_relations(T2, L2, verdict.w, verdict.w1, verdict.w2)
            assert rep.overall
            fact = unipotent_factorization(
                T2, verdict.w, verdict.w1, verdict.w2, relation_report=rep
            )
            assert reconstruction_matches(fact)

    def test_hyperbolic_reconstruction_survives_base_change(
        self, golden_cubic_quadric, golden_generator, L_z
    ):
        rng = random.Random(78)
        for _ in range(10):
            p = random_unimodular(rng, steps=4)
            T2 = transform_cubic(golden_cubic_quadric, p)
            g2 = p.inverse() @ golden_generator @ p
            L2 = L_z.compose(p)
            verdict = classify(g2, L2)
            assert isinstance(verdict, Hyperbolic)
            rep = check_hyperbolic_relations(T2, L2, verdict.u, verdict.v, verdict.w)
            assert rep.overall
            fact = hyperbolic_factorization(
                T2, verdict.u, verdict.v, verdict.w, relation_report=rep
            )
            assert isinstance(fact, QuadricLine)
            # Q is only defined up to sign (rescaling the frame), so the
            # projective invariant is "nondegenerate indefinite": inertia {2, 1}
            sig = quadric_signature(fact.quadric)
            assert sorted(sig) == [0, 1, 2] and sig[2] == 0
            assert reconstruction_matches(fact)
