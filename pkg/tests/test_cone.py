from dataclasses import replace
from fractions import Fraction

import pytest

from src.cartan import fundamental_weights, rho
from src.cone import (
    BudgetExhaustedError, FaceVerdict, NotCoefficientOneError, NotFiniteTypeError, NotOnFaceError,
    WeightTriple, build_face, classify_boundary, enumerate_inequalities, equality_rank_on_E,
    eval_inequality, face_dimension, face_equalities, irredundancy_certificate, lattice_condition,
    restcisom_hypothesis_check, space_E_basis, verify_irredundancy_certificate,
)
from src.weyl import ParabolicType


def triple(R, a, b, c):
    return WeightTriple(R.weight(a), R.weight(b), R.weight(c))


@pytest.fixture
def a1_face(a1, W_a1):
    s = W_a1.simple(0)
    return build_face(a1, ParabolicType.borel(1), s, W_a1.identity(), s)


class TestWeightTriple:
    def test_flat_roundtrip(self, affine_a1):
        t = triple(affine_a1, [1, 0], [0, 1], [1, 1])
        assert WeightTriple.from_flat(affine_a1, t.flatten()) == t

    def test_w_invariant_component(self, affine_a1):
        zero = affine_a1.zero_weight()
        lam = fundamental_weights(affine_a1)[0]
        assert WeightTriple(lam, zero, lam).has_w_invariant_weight
        assert not WeightTriple(lam, lam, lam + lam).has_w_invariant_weight


class TestSpaceE:
    def test_dimension(self, a2, affine_a1):
        assert space_E_basis(a2).dimension == 6
        assert space_E_basis(affine_a1).dimension == 8

    def test_membership(self, affine_a1):
        E = space_E_basis(affine_a1)
        lam = fundamental_weights(affine_a1)[0]
        zero = affine_a1.zero_weight()
        assert E.contains(WeightTriple(lam, zero, lam))
        assert not E.contains(WeightTriple(lam, zero, zero))


class TestEnumeration:
    def test_sl2_system(self, a1):
        system = enumerate_inequalities(a1, 4)
        assert system.complete
        assert [(I.w1.word, I.w2.word, I.v.word) for I in system] == [
            ((), (), ()), ((), (0,), (0,)), ((0,), (), (0,))]
        assert system.inequalities[0].linear_form() == (
            Fraction(1, 2), Fraction(1, 2), Fraction(-1, 2))

    def test_a2_system(self, a2):
        system = enumerate_inequalities(a2, 4)
        assert system.complete
        assert len(system) == 12
        assert all(I.coefficient == 1 for I in system)
        assert [I.sort_key() for I in system] == sorted(I.sort_key() for I in system)

    def test_short_bound_is_incomplete(self, a2):
        system = enumerate_inequalities(a2, 1)
        assert not system.complete
        assert system.to_dict()["complete_up_to_length"] == 1

    def test_affine_never_complete(self, affine_a1):
        system = enumerate_inequalities(affine_a1, 2)
        assert not system.complete
        assert len(system) > 0

    def test_members_satisfy_all(self, a2):
        system = enumerate_inequalities(a2, 4)
        r = rho(a2)
        for t in (WeightTriple(r, r, r), WeightTriple(r, r, r + r)):
            assert all(eval_inequality(I, t) >= 0 for I in system)

    def test_eval_value(self, a1):
        system = enumerate_inequalities(a1, 4)
        assert eval_inequality(system.inequalities[0], triple(a1, [1], [1], [3])) == Fraction(-1, 2)


class TestLatticeCondition:
    def test_sl2_parity(self, a1):
        assert lattice_condition(a1, triple(a1, [1], [1], [0]))
        assert not lattice_condition(a1, triple(a1, [1], [1], [1]))

    def test_affine_obstruction(self, affine_a1):
        assert not lattice_condition(affine_a1, triple(affine_a1, [1, 0], [0, 0], [0, 0]))
        assert lattice_condition(affine_a1, triple(affine_a1, [1, 1], [1, 1], [2, 2, -1]))


class TestFaces:
    def test_not_coefficient_one(self, a2, W_a2):
        with pytest.raises(NotCoefficientOneError):
            build_face(a2, ParabolicType.borel(2), W_a2.simple(0), W_a2.simple(1), W_a2.element((0, 1)))

    def test_a1_face(self, a1_face, a1):
        assert a1_face.expected_dimension == 2
        assert equality_rank_on_E(a1_face) == 1
        assert face_equalities(a1_face, triple(a1, [1], [0], [1])) == [0]
        report = face_dimension(a1_face)
        assert report.verdict is FaceVerdict.PASS
        assert report.rank_found == 2
        assert [t.to_json() for t in report.witnesses] == [[[1], [0], [1]], [[1], [1], [0]]]

    def test_budget_exhausted(self, a1_face):
        report = face_dimension(a1_face, max_candidates=1)
        assert report.verdict is FaceVerdict.INCONCLUSIVE
        assert report.reason == "budget_exhausted"
        assert report.candidates_checked == 1
        with pytest.raises(BudgetExhaustedError):
            face_dimension(a1_face, max_candidates=1, strict=True)

    def test_rank_above_d_fails(self, a1_face, a1):
        # 零等式不切出任何东西，面上可实现点张成整个 E
        flat = replace(a1_face, forms={0: (0, 0, 0)})
        assert equality_rank_on_E(flat) == 0
        report = face_dimension(flat)
        assert report.verdict is FaceVerdict.FAIL
        assert report.reason == "rank_exceeds_d"
        assert report.rank_found == 3 > report.d_expected == 2

    def test_boundary_classes(self, a1_face):
        classes = [(b.alpha, b.index, b.klass) for b in classify_boundary(a1_face)]
        assert classes == [(0, 2, "D1"), (0, 3, "D2")]

    def test_restriction_degrees(self, a1_face, a1):
        result = restcisom_hypothesis_check(a1_face, triple(a1, [1], [0], [1]))
        assert [(d["set"], d["degree"]) for d in result["degrees"]] == [
            ("delta_plus_w2", 0), ("delta_minus_v", 1)]
        assert result["all_nonnegative"]

    def test_restriction_off_face(self, a1_face, a1):
        with pytest.raises(NotOnFaceError):
            restcisom_hypothesis_check(a1_face, triple(a1, [1], [1], [1]))

    @pytest.mark.slow
    def test_a2_maximal_face(self, a2, W_a2):
        P = ParabolicType.maximal(2, 0)
        F = build_face(a2, P, W_a2.identity(), W_a2.simple(0), W_a2.simple(0))
        assert F.expected_dimension == 5
        report = face_dimension(F)
        assert report.verdict is FaceVerdict.PASS
        assert report.rank_found == 5


class TestIrredundancy:
    def test_sl2_all_facets(self, a1):
        system = enumerate_inequalities(a1, 4)
        for I in system:
            cert = irredundancy_certificate(I, system.inequalities, a1)
            assert cert.irredundant
            assert cert.verified
            assert cert.objective == Fraction(-1, 2)

    def test_duplicate_counts_the_same_either_way(self, a2):
        system = enumerate_inequalities(a2, 3)
        last = system.inequalities[-1]
        base = irredundancy_certificate(last, system.inequalities, a2)
        twice = irredundancy_certificate(last, system.inequalities + [last], a2)
        copy = irredundancy_certificate(last, system.inequalities + [replace(last)], a2)
        assert base.irredundant
        assert base.verified
        for cert in (twice, copy):
            assert not cert.irredundant
            assert cert.objective == 0
            assert cert.verified
            assert all(x >= 0 for x in cert.residual)
        assert twice.multipliers == copy.multipliers

    def test_implied_inequality_is_redundant(self, a1, W_a1):
        _, first, second = enumerate_inequalities(a1, 4).inequalities
        # μ ≥ 0，两条三角不等式之和
        implied = replace(first, v=W_a1.identity(),
                          coweights=tuple(a + b for a, b in zip(first.coweights, second.coweights)))
        assert implied.linear_form() == (0, 0, 1)
        system = enumerate_inequalities(a1, 4).inequalities + [implied]
        cert = irredundancy_certificate(implied, system, a1)
        assert not cert.irredundant
        assert cert.objective == 0
        assert cert.verified
        assert all(u >= 0 for u in cert.multipliers.values())
        assert all(x >= 0 for x in cert.residual)

    def test_forged_certificate_rejected(self, a1):
        system = enumerate_inequalities(a1, 4)
        cert = irredundancy_certificate(system.inequalities[0], system.inequalities, a1)
        cert.point = triple(a1, [1], [0], [0])
        assert not verify_irredundancy_certificate(cert, system.inequalities)

    def test_affine_rejected(self, affine_a1):
        system = enumerate_inequalities(affine_a1, 1)
        with pytest.raises(NotFiniteTypeError):
            irredundancy_certificate(system.inequalities[0], system.inequalities, affine_a1)
