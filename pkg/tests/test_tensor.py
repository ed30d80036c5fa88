import pytest

from src.cartan import GCM, build_realization, fundamental_weights, rho
from src.tensor import (
    DepthTooSmallError, MembershipStatus, MultiplicityQuery, NotDominantError,
    UnsupportedTypeError, decompose_tensor_product, gamma_member, positive_roots_with_multiplicity,
    tensor_multiplicity, weight_multiplicities, weyl_dimension,
)


class TestWeightMultiplicities:
    def test_sl2_string(self, a1):
        table = weight_multiplicities(a1, a1.weight([3]))
        assert table.entries() == {(0,): 1, (1,): 1, (2,): 1, (3,): 1}

    def test_adjoint_zero_weight(self, a2):
        table = weight_multiplicities(a2, rho(a2))
        assert table.multiplicity(a2.zero_weight()) == 2
        assert table.multiplicity(a2.weight([3, 0])) == 0

    @pytest.mark.parametrize("name", ["a2", "b2", "g2"])
    def test_total_matches_weyl_dimension(self, name, request):
        R = request.getfixturevalue(name)
        for weight in fundamental_weights(R) + [rho(R)]:
            table = weight_multiplicities(R, weight)
            assert sum(table.entries().values()) == weyl_dimension(R, weight)

    def test_weyl_dimensions(self, a2, b2, g2):
        assert weyl_dimension(a2, rho(a2)) == 8
        assert weyl_dimension(b2, rho(b2)) == 16
        assert {weyl_dimension(g2, w) for w in fundamental_weights(g2)} == {7, 14}

    def test_affine_basic_module(self, affine_a1):
        table = weight_multiplicities(affine_a1, fundamental_weights(affine_a1)[0], 4)
        delta = affine_a1.root_weight([1, 1])
        lam = fundamental_weights(affine_a1)[0]
        assert [table.multiplicity(lam - delta.scale(n)) for n in range(3)] == [1, 1, 2]

    def test_affine_depth_window(self, affine_a1):
        table = weight_multiplicities(affine_a1, fundamental_weights(affine_a1)[0], 2)
        with pytest.raises(DepthTooSmallError):
            table.multiplicity(fundamental_weights(affine_a1)[0] - affine_a1.root_weight([2, 2]))

    def test_not_dominant(self, a2):
        with pytest.raises(NotDominantError):
            weight_multiplicities(a2, a2.weight([-1, 1]))

    def test_imaginary_roots_listed(self, affine_a1):
        roots = dict(positive_roots_with_multiplicity(affine_a1, 4))
        assert roots[(1, 1)] == 1
        assert roots[(2, 2)] == 1
        assert roots[(1, 0)] == 1


class TestTensorProducts:
    def test_sl2_clebsch_gordan(self, a1):
        assert decompose_tensor_product(a1, a1.weight([1]), a1.weight([1])) == {(0,): 1, (2,): 1}

    def test_a2_decompositions(self, a2):
        w0, w1 = fundamental_weights(a2)
        assert decompose_tensor_product(a2, w0, w1) == {(0, 0): 1, (1, 1): 1}
        assert decompose_tensor_product(a2, w0, w0) == {(2, 0): 1, (0, 1): 1}

    def test_adjoint_square(self, a2):
        r = rho(a2)
        assert tensor_multiplicity(a2, MultiplicityQuery(r, r, r)) == 2

    def test_decomposition_dimension_count(self, b2):
        w0, w1 = fundamental_weights(b2)
        parts = decompose_tensor_product(b2, w0, w1)
        total = sum(m * weyl_dimension(b2, b2.weight(list(k))) for k, m in parts.items())
        assert total == weyl_dimension(b2, w0) * weyl_dimension(b2, w1)

    def test_scaled_query(self, a1):
        one = a1.weight([1])
        assert tensor_multiplicity(a1, MultiplicityQuery(one, one, one, scale=2)) == 1
        assert tensor_multiplicity(a1, MultiplicityQuery(one, one, one, scale=1)) == 0

    def test_affine_depth_error(self, affine_a1):
        r = rho(affine_a1)
        mu = affine_a1.weight([2, 2, -1])
        with pytest.raises(DepthTooSmallError):
            tensor_multiplicity(affine_a1, MultiplicityQuery(r, r, mu, depth=0))


class TestGammaMember:
    def test_sl2_cases(self, a1):
        one, three = a1.weight([1]), a1.weight([3])
        assert gamma_member(a1, one, one, three).status is MembershipStatus.NOT_UP_TO
        verdict = gamma_member(a1, one, one, a1.weight([0]))
        assert verdict.is_member and verdict.scale == 1

    def test_sl2_needs_scaling(self, a1):
        one = a1.weight([1])
        verdict = gamma_member(a1, one, one, one, n_max=2)
        assert verdict.is_member
        assert verdict.scale == 2
        assert verdict.attempts[0] == {"scale": 1, "result": "lattice"}

    def test_affine_lattice_obstruction(self, affine_a1):
        zero = affine_a1.zero_weight()
        lam = fundamental_weights(affine_a1)[0]
        verdict = gamma_member(affine_a1, lam, zero, zero)
        assert verdict.status is MembershipStatus.LATTICE_OBSTRUCTION

    def test_affine_depth_caveat(self, affine_a1):
        r = rho(affine_a1)
        mu = affine_a1.weight([2, 2, -1])
        verdict = gamma_member(affine_a1, r, r, mu, n_max=1, depth=0)
        assert not verdict.is_member
        assert verdict.depth_caveat

    def test_affine_member(self, affine_a1):
        r = rho(affine_a1)
        verdict = gamma_member(affine_a1, r, r, r + r - affine_a1.simple_roots[0], n_max=1, depth=6)
        assert verdict.is_member

    def test_rejects_indefinite(self):
        R = build_realization(GCM.from_matrix([[2, -3], [-3, 2]]))
        zero = R.zero_weight()
        with pytest.raises(UnsupportedTypeError):
            gamma_member(R, zero, zero, zero)

    def test_rejects_non_dominant(self, a2):
        with pytest.raises(NotDominantError):
            gamma_member(a2, a2.weight([-1, 0]), a2.zero_weight(), a2.zero_weight())
