from fractions import Fraction

import pytest

from src.cartan import (
    GCM, AlgebraType, GCMFileError, NotAGCMError, NotSymmetrizableError, RealizationMismatchError,
    build_realization, classify_type, dual_coweights, fundamental_weights, is_untwisted_affine,
    load_gcm, null_root, real_roots_up_to_height, rho,
)
from src.linalg import dot


class TestGCM:
    def test_rejects_bad_diagonal(self):
        with pytest.raises(NotAGCMError, match=r"a\[1\]\[1\]"):
            GCM.from_matrix([[2, -1], [-1, 3]])

    def test_rejects_positive_off_diagonal(self):
        with pytest.raises(NotAGCMError, match=r"a\[0\]\[1\]"):
            GCM.from_matrix([[2, 1], [-1, 2]])

    def test_rejects_asymmetric_zero_pattern(self):
        with pytest.raises(NotAGCMError):
            GCM.from_matrix([[2, 0], [-1, 2]])

    def test_rejects_non_integer(self):
        with pytest.raises(NotAGCMError):
            GCM.from_matrix([[2, -0.5], [-1, 2]])

    def test_not_symmetrizable(self):
        with pytest.raises(NotSymmetrizableError):
            GCM.from_matrix([[2, -1, -1], [-2, 2, -1], [-1, -1, 2]])

    def test_symmetrizers(self, b2, g2, a2):
        assert b2.gcm.symmetrizer == (1, 2)
        assert g2.gcm.symmetrizer == (3, 1)
        assert a2.gcm.symmetrizer == (1, 1)

    def test_components(self):
        A = GCM.from_matrix([[2, 0], [0, 2]])
        assert A.components() == [[0], [1]]
        assert not A.indecomposable


class TestClassification:
    def test_trichotomy(self, a2, affine_a1):
        assert classify_type(a2.gcm) is AlgebraType.FINITE
        assert classify_type(affine_a1.gcm) is AlgebraType.AFFINE
        assert classify_type(GCM.from_matrix([[2, -3], [-3, 2]])) is AlgebraType.INDEFINITE

    def test_decomposable(self):
        assert classify_type(GCM.from_matrix([[2, 0], [0, 2]])) is AlgebraType.FINITE
        mixed = GCM.from_matrix([[2, 0, 0], [0, 2, -2], [0, -2, 2]])
        assert classify_type(mixed) is AlgebraType.MIXED

    def test_affine_data(self, affine_a1, a2):
        assert null_root(affine_a1.gcm) == (1, 1)
        assert is_untwisted_affine(affine_a1.gcm)
        assert not is_untwisted_affine(a2.gcm)


class TestRealization:
    def test_dimensions(self, a2, affine_a1):
        assert (a2.dim_h, a2.corank) == (2, 0)
        assert (affine_a1.dim_h, affine_a1.corank) == (3, 1)

    def test_central_subspace(self, affine_a1, a2):
        assert [c.coords for c in affine_a1.central_subspace] == [(1, 1, 0)]
        assert a2.central_subspace == ()

    @pytest.mark.parametrize("name", ["a1", "a2", "b2", "g2", "affine_a1"])
    def test_dual_coweights_pair_to_delta(self, name, request):
        R = request.getfixturevalue(name)
        for i, x in enumerate(dual_coweights(R)):
            for j, alpha in enumerate(R.simple_roots):
                assert dot(alpha.coords, x.coords) == int(i == j)

    def test_affine_coweights(self, affine_a1):
        assert [x.coords for x in affine_a1.coweights] == [
            (Fraction(0), Fraction(0), Fraction(1)),
            (Fraction(-1, 2), Fraction(0), Fraction(1)),
        ]

    @pytest.mark.parametrize("name", ["a2", "b2", "g2"])
    def test_invariant_form_on_simple_roots(self, name, request):
        R = request.getfixturevalue(name)
        A, d = R.gcm.matrix, R.gcm.symmetrizer
        for i, a in enumerate(R.simple_roots):
            for j, b in enumerate(R.simple_roots):
                assert R.inner(a, b) == d[i] * A[i][j]

    def test_weight_padding_and_mismatch(self, affine_a1, a2):
        assert affine_a1.weight([1, 2]).coords == (1, 2, 0)
        with pytest.raises(RealizationMismatchError):
            affine_a1.weight([1, 2, 3, 4])
        with pytest.raises(RealizationMismatchError):
            a2.weight([1, 0]) + affine_a1.weight([1, 0])

    def test_root_coordinates(self, affine_a1):
        delta = affine_a1.simple_roots[0] + affine_a1.simple_roots[1]
        assert delta.coords == (0, 0, 1)
        assert affine_a1.root_coordinates(delta) == (1, 1)
        assert affine_a1.root_coordinates(fundamental_weights(affine_a1)[0]) is None

    def test_rho_and_fundamental_weights(self, affine_a1):
        assert rho(affine_a1).coords == (1, 1, 0)
        assert [w.coords for w in fundamental_weights(affine_a1)] == [(1, 0, 0), (0, 1, 0)]

    def test_realization_is_cached(self, a2):
        assert build_realization(a2.gcm) is a2


class TestRealRoots:
    def test_finite_root_counts(self, a2, b2, g2):
        assert {r.vector for r in real_roots_up_to_height(a2, 5).positive()} == {(1, 0), (0, 1), (1, 1)}
        assert {r.vector for r in real_roots_up_to_height(b2, 5).positive()} == {
            (1, 0), (0, 1), (1, 1), (2, 1)}
        assert len(real_roots_up_to_height(g2, 5).positive()) == 6

    def test_affine_roots_skip_imaginary(self, affine_a1):
        roots = real_roots_up_to_height(affine_a1, 3)
        assert {r.vector for r in roots.positive()} == {(1, 0), (0, 1), (2, 1), (1, 2)}
        assert (1, 1) not in roots
        assert (-2, -1) in roots

    def test_sorted_by_height(self, b2):
        heights = [r.height for r in real_roots_up_to_height(b2, 5).positive()]
        assert heights == sorted(heights)


class TestLoadGCM:
    def test_line_diagnostics(self, tmp_path):
        path = tmp_path / "broken.json"
        path.write_text('{"matrix": [[2, -1],\n [-1 2]]}', encoding="utf-8")
        with pytest.raises(GCMFileError) as info:
            load_gcm(path)
        assert info.value.line == 2

    def test_missing_matrix(self, tmp_path):
        path = tmp_path / "empty.json"
        path.write_text('{"size": 2}', encoding="utf-8")
        with pytest.raises(GCMFileError, match="matrix"):
            load_gcm(path)

    def test_invalid_matrix_names_entry(self, tmp_path):
        path = tmp_path / "bad.json"
        path.write_text('{"matrix": [[2, -1], [-1, 1]]}', encoding="utf-8")
        with pytest.raises(NotAGCMError, match=r"a\[1\]\[1\]"):
            load_gcm(path)

    def test_missing_file(self, tmp_path):
        with pytest.raises(GCMFileError):
            load_gcm(tmp_path / "nope.json")
