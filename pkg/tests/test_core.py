import numpy as np
import pytest

from subspace_products import (
    EmptyInput,
    FieldMismatch,
    MixedSizes,
    NonFiniteInput,
    RealFieldViolation,
    SingularTransform,
    SizeMismatch,
    Tolerances,
    ZeroSubspace,
    equivalence_transform,
    membership,
    minrank,
    numerical_rank,
    random_element,
    subspace_from_matrices,
    subspace_sum,
    subspaces_equal,
)
from helpers import brute_span_rank, catalog, cell, exact_rank_fraction


class TestSubspaceFromMatrices:
    def test_dependent_multiples_collapse(self):
        S = subspace_from_matrices([np.eye(2), 2 * np.eye(2)])
        assert S.dim == 1

    def test_one_dependency(self):
        e11, e12 = cell(2, 0, 0), cell(2, 0, 1)
        S = subspace_from_matrices([e11, e12, e11 + e12])
        assert S.dim == 2

    def test_random_complex_span_is_full(self):
        rng = np.random.default_rng(0)
        mats = [rng.standard_normal((3, 3)) + 1j * rng.standard_normal((3, 3)) for _ in range(10)]
        S = subspace_from_matrices(mats)
        assert S.dim == brute_span_rank(mats) == 9

    def test_ortho_basis_is_orthonormal(self):
        rng = np.random.default_rng(1)
        mats = [rng.standard_normal((3, 3)) for _ in range(4)]
        S = subspace_from_matrices(mats, field="real")
        gram = S.ortho_basis.T @ S.ortho_basis
        np.testing.assert_allclose(gram, np.eye(S.dim), atol=S.tol)

    def test_raw_basis_members(self):
        rng = np.random.default_rng(2)
        mats = [rng.standard_normal((4, 4)) + 1j * rng.standard_normal((4, 4)) for _ in range(5)]
        S = subspace_from_matrices(mats)
        for M in mats:
            assert membership(S, M).inside

    def test_empty_input(self):
        with pytest.raises(EmptyInput):
            subspace_from_matrices([])

    def test_mixed_sizes(self):
        with pytest.raises(MixedSizes):
            subspace_from_matrices([np.eye(2), np.eye(3)])

    def test_real_field_violation(self):
        with pytest.raises(RealFieldViolation):
            subspace_from_matrices([np.eye(2) * 1j], field="real")

    def test_nan_rejected(self):
        bad = np.eye(2)
        bad[0, 0] = np.nan
        with pytest.raises(NonFiniteInput):
            subspace_from_matrices([bad])

    def test_zero_subspace_representable(self):
        S = subspace_from_matrices([np.zeros((2, 2))])
        assert S.dim == 0
        with pytest.raises(ZeroSubspace):
            random_element(S, 0)

    def test_span_stable_under_reorthonormalization(self):
        rng = np.random.default_rng(3)
        mats = [rng.standard_normal((3, 3)) + 1j * rng.standard_normal((3, 3)) for _ in range(5)]
        S = subspace_from_matrices(mats)
        S2 = subspace_from_matrices(S.basis_matrices())
        assert S2.dim == S.dim
        assert subspaces_equal(S, S2)


class TestMembership:
    def test_identity_in_symmetric(self):
        S = catalog("symmetric", 3)
        got = membership(S, np.eye(3))
        assert got.inside and got.residual < 1e-12

    def test_offdiagonal_outside_diagonal(self):
        S = catalog("diagonal", 2)
        got = membership(S, cell(2, 0, 1))
        assert not got.inside
        assert got.residual == pytest.approx(1.0, abs=1e-12)

    def test_e21_orthogonal_to_span_i_e12(self):
        S = subspace_from_matrices([np.eye(2), cell(2, 0, 1)])
        got = membership(S, cell(2, 1, 0))
        assert not got.inside
        assert got.residual == pytest.approx(1.0, abs=1e-12)

    def test_size_mismatch(self):
        S = catalog("diagonal", 2)
        with pytest.raises(SizeMismatch):
            membership(S, np.eye(3))

    def test_projection_idempotent(self):
        rng = np.random.default_rng(4)
        S = catalog("lower_triangular", 4)
        A = rng.standard_normal((4, 4)) + 1j * rng.standard_normal((4, 4))
        P = S.project(A)
        assert membership(S, P).residual < S.tol


class TestNumericalRank:
    def test_independent(self):
        assert numerical_rank([(1, 0), (0, 1)]) == 2

    def test_dependent(self):
        assert numerical_rank([(1, 1), (2, 2)]) == 1

    def test_tiny_perturbation_below_tolerance(self):
        assert numerical_rank([(1, 0), (1, 1e-15)]) == 1

    def test_empty(self):
        with pytest.raises(EmptyInput):
            numerical_rank([])

    def test_matches_exact_rank_on_integer_cases(self):
        rng = np.random.default_rng(5)
        for _ in range(25):
            n = int(rng.integers(2, 7))
            m = int(rng.integers(1, 8))
            A = rng.integers(-3, 4, size=(m, n * n))
            got = numerical_rank(list(A.astype(float)))
            assert got == exact_rank_fraction(A)


class TestEquivalenceTransform:
    def test_identity_transform_preserves_span(self):
        S = subspace_from_matrices([np.eye(2), cell(2, 0, 1)])
        T = equivalence_transform(S, np.eye(2), np.eye(2))
        assert subspaces_equal(S, T)

    def test_diagonal_transform_dim_preserved(self):
        S = subspace_from_matrices([np.eye(2), cell(2, 0, 1)])
        T = equivalence_transform(S, np.diag([1.0, 2.0]), np.eye(2))
        assert T.dim == 2
        assert membership(T, np.diag([1.0, 2.0])).inside  # X I Y^-1
        assert membership(T, np.diag([1.0, 2.0]) @ cell(2, 0, 1)).inside

    def test_round_trip_recovers_members(self):
        rng = np.random.default_rng(6)
        mats = [rng.standard_normal((3, 3)) + 1j * rng.standard_normal((3, 3)) for _ in range(2)]
        S = subspace_from_matrices(mats)
        X = rng.standard_normal((3, 3)) + 1j * rng.standard_normal((3, 3))
        Y = rng.standard_normal((3, 3)) + 1j * rng.standard_normal((3, 3))
        T = equivalence_transform(S, X, Y)
        back = equivalence_transform(T, np.linalg.inv(X), np.linalg.inv(Y))
        for M in mats:
            assert membership(back, M).residual < 10 * S.tol * max(1, np.linalg.norm(M))

    def test_minrank_invariant(self):
        rng = np.random.default_rng(7)
        S = subspace_from_matrices([np.eye(3), rng.standard_normal((3, 3)) + 1j * rng.standard_normal((3, 3))])
        base = minrank(S).value
        X = rng.standard_normal((3, 3)) + 1j * rng.standard_normal((3, 3))
        Y = rng.standard_normal((3, 3)) + 1j * rng.standard_normal((3, 3))
        assert minrank(equivalence_transform(S, X, Y)).value == base

    def test_singular_transform_rejected(self):
        S = catalog("diagonal", 2)
        with pytest.raises(SingularTransform):
            equivalence_transform(S, np.zeros((2, 2)), np.eye(2))


class TestRandomElement:
    def test_deterministic(self):
        S = catalog("symmetric", 3)
        np.testing.assert_array_equal(random_element(S, 11), random_element(S, 11))

    def test_member(self):
        S = catalog("circulant", 4)
        A = random_element(S, 5)
        assert membership(S, A).residual < S.tol * max(1, np.linalg.norm(A))

    def test_full_space_samples_are_invertible(self):
        rng = np.random.default_rng(8)
        full = subspace_from_matrices(
            [cell(2, i, j) for i in range(2) for j in range(2)]
        )
        for seed in range(1000):
            A = random_element(full, seed)
            s = np.linalg.svd(A, compute_uv=False)
            assert s[-1] > 1e-8 * s[0]


class TestSubspaceSum:
    def test_lower_plus_upper_constant_diagonal_fills(self):
        S1 = catalog("lower_triangular", 3)
        S2 = catalog("unit_upper_constant_diagonal", 3)
        assert subspace_sum(S1, S2).dim == 9

    def test_sum_with_self(self):
        S = catalog("symmetric", 3)
        assert subspace_sum(S, S).dim == S.dim

    def test_disjoint_supports(self):
        S1 = catalog("diagonal", 2)
        S2 = subspace_from_matrices([cell(2, 0, 1)])
        assert subspace_sum(S1, S2).dim == 3

    def test_field_mismatch(self):
        S1 = catalog("diagonal", 2)
        S2 = catalog("diagonal", 2, field="real")
        with pytest.raises(FieldMismatch):
            subspace_sum(S1, S2)

    def test_size_mismatch(self):
        with pytest.raises(SizeMismatch):
            subspace_sum(catalog("diagonal", 2), catalog("diagonal", 3))


def test_tolerances_must_be_positive():
    from subspace_products import BadParameters

    with pytest.raises(BadParameters):
        Tolerances(rel_rank_tol=0.0)
    with pytest.raises(BadParameters):
        Tolerances(abs_floor=-1.0)
