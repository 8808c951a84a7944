"""
Tests for symmetric matrices, the Jacobi eigensolver, PSD checks and
finite-difference Hessians.
"""

import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from hessian_rigidity.exceptions import (
    ConvergenceError,
    DimensionMismatchError,
    NonFiniteValueError,
    PreconditionError,
)
from hessian_rigidity.linalg import (
    ScalarField,
    SymmetricMatrix,
    eigenvalues_symmetric,
    eigh_symmetric,
    hessian_fd,
    is_psd,
    loewner_leq,
    min_eigenvalue,
)

from . import CORPUS_SIZE, TEST_SEED, random_psd, random_symmetric, with_spectrum


@st.composite
def symmetric_matrices(draw, max_n: int = 6):
    n = draw(st.integers(min_value=1, max_value=max_n))
    entries = draw(
        st.lists(
            st.floats(min_value=-2.0, max_value=2.0, allow_nan=False, allow_infinity=False),
            min_size=n * (n + 1) // 2,
            max_size=n * (n + 1) // 2,
        )
    )
    return SymmetricMatrix(n, entries)


class TestSymmetricMatrix:
    """Construction and arithmetic of SymmetricMatrix."""

    def test_packed_layout_is_row_major_lower_triangle(self):
        A = SymmetricMatrix.from_dense([[1.0, 2.0, 4.0], [2.0, 3.0, 5.0], [4.0, 5.0, 6.0]])

        assert A.packed.tolist() == [1.0, 2.0, 3.0, 4.0, 5.0, 6.0]
        assert A[0, 2] == A[2, 0] == 4.0
        np.testing.assert_array_equal(A.to_dense(), A.to_dense().T)

    def test_rejects_asymmetric_input(self):
        with pytest.raises(PreconditionError):
            SymmetricMatrix.from_dense([[1.0, 2.0], [3.0, 4.0]])

    def test_accepts_asymmetry_within_tolerance(self):
        A = SymmetricMatrix.from_dense([[1.0, 2.0], [2.0 + 1e-14, 4.0]], tol=1e-12)
        assert A.n == 2

    def test_rejects_non_square_input(self):
        with pytest.raises(DimensionMismatchError):
            SymmetricMatrix.from_dense([[1.0, 2.0, 3.0], [2.0, 4.0, 5.0]])

    def test_rejects_non_finite_entries(self):
        with pytest.raises(NonFiniteValueError):
            SymmetricMatrix.from_dense([[1.0, math.nan], [math.nan, 1.0]])

    def test_rejects_wrong_packed_length(self):
        with pytest.raises(DimensionMismatchError):
            SymmetricMatrix(3, [1.0, 2.0])

    def test_is_immutable(self):
        A = SymmetricMatrix.identity(2)
        with pytest.raises(ValueError):
            A.packed[0] = 5.0

    def test_arithmetic(self):
        A = SymmetricMatrix.diag([1.0, 2.0])
        B = SymmetricMatrix.identity(2)

        assert (A + B) == SymmetricMatrix.diag([2.0, 3.0])
        assert (A - B) == SymmetricMatrix.diag([0.0, 1.0])
        assert 2.0 * A == SymmetricMatrix.diag([2.0, 4.0])
        assert -A == A.scaled(-1.0)
        assert A.trace() == 3.0

    def test_arithmetic_dimension_mismatch(self):
        with pytest.raises(DimensionMismatchError):
            SymmetricMatrix.identity(2) + SymmetricMatrix.identity(3)


class TestEigensolver:
    """Cyclic Jacobi eigenvalues and vectors."""

    def test_diagonal_matrix(self):
        eigs = eigenvalues_symmetric(SymmetricMatrix.diag([3.0, -1.0, 2.0]))
        np.testing.assert_allclose(eigs, [-1.0, 2.0, 3.0])

    def test_two_by_two(self):
        eigs = eigenvalues_symmetric(SymmetricMatrix.from_dense([[2.0, 1.0], [1.0, 2.0]]))
        np.testing.assert_allclose(eigs, [1.0, 3.0], atol=1e-14)

    def test_known_spectrum(self):
        rng = np.random.default_rng(TEST_SEED)
        spectrum = [-1.5, 0.0, 0.25, 2.0, 7.0]
        A = SymmetricMatrix.from_dense(with_spectrum(rng, spectrum), tol=1e-12)
        np.testing.assert_allclose(eigenvalues_symmetric(A), spectrum, atol=1e-12)

    def test_reconstruction_and_orthogonality(self):
        rng = np.random.default_rng(TEST_SEED)
        for n in range(1, 7):
            dense = random_symmetric(rng, n)
            eigs, Q = eigh_symmetric(SymmetricMatrix.from_dense(dense))

            np.testing.assert_allclose(Q.T @ Q, np.eye(n), atol=1e-12)
            np.testing.assert_allclose(Q @ np.diag(eigs) @ Q.T, dense, atol=1e-12)
            assert np.all(np.diff(eigs) >= 0)

    @settings(max_examples=200, deadline=None)
    @given(symmetric_matrices())
    def test_matches_numpy(self, A):
        scale = max(1.0, A.frobenius_norm())
        np.testing.assert_allclose(eigenvalues_symmetric(A), np.linalg.eigvalsh(A.to_dense()), atol=1e-12 * scale)

    def test_corpus_residual_and_trace(self):
        rng = np.random.default_rng(TEST_SEED)
        for _ in range(CORPUS_SIZE):
            n = int(rng.integers(1, 9))
            dense = random_symmetric(rng, n, -1.0, 1.0)
            A = SymmetricMatrix.from_dense(dense)
            eigs, Q = eigh_symmetric(A)
            scale = max(1.0, A.frobenius_norm())

            assert np.linalg.norm(dense - Q @ np.diag(eigs) @ Q.T) <= 1e-10 * scale
            assert math.fsum(eigs) == pytest.approx(A.trace(), rel=1e-10, abs=1e-10)

    def test_huge_entries(self):
        A = SymmetricMatrix.from_dense([[0.0, 1e200], [1e200, 0.0]])

        np.testing.assert_allclose(eigenvalues_symmetric(A), [-1e200, 1e200], rtol=1e-12)
        assert math.isfinite(A.frobenius_norm())
        assert not is_psd(A)

    def test_tiny_entries(self):
        A = SymmetricMatrix.from_dense([[2e-200, 1e-200], [1e-200, 2e-200]])
        np.testing.assert_allclose(eigenvalues_symmetric(A), [1e-200, 3e-200], rtol=1e-12)

    def test_rejects_non_positive_tolerance(self):
        with pytest.raises(PreconditionError):
            eigh_symmetric(SymmetricMatrix.identity(2), tol=0.0)

    def test_sweep_cap(self):
        A = SymmetricMatrix.from_dense([[1.0, 0.5], [0.5, 2.0]])
        with pytest.raises(ConvergenceError):
            eigh_symmetric(A, max_sweeps=0)


class TestPositiveSemidefinite:
    """PSD and Loewner-order checks."""

    def test_identity_is_psd(self):
        assert is_psd(SymmetricMatrix.identity(3))

    def test_indefinite_matrix(self):
        assert not is_psd(SymmetricMatrix.diag([1.0, -1.0]))

    def test_tiny_negative_eigenvalue_within_tolerance(self):
        assert is_psd(SymmetricMatrix.diag([1.0, -1e-14]))
        assert not is_psd(SymmetricMatrix.diag([1.0, -1e-9]))

    def test_min_eigenvalue(self):
        assert min_eigenvalue(SymmetricMatrix.diag([4.0, -2.0, 1.0])) == -2.0

    def test_loewner_order(self):
        I = SymmetricMatrix.identity(2)

        assert loewner_leq(I, I.scaled(2.0))
        assert not loewner_leq(I.scaled(2.0), I)
        assert loewner_leq(SymmetricMatrix.zeros(2), I)

    def test_loewner_examples(self):
        B = SymmetricMatrix.from_dense([[1.0, 0.25], [0.25, 1.0]])

        assert loewner_leq(SymmetricMatrix.diag([0.5, 0.5]), B)
        assert not is_psd(SymmetricMatrix.from_dense([[1.0, 2.0], [2.0, 1.0]]))
        assert is_psd(SymmetricMatrix.zeros(3))

    def test_loewner_reflexive_and_scaling(self):
        rng = np.random.default_rng(TEST_SEED)
        for _ in range(200):
            n = int(rng.integers(1, 6))
            A = SymmetricMatrix.from_dense(random_psd(rng, n))
            gap = SymmetricMatrix.from_dense(random_psd(rng, n)) + SymmetricMatrix.identity(n).scaled(0.1)
            B = A + gap

            assert loewner_leq(A, A)
            assert loewner_leq(A, B)
            for c in (0.0, 0.5, 3.0):
                assert loewner_leq(A.scaled(c), B.scaled(c))

    def test_loewner_dimension_mismatch(self):
        with pytest.raises(DimensionMismatchError):
            loewner_leq(SymmetricMatrix.identity(2), SymmetricMatrix.identity(3))

    def test_negative_tolerance(self):
        with pytest.raises(PreconditionError):
            is_psd(SymmetricMatrix.identity(2), tol=-1.0)


class TestFiniteDifferenceHessian:
    """Central-difference Hessians."""

    def test_exact_on_quadratics(self):
        dense = np.array([[2.0, 0.5, -1.0], [0.5, 1.0, 0.25], [-1.0, 0.25, 3.0]])
        f = ScalarField(n=3, value=lambda x: 0.5 * float(x @ dense @ x) + float(x.sum()))

        H = hessian_fd(f, [0.3, -1.2, 2.0])
        np.testing.assert_allclose(H.to_dense(), dense, atol=1e-5)

    def test_separable_trigonometric_field(self):
        f = ScalarField(n=2, value=lambda x: math.fsum(np.cos(x)))
        x = np.array([0.7, -2.1])

        H = hessian_fd(f, x)
        np.testing.assert_allclose(H.to_dense(), np.diag(-np.cos(x)), atol=1e-6)

    def test_uses_oracle_when_available(self):
        f = ScalarField(n=2, value=lambda x: 0.0, hessian=lambda x: SymmetricMatrix.identity(2))
        assert f.hessian_at([1.0, 1.0]) == SymmetricMatrix.identity(2)

    def test_non_finite_value(self):
        f = ScalarField(n=1, value=lambda x: math.inf)
        with pytest.raises(NonFiniteValueError):
            hessian_fd(f, [0.0])

    def test_rejects_non_positive_step(self):
        f = ScalarField(n=1, value=lambda x: float(x[0]) ** 2)
        with pytest.raises(PreconditionError):
            hessian_fd(f, [0.0], h=0.0)

    def test_point_dimension(self):
        f = ScalarField(n=2, value=lambda x: 0.0)
        with pytest.raises(DimensionMismatchError):
            hessian_fd(f, [0.0, 1.0, 2.0])
