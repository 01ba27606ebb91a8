"""Unit and property tests for the dense linear algebra kernels."""

import warnings

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st
from hypothesis.extra.numpy import arrays

from PTSim.exceptions import DimensionMismatch, OverflowRisk, SingularMatrix
from PTSim.linalg import (
    adjoint,
    as_cmatrix,
    as_vector,
    cluster_eigenvalues,
    eig,
    eigh_hermitian,
    expm,
    fro,
    hermitian_residual,
    inverse,
    max_abs,
    orthonormal_complement,
    reciprocal_condition,
    rel_residual,
    solve,
)

complex_entries = st.complex_numbers(max_magnitude=10.0, allow_nan=False, allow_infinity=False)
square_3x3 = arrays(np.complex128, (3, 3), elements=complex_entries)


class TestAdjoint:
    """Conjugate transpose properties."""

    @given(a=square_3x3)
    def test_involution(self, a):
        assert np.array_equal(adjoint(adjoint(a)), a)

    @settings(max_examples=50)
    @given(a=square_3x3, b=square_3x3)
    def test_reverses_products(self, a, b):
        lhs = adjoint(a @ b)
        rhs = adjoint(b) @ adjoint(a)
        assert np.allclose(lhs, rhs, atol=1e-9 * max(1.0, fro(a) * fro(b)))

    def test_rectangular(self):
        a = np.arange(6).reshape(2, 3) * (1 + 1j)
        assert adjoint(a).shape == (3, 2)
        assert adjoint(a)[2, 1] == np.conj(a[1, 2])


class TestConversion:
    def test_non_finite_rejected(self):
        with pytest.raises(ValueError):
            as_cmatrix([[1.0, np.nan], [0.0, 1.0]])

    def test_vector_is_not_a_matrix(self):
        with pytest.raises(DimensionMismatch):
            as_cmatrix([1.0, 2.0])

    def test_dimension_mismatch_is_a_value_error(self):
        with pytest.raises(ValueError):
            as_cmatrix([])


class TestSolve:
    """LU solve with a condition floor."""

    def test_reproduces_right_hand_side(self, rng):
        for _ in range(20):
            a = np.eye(4) + 0.3 * (rng.normal(size=(4, 4)) + 1j * rng.normal(size=(4, 4)))
            b = rng.normal(size=(4, 2)) + 1j * rng.normal(size=(4, 2))
            x = solve(a, b)
            assert fro(a @ x - b) <= 1e-10 * fro(a) * fro(x)

    def test_vector_right_hand_side(self):
        a = np.array([[2.0, 0.0], [0.0, 4.0]])
        x = solve(a, [2.0, 2.0])
        assert x.shape == (2,)
        assert np.allclose(x, [1.0, 0.5])

    def test_complex_matrix_warns_nothing(self):
        a = np.array([[1.0 + 1.0j, 2.0j], [0.5, 3.0 - 1.0j]])
        with warnings.catch_warnings():
            warnings.simplefilter("error")
            rcond = reciprocal_condition(a)
            x = solve(a, [1.0, 1.0j])
        assert isinstance(rcond, float)
        assert 0.0 < rcond <= 1.0
        assert np.allclose(a @ x, [1.0, 1.0j])

    def test_singular_matrix(self):
        with pytest.raises(SingularMatrix):
            solve([[1.0, 2.0], [2.0, 4.0]], [1.0, 1.0])

    def test_wrong_row_count(self):
        with pytest.raises(DimensionMismatch):
            solve(np.eye(3), np.ones(2))

    def test_non_square(self):
        with pytest.raises(DimensionMismatch):
            solve(np.ones((2, 3)), np.ones(2))

    def test_inverse(self):
        a = np.array([[1.0, 2.0j], [0.5, 3.0]])
        assert np.allclose(inverse(a) @ a, np.eye(2), atol=1e-12)


class TestEig:
    def test_residual_and_pairing(self, rng):
        a = rng.normal(size=(5, 5)) + 1j * rng.normal(size=(5, 5))
        result = eig(a)
        assert result.n == 5
        residual = a @ result.right_vectors - result.right_vectors * result.eigenvalues
        assert fro(residual) <= 1e-10 * fro(a)

    def test_hermitian_spectrum_is_real(self, rng):
        for _ in range(10):
            g = rng.normal(size=(4, 4)) + 1j * rng.normal(size=(4, 4))
            h = g + adjoint(g)
            assert np.max(np.abs(eig(h).eigenvalues.imag)) <= 1e-10

    def test_defective_matrix_has_huge_condition(self):
        result = eig([[1.0, 1.0], [0.0, 1.0]])
        assert result.condition_estimate > 1e8

    def test_eigh_ascending(self):
        values, vectors = eigh_hermitian(np.diag([3.0, -1.0, 2.0]))
        assert np.allclose(values, [-1.0, 2.0, 3.0])
        assert np.allclose(adjoint(vectors) @ vectors, np.eye(3))


class TestExpm:
    """Scaling-and-squaring exponential."""

    def test_inverse_identity(self, rng):
        for _ in range(20):
            a = rng.normal(size=(4, 4)) + 1j * rng.normal(size=(4, 4))
            a *= rng.uniform(0.1, 10.0) / np.linalg.norm(a, 2)
            forward, backward = expm(a), expm(-a)
            assert fro(forward @ backward - np.eye(4)) <= 1e-12 * fro(forward) * fro(backward)

    def test_defective_input(self):
        # exp of a nilpotent Jordan block is I + N
        n = np.array([[0.0, 1.0], [0.0, 0.0]])
        assert np.allclose(expm(n), [[1.0, 1.0], [0.0, 1.0]])

    def test_overflow_risk(self):
        with pytest.raises(OverflowRisk):
            expm(1e7 * np.eye(2))


class TestHelpers:
    def test_cluster_eigenvalues(self):
        clusters = cluster_eigenvalues([3.0, 1.0, 1.0 + 1e-9], gap=1e-6)
        assert clusters == [[1, 2], [0]]

    def test_cluster_chains(self):
        clusters = cluster_eigenvalues([0.0, 0.5e-6, 1.0e-6], gap=0.6e-6)
        assert clusters == [[0, 1, 2]]

    def test_orthonormal_complement(self, rng):
        a = rng.normal(size=(4, 2)) + 1j * rng.normal(size=(4, 2))
        comp = orthonormal_complement(a)
        assert comp.shape == (4, 2)
        assert np.allclose(adjoint(comp) @ comp, np.eye(2), atol=1e-12)
        assert np.allclose(adjoint(comp) @ a, 0.0, atol=1e-12)

    def test_residual_helpers(self):
        a = np.array([[1.0, 2.0j], [0.0, -3.0]])
        assert max_abs(a) == 3.0
        assert max_abs(np.zeros((0, 0))) == 0.0
        assert hermitian_residual(a) == pytest.approx(2.0 * np.sqrt(2.0))
        assert hermitian_residual(np.array([[1.0, 1j], [-1j, 2.0]])) == 0.0
        assert rel_residual(a, 0.5) == fro(a)
        assert rel_residual(a, 10.0) == pytest.approx(fro(a) / 10.0)

    def test_as_vector(self):
        assert as_vector([[1.0], [2.0j]]).tolist() == [1.0, 2.0j]
        with pytest.raises(DimensionMismatch):
            as_vector(np.eye(2))
        with pytest.raises(DimensionMismatch):
            as_vector([])
        with pytest.raises(ValueError):
            as_vector([1.0, np.inf])
