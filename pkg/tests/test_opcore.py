import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from conftest import random_density, random_unit
from symtangle.errors import DimensionMismatch, DomainError, InputError, NotAState, NotHermitian
from symtangle.opcore import (
    DensityMatrix,
    Operator,
    PureStateVector,
    binary_entropy,
    flip_operator,
    hermitian_spectrum,
    kron,
    partial_transpose,
    phihat_operator,
    relative_entropy,
    schmidt_coefficients,
    schmidt_entanglement,
    shannon_entropy,
    tensor,
    tensor_vectors,
    von_neumann_entropy,
)

seeds = st.integers(0, 2**32 - 1)


def test_operator_algebra_and_immutability():
    a = Operator((2, 2), np.arange(16).reshape(4, 4))
    assert a.dag().allclose(a.mat.T)
    assert (a + a).allclose(2 * a.mat)
    assert (a @ Operator.identity(2, 2)).allclose(a)
    with pytest.raises(ValueError):
        a.mat[0, 0] = 1
    with pytest.raises(DimensionMismatch):
        a @ Operator.identity(3, 1)


@pytest.mark.parametrize(
    "m, err",
    [
        (np.array([[1, 1], [0, 0]]), NotAState),
        (np.diag([0.6, 0.6]), NotAState),
        (np.diag([1.2, -0.2]), NotAState),
    ],
)
def test_density_matrix_validation(m, err):
    with pytest.raises(err):
        DensityMatrix(Operator((2, 1), m.astype(complex)))


def test_density_matrix_psd_tolerance():
    m = np.diag([1 + 1e-10, -1e-10])
    DensityMatrix.from_matrix(m)
    with pytest.raises(NotAState):
        DensityMatrix.from_matrix(m, psd_tolerance=1e-12)


def test_pure_state_vector_norm():
    with pytest.raises(InputError):
        PureStateVector((2, 2), [1, 1, 0, 0])
    v = PureStateVector.normalized((2, 2), [1, 1, 0, 0])
    assert v.coefficient_matrix().shape == (2, 2)


def test_flip_partial_transpose_is_phihat():
    for d in (2, 3, 4):
        assert partial_transpose(flip_operator(d)).allclose(phihat_operator(d))


@settings(max_examples=30, deadline=None)
@given(seeds, st.integers(2, 3), st.integers(2, 3))
def test_partial_transpose_is_involution_and_preserves_trace(seed, d1, d2):
    rng = np.random.default_rng(seed)
    a = Operator((d1, d2), rng.standard_normal((d1 * d2,) * 2) + 1j * rng.standard_normal((d1 * d2,) * 2))
    pt = partial_transpose(a)
    assert partial_transpose(pt).allclose(a, 1e-14)
    assert abs(pt.trace() - a.trace()) < 1e-12


def test_partial_transpose_of_product_operator():
    rng = np.random.default_rng(1)
    x, y = rng.standard_normal((2, 2)), rng.standard_normal((3, 3))
    assert partial_transpose(np.kron(x, y), (2, 3)).allclose(np.kron(x, y.T))


def test_entropies():
    assert von_neumann_entropy(np.eye(4) / 4) == pytest.approx(math.log(4), abs=1e-12)
    assert von_neumann_entropy(np.eye(4) / 4, base="bits") == pytest.approx(2.0, abs=1e-12)
    assert binary_entropy(0.5) == pytest.approx(math.log(2), abs=1e-15)
    assert binary_entropy(0.0) == 0.0 and binary_entropy(1.0) == 0.0
    assert shannon_entropy([0.5, 0.25, 0.25], base=2) == pytest.approx(1.5)
    with pytest.raises(DomainError):
        binary_entropy(1.1)


def test_relative_entropy_support_and_zero():
    rho = np.diag([0.5, 0.5])
    assert relative_entropy(rho, rho) == pytest.approx(0.0, abs=1e-14)
    assert relative_entropy(rho, np.diag([1.0, 0.0])) == math.inf
    assert relative_entropy(np.diag([1.0, 0.0]), rho) == pytest.approx(math.log(2))


@settings(max_examples=40, deadline=None)
@given(seeds)
def test_relative_entropy_nonnegative(seed):
    rng = np.random.default_rng(seed)
    r, s = random_density(4, rng), random_density(4, rng)
    assert relative_entropy(r, s) >= -1e-12


def test_relative_entropy_commuting_matches_classical():
    p, q = np.array([0.2, 0.3, 0.5]), np.array([0.4, 0.4, 0.2])
    assert relative_entropy(np.diag(p), np.diag(q)) == pytest.approx(float(np.sum(p * np.log(p / q))), abs=1e-13)


def test_schmidt_entanglement():
    bell = np.array([1, 0, 0, 1]) / math.sqrt(2)
    assert schmidt_entanglement(bell, dims=(2, 2)) == pytest.approx(math.log(2), abs=1e-15)
    assert schmidt_entanglement(np.kron([1, 0], [0.6, 0.8]), dims=(2, 2)) == pytest.approx(0.0, abs=1e-15)
    c = schmidt_coefficients(PureStateVector.normalized((2, 3), np.arange(6)))
    assert c.sum() == pytest.approx(1.0)


@settings(max_examples=30, deadline=None)
@given(seeds)
def test_schmidt_entanglement_equals_reduced_entropy(seed):
    rng = np.random.default_rng(seed)
    v = random_unit(6, rng)
    m = v.reshape(2, 3)
    assert schmidt_entanglement(v, dims=(2, 3)) == pytest.approx(von_neumann_entropy(m @ m.conj().T), abs=1e-10)


def test_tensor_sorts_alice_and_bob():
    rng = np.random.default_rng(2)
    u, v = random_unit(4, rng), random_unit(9, rng)
    a = Operator((2, 2), np.outer(u, u.conj()))
    b = Operator((3, 3), np.outer(v, v.conj()))
    w = tensor_vectors(u, v, (2, 2), (3, 3))
    t = tensor(a, b)
    assert t.dims == (6, 6)
    assert t.allclose(np.outer(w, w.conj()))
    assert kron(a, b).allclose(np.kron(a.mat, b.mat))
    # a product across pairs is a product of Alice and Bob parts only when each pair is a product
    prod = tensor_vectors(np.kron([1, 0], [0, 1]), np.kron([0, 1, 0], [1, 0, 0]), (2, 2), (3, 3))
    assert schmidt_entanglement(prod, dims=(6, 6)) == pytest.approx(0.0, abs=1e-14)


def test_hermitian_spectrum_rejects_non_hermitian():
    with pytest.raises(NotHermitian):
        hermitian_spectrum(np.array([[0, 1], [0, 0]]))
