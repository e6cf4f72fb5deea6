import math

import numpy as np
import pytest
import scipy.linalg
from hypothesis import given, settings
from hypothesis import strategies as st

from collapsim import config
from collapsim.errors import CapacityError, RejectedInputError
from collapsim.hilbert import (
    DiagonalOperator,
    HermitianOperator,
    PropagatorSpec,
    StateVector,
    evolve,
    fidelity,
    index_to_spins,
    inner_product,
    spins_to_index,
    tensor_product,
)
from oracles import random_hermitian, random_state

e0 = StateVector.basis(2, 0)
e1 = StateVector.basis(2, 1)
plus = StateVector(np.array([1, 1]) / math.sqrt(2))


def test_inner_product_examples():
    assert inner_product(e0, e0) == 1 + 0j
    assert inner_product(e0, e1) == 0
    assert inner_product(plus, e0) == pytest.approx(1 / math.sqrt(2), abs=1e-15)


def test_inner_product_conjugate_symmetric():
    rng = np.random.default_rng(1)
    a, b = StateVector(random_state(5, rng)), StateVector(random_state(5, rng))
    assert inner_product(a, b) == pytest.approx(np.conj(inner_product(b, a)), abs=1e-15)


def test_inner_product_dimension_mismatch():
    with pytest.raises(RejectedInputError):
        inner_product(e0, StateVector.basis(3, 0))


def test_fidelity_examples():
    rng = np.random.default_rng(2)
    psi = StateVector(random_state(6, rng))
    assert fidelity(psi, psi) == 1.0
    assert fidelity(e0, e1) == 0.0
    assert fidelity(plus, e0) == pytest.approx(0.5, abs=1e-15)


def test_fidelity_rejects_unnormalized():
    with pytest.raises(RejectedInputError):
        fidelity(StateVector([1.0, 1.0]), e0)


def test_tensor_product_examples():
    assert tensor_product(e0, e0) == StateVector.basis(4, 0)
    out = tensor_product(plus, e1)
    expected = np.array([0, 1, 0, 1]) / math.sqrt(2)
    assert out.dim == 4
    np.testing.assert_allclose(out.amplitudes, expected, atol=1e-15)

    rng = np.random.default_rng(3)
    a, b = StateVector(random_state(3, rng)), StateVector(random_state(5, rng))
    ab = tensor_product(a, b)
    assert ab.dim == 15
    assert ab.is_normalized
    assert ab.amplitudes[2 * 5 + 4] == pytest.approx(a.amplitudes[2] * b.amplitudes[4], abs=1e-15)


def test_tensor_product_capacity(monkeypatch):
    with pytest.raises(CapacityError):
        tensor_product(StateVector.basis(4, 0), StateVector.basis(4, 0), max_dim=8)
    monkeypatch.setenv(config.ENV_VAR, "8")
    with pytest.raises(CapacityError):
        tensor_product(StateVector.basis(4, 0), StateVector.basis(4, 0))


def test_hermitian_validation():
    with pytest.raises(RejectedInputError):
        HermitianOperator([[0, 1], [2, 0]])
    HermitianOperator([[1, 1j], [-1j, 2]])


def test_evolve_tau_zero_is_identity():
    rng = np.random.default_rng(4)
    psi = StateVector(random_state(4, rng))
    h = HermitianOperator(random_hermitian(4, rng))
    assert evolve(psi, h, PropagatorSpec(0.0)) == psi


def test_evolve_diagonal_phase_pi():
    hbar, tau = 0.7, 2.5
    h = DiagonalOperator([0.0, math.pi * hbar / tau])
    out = evolve(e1, h, PropagatorSpec(tau, hbar))
    np.testing.assert_allclose(out.amplitudes, [0, -1], atol=1e-15)


def test_evolve_matches_pade_expm_oracle():
    rng = np.random.default_rng(5)
    for _ in range(20):
        hmat = random_hermitian(4, rng)
        psi = StateVector(random_state(4, rng))
        tau, hbar = rng.uniform(0, 3), rng.uniform(0.5, 2)
        out = evolve(psi, HermitianOperator(hmat), PropagatorSpec(tau, hbar))
        ref = scipy.linalg.expm(-1j * tau * hmat / hbar) @ psi.amplitudes
        assert abs(out.norm() - 1) <= 1e-10
        np.testing.assert_allclose(out.amplitudes, ref, atol=1e-8)


def test_evolve_rejects_bad_operator():
    with pytest.raises(RejectedInputError):
        evolve(e0, np.eye(2), PropagatorSpec(1.0))


def test_propagator_validation():
    with pytest.raises(RejectedInputError):
        PropagatorSpec(-1.0)
    with pytest.raises(RejectedInputError):
        PropagatorSpec(1.0, hbar=0.0)


@settings(max_examples=60, deadline=None)
@given(
    dim=st.integers(1, 16),
    seed=st.integers(0, 2**32 - 1),
    t1=st.floats(0, 5),
    t2=st.floats(0, 5),
)
def test_unitarity_and_composition(dim, seed, t1, t2):
    rng = np.random.default_rng(seed)
    h = HermitianOperator(random_hermitian(dim, rng))
    psi = StateVector(random_state(dim, rng))
    a = evolve(psi, h, PropagatorSpec(t1))
    assert abs(a.norm() - psi.norm()) <= 1e-10
    twice = evolve(a, h, PropagatorSpec(t2))
    once = evolve(psi, h, PropagatorSpec(t1 + t2))
    np.testing.assert_allclose(twice.amplitudes, once.amplitudes, atol=1e-8)


@settings(max_examples=40, deadline=None)
@given(dim=st.integers(1, 16), seed=st.integers(0, 2**32 - 1), tau=st.floats(0, 10))
def test_diagonal_and_dense_agree(dim, seed, tau):
    rng = np.random.default_rng(seed)
    d = DiagonalOperator(rng.normal(size=dim) * 3)
    psi = StateVector(random_state(dim, rng))
    fast = evolve(psi, d, PropagatorSpec(tau))
    dense = evolve(psi, d.to_hermitian(), PropagatorSpec(tau))
    np.testing.assert_allclose(fast.amplitudes, dense.amplitudes, atol=1e-10)


@settings(max_examples=40, deadline=None)
@given(da=st.integers(1, 6), db=st.integers(1, 6), seed=st.integers(0, 2**32 - 1))
def test_tensor_dimension_law_and_fidelity_symmetry(da, db, seed):
    rng = np.random.default_rng(seed)
    a, b = StateVector(random_state(da, rng)), StateVector(random_state(db, rng))
    assert tensor_product(a, b).dim == da * db
    c = StateVector(random_state(da, rng))
    assert abs(fidelity(a, c) - fidelity(c, a)) <= 1e-12
    assert 0.0 <= fidelity(a, c) <= 1.0 + 1e-12


def test_basis_index_convention():
    # MSB is spin 0; bit 1 means spin -1.
    assert list(index_to_spins(0b100, 3)) == [-1, 1, 1]
    assert list(index_to_spins(0b011, 3)) == [1, -1, -1]
    for b in range(16):
        assert spins_to_index(index_to_spins(b, 4)) == b
