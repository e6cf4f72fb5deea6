"""Finite-dimensional Hilbert space primitives.

States and operators are thin immutable wrappers around numpy arrays.
Basis index ``b`` of a multi-spin space reads its binary digits with the
most significant bit belonging to spin 0.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from . import config
from .errors import CapacityError, RejectedInputError

NORM_TOL = 1e-10
HERMITIAN_TOL = 1e-12


def _frozen(array):
    array = np.array(array, copy=True)
    array.setflags(write=False)
    return array


class StateVector:
    """Complex amplitude vector of a pure state.

    The vector is not required to be normalized; operations that need a
    normalized state (``fidelity``, eigenpair verification) check
    ``is_normalized`` themselves.
    """

    __slots__ = ("amplitudes",)

    def __init__(self, amplitudes):
        amps = np.asarray(amplitudes, dtype=np.complex128)
        if amps.ndim != 1 or amps.size < 1:
            raise RejectedInputError("state amplitudes must be a non-empty 1-d array")
        if not np.all(np.isfinite(amps)):
            raise RejectedInputError("state amplitudes must be finite")
        self.amplitudes = _frozen(amps)

    @classmethod
    def basis(cls, dim: int, index: int) -> StateVector:
        if not 0 <= index < dim:
            raise RejectedInputError(f"basis index {index} outside [0, {dim})")
        amps = np.zeros(dim, dtype=np.complex128)
        amps[index] = 1.0
        return cls(amps)

    @property
    def dim(self) -> int:
        return self.amplitudes.size

    def norm(self) -> float:
        return float(np.linalg.norm(self.amplitudes))

    @property
    def is_normalized(self) -> bool:
        return abs(float(np.vdot(self.amplitudes, self.amplitudes).real) - 1.0) <= NORM_TOL

    def normalized(self) -> StateVector:
        n = self.norm()
        if n == 0.0:
            raise RejectedInputError("cannot normalize the zero vector")
        return StateVector(self.amplitudes / n)

    def __array__(self, dtype=None, copy=None):
        return np.asarray(self.amplitudes, dtype=dtype)

    def __eq__(self, other):
        if not isinstance(other, StateVector):
            return NotImplemented
        return np.array_equal(self.amplitudes, other.amplitudes)

    __hash__ = None

    def __repr__(self):
        return f"StateVector(dim={self.dim})"


class HermitianOperator:
    """Dense Hermitian matrix."""

    __slots__ = ("entries",)

    def __init__(self, entries):
        mat = np.asarray(entries, dtype=np.complex128)
        if mat.ndim != 2 or mat.shape[0] != mat.shape[1] or mat.shape[0] < 1:
            raise RejectedInputError("operator entries must be a non-empty square matrix")
        if not np.all(np.isfinite(mat)):
            raise RejectedInputError("operator entries must be finite")
        if not np.allclose(mat, mat.conj().T, rtol=0.0, atol=HERMITIAN_TOL):
            raise RejectedInputError("operator is not Hermitian")
        self.entries = _frozen(mat)

    @property
    def dim(self) -> int:
        return self.entries.shape[0]

    def apply(self, psi: StateVector) -> np.ndarray:
        return self.entries @ psi.amplitudes

    def dense(self) -> np.ndarray:
        return self.entries

    def __repr__(self):
        return f"HermitianOperator(dim={self.dim})"


class DiagonalOperator:
    """Real diagonal operator, stored as its vector of energies."""

    __slots__ = ("energies",)

    def __init__(self, energies):
        e = np.asarray(energies)
        if np.iscomplexobj(e):
            raise RejectedInputError("diagonal energies must be real")
        e = e.astype(np.float64)
        if e.ndim != 1 or e.size < 1:
            raise RejectedInputError("diagonal energies must be a non-empty 1-d array")
        if not np.all(np.isfinite(e)):
            raise RejectedInputError("diagonal energies must be finite")
        self.energies = _frozen(e)

    @property
    def dim(self) -> int:
        return self.energies.size

    def apply(self, psi: StateVector) -> np.ndarray:
        return self.energies * psi.amplitudes

    def dense(self) -> np.ndarray:
        return np.diag(self.energies.astype(np.complex128))

    def to_hermitian(self) -> HermitianOperator:
        return HermitianOperator(self.dense())

    def __repr__(self):
        return f"DiagonalOperator(dim={self.dim})"


@dataclass(frozen=True)
class PropagatorSpec:
    """Evolution time ``tau`` and the reduced Planck constant ``hbar``."""

    tau: float
    hbar: float = 1.0

    def __post_init__(self):
        if not np.isfinite(self.tau) or self.tau < 0:
            raise RejectedInputError(f"tau must be finite and >= 0, got {self.tau}")
        if not np.isfinite(self.hbar) or self.hbar <= 0:
            raise RejectedInputError(f"hbar must be > 0, got {self.hbar}")


def _check_same_dim(a, b):
    if a.dim != b.dim:
        raise RejectedInputError(f"dimension mismatch: {a.dim} != {b.dim}")


def inner_product(a: StateVector, b: StateVector) -> complex:
    """Return <a|b>, conjugating the left argument."""
    _check_same_dim(a, b)
    return complex(np.vdot(a.amplitudes, b.amplitudes))


def fidelity(a: StateVector, b: StateVector) -> float:
    """Squared modulus of the overlap of two normalized states."""
    _check_same_dim(a, b)
    if not (a.is_normalized and b.is_normalized):
        raise RejectedInputError("fidelity requires normalized states")
    if np.array_equal(a.amplitudes, b.amplitudes):
        return 1.0
    return float(abs(np.vdot(a.amplitudes, b.amplitudes)) ** 2)


def tensor_product(a: StateVector, b: StateVector, max_dim: int | None = None) -> StateVector:
    """Kronecker product; amplitude ``j * b.dim + k`` is ``a_j * b_k``."""
    limit = config.max_hilbert_dim() if max_dim is None else max_dim
    if a.dim * b.dim > limit:
        raise CapacityError(f"tensor product dimension {a.dim * b.dim} exceeds maximum {limit}")
    return StateVector(np.kron(a.amplitudes, b.amplitudes))


def evolve(psi: StateVector, h, prop: PropagatorSpec) -> StateVector:
    """Apply exp(-i tau H / hbar) to ``psi``.

    Diagonal operators take a phase-multiplication fast path. Dense
    Hermitian operators are exponentiated through their eigendecomposition.
    """
    if not isinstance(h, (HermitianOperator, DiagonalOperator)):
        raise RejectedInputError("h must be a HermitianOperator or DiagonalOperator")
    _check_same_dim(psi, h)
    if prop.tau == 0:
        return psi
    scale = prop.tau / prop.hbar
    if isinstance(h, DiagonalOperator):
        return StateVector(psi.amplitudes * np.exp(-1j * scale * h.energies))
    evals, evecs = np.linalg.eigh(h.entries)
    coeffs = evecs.conj().T @ psi.amplitudes
    return StateVector(evecs @ (np.exp(-1j * scale * evals) * coeffs))


def index_to_spins(index: int, num_spins: int) -> np.ndarray:
    """Decode a basis index into spins: bit 0 -> +1, bit 1 -> -1, MSB is spin 0."""
    shifts = np.arange(num_spins - 1, -1, -1)
    bits = (int(index) >> shifts) & 1
    return (1 - 2 * bits).astype(np.int8)


def spins_to_index(spins) -> int:
    index = 0
    for s in spins:
        index = (index << 1) | (1 if s == -1 else 0)
    return index
