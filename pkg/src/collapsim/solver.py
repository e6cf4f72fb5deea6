"""Exact solution and verification of Ising ground-state decision problems.

The brute-force enumerator splits the N spins into a "low" block of the
least significant basis bits and a "high" block. Energies of the low block
are tabulated once; each batch of high configurations then costs one
matrix product for the cross couplings, so the whole 2^N sweep runs as
dense numpy kernels.
"""

from __future__ import annotations

import math
import operator
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass

import numpy as np

from . import config
from .errors import CapacityError, RejectedInputError
from .hilbert import DiagonalOperator, HermitianOperator, PropagatorSpec, StateVector, evolve
from .ising import IsingModel, SpinConfiguration, build_quantum_diagonal, classical_energy

MAX_WITNESSES = 1024
MAX_DENSE_DIM = 2**12
MAX_VERIFY_DIM = 2**20
_LOW_BITS = 14
_BLOCK_ELEMENTS = 2**22


@dataclass
class GroundStateResult:
    """Outcome of an exhaustive ground-state search.

    ``witnesses`` holds at most ``MAX_WITNESSES`` minimizers in increasing
    basis-index order; ``degeneracy`` is the total number found.
    """

    ground_energy: float
    witnesses: list
    enumerated_count: int
    degeneracy: int


_COMPARISONS = {"le": operator.le, "lt": operator.lt, "eq": operator.eq}
_COMPARISON_ALIASES = {"<=": "le", "<": "lt", "=": "eq", "==": "eq"}


@dataclass(frozen=True)
class Restraint:
    """Energy threshold predicate ``E <cmp> threshold`` (default ``E <= 0``)."""

    threshold: float = 0.0
    comparison: str = "le"

    def __post_init__(self):
        cmp = _COMPARISON_ALIASES.get(self.comparison, self.comparison)
        if cmp not in _COMPARISONS:
            raise RejectedInputError(f"unknown comparison {self.comparison!r}")
        object.__setattr__(self, "comparison", cmp)

    def evaluate(self, energy: float) -> bool:
        return bool(_COMPARISONS[self.comparison](energy, self.threshold))


@dataclass
class DecisionOutcome:
    answer: bool
    witness: SpinConfiguration | None = None
    verified: bool = False
    ground_energy: float | None = None


@dataclass
class SpectrumResult:
    eigenvalues: np.ndarray
    eigenvectors: list | None = None
    max_residual: float = 0.0


def _pair_energy_table(spins: np.ndarray, upper: np.ndarray) -> np.ndarray:
    """-sum_{j<k} J_jk s_j s_k for each row of ``spins``."""
    if upper.size == 0 or not upper.any():
        return np.zeros(spins.shape[0])
    return -np.einsum("ij,ij->i", spins @ upper, spins)


def _spin_table(num_bits: int) -> np.ndarray:
    idx = np.arange(2**num_bits, dtype=np.int64)[:, None]
    shifts = np.arange(num_bits - 1, -1, -1, dtype=np.int64)[None, :]
    return (1 - 2 * ((idx >> shifts) & 1)).astype(np.float64)


class _Enumerator:
    def __init__(self, model: IsingModel):
        n = model.num_spins
        self.n = n
        self.low_bits = min(n, _LOW_BITS)
        self.high_bits = n - self.low_bits
        hb = self.high_bits
        upper = model.coupling_matrix()
        h = model.effective_fields

        self.low_spins = _spin_table(self.low_bits)
        self.low_energy = (
            _pair_energy_table(self.low_spins, upper[hb:, hb:]) - self.low_spins @ h[hb:] + model.offset
        )
        self.high_upper = upper[:hb, :hb]
        self.high_fields = h[:hb]
        self.cross_t = np.ascontiguousarray(upper[:hb, hb:])
        scale = np.abs(upper).sum() + np.abs(h).sum() + abs(model.offset)
        self.tol = 8 * np.finfo(float).eps * scale
        self.batch = max(1, _BLOCK_ELEMENTS // self.low_spins.shape[0])

    def high_spins(self, start, stop):
        idx = np.arange(start, stop, dtype=np.int64)[:, None]
        shifts = np.arange(self.high_bits - 1, -1, -1, dtype=np.int64)[None, :]
        return (1 - 2 * ((idx >> shifts) & 1)).astype(np.float64)

    def scan(self, start, stop, cap):
        """Scan high indices [start, stop); return (min, count, witness indices)."""
        best = math.inf
        count = 0
        found = []
        for lo in range(start, stop, self.batch):
            hi = min(stop, lo + self.batch)
            if self.high_bits:
                s_high = self.high_spins(lo, hi)
                e_high = _pair_energy_table(s_high, self.high_upper) - s_high @ self.high_fields
                block = (s_high @ self.cross_t) @ self.low_spins.T
                np.negative(block, out=block)
                block += e_high[:, None]
                block += self.low_energy[None, :]
            else:
                block = self.low_energy[None, :]
            bmin = float(block.min())
            if bmin < best - self.tol:
                best = bmin
                count = 0
                found = []
            if bmin <= best + self.tol:
                flat = np.flatnonzero(block <= best + self.tol)
                count += flat.size
                if len(found) < cap:
                    take = flat[: cap - len(found)]
                    rows, cols = np.divmod(take, block.shape[1])
                    found.extend(((lo + rows) << self.low_bits | cols).tolist())
        return best, count, found


def brute_force_ground_state(
    model: IsingModel, *, max_witnesses: int = MAX_WITNESSES, workers: int = 1, max_configs: int | None = None
) -> GroundStateResult:
    """Enumerate all 2^N configurations and return the exact ground energy.

    Every minimizer is kept (no tie-breaking) up to ``max_witnesses``. With
    ``workers > 1`` the high-spin index range is split into contiguous
    slices scanned on a thread pool and merged in index order, so the
    result does not depend on the worker count.
    """
    if max_witnesses < 1:
        raise RejectedInputError("max_witnesses must be at least 1")
    limit = config.max_enumeration() if max_configs is None else max_configs
    total = 2**model.num_spins
    if total > limit:
        raise CapacityError(f"2^{model.num_spins} configurations exceed the enumeration maximum {limit}")
    en = _Enumerator(model)
    n_high = 2**en.high_bits
    workers = max(1, min(int(workers), n_high))
    edges = np.linspace(0, n_high, workers + 1).astype(np.int64)
    slices = [(int(a), int(b)) for a, b in zip(edges[:-1], edges[1:]) if b > a]
    if len(slices) == 1:
        parts = [en.scan(*slices[0], max_witnesses)]
    else:
        with ThreadPoolExecutor(max_workers=len(slices)) as pool:
            parts = list(pool.map(lambda s: en.scan(s[0], s[1], max_witnesses), slices))

    best = min(p[0] for p in parts)
    count = 0
    indices = []
    for pmin, pcount, pfound in parts:
        if pmin <= best + en.tol:
            count += pcount
            indices.extend(pfound[: max_witnesses - len(indices)])

    # Re-evaluate the candidates term by term so each witness reproduces E0 exactly.
    configs = [SpinConfiguration.from_index(i, model.num_spins) for i in indices]
    energies = [classical_energy(model, c) for c in configs]
    e0 = min(energies)
    witnesses = [c for c, e in zip(configs, energies) if e == e0]
    count -= len(configs) - len(witnesses)
    return GroundStateResult(ground_energy=e0, witnesses=witnesses, enumerated_count=total, degeneracy=count)


def verify_eigenpair(h, psi: StateVector, e: float, tol: float) -> bool:
    """Check ``||H psi - e psi|| <= tol * max(1, |e|)`` with one matrix-vector product."""
    if psi.dim != h.dim:
        raise RejectedInputError(f"dimension mismatch: {psi.dim} != {h.dim}")
    if not psi.is_normalized:
        raise RejectedInputError("verify_eigenpair requires a normalized state")
    residual = np.linalg.norm(h.apply(psi) - e * psi.amplitudes)
    return bool(residual <= tol * max(1.0, abs(e)))


def solve_pi0(
    model: IsingModel, r: Restraint = Restraint(), result: GroundStateResult | None = None, **kwargs
) -> DecisionOutcome:
    """Decide whether the ground energy satisfies ``r``.

    A positive answer carries a witness. It is verified as an eigenpair of
    the lifted diagonal Hamiltonian when the dimension is at most 2^20, and
    by re-evaluating its classical energy otherwise. A precomputed
    ``result`` for the same model skips the search.
    """
    if result is None:
        result = brute_force_ground_state(model, **kwargs)
    e0 = result.ground_energy
    if not r.evaluate(e0):
        return DecisionOutcome(answer=False, ground_energy=e0)
    witness = result.witnesses[0]
    if 2**model.num_spins <= MAX_VERIFY_DIM:
        diag = build_quantum_diagonal(model, max_dim=MAX_VERIFY_DIM)
        psi = StateVector.basis(diag.dim, witness.to_index())
        verified = verify_eigenpair(diag, psi, e0, 1e-12) and r.evaluate(float(diag.energies[witness.to_index()]))
    else:
        verified = r.evaluate(classical_energy(model, witness))
    return DecisionOutcome(answer=verified, witness=witness, verified=verified, ground_energy=e0)


def exact_spectrum(h, *, max_dim: int = MAX_DENSE_DIM, with_vectors: bool = True) -> SpectrumResult:
    """Full diagonalization, eigenvalues ascending."""
    if not isinstance(h, (HermitianOperator, DiagonalOperator)):
        raise RejectedInputError("h must be a HermitianOperator or DiagonalOperator")
    if h.dim > max_dim:
        raise CapacityError(f"dense diagonalization limited to dimension {max_dim}, got {h.dim}")
    if isinstance(h, DiagonalOperator):
        order = np.argsort(h.energies, kind="stable")
        evals = h.energies[order]
        vecs = [StateVector.basis(h.dim, int(i)) for i in order] if with_vectors else None
        return SpectrumResult(eigenvalues=evals.copy(), eigenvectors=vecs, max_residual=0.0)
    evals, evecs = np.linalg.eigh(h.entries)
    residual = np.linalg.norm(h.entries @ evecs - evecs * evals[None, :], axis=0).max()
    vecs = [StateVector(evecs[:, i]) for i in range(h.dim)] if with_vectors else None
    return SpectrumResult(eigenvalues=evals, eigenvectors=vecs, max_residual=float(residual))


def verify_time_evolution(h, trajectory, step: float, tol: float, hbar: float = 1.0) -> bool:
    """Check a sampled trajectory against the Schroedinger equation.

    Consecutive samples must be ``step`` apart. For each sample with a
    successor, the forward difference ``i hbar (psi(t+step) - psi(t)) / step``
    is compared with ``H psi(t)`` in the max-norm.
    """
    if len(trajectory) < 2:
        raise RejectedInputError("trajectory needs at least two samples")
    if step <= 0:
        raise RejectedInputError("step must be positive")
    times = np.array([t for t, _ in trajectory], dtype=float)
    if np.any(np.diff(times) <= 0):
        raise RejectedInputError("trajectory times must be strictly increasing")
    if not np.allclose(np.diff(times), step, rtol=1e-6, atol=0.0):
        raise RejectedInputError("trajectory samples are not spaced by step")
    ok = True
    for (_, psi), (_, nxt) in zip(trajectory[:-1], trajectory[1:]):
        if psi.dim != h.dim or nxt.dim != h.dim:
            raise RejectedInputError("trajectory state dimension does not match h")
        lhs = 1j * hbar * (nxt.amplitudes - psi.amplitudes) / step
        ok &= bool(np.max(np.abs(lhs - h.apply(psi))) <= tol)
    return ok


def sample_trajectory(psi: StateVector, h, times, hbar: float = 1.0) -> list:
    """Exact trajectory ``[(t, psi(t))]`` from ``psi`` at ``times[0]``."""
    t0 = times[0]
    return [(float(t), evolve(psi, h, PropagatorSpec(tau=float(t - t0), hbar=hbar))) for t in times]
