"""Stochastic environment interaction and the emergence of 1/n transition probabilities.

A test particle in the superposition ``sum_j c_j |j>`` interacts for a time
``tau`` with an environment whose coupling to branch ``j`` is only known
to lie within ``estimates[j] +/- estimates[j]``. Each draw ``a`` of the
uncertain couplings gives a final state

    psi_j = c_j * exp(-i (A_j + a_j) tau / hbar)

and the transition probability is the mean of |<psi_0|psi(a)>|^2 over
draws. For equal amplitudes and large angle spans this mean tends to 1/n.

Random draws are counter-based: component ``j`` of draw ``d`` is read from
a fixed position of a Philox stream keyed by the sampling seed, so any
batching or worker layout produces identical numbers.
"""

from __future__ import annotations

import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass

import numpy as np

from .errors import RejectedInputError
from .hilbert import NORM_TOL, StateVector, fidelity

EQUAL_AMPLITUDE_TOL = 1e-10
SPEED_OF_LIGHT = 299_792_458.0
_BATCH = 65536


class TestParticle:
    """Normalized coefficient vector of the particle's initial state."""

    __test__ = False
    __slots__ = ("coefficients",)

    def __init__(self, coefficients):
        c = np.asarray(coefficients, dtype=np.complex128)
        if c.ndim != 1 or c.size < 1:
            raise RejectedInputError("coefficients must be a non-empty 1-d array")
        if abs(float(np.vdot(c, c).real) - 1.0) > NORM_TOL:
            raise RejectedInputError("particle coefficients must be normalized")
        c.setflags(write=False)
        self.coefficients = c

    @classmethod
    def equal_superposition(cls, n: int) -> TestParticle:
        if n < 1:
            raise RejectedInputError("n must be positive")
        return cls(np.full(n, 1.0 / math.sqrt(n), dtype=np.complex128))

    @property
    def n(self) -> int:
        return self.coefficients.size

    @property
    def state(self) -> StateVector:
        return StateVector(self.coefficients)

    @property
    def is_equal_amplitude(self) -> bool:
        return bool(np.all(np.abs(np.abs(self.coefficients) ** 2 - 1.0 / self.n) <= EQUAL_AMPLITUDE_TOL))

    def __repr__(self):
        return f"TestParticle(n={self.n})"


@dataclass(frozen=True)
class EnvironmentSpec:
    """Coupling estimates, interaction time and sampling seed.

    ``estimates[j]`` is both the nominal coupling of branch ``j`` and the
    half-width of its uncertainty interval.
    """

    estimates: tuple
    tau: float
    hbar: float = 1.0
    sampling_seed: int = 0

    def __post_init__(self):
        est = tuple(float(x) for x in np.atleast_1d(self.estimates))
        if not est:
            raise RejectedInputError("estimates must be non-empty")
        if not all(math.isfinite(x) and x > 0 for x in est):
            raise RejectedInputError("every estimate must be finite and > 0")
        if not math.isfinite(self.tau) or self.tau < 0:
            raise RejectedInputError("tau must be finite and >= 0")
        if not math.isfinite(self.hbar) or self.hbar <= 0:
            raise RejectedInputError("hbar must be > 0")
        if int(self.sampling_seed) < 0:
            raise RejectedInputError("sampling_seed must be non-negative")
        object.__setattr__(self, "estimates", est)
        object.__setattr__(self, "sampling_seed", int(self.sampling_seed))

    @property
    def n(self) -> int:
        return len(self.estimates)

    @property
    def estimate_array(self) -> np.ndarray:
        return np.array(self.estimates)


@dataclass(frozen=True)
class RandomDraw:
    a: np.ndarray
    draw_index: int


@dataclass(frozen=True)
class AngleSet:
    """Deterministic (``capital_xi``) and random (``xi``) pairwise phase angles."""

    capital_xi: np.ndarray
    xi: np.ndarray


@dataclass
class TransitionStats:
    mean: float
    variance: float
    standard_error: float
    samples: int


def _philox_key(seed: int) -> np.ndarray:
    return np.random.SeedSequence(seed).generate_state(2, np.uint64)


def sample_uniforms(seed: int, n: int, start: int, count: int) -> np.ndarray:
    """Uniforms in [0, 1) for draws ``start .. start+count-1``, shape ``(count, n)``.

    Draw ``d`` owns Philox counter blocks ``d*ceil(n/4)`` onward (four 64-bit
    words per block); element ``j`` is word ``j`` of that range.
    """
    blocks = -(-n // 4)
    gen = np.random.Philox(key=_philox_key(seed), counter=start * blocks)
    raw = gen.random_raw(count * blocks * 4).reshape(count, blocks * 4)[:, :n]
    return (raw >> np.uint64(11)).astype(np.float64) * (1.0 / 2**53)


def sample_couplings(spec: EnvironmentSpec, start: int, count: int) -> np.ndarray:
    """Coupling fluctuations ``a`` for a range of draws, uniform on [-A_j, A_j]."""
    u = sample_uniforms(spec.sampling_seed, spec.n, start, count)
    return spec.estimate_array * (2.0 * u - 1.0)


def sample_environment(spec: EnvironmentSpec, draw_index: int) -> RandomDraw:
    if draw_index < 0:
        raise RejectedInputError("draw_index must be non-negative")
    a = sample_couplings(spec, draw_index, 1)[0]
    a.setflags(write=False)
    return RandomDraw(a=a, draw_index=int(draw_index))


def _check_dims(p: TestParticle, spec: EnvironmentSpec):
    if p.n != spec.n:
        raise RejectedInputError(f"particle has n={p.n} but environment has {spec.n} estimates")


def final_state(p: TestParticle, draw: RandomDraw, spec: EnvironmentSpec) -> StateVector:
    """Particle state after the interaction for one realization of the couplings."""
    _check_dims(p, spec)
    if draw.a.size != p.n:
        raise RejectedInputError("draw dimension does not match particle")
    if spec.tau == 0:
        return p.state
    phase = (spec.estimate_array + draw.a) * (spec.tau / spec.hbar)
    return StateVector(p.coefficients * np.exp(-1j * phase))


def overlap_probability(p: TestParticle, final: StateVector) -> float:
    """|<initial|final>|^2."""
    return fidelity(p.state, final)


def angle_set(spec: EnvironmentSpec, draw: RandomDraw) -> AngleSet:
    scale = spec.tau / spec.hbar
    est = spec.estimate_array
    return AngleSet(
        capital_xi=(est[:, None] - est[None, :]) * scale,
        xi=(draw.a[:, None] - draw.a[None, :]) * scale,
    )


def closed_form_overlap(n: int, angles: AngleSet) -> float:
    """Equal-amplitude overlap from the pairwise angles.

    1/n + (2/n^2) sum_{j<g} (cos X_jg cos x_jg - sin X_jg sin x_jg)
    """
    iu = np.triu_indices(n, k=1)
    big = angles.capital_xi[iu]
    small = angles.xi[iu]
    total = np.sum(np.cos(big) * np.cos(small) - np.sin(big) * np.sin(small))
    return float(1.0 / n + 2.0 / n**2 * total)


def _overlaps(p: TestParticle, spec: EnvironmentSpec, start: int, count: int) -> np.ndarray:
    if spec.tau == 0:
        return np.ones(count)
    a = sample_couplings(spec, start, count)
    phase = (spec.estimate_array + a) * (spec.tau / spec.hbar)
    weights = np.abs(p.coefficients) ** 2
    amp = np.exp(-1j * phase) @ weights
    return amp.real**2 + amp.imag**2


def sample_overlaps(p: TestParticle, spec: EnvironmentSpec, samples: int, *, workers: int = 1) -> np.ndarray:
    """Per-draw overlap probabilities for draws ``0 .. samples-1``."""
    _check_dims(p, spec)
    if samples < 1:
        raise RejectedInputError("samples must be at least 1")
    out = np.empty(samples)
    starts = range(0, samples, _BATCH)

    def fill(start):
        stop = min(samples, start + _BATCH)
        out[start:stop] = _overlaps(p, spec, start, stop - start)

    if workers > 1:
        with ThreadPoolExecutor(max_workers=workers) as pool:
            list(pool.map(fill, starts))
    else:
        for s in starts:
            fill(s)
    return out


def summarize(values: np.ndarray) -> TransitionStats:
    """Mean, unbiased variance and standard error, summed in one fixed order."""
    values = np.asarray(values, dtype=float)
    k = values.size
    mean = float(np.sum(values) / k)
    var = float(np.sum((values - mean) ** 2) / (k - 1)) if k > 1 else 0.0
    return TransitionStats(mean=mean, variance=var, standard_error=math.sqrt(var / k), samples=k)


def monte_carlo_transition(p: TestParticle, spec: EnvironmentSpec, samples: int, *, workers: int = 1) -> TransitionStats:
    """Monte Carlo estimate of the transition probability.

    The result is bit-identical for any ``workers``: draws are addressed by
    index and the reduction runs over the full, index-ordered sample array.
    """
    return summarize(sample_overlaps(p, spec, samples, workers=workers))


def _sinc(x):
    return np.sinc(np.asarray(x, dtype=float) / np.pi)


def analytic_expected_cos(aj: float, ag: float, tau: float, hbar: float = 1.0, formula: str = "product-sinc") -> float:
    """Expected cosine of the random pair angle (the expected sine is zero).

    ``"paper-sinc"`` assumes the pair angle itself is uniform over its full
    span: sinc((A_j + A_g) tau / hbar). ``"product-sinc"`` is exact for the
    implemented sampler, where each coupling is independently uniform:
    sinc(A_j tau / hbar) * sinc(A_g tau / hbar).
    """
    if aj <= 0 or ag <= 0:
        raise RejectedInputError("estimates must be > 0")
    if tau < 0 or hbar <= 0:
        raise RejectedInputError("need tau >= 0 and hbar > 0")
    scale = tau / hbar
    if formula == "paper-sinc":
        return float(_sinc((aj + ag) * scale))
    if formula == "product-sinc":
        return float(_sinc(aj * scale) * _sinc(ag * scale))
    raise RejectedInputError(f"unknown formula {formula!r}")


def _require_equal_amplitude(p: TestParticle):
    if not p.is_equal_amplitude:
        raise RejectedInputError("this prediction is only defined for equal-amplitude particles")


def analytic_transition(p: TestParticle, spec: EnvironmentSpec, formula: str = "product-sinc") -> float:
    """Averaged equal-amplitude overlap: 1/n + (2/n^2) sum_{j<g} cos(X_jg) E[cos x_jg]."""
    _require_equal_amplitude(p)
    _check_dims(p, spec)
    n = p.n
    est = spec.estimates
    total = 0.0
    for j in range(n):
        for g in range(j + 1, n):
            big = (est[j] - est[g]) * spec.tau / spec.hbar
            total += math.cos(big) * analytic_expected_cos(est[j], est[g], spec.tau, spec.hbar, formula)
    return 1.0 / n + 2.0 / n**2 * total


def decoherence_envelope(p: TestParticle, spec: EnvironmentSpec, formula: str = "product-sinc") -> float:
    """Upper bound (2/n^2) sum_{j<g} |E[cos x_jg]| on the distance from 1/n."""
    n = p.n
    est = spec.estimates
    total = sum(
        abs(analytic_expected_cos(est[j], est[g], spec.tau, spec.hbar, formula))
        for j in range(n)
        for g in range(j + 1, n)
    )
    return 2.0 / n**2 * total


def born_limit(p: TestParticle) -> float:
    """Large-environment limit 1/n of the equal-amplitude transition probability."""
    _require_equal_amplitude(p)
    return 1.0 / p.n


def decohered_mean(p: TestParticle) -> float:
    """sum_j |c_j|^4: full-dephasing limit for arbitrary amplitudes.

    Derived extension, not part of the equal-amplitude argument; it reduces
    to 1/n for equal amplitudes and is checked against Monte Carlo only.
    """
    return float(np.sum(np.abs(p.coefficients) ** 4))


def estimate_from_causal_horizon(electron_density: float, unit_coupling: float, interaction_time: float = 1e-3) -> float:
    """Coupling estimate: electrons inside radius c*T times a per-electron coupling."""
    radius = SPEED_OF_LIGHT * interaction_time
    return electron_density * (4.0 / 3.0) * math.pi * radius**3 * unit_coupling


def transition_sweep(p: TestParticle, spec: EnvironmentSpec, taus, samples: int, *, workers: int = 1) -> list[dict]:
    """Monte Carlo and analytic transition probabilities over a grid of interaction times."""
    rows = []
    equal = p.is_equal_amplitude
    for tau in taus:
        s = EnvironmentSpec(spec.estimates, float(tau), spec.hbar, spec.sampling_seed)
        stats = monte_carlo_transition(p, s, samples, workers=workers)
        rows.append(
            {
                "tau": float(tau),
                "mc_mean": stats.mean,
                "mc_stderr": stats.standard_error,
                "analytic_paper": analytic_transition(p, s, "paper-sinc") if equal else math.nan,
                "analytic_product": analytic_transition(p, s, "product-sinc") if equal else math.nan,
                "born_limit": born_limit(p) if equal else math.nan,
            }
        )
    return rows
