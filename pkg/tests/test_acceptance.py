"""Acceptance criteria 1-10, each at its stated tolerance.

Each test registers itself through the ``criterion`` fixture so the run ends
with one PASS/FAIL line per criterion.
"""

import itertools
import math
import time

import numpy as np
import pytest

from collapsim.collapse import (
    EnvironmentSpec,
    TestParticle,
    analytic_expected_cos,
    angle_set,
    closed_form_overlap,
    final_state,
    monte_carlo_transition,
    overlap_probability,
    sample_couplings,
    sample_environment,
)
from collapsim.hilbert import HermitianOperator, PropagatorSpec, StateVector, evolve
from collapsim.ising import (
    CnfFormula,
    SpinConfiguration,
    build_quantum_diagonal,
    classical_energy,
    encode_3sat,
    random_3sat,
    random_ising_model,
)
from collapsim.scaling import SECONDS_PER_YEAR, feasibility, scaling_benchmark
from collapsim.solver import (
    exact_spectrum,
    sample_trajectory,
    solve_pi0,
    verify_eigenpair,
    verify_time_evolution,
)
from oracles import random_hermitian, random_state, sat_oracle


def test_c01_born_rule_emergence(criterion):
    t0 = time.perf_counter()
    worst = 0.0
    for n in (2, 3, 4):
        # every pair span (A_j + A_g) tau / hbar is at least 2000
        est = tuple(1000.0 + 137.0 * j for j in range(n))
        p = TestParticle.equal_superposition(n)
        stats = monte_carlo_transition(p, EnvironmentSpec(est, 1.0, sampling_seed=n), 100_000)
        gap = abs(stats.mean - 1 / n)
        worst = max(worst, gap)
        assert gap <= max(3 * stats.standard_error, 0.01), (n, stats)
    elapsed = time.perf_counter() - t0
    criterion(1, "equal-amplitude transition probability tends to 1/n", f"max |mean-1/n|={worst:.2e}, {elapsed:.2f}s")
    assert elapsed <= 10


def test_c02_per_sample_identity(criterion):
    rng = np.random.default_rng(2)
    worst = 0.0
    for k in range(10_000):
        n = int(rng.integers(2, 9))
        spec = EnvironmentSpec(tuple(rng.uniform(0.01, 50, size=n)), float(rng.uniform(0, 10)), sampling_seed=k)
        p = TestParticle.equal_superposition(n)
        draw = sample_environment(spec, k)
        direct = overlap_probability(p, final_state(p, draw, spec))
        worst = max(worst, abs(direct - closed_form_overlap(n, angle_set(spec, draw))))
    criterion(2, "direct overlap equals pairwise closed form", f"max diff={worst:.1e}")
    assert worst <= 1e-10


def test_c03_analytic_averages(criterion):
    rng = np.random.default_rng(3)
    z_cos, z_sin = [], []
    for k in range(20):
        aj, ag, tau = rng.uniform(0.1, 3.0), rng.uniform(0.1, 3.0), rng.uniform(0.1, 3.0)
        spec = EnvironmentSpec((aj, ag), tau, sampling_seed=1000 + k)
        a = sample_couplings(spec, 0, 1_000_000)
        xi = (a[:, 0] - a[:, 1]) * tau
        c, s = np.cos(xi), np.sin(xi)
        z_cos.append(abs(c.mean() - analytic_expected_cos(aj, ag, tau)) / (c.std(ddof=1) / math.sqrt(c.size)))
        z_sin.append(abs(s.mean()) / (s.std(ddof=1) / math.sqrt(s.size)))
    at_pi = analytic_expected_cos(math.pi / 2, math.pi / 2, 1.0, formula="paper-sinc")
    criterion(3, "sinc averages match Monte Carlo", f"max z cos={max(z_cos):.2f}, sin={max(z_sin):.2f}, sinc(pi)={at_pi:.1e}")
    assert max(z_cos) <= 3
    assert max(z_sin) <= 3
    assert abs(at_pi) <= 1e-12


def test_c04_zero_interaction(criterion):
    t0 = time.perf_counter()
    rng = np.random.default_rng(4)
    for n in (1, 2, 5, 9):
        for coeffs in (np.full(n, 1 / math.sqrt(n)), random_state(n, rng)):
            spec = EnvironmentSpec(tuple(rng.uniform(0.1, 10, size=n)), 0.0, sampling_seed=n)
            stats = monte_carlo_transition(TestParticle(coeffs), spec, 10_000)
            assert stats.mean == 1.0 and stats.variance == 0.0
    criterion(4, "tau = 0 gives mean 1 and variance 0 exactly", f"{time.perf_counter() - t0:.3f}s")


ALL_SIGNS = CnfFormula(3, [(a, 2 * b, 3 * c) for a, b, c in itertools.product([1, -1], repeat=3)])
TAUTOLOGY = CnfFormula(2, [(1, -1, 2)])


def test_c05_reduction_correctness(criterion):
    t0 = time.perf_counter()
    rng = np.random.default_rng(5)
    corpus = [TAUTOLOGY, ALL_SIGNS]
    corpus += [random_3sat(int(rng.integers(1, 9)), int(rng.integers(1, 13)), rng) for _ in range(200)]
    disagreements = 0
    for cnf in corpus:
        outcome = solve_pi0(encode_3sat(cnf)[0])
        disagreements += outcome.answer != (sat_oracle(cnf) is not None)
    elapsed = time.perf_counter() - t0
    criterion(5, "decision answer equals truth-table SAT oracle", f"{len(corpus)} formulas, {disagreements} disagreements, {elapsed:.1f}s")
    assert disagreements == 0
    assert elapsed <= 30


def test_c06_diagonal_lift_exactness(criterion):
    rng = np.random.default_rng(6)
    mismatches = 0
    for _ in range(50):
        n = int(rng.integers(1, 11))
        model = random_ising_model(n, rng, low=-4, high=4, density=float(rng.uniform(0.3, 1.0)))
        diag = build_quantum_diagonal(model)
        mismatches += sum(
            diag.energies[b] != classical_energy(model, SpinConfiguration.from_index(b, n)) for b in range(2**n)
        )
    criterion(6, "lifted diagonal equals classical energy bit for bit", f"{mismatches} mismatches")
    assert mismatches == 0


def test_c07_verification(criterion):
    rng = np.random.default_rng(7)
    for dim in (2, 5, 16):
        h = HermitianOperator(random_hermitian(dim, rng))
        spec = exact_spectrum(h)
        for lam, v in zip(spec.eigenvalues, spec.eigenvectors):
            assert verify_eigenpair(h, v, lam, 1e-8)
    diag = build_quantum_diagonal(random_ising_model(6, rng))
    spec = exact_spectrum(diag)
    assert all(verify_eigenpair(diag, v, lam, 1e-8) for lam, v in zip(spec.eigenvalues, spec.eigenvectors))

    step = 1e-6
    times = [k * step for k in range(8)]
    for dim in (2, 4, 8):
        h = HermitianOperator(random_hermitian(dim, rng))
        wrong = HermitianOperator(random_hermitian(dim, rng))
        psi = StateVector(random_state(dim, rng))
        traj = sample_trajectory(psi, h, times)
        assert verify_time_evolution(h, traj, step, 1e-3)
        assert not verify_time_evolution(wrong, traj, step, 1e-3)
    criterion(7, "eigenpairs and trajectories verify, wrong Hamiltonians fail")


@pytest.mark.slow
def test_c08_exponential_wall(criterion):
    t0 = time.perf_counter()
    records, slope = scaling_benchmark(range(16, 27), instance_seed=0, repetitions=3)
    elapsed = time.perf_counter() - t0
    criterion(8, "log2(time) grows one unit per spin for N=16..26", f"slope={slope}, {elapsed:.1f}s")
    assert slope is not None
    assert 0.8 <= slope <= 1.2
    assert elapsed <= 300


def test_c09_feasibility(criterion):
    rep = feasibility(1e24, SECONDS_PER_YEAR)
    expected = math.log10(3.156e7) - 1e24 * math.log10(2)
    criterion(9, "1e24 log2-ops in a year is sub-Planck", f"log10 s/op={rep.log10_seconds_per_op:.4e}, {rep.verdict}")
    assert rep.log10_seconds_per_op == pytest.approx(expected, rel=1e-12)
    assert rep.log10_seconds_per_op == pytest.approx(-3.01e23, rel=1e-3)
    assert rep.verdict == "sub-Planck-infeasible"


def test_c10_unitarity(criterion):
    rng = np.random.default_rng(10)
    drift = comp = 0.0
    for _ in range(1000):
        dim = int(rng.integers(1, 17))
        h = HermitianOperator(random_hermitian(dim, rng))
        psi = StateVector(random_state(dim, rng))
        t1, t2 = rng.uniform(0, 5, size=2)
        a = evolve(psi, h, PropagatorSpec(t1))
        drift = max(drift, abs(a.norm() - psi.norm()))
        twice = evolve(a, h, PropagatorSpec(t2))
        once = evolve(psi, h, PropagatorSpec(t1 + t2))
        comp = max(comp, float(np.max(np.abs(twice.amplitudes - once.amplitudes))))
    criterion(10, "evolution is unitary and composes", f"norm drift={drift:.1e}, composition={comp:.1e}")
    assert drift <= 1e-10
    assert comp <= 1e-8
