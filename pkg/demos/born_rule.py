# Transition probability of an equal superposition coupled to a random environment.
# As the coupling spread grows the interference terms average away and the
# self-overlap settles at 1/n.
import numpy as np

from collapsim import EnvironmentSpec, TestParticle, analytic_transition, monte_carlo_transition

n = 3
p = TestParticle.equal_superposition(n)
estimates = (1.0, 1.7, 2.9)

print(f"n = {n}, 1/n = {1 / n:.4f}")
print(f"{'tau':>8} {'MC mean':>10} {'stderr':>9} {'analytic':>10}")
for tau in np.geomspace(0.01, 100, 9):
    spec = EnvironmentSpec(estimates, float(tau), sampling_seed=1)
    stats = monte_carlo_transition(p, spec, 50_000)
    print(f"{tau:8.3f} {stats.mean:10.5f} {stats.standard_error:9.2e} {analytic_transition(p, spec):10.5f}")

# Unequal amplitudes do not go to 1/n; the dephased value is sum |c_j|^4.
q = TestParticle([0.6, 0.8])
spec = EnvironmentSpec((1000.0, 1300.0), 1.0, sampling_seed=2)
print()
print("unequal amplitudes (0.6, 0.8):", monte_carlo_transition(q, spec, 50_000).mean)
print("sum |c|^4                     :", 0.6**4 + 0.8**4)
