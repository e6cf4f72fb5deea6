# Checking a claimed answer is cheap even when finding it is not.
import numpy as np

from collapsim import (
    HermitianOperator,
    StateVector,
    brute_force_ground_state,
    build_quantum_diagonal,
    random_ising_model,
    sample_trajectory,
    verify_eigenpair,
    verify_time_evolution,
)

rng = np.random.default_rng(0)
model = random_ising_model(12, rng)
result = brute_force_ground_state(model)
diag = build_quantum_diagonal(model)
witness = result.witnesses[0]
psi = StateVector.basis(diag.dim, witness.to_index())
print("ground energy", result.ground_energy, "after", result.enumerated_count, "configurations")
print("eigenpair check:", verify_eigenpair(diag, psi, result.ground_energy, 1e-12))
print("wrong energy   :", verify_eigenpair(diag, psi, result.ground_energy + 1, 1e-12))

# a trajectory only fits the Hamiltonian that produced it
m = rng.normal(size=(4, 4)) + 1j * rng.normal(size=(4, 4))
h = HermitianOperator((m + m.conj().T) / 2)
m = rng.normal(size=(4, 4)) + 1j * rng.normal(size=(4, 4))
other = HermitianOperator((m + m.conj().T) / 2)
start = StateVector(np.ones(4) / 2)
traj = sample_trajectory(start, h, [k * 1e-6 for k in range(5)])
print()
print("trajectory vs true H :", verify_time_evolution(h, traj, 1e-6, 1e-3))
print("trajectory vs other H:", verify_time_evolution(other, traj, 1e-6, 1e-3))
