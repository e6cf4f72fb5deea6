# A 3-CNF formula becomes an Ising model whose ground energy counts the
# unsatisfied clauses. Exhaustive search over the spins then decides SAT.
from collapsim import CnfFormula, brute_force_ground_state, decode_assignment, encode_3sat, solve_pi0

cnf = CnfFormula(4, [(1, 2, -3), (-1, 3, 4), (-2, -4, 3), (1, -3, -4)])
model, cert = encode_3sat(cnf)
print(f"{cnf.num_vars} variables, {cnf.num_clauses} clauses -> {model.num_spins} spins")
print(f"{len(model.couplings)} couplings, offset {model.offset}")

result = brute_force_ground_state(model)
print("ground energy:", result.ground_energy, "degeneracy:", result.degeneracy)
for w in result.witnesses[:4]:
    assignment = decode_assignment(cert, w)
    print(" ", "".join("T" if v else "F" for v in assignment), "satisfies:", cnf.is_satisfied_by(assignment))

# all eight sign patterns over three variables cannot be satisfied
unsat = CnfFormula(3, [(a, 2 * b, 3 * c) for a in (1, -1) for b in (1, -1) for c in (1, -1)])
out = solve_pi0(encode_3sat(unsat)[0])
print()
print("eight-clause formula: E0 <= 0 ?", out.answer, "| E0 =", out.ground_energy)
