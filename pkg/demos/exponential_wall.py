# Wall time of exhaustive ground-state search doubles with every extra spin.
# The last part extrapolates to sizes no machine can reach.
from collapsim import feasibility, scaling_benchmark
from collapsim.scaling import SECONDS_PER_YEAR

records, slope = scaling_benchmark(range(14, 25), instance_seed=0, repetitions=2)
for r in records:
    print(f"N={r.num_spins:2d}  {r.wall_time * 1e3:9.2f} ms  {r.configurations_enumerated:>10d} configs")
print(f"fitted slope of log2(time) vs N: {slope:.3f}")

print()
for log2_ops in (40, 100, 1e6, 1e24):
    rep = feasibility(log2_ops, SECONDS_PER_YEAR)
    print(f"2^{log2_ops:g} ops in one year: 10^{rep.log10_seconds_per_op:.4g} s/op  {rep.verdict}")
