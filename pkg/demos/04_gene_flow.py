"""
Gene flow pulls a population toward the migrant pool
====================================================

One-island admixture: each generation a fraction m of the gene pool is
replaced by migrants with allele frequency pm. The gap to the migrant
frequency shrinks geometrically, |p_t - pm| = (1-m)^t |p0 - pm|, and a
finite population scatters around that curve.
"""

import math

from popgenlab import ExperimentKind, SimulationParams, run_trajectory_from_frequency

p0, pm, m = 0.2, 0.8, 0.25

exact = run_trajectory_from_frequency(
    p0,
    SimulationParams(
        kind=ExperimentKind.GENE_FLOW,
        n=50,
        migration_rate=m,
        migrant_freq=pm,
        generations=15,
        seed=0,
        mode="deterministic",
    ),
)
finite = run_trajectory_from_frequency(
    p0,
    SimulationParams(
        kind=ExperimentKind.GENE_FLOW,
        n=50,
        migration_rate=m,
        migrant_freq=pm,
        generations=15,
        seed=77,
    ),
)

print(f"m = {m}, migrant frequency pm = {pm}, starting p0 = {p0}")
print("gen   p (deterministic)   (1-m)^t gap   p (50 individuals)")
for t, point in enumerate(exact.points):
    gap = (1 - m) ** t * abs(p0 - pm)
    print(f"{t:3d}   {point.freqs.p:.6f}           {gap:.6f}      {finite.points[t].freqs.p:.4f}")

half_life = math.log(0.5) / math.log(1 - m)
print(f"\nhalf-life of the gap: log(0.5)/log(1-m) = {half_life:.2f} generations")
