"""
The chip experiment: an ideal population conserves its gene pool
================================================================

The classroom protocol pools all 100 allele tokens (2 per individual),
shuffles them and pairs them without replacement. Allele counts are
conserved exactly, so the gene frequency never moves; only the genotype
partition jitters from draw to draw.
"""

from popgenlab import (
    ExperimentKind,
    GenotypeCounts,
    SimulationParams,
    run_trajectory,
)

parental = GenotypeCounts(AA=18, Aa=24, aa=8)  # p = 0.6 at n = 50
params = SimulationParams(
    kind=ExperimentKind.IDEAL_COUNTING, n=50, generations=12, seed=2024
)
trajectory = run_trajectory(parental, params)

print("gen   AA  Aa  aa     p      q")
for point in trajectory.points:
    c, f = point.counts, point.freqs
    print(f"{point.t:3d}   {c.AA:3d} {c.Aa:3d} {c.aa:3d}  {f.p:.4f} {f.q:.4f}")

p_values = {point.freqs.p for point in trajectory.points}
print(f"\ndistinct p values across {params.generations} generations: {sorted(p_values)}")
print("the frequency column never moves; the genotype columns do")
