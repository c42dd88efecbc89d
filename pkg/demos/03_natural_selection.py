"""
Selection against a lethal recessive
====================================

With fitness (1, 1, 0) every aa individual dies before breeding. In the
infinite-population limit the recessive frequency follows the classic
recurrence q_t = q0 / (1 + t q0): fast at first, then slower and slower
because the remaining a alleles hide inside heterozygotes.
"""

from popgenlab import ExperimentKind, SimulationParams, run_trajectory_from_frequency

q0 = 0.5

deterministic = SimulationParams(
    kind=ExperimentKind.SELECTION,
    n=50,
    fitness=(1.0, 1.0, 0.0),
    generations=10,
    seed=0,
    mode="deterministic",
)
exact = run_trajectory_from_frequency(1 - q0, deterministic)

stochastic = SimulationParams(
    kind=ExperimentKind.SELECTION,
    n=50,
    fitness=(1.0, 1.0, 0.0),
    generations=10,
    seed=31,
    mode="stochastic",
)
sampled = run_trajectory_from_frequency(1 - q0, stochastic)

print("gen   q (recurrence)   q0/(1+t q0)   q (50-individual run)   N")
for t, point in enumerate(exact.points):
    closed_form = q0 / (1 + t * q0)
    if t < len(sampled.points):
        sp = sampled.points[t]
        sampled_cell = f"{sp.freqs.q:.4f}" if sp.freqs else "extinct"
        n_cell = sp.counts.n
    else:
        sampled_cell, n_cell = "-", "-"
    print(f"{t:3d}   {point.freqs.q:.10f}   {closed_form:.10f}   {sampled_cell:>8}        {n_cell}")

print(f"\nstochastic run status: {sampled.status}")
print("note how the finite population shrinks: culled individuals are gone for good")
