"""
Genetic drift: small populations lose alleles by pure chance
============================================================

Resampling with replacement makes the allele frequency random-walk until
it absorbs at 0 or 1. The probability of ending fixed equals the starting
frequency, and smaller populations absorb sooner. Saves a trajectory
plot to drift_trajectories.png.
"""

import matplotlib

matplotlib.use("Agg")
import matplotlib.pyplot as plt

from popgenlab import (
    ExperimentKind,
    SimulationParams,
    fixation_study,
    run_trajectory_from_frequency,
)

# --- a handful of trajectories at two population sizes --------------------
fig, axes = plt.subplots(1, 2, figsize=(10, 4), sharey=True)
for ax, n in zip(axes, (10, 100)):
    for seed in range(12):
        params = SimulationParams(
            kind=ExperimentKind.DRIFT, n=n, generations=120, seed=seed
        )
        trajectory = run_trajectory_from_frequency(0.5, params)
        ax.plot(
            [pt.t for pt in trajectory.points],
            [pt.freqs.p for pt in trajectory.points],
            alpha=0.7,
        )
    ax.set_title(f"n = {n} individuals")
    ax.set_xlabel("generation")
    ax.set_ylim(-0.05, 1.05)
axes[0].set_ylabel("frequency of A")
fig.suptitle("drift trajectories from p0 = 0.5")
fig.tight_layout()
fig.savefig("drift_trajectories.png", dpi=120)
print("wrote drift_trajectories.png")

# --- fixation probability equals the starting frequency -------------------
print("\np0     fixation fraction (2000 runs, n = 10)   mean generations to absorption")
for p0 in (0.1, 0.3, 0.5, 0.7, 0.9):
    row = fixation_study(p0=p0, n=10, replicates=2000, max_generations=1000, seed=42).rows[0]
    print(f"{p0:.1f}    {row.fixation_fraction:.3f}                                  {row.mean_absorption_generations:.1f}")
