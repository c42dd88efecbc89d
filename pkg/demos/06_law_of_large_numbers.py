"""
The law of large numbers in one resampling step
===============================================

Why does the classroom protocol cap out at 50 individuals yet the theory
assume an infinite population? Because estimation error scales as
1/sqrt(n): each row quantifies how far one generation of resampling
scatters the estimated frequency at a given population size.
"""

import math

from popgenlab import ExperimentKind, create_session, auto_step, lln_study

report = lln_study(sizes=[10, 50, 200, 1000, 5000], replicates=4000, p0=0.5, seed=7)

print("n       measured spread of p-hat   theory sqrt(pq/2n)")
for row in report.rows:
    theory = math.sqrt(0.25 / (2 * row.n))
    print(f"{row.n:<7d} {row.std_p:.5f}                    {theory:.5f}")

print("\nten-fold more individuals shrink the error by sqrt(10) = 3.16x")

# The automated experiment removes the material-model bottleneck entirely:
# no chips, exact frequencies, indefinitely many generations.
session = create_session(ExperimentKind.AUTOMATED, p0=0.5, n=50, seed=1)
for _ in range(5):
    auto_step(session)
print("\nautomated mode from p0 = 0.5 (infinite-population recurrence):")
for record in session.records:
    print(
        f"  gen {record.t}: p = {record.derived.counting.p}, "
        f"expected genotype counts "
        f"({record.derived.expected.AA:.1f}, {record.derived.expected.Aa:.1f}, {record.derived.expected.aa:.1f})"
    )
