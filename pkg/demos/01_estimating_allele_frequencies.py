"""
Two ways of estimating allele frequencies from a genotype tally
===============================================================

A population is recorded as integer counts of the three genotype classes.
Gene counting is an exact census; the square-root method only works when
the population sits exactly at Hardy-Weinberg proportions, and its
residual measures the departure.
"""

from popgenlab import (
    GenotypeCounts,
    chi_square_hwe,
    estimate_gene_counting,
    estimate_sqrt_method,
    genotype_frequencies,
    hw_expected,
)

# A tally that happens to sit exactly at HW proportions (p = 0.6).
tally = GenotypeCounts(AA=36, Aa=48, aa=16)

counting = estimate_gene_counting(tally)
roots = estimate_sqrt_method(tally)
print("HW-proportioned tally", (tally.AA, tally.Aa, tally.aa))
print(f"  gene counting: p = {counting.p:.4f}, q = {counting.q:.4f}")
print(f"  square roots:  p = {roots.p:.4f}, q = {roots.q:.4f}, residual = {roots.residual:.2e}")

# Push the same 100 individuals away from equilibrium: the two methods
# now disagree, and the residual says by how much.
skewed = GenotypeCounts(AA=50, Aa=0, aa=50)
counting = estimate_gene_counting(skewed)
roots = estimate_sqrt_method(skewed)
print("\nall-homozygote tally", (skewed.AA, skewed.Aa, skewed.aa))
print(f"  gene counting: p = {counting.p:.4f}, q = {counting.q:.4f}  (always sums to 1)")
print(f"  square roots:  p = {roots.p:.4f}, q = {roots.q:.4f}, residual = {roots.residual:.4f}")

# The chi-square test quantifies the departure from HW expectations.
for counts in (tally, skewed, GenotypeCounts(30, 40, 30)):
    freqs = estimate_gene_counting(counts)
    expected = hw_expected(freqs, counts.n)
    observed = genotype_frequencies(counts)
    result = chi_square_hwe(counts)
    print(
        f"\ncounts {(counts.AA, counts.Aa, counts.aa)}: "
        f"observed fractions ({observed.AA:.2f}, {observed.Aa:.2f}, {observed.aa:.2f}), "
        f"expected counts ({expected.AA:.1f}, {expected.Aa:.1f}, {expected.aa:.1f})"
    )
    print(f"  chi2 = {result.statistic:.3f}, df = {result.df}, p = {result.p_value:.4f}")
