"""Single-locus, two-allele genotype bookkeeping and allele-frequency estimation.

A population is summarized by integer genotype counts (AA, Aa, aa). Two
estimators recover allele frequencies from those counts:

* gene counting: p = (n_AA + 0.5 n_Aa) / N, an exact allele census, so
  p + q = 1 by construction;
* square roots of the homozygote frequencies: p = sqrt(n_AA / N),
  q = sqrt(n_aa / N), which is only consistent when the counts sit exactly
  at Hardy-Weinberg proportions. Its residual p + q - 1 measures the
  departure and is deliberately never normalized away.

Counts are the ground truth (what a student tallies from chips); every
derived real is computed fresh from them in double precision.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .errors import EmptyPopulationError, NotNormalizedError, ValidationError

NORMALIZED_TOL = 1e-12


def _as_count(name: str, value) -> int:
    if isinstance(value, bool) or not isinstance(value, (int, np.integer)):
        raise ValidationError({name: f"must be an integer, got {value!r}"})
    if value < 0:
        raise ValidationError({name: f"must be >= 0, got {value}"})
    return int(value)


@dataclass(frozen=True)
class GenotypeCounts:
    """Integer counts of the three genotype classes of one generation."""

    AA: int
    Aa: int
    aa: int

    def __post_init__(self):
        object.__setattr__(self, "AA", _as_count("AA", self.AA))
        object.__setattr__(self, "Aa", _as_count("Aa", self.Aa))
        object.__setattr__(self, "aa", _as_count("aa", self.aa))

    @property
    def n(self) -> int:
        """Total individuals N."""
        return self.AA + self.Aa + self.aa

    @property
    def dominant_alleles(self) -> int:
        """Copies of A in the population: 2*AA + Aa."""
        return 2 * self.AA + self.Aa

    @property
    def recessive_alleles(self) -> int:
        """Copies of a in the population: 2*aa + Aa."""
        return 2 * self.aa + self.Aa

    def require_nonempty(self) -> None:
        if self.n == 0:
            raise EmptyPopulationError()


@dataclass(frozen=True)
class AlleleFrequencies:
    """Frequencies of the dominant (p) and recessive (q) allele.

    ``normalized`` records whether p + q = 1 is guaranteed by construction.
    The square-root estimator produces non-normalized values on purpose.
    """

    p: float
    q: float
    normalized: bool = False

    def __post_init__(self):
        if not (0.0 <= self.p <= 1.0):
            raise ValidationError({"p": f"must be in [0, 1], got {self.p}"})
        if not (0.0 <= self.q <= 1.0):
            raise ValidationError({"q": f"must be in [0, 1], got {self.q}"})
        if self.normalized and abs(self.p + self.q - 1.0) > NORMALIZED_TOL:
            raise NotNormalizedError(
                f"normalized frequencies must satisfy p + q = 1, got p + q = {self.p + self.q}"
            )

    @property
    def residual(self) -> float:
        """p + q - 1; zero (to rounding) for gene counting, meaningful for sqrt."""
        return self.p + self.q - 1.0


@dataclass(frozen=True)
class GenotypeFrequencies:
    """Fractions of the three genotype classes; they sum to 1."""

    AA: float
    Aa: float
    aa: float


@dataclass(frozen=True)
class HWExpectation:
    """Expected genotype counts (p^2 N, 2pq N, q^2 N); may be fractional."""

    AA: float
    Aa: float
    aa: float

    @property
    def total(self) -> float:
        return self.AA + self.Aa + self.aa


def estimate_gene_counting(counts: GenotypeCounts) -> AlleleFrequencies:
    """Allele frequencies by gene counting: p = (AA + 0.5 Aa)/N, q = (aa + 0.5 Aa)/N.

    Exact census of allele copies, so the result is flagged normalized.
    """
    counts.require_nonempty()
    n = counts.n
    p = (counts.AA + 0.5 * counts.Aa) / n
    q = (counts.aa + 0.5 * counts.Aa) / n
    return AlleleFrequencies(p=p, q=q, normalized=True)


def estimate_sqrt_method(counts: GenotypeCounts) -> AlleleFrequencies:
    """Allele frequencies from square roots of the homozygote frequencies.

    p = sqrt(AA/N), q = sqrt(aa/N). Valid only when the counts are exactly
    Hardy-Weinberg proportioned (Aa^2 = 4 AA aa); otherwise p + q drifts from
    1 and the ``residual`` property exposes the disagreement. Never
    renormalized: the mismatch is the point of comparing the two methods.
    """
    counts.require_nonempty()
    n = counts.n
    return AlleleFrequencies(
        p=math.sqrt(counts.AA / n),
        q=math.sqrt(counts.aa / n),
        normalized=False,
    )


def genotype_frequencies(counts: GenotypeCounts) -> GenotypeFrequencies:
    """Genotype fractions AA/N, Aa/N, aa/N."""
    counts.require_nonempty()
    n = counts.n
    return GenotypeFrequencies(AA=counts.AA / n, Aa=counts.Aa / n, aa=counts.aa / n)


def hw_expected(freqs: AlleleFrequencies, n: int) -> HWExpectation:
    """Hardy-Weinberg expected counts (p^2 n, 2pq n, q^2 n).

    Requires normalized frequencies; the three components sum to n.
    """
    if not freqs.normalized:
        raise NotNormalizedError("HW expectation requires p+q=1")
    if n < 1:
        raise EmptyPopulationError()
    p, q = freqs.p, freqs.q
    return HWExpectation(AA=p * p * n, Aa=2.0 * p * q * n, aa=q * q * n)


def is_hw_proportioned(counts: GenotypeCounts) -> bool:
    """True when Aa^2 = 4 AA aa, i.e. the sqrt estimator agrees with gene counting."""
    return counts.Aa * counts.Aa == 4 * counts.AA * counts.aa


# Largest-remainder order on equal remainders: heterozygotes first, then AA.
_TIE_ORDER = (1, 0, 2)


def hw_counts_from_frequency(p: float, n: int) -> GenotypeCounts:
    """Integer genotype counts closest to HW proportions at frequency p.

    Largest-remainder rounding of (p^2 n, 2pq n, q^2 n) so the classes sum to
    n exactly; remainder ties are broken toward the heterozygote class, then
    AA. Used to materialize a ledger row from a bare starting frequency.
    """
    if n < 1:
        raise EmptyPopulationError()
    if not (0.0 <= p <= 1.0):
        raise ValidationError({"p0": f"must be in [0, 1], got {p}"})
    q = 1.0 - p
    exact = (p * p * n, 2.0 * p * q * n, q * q * n)
    floors = [math.floor(x) for x in exact]
    remainders = [x - f for x, f in zip(exact, floors)]
    shortfall = n - sum(floors)
    order = sorted(range(3), key=lambda i: (-remainders[i], _TIE_ORDER.index(i)))
    for i in order[:shortfall]:
        floors[i] += 1
    return GenotypeCounts(AA=floors[0], Aa=floors[1], aa=floors[2])
