"""Elementary statistics for the model experiments.

Covers the Hardy-Weinberg goodness-of-fit test and the two Monte Carlo
batch studies: estimator error versus sample size (the law of large
numbers made visible) and drift fixation probabilities.
"""

from __future__ import annotations

import io
import math
from dataclasses import dataclass

import numpy as np
from scipy.special import gammaincc

from .errors import ValidationError
from .genetics import (
    AlleleFrequencies,
    GenotypeCounts,
    estimate_gene_counting,
    hw_expected,
)
from .engine import wright_fisher_step
from .rng import substream

#: Degrees of freedom of the HWE test: 3 genotype classes - 1 - 1 parameter
#: (p is estimated from the same counts by gene counting).
HWE_DF = 1

#: Classic rule of thumb: the chi-square approximation is doubtful when any
#: expected class count falls below this. Surfaced as a warning, never an
#: error, because classroom populations are small by design.
LOW_EXPECTED_THRESHOLD = 5.0


@dataclass(frozen=True)
class ChiSquareResult:
    """Pearson goodness-of-fit result against HW expectations.

    ``degenerate`` is set for monomorphic populations (estimated p is 0 or
    1), where the test carries no information. An expected class of exactly
    zero with nonzero observations reports an infinite statistic and
    p_value 0 rather than raising.
    """

    statistic: float
    df: int
    p_value: float
    low_expected_warning: bool
    degenerate: bool = False


def chi_square_survival(statistic: float, df: int) -> float:
    """P(chi2_df >= statistic) via the regularized incomplete gamma function."""
    if math.isinf(statistic):
        return 0.0
    return float(gammaincc(df / 2.0, statistic / 2.0))


def chi_square_hwe(counts: GenotypeCounts) -> ChiSquareResult:
    """Test observed genotype counts against HW expectations.

    Expected classes come from the gene-counting estimate of the same
    counts, which costs one degree of freedom: df = 1.
    """
    counts.require_nonempty()
    freqs = estimate_gene_counting(counts)
    expected = hw_expected(freqs, counts.n)
    observed = (counts.AA, counts.Aa, counts.aa)
    statistic = 0.0
    for obs, exp in zip(observed, (expected.AA, expected.Aa, expected.aa)):
        if exp == 0.0:
            if obs:
                statistic = math.inf
                break
            continue
        statistic += (obs - exp) ** 2 / exp
    return ChiSquareResult(
        statistic=statistic,
        df=HWE_DF,
        p_value=chi_square_survival(statistic, HWE_DF),
        low_expected_warning=min(expected.AA, expected.Aa, expected.aa)
        < LOW_EXPECTED_THRESHOLD,
        degenerate=freqs.p in (0.0, 1.0),
    )


@dataclass(frozen=True)
class BatchRow:
    """One study condition: sample size, replicate count, and outcomes.

    ``fixation_fraction``, ``mean_absorption_generations`` and
    ``unabsorbed`` are only meaningful for absorption studies and stay None
    elsewhere.
    """

    n: int
    replicates: int
    mean_p: float
    std_p: float
    fixation_fraction: float | None = None
    mean_absorption_generations: float | None = None
    unabsorbed: int | None = None


@dataclass(frozen=True)
class BatchReport:
    """Rows of a Monte Carlo study plus the inputs that reproduce it."""

    study: str
    p0: float
    seed: int
    rows: tuple[BatchRow, ...]

    CSV_HEADER = "n,replicates,mean_p,std_p,fixation_fraction,mean_absorption_generations,unabsorbed"

    def to_csv(self) -> str:
        """CSV with one line per row; '.' decimals, LF endings, blank cells for N/A."""
        out = io.StringIO()
        out.write(self.CSV_HEADER + "\n")
        for row in self.rows:
            cells = [
                str(row.n),
                str(row.replicates),
                _fmt(row.mean_p),
                _fmt(row.std_p),
                _fmt(row.fixation_fraction),
                _fmt(row.mean_absorption_generations),
                "" if row.unabsorbed is None else str(row.unabsorbed),
            ]
            out.write(",".join(cells) + "\n")
        return out.getvalue()


def _fmt(x: float | None) -> str:
    return "" if x is None else f"{x:.12g}"


def lln_study(
    sizes: list[int], replicates: int, p0: float, seed: int
) -> BatchReport:
    """Estimator spread versus sample size: one resampling step per replicate.

    For each population size n, draws ``replicates`` independent offspring
    generations at frequency p0 and reports the mean and standard deviation
    of the gene-counting estimate. The expected spread is the binomial
    sigma = sqrt(p0 (1-p0) / 2n), so rows shrink as n grows. Rows are
    ordered by ascending n. Replicate r of size index i draws from
    substream(seed, i, r), so scheduling never changes the result.
    """
    if replicates < 2:
        raise ValidationError({"replicates": f"need at least 2, got {replicates}"})
    if not sizes:
        raise ValidationError({"sizes": "need at least one population size"})
    for n in sizes:
        if not isinstance(n, int) or n < 1:
            raise ValidationError({"sizes": f"every size must be an integer >= 1, got {n}"})
    if not (0.0 <= p0 <= 1.0):
        raise ValidationError({"p0": f"must be in [0, 1], got {p0}"})

    start = AlleleFrequencies(p=p0, q=1.0 - p0, normalized=True)
    rows = []
    for i, n in enumerate(sorted(sizes)):
        p_hat = np.empty(replicates)
        for r in range(replicates):
            offspring = wright_fisher_step(start, n, substream(seed, i, r))
            p_hat[r] = estimate_gene_counting(offspring).p
        rows.append(
            BatchRow(
                n=n,
                replicates=replicates,
                mean_p=float(p_hat.mean()),
                std_p=float(p_hat.std(ddof=1)),
            )
        )
    return BatchReport(study="lln", p0=p0, seed=seed, rows=tuple(rows))


def fixation_study(
    p0: float, n: int, replicates: int, max_generations: int, seed: int
) -> BatchReport:
    """Fraction of drift runs that fix the A allele within a horizon.

    Each replicate iterates resampling at constant size n until p hits 0 or
    1 or ``max_generations`` elapse. Under pure drift the fixation
    probability equals the starting frequency (the frequency is a
    martingale). Unabsorbed runs are reported separately; the mean
    absorption time averages over absorbed runs only. Replicate r draws
    from substream(seed, r).
    """
    errors = {}
    if replicates < 1:
        errors["replicates"] = f"need at least 1, got {replicates}"
    if not isinstance(n, int) or n < 1:
        errors["n"] = f"must be an integer >= 1, got {n}"
    if max_generations < 1:
        errors["max_generations"] = f"must be >= 1, got {max_generations}"
    if not (0.0 <= p0 <= 1.0):
        errors["p0"] = f"must be in [0, 1], got {p0}"
    if errors:
        raise ValidationError(errors)

    fixed = 0
    lost = 0
    absorption_times = []
    final_p = np.empty(replicates)
    for r in range(replicates):
        rng = substream(seed, r)
        freqs = AlleleFrequencies(p=p0, q=1.0 - p0, normalized=True)
        absorbed_at = 0 if freqs.p in (0.0, 1.0) else None
        if absorbed_at is None:
            for t in range(1, max_generations + 1):
                freqs = estimate_gene_counting(wright_fisher_step(freqs, n, rng))
                if freqs.p in (0.0, 1.0):
                    absorbed_at = t
                    break
        final_p[r] = freqs.p
        if absorbed_at is not None:
            absorption_times.append(absorbed_at)
            if freqs.p == 1.0:
                fixed += 1
            else:
                lost += 1
    absorbed = fixed + lost
    row = BatchRow(
        n=n,
        replicates=replicates,
        mean_p=float(final_p.mean()),
        std_p=float(final_p.std(ddof=1)) if replicates > 1 else 0.0,
        fixation_fraction=fixed / replicates,
        mean_absorption_generations=(
            float(np.mean(absorption_times)) if absorbed else None
        ),
        unabsorbed=replicates - absorbed,
    )
    return BatchReport(study="fixation", p0=p0, seed=seed, rows=(row,))
