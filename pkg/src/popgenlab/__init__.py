"""popgenlab: classroom population-genetics model experiments.

Genotype ledgers with two allele-frequency estimators, Hardy-Weinberg
expectations and goodness-of-fit, seed-deterministic operators for ideal
populations, selection, gene flow and drift, Monte Carlo batch studies,
and the session layer behind the interactive lab pages.
"""

from .engine import (
    ABSORBING_KINDS,
    DETERMINISTIC,
    STOCHASTIC,
    ExperimentKind,
    GametePool,
    SimulationParams,
    Trajectory,
    TrajectoryPoint,
    apply_migration,
    apply_selection,
    build_gamete_pool,
    deterministic_step,
    run_trajectory,
    run_trajectory_from_frequency,
    shuffle_pair_mating,
    wright_fisher_step,
)
from .errors import (
    CorruptPayloadError,
    EmptyPopulationError,
    ExtinctionError,
    MeanFitnessZeroError,
    NoDataError,
    NotNormalizedError,
    OddPoolError,
    PopGenError,
    SchemaVersionError,
    SequenceError,
    SessionNotFoundError,
    TerminalSessionError,
    ValidationError,
    WrongTotalError,
)
from .genetics import (
    AlleleFrequencies,
    GenotypeCounts,
    GenotypeFrequencies,
    HWExpectation,
    estimate_gene_counting,
    estimate_sqrt_method,
    genotype_frequencies,
    hw_counts_from_frequency,
    hw_expected,
    is_hw_proportioned,
)
from .rng import fresh_seed, substream
from .session import (
    ChartSeries,
    DerivedRow,
    ExperimentSession,
    GenerationRecord,
    LedgerRow,
    auto_step,
    chart_series,
    create_session,
    export_csv,
    read_ledger_csv,
    record_manual_counts,
    session_from_document,
    session_payload,
    session_to_document,
    trajectory_csv,
    trajectory_payload,
    update_manual_counts,
)
from .stats import (
    BatchReport,
    BatchRow,
    ChiSquareResult,
    chi_square_hwe,
    chi_square_survival,
    fixation_study,
    lln_study,
)
from .store import SessionStore

__version__ = "0.1.0"

__all__ = [
    "ABSORBING_KINDS",
    "AlleleFrequencies",
    "BatchReport",
    "BatchRow",
    "ChartSeries",
    "ChiSquareResult",
    "CorruptPayloadError",
    "DETERMINISTIC",
    "DerivedRow",
    "EmptyPopulationError",
    "ExperimentKind",
    "ExperimentSession",
    "ExtinctionError",
    "GametePool",
    "GenerationRecord",
    "GenotypeCounts",
    "GenotypeFrequencies",
    "HWExpectation",
    "LedgerRow",
    "MeanFitnessZeroError",
    "NoDataError",
    "NotNormalizedError",
    "OddPoolError",
    "PopGenError",
    "STOCHASTIC",
    "SchemaVersionError",
    "SequenceError",
    "SessionNotFoundError",
    "SessionStore",
    "SimulationParams",
    "TerminalSessionError",
    "Trajectory",
    "TrajectoryPoint",
    "ValidationError",
    "WrongTotalError",
    "apply_migration",
    "apply_selection",
    "auto_step",
    "build_gamete_pool",
    "chart_series",
    "chi_square_hwe",
    "chi_square_survival",
    "create_session",
    "deterministic_step",
    "estimate_gene_counting",
    "estimate_sqrt_method",
    "export_csv",
    "fixation_study",
    "fresh_seed",
    "genotype_frequencies",
    "hw_counts_from_frequency",
    "hw_expected",
    "is_hw_proportioned",
    "lln_study",
    "read_ledger_csv",
    "record_manual_counts",
    "run_trajectory",
    "run_trajectory_from_frequency",
    "session_from_document",
    "session_payload",
    "session_to_document",
    "shuffle_pair_mating",
    "substream",
    "trajectory_csv",
    "trajectory_payload",
    "update_manual_counts",
    "wright_fisher_step",
]
