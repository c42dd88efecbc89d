"""Stateful experiment sessions: the ledger behind each model-experiment page.

A session is an ordered ledger of generations. Students fill the manual
rows (the highlighted ones on the original pages) with genotype tallies;
every derived quantity (both estimators, genotype fractions, HW expected
counts, chi-square) is recomputed from the stored counts on every write,
never cached. ``auto_step`` lets the engine produce the next row instead,
drawing from the per-generation seed sub-stream so a session reloaded from
disk continues bit-identically.

Deterministic-mode rows additionally carry ``model_freqs``: the exact
infinite-population frequencies. Their integer counts are only a rounded
presentation, so derived values for those rows come from the model state
(which is exactly HW proportioned) rather than from the rounded counts.
"""

from __future__ import annotations

import csv
import io
import secrets
from dataclasses import dataclass, field, replace
from datetime import datetime, timezone

from .engine import (
    ABSORBING_KINDS,
    DETERMINISTIC,
    STATUS_EXTINCT,
    STATUS_FIXED,
    STATUS_LOST,
    ExperimentKind,
    IDEAL_KINDS,
    SimulationParams,
    _step_stochastic,
    deterministic_step,
)
from .errors import (
    CorruptPayloadError,
    ExtinctionError,
    MeanFitnessZeroError,
    NoDataError,
    SchemaVersionError,
    SequenceError,
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
)
from .protocols import instructions_for
from .rng import fresh_seed, substream
from .stats import ChiSquareResult, chi_square_hwe, chi_square_survival

SCHEMA_VERSION = 1

SOURCE_MANUAL = "manual"
SOURCE_AUTOMATIC = "automatic"

LINE_GRAPH = "line_graph"
STACKED_LABELED = "stacked_labeled"
NESTED_COLUMNS = "nested_columns"
CHART_VARIANTS = (LINE_GRAPH, STACKED_LABELED, NESTED_COLUMNS)

CSV_HEADER = (
    "generation,D,H,R,N,p_counting,q_counting,p_sqrt,q_sqrt,sqrt_residual,"
    "fAA,fAa,faa,chi2,chi2_p,source,note"
)

#: Which estimator a kind headlines. The first ideal page teaches the
#: square-root method, the second gene counting; all later experiments
#: headline gene counting (the sqrt columns stay visible for comparison).
HEADLINE_ESTIMATOR = {
    ExperimentKind.IDEAL_SQRT: "sqrt",
    ExperimentKind.IDEAL_COUNTING: "counting",
    ExperimentKind.SELECTION: "counting",
    ExperimentKind.GENE_FLOW: "counting",
    ExperimentKind.DRIFT: "counting",
    ExperimentKind.AUTOMATED: "counting",
}


@dataclass(frozen=True)
class DerivedRow:
    """Everything the page computes automatically for one ledger row."""

    counting: AlleleFrequencies
    sqrt: AlleleFrequencies
    genotype: GenotypeFrequencies
    expected: HWExpectation
    chi_square: ChiSquareResult


def derive_counts_row(counts: GenotypeCounts) -> DerivedRow:
    """All derived quantities for a measured (integer-count) row."""
    counting = estimate_gene_counting(counts)
    return DerivedRow(
        counting=counting,
        sqrt=estimate_sqrt_method(counts),
        genotype=genotype_frequencies(counts),
        expected=hw_expected(counting, counts.n),
        chi_square=chi_square_hwe(counts),
    )


def derive_model_row(freqs: AlleleFrequencies, n: int) -> DerivedRow:
    """Derived quantities for an infinite-population (deterministic) row.

    The model state is exactly HW proportioned, so both estimators coincide
    with the model frequencies, the residual is 0 and chi-square is 0.
    """
    p, q = freqs.p, freqs.q
    return DerivedRow(
        counting=freqs,
        sqrt=freqs,
        genotype=GenotypeFrequencies(AA=p * p, Aa=2.0 * p * q, aa=q * q),
        expected=HWExpectation(AA=p * p * n, Aa=2.0 * p * q * n, aa=q * q * n),
        chi_square=ChiSquareResult(
            statistic=0.0,
            df=1,
            p_value=chi_square_survival(0.0, 1),
            low_expected_warning=min(p * p, 2.0 * p * q, q * q) * n < 5.0,
            degenerate=p in (0.0, 1.0),
        ),
    )


@dataclass(frozen=True)
class GenerationRecord:
    """One completed ledger row.

    ``counts`` is what the row records (manually tallied for the blue rows,
    engine-produced for automatic ones); ``derived`` is always recomputed
    from it, except for deterministic rows where it comes from
    ``model_freqs``. A terminal row (extinction) has ``derived`` None.
    """

    t: int
    source: str
    counts: GenotypeCounts
    derived: DerivedRow | None
    note: str = ""
    warnings: tuple[str, ...] = ()
    model_freqs: AlleleFrequencies | None = None
    terminal_status: str | None = None


@dataclass
class ExperimentSession:
    """A single experiment run: configuration plus the ledger of records.

    Records hold completed generations only; the row awaiting entry is
    ``next_generation``. Generation t cannot be entered before t - 1.
    """

    id: str
    kind: ExperimentKind
    params: SimulationParams
    records: list[GenerationRecord] = field(default_factory=list)
    created_at: datetime = field(default_factory=lambda: datetime.now(timezone.utc))
    updated_at: datetime = field(default_factory=lambda: datetime.now(timezone.utc))
    instruction_step: int = 0

    @property
    def next_generation(self) -> int:
        return len(self.records)

    @property
    def terminal_status(self) -> str | None:
        return self.records[-1].terminal_status if self.records else None

    @property
    def headline_estimator(self) -> str:
        return HEADLINE_ESTIMATOR[self.kind]

    def complete_records(self) -> list[GenerationRecord]:
        return [r for r in self.records if r.derived is not None]


def create_session(
    kind: ExperimentKind | str,
    params: SimulationParams | None = None,
    **overrides,
) -> ExperimentSession:
    """Open a session of the given kind.

    Either pass a ready ``SimulationParams`` or field overrides (n, seed,
    fitness, ...). Defaults: n=50 (the hundred-chip protocol), a fresh
    random seed, and deterministic mode for the automated kind, which also
    needs ``p0`` and gets its generation-0 row auto-created from it; the
    other kinds start with generation 0 awaiting manual counts.
    """
    kind = ExperimentKind(kind)
    if params is None:
        overrides.setdefault("seed", fresh_seed())
        if kind is ExperimentKind.AUTOMATED:
            overrides.setdefault("mode", DETERMINISTIC)
        params = SimulationParams(kind=kind, **overrides)
    elif params.kind is not kind:
        raise ValidationError({"kind": f"params are for {params.kind.value}, not {kind.value}"})

    session = ExperimentSession(id=secrets.token_urlsafe(16), kind=kind, params=params)
    if kind is ExperimentKind.AUTOMATED:
        if params.p0 is None:
            raise ValidationError({"p0": "the automated kind needs a starting frequency"})
        counts = hw_counts_from_frequency(params.p0, params.n)
        if params.mode == DETERMINISTIC:
            freqs = AlleleFrequencies(p=params.p0, q=1.0 - params.p0, normalized=True)
            record = GenerationRecord(
                t=0,
                source=SOURCE_AUTOMATIC,
                counts=counts,
                derived=derive_model_row(freqs, params.n),
                model_freqs=freqs,
            )
        else:
            record = GenerationRecord(
                t=0, source=SOURCE_AUTOMATIC, counts=counts, derived=derive_counts_row(counts)
            )
        session.records.append(record)
    return session


def _touch(session: ExperimentSession) -> None:
    session.updated_at = datetime.now(timezone.utc)


def _advance_instruction(session: ExperimentSession) -> None:
    script = instructions_for(session.kind)
    session.instruction_step = min(session.instruction_step + 1, len(script) - 1)


def _check_total(session: ExperimentSession, counts: GenotypeCounts) -> None:
    n = session.params.n
    if session.kind is ExperimentKind.SELECTION:
        # Culling shrinks the breeding population, so totals below n are fine.
        if not (1 <= counts.n <= n):
            raise WrongTotalError(f"expected N<={n} individuals, got {counts.n}")
    elif counts.n != n:
        raise WrongTotalError(f"expected N={n} individuals, got {counts.n}")


def _conservation_warnings(
    session: ExperimentSession, counts: GenotypeCounts
) -> tuple[str, ...]:
    """Ideal populations must conserve allele counts; a differing gene-counting
    estimate in a manual row is almost surely a miscount. Warn, never block."""
    if session.kind not in IDEAL_KINDS or not session.records:
        return ()
    first = session.records[0]
    if first.derived is None:
        return ()
    p0 = first.derived.counting.p
    p_here = estimate_gene_counting(counts).p
    if p_here != p0:
        return (
            f"conservation check: gene-counting p = {p_here:.4g} differs from "
            f"generation 0 (p = {p0:.4g}); recount the chips",
        )
    return ()


def _terminal_for(session: ExperimentSession, freqs: AlleleFrequencies) -> str | None:
    if session.kind in ABSORBING_KINDS:
        if freqs.p == 1.0:
            return STATUS_FIXED
        if freqs.p == 0.0:
            return STATUS_LOST
    return None


def _require_open(session: ExperimentSession) -> None:
    status = session.terminal_status
    if status is not None:
        raise TerminalSessionError(
            f"session reached terminal state '{status}'; further steps refused"
        )


def record_manual_counts(
    session: ExperimentSession, t: int, counts: GenotypeCounts, note: str = ""
) -> GenerationRecord:
    """Enter the tally for the next pending generation.

    Totals must match the configured population size (selection sessions
    may come up short after culling). Derived cells are computed
    immediately; ideal-population rows that break allele conservation are
    accepted with a warning attached.
    """
    _require_open(session)
    if t != session.next_generation:
        raise SequenceError(
            f"generation {session.next_generation} must be entered next, got {t}"
        )
    _check_total(session, counts)
    derived = derive_counts_row(counts)
    record = GenerationRecord(
        t=t,
        source=SOURCE_MANUAL,
        counts=counts,
        derived=derived,
        note=note,
        warnings=_conservation_warnings(session, counts),
        terminal_status=_terminal_for(session, derived.counting),
    )
    session.records.append(record)
    _advance_instruction(session)
    _touch(session)
    return record


def update_manual_counts(
    session: ExperimentSession, t: int, counts: GenotypeCounts, note: str | None = None
) -> GenerationRecord:
    """Correct an already-entered manual row and recompute every derived cell.

    Generation 0 is the conservation baseline, so all rows are re-derived,
    not just the edited one.
    """
    if not (0 <= t < len(session.records)):
        raise SequenceError(f"generation {t} has not been entered yet")
    old = session.records[t]
    if old.source != SOURCE_MANUAL:
        raise ValidationError({"t": f"generation {t} is an automatic row; only manual rows are editable"})
    _check_total(session, counts)
    session.records[t] = replace(
        old, counts=counts, note=old.note if note is None else note
    )
    _rederive(session)
    _touch(session)
    return session.records[t]


def _rederive(session: ExperimentSession) -> None:
    """Recompute derived cells and warnings for every record from its counts
    (or model state). Keeps no stale values by construction."""
    baseline_p: float | None = None
    for i, rec in enumerate(session.records):
        if rec.model_freqs is not None:
            derived = derive_model_row(rec.model_freqs, session.params.n)
        elif rec.terminal_status == STATUS_EXTINCT:
            derived = None
        else:
            derived = derive_counts_row(rec.counts)
        warnings = ()
        if (
            session.kind in IDEAL_KINDS
            and rec.source == SOURCE_MANUAL
            and derived is not None
            and baseline_p is not None
            and derived.counting.p != baseline_p
        ):
            warnings = (
                f"conservation check: gene-counting p = {derived.counting.p:.4g} differs "
                f"from generation 0 (p = {baseline_p:.4g}); recount the chips",
            )
        terminal = rec.terminal_status
        if terminal != STATUS_EXTINCT:
            terminal = _terminal_for(session, derived.counting) if derived else None
        session.records[i] = replace(
            rec, derived=derived, warnings=warnings, terminal_status=terminal
        )
        if i == 0 and derived is not None:
            baseline_p = derived.counting.p


def auto_step(session: ExperimentSession) -> GenerationRecord:
    """Let the engine produce the next generation.

    Stochastic sessions draw from substream(seed, t); deterministic ones
    advance the exact recurrence. Extinction appends a terminal row and
    refuses anything further; fixation/loss under the absorbing kinds marks
    the appended row terminal the same way.
    """
    _require_open(session)
    if not session.records:
        raise SequenceError("generation 0 must be entered before stepping")
    t = session.next_generation
    prev = session.records[-1]

    if session.params.mode == DETERMINISTIC:
        prev_freqs = prev.model_freqs
        if prev_freqs is None:
            prev_freqs = estimate_gene_counting(prev.counts)
        try:
            freqs = deterministic_step(prev_freqs, session.params)
        except MeanFitnessZeroError:
            record = GenerationRecord(
                t=t,
                source=SOURCE_AUTOMATIC,
                counts=GenotypeCounts(0, 0, 0),
                derived=None,
                terminal_status=STATUS_EXTINCT,
            )
            session.records.append(record)
            _touch(session)
            return record
        record = GenerationRecord(
            t=t,
            source=SOURCE_AUTOMATIC,
            counts=hw_counts_from_frequency(freqs.p, session.params.n),
            derived=derive_model_row(freqs, session.params.n),
            model_freqs=freqs,
            terminal_status=_terminal_for(session, freqs),
        )
    else:
        rng = substream(session.params.seed, t)
        try:
            counts = _step_stochastic(prev.counts, session.params, rng)
        except ExtinctionError:
            record = GenerationRecord(
                t=t,
                source=SOURCE_AUTOMATIC,
                counts=GenotypeCounts(0, 0, 0),
                derived=None,
                terminal_status=STATUS_EXTINCT,
            )
            session.records.append(record)
            _touch(session)
            return record
        derived = derive_counts_row(counts)
        record = GenerationRecord(
            t=t,
            source=SOURCE_AUTOMATIC,
            counts=counts,
            derived=derived,
            terminal_status=_terminal_for(session, derived.counting),
        )
    session.records.append(record)
    _advance_instruction(session)
    _touch(session)
    return record


# --------------------------------------------------------------------------
# Charts
# --------------------------------------------------------------------------


@dataclass(frozen=True)
class ChartSegment:
    genotype: str
    value: float
    label: str


@dataclass(frozen=True)
class ChartColumn:
    t: int
    segments: tuple[ChartSegment, ...]


@dataclass(frozen=True)
class NestedColumn:
    t: int
    value: float
    width: float
    hover: str


@dataclass(frozen=True)
class NestedPanel:
    genotype: str
    columns: tuple[NestedColumn, ...]


@dataclass(frozen=True)
class ChartSeries:
    """Plot-ready data for one chart variant.

    Every variant carries the per-generation allele series (headline
    estimator) and genotype-fraction series so the presentations can be
    overlaid. ``columns`` is populated for the labeled stacked diagram,
    ``panels`` for the nested diagram where, per genotype class, the column
    for generation 0 is the narrowest and the latest generation the widest
    and numbers appear in the hover payload.
    """

    variant: str
    generations: tuple[int, ...]
    p: tuple[float, ...]
    q: tuple[float, ...]
    genotype_series: dict[str, tuple[float, ...]]
    columns: tuple[ChartColumn, ...] = ()
    panels: tuple[NestedPanel, ...] = ()


NESTED_WIDTH_MIN = 0.35
NESTED_WIDTH_MAX = 1.0


def _nested_widths(count: int) -> list[float]:
    if count == 1:
        return [NESTED_WIDTH_MAX]
    step = (NESTED_WIDTH_MAX - NESTED_WIDTH_MIN) / (count - 1)
    return [NESTED_WIDTH_MIN + i * step for i in range(count)]


def chart_series(session: ExperimentSession, variant: str) -> ChartSeries:
    """Build the chart payload for one of the three presentations."""
    if variant not in CHART_VARIANTS:
        raise ValidationError(
            {"variant": f"must be one of {', '.join(CHART_VARIANTS)}, got {variant!r}"}
        )
    rows = session.complete_records()
    if not rows:
        raise NoDataError()

    use_sqrt = session.headline_estimator == "sqrt"
    generations = tuple(r.t for r in rows)
    p = tuple((r.derived.sqrt.p if use_sqrt else r.derived.counting.p) for r in rows)
    q = tuple((r.derived.sqrt.q if use_sqrt else r.derived.counting.q) for r in rows)
    genotype_series = {
        "AA": tuple(r.derived.genotype.AA for r in rows),
        "Aa": tuple(r.derived.genotype.Aa for r in rows),
        "aa": tuple(r.derived.genotype.aa for r in rows),
    }

    columns: tuple[ChartColumn, ...] = ()
    panels: tuple[NestedPanel, ...] = ()
    if variant == STACKED_LABELED:
        columns = tuple(
            ChartColumn(
                t=r.t,
                segments=tuple(
                    ChartSegment(genotype=g, value=v, label=f"{v:.4g}")
                    for g, v in (
                        ("AA", r.derived.genotype.AA),
                        ("Aa", r.derived.genotype.Aa),
                        ("aa", r.derived.genotype.aa),
                    )
                ),
            )
            for r in rows
        )
    elif variant == NESTED_COLUMNS:
        widths = _nested_widths(len(rows))
        panels = tuple(
            NestedPanel(
                genotype=g,
                columns=tuple(
                    NestedColumn(
                        t=r.t,
                        value=series[i],
                        width=widths[i],
                        hover=f"generation {r.t}: {g} = {series[i]:.12g}",
                    )
                    for i, r in enumerate(rows)
                ),
            )
            for g, series in genotype_series.items()
        )
    return ChartSeries(
        variant=variant,
        generations=generations,
        p=p,
        q=q,
        genotype_series=genotype_series,
        columns=columns,
        panels=panels,
    )


# --------------------------------------------------------------------------
# CSV export / import
# --------------------------------------------------------------------------


def _fmt(x: float | None) -> str:
    if x is None:
        return ""
    return f"{x:.12g}"


def records_to_csv(records: list[GenerationRecord]) -> bytes:
    """Ledger rows as CSV bytes, one row per generation.

    Reals carry up to 12 significant digits with '.' decimals and LF line
    endings, enough for a re-import to land within 1e-9 of the stored
    values (counts round-trip exactly).
    """
    out = io.StringIO()
    writer = csv.writer(out, lineterminator="\n")
    writer.writerow(CSV_HEADER.split(","))
    for rec in records:
        d = rec.derived
        writer.writerow(
            [
                rec.t,
                rec.counts.AA,
                rec.counts.Aa,
                rec.counts.aa,
                rec.counts.n,
                _fmt(d.counting.p) if d else "",
                _fmt(d.counting.q) if d else "",
                _fmt(d.sqrt.p) if d else "",
                _fmt(d.sqrt.q) if d else "",
                _fmt(d.sqrt.residual) if d else "",
                _fmt(d.genotype.AA) if d else "",
                _fmt(d.genotype.Aa) if d else "",
                _fmt(d.genotype.aa) if d else "",
                _fmt(d.chi_square.statistic) if d else "",
                _fmt(d.chi_square.p_value) if d else "",
                rec.source,
                rec.note,
            ]
        )
    return out.getvalue().encode("utf-8")


def export_csv(session: ExperimentSession) -> bytes:
    """The session ledger as CSV."""
    if not session.records:
        raise NoDataError()
    return records_to_csv(session.records)


def trajectory_records(trajectory) -> list[GenerationRecord]:
    """Render an engine trajectory as ledger records (all automatic).

    Deterministic trajectories keep their exact frequency track in
    ``model_freqs`` so derived columns show the recurrence values, not
    artifacts of the rounded counts.
    """
    deterministic = trajectory.params.mode == DETERMINISTIC
    records = []
    last_t = trajectory.points[-1].t
    for point in trajectory.points:
        status = None
        if trajectory.absorbed_at is not None and point.t == last_t:
            status = trajectory.status
        if point.freqs is None:
            records.append(
                GenerationRecord(
                    t=point.t,
                    source=SOURCE_AUTOMATIC,
                    counts=point.counts,
                    derived=None,
                    terminal_status=status,
                )
            )
        elif deterministic:
            records.append(
                GenerationRecord(
                    t=point.t,
                    source=SOURCE_AUTOMATIC,
                    counts=point.counts,
                    derived=derive_model_row(point.freqs, trajectory.params.n),
                    model_freqs=point.freqs,
                    terminal_status=status,
                )
            )
        else:
            records.append(
                GenerationRecord(
                    t=point.t,
                    source=SOURCE_AUTOMATIC,
                    counts=point.counts,
                    derived=derive_counts_row(point.counts),
                    terminal_status=status,
                )
            )
    return records


def trajectory_csv(trajectory) -> bytes:
    """An engine trajectory in the ledger CSV schema."""
    return records_to_csv(trajectory_records(trajectory))


def trajectory_payload(trajectory) -> dict:
    """An engine trajectory as a JSON-ready document."""
    p = trajectory.params
    return {
        "schema_version": SCHEMA_VERSION,
        "kind": p.kind.value,
        "params": {
            "n": p.n,
            "fitness": list(p.fitness),
            "migration_rate": p.migration_rate,
            "migrant_freq": p.migrant_freq,
            "generations": p.generations,
            "seed": p.seed,
            "mode": p.mode,
            "p0": p.p0,
        },
        "status": trajectory.status,
        "absorbed_at": trajectory.absorbed_at,
        "generations": [record_payload(r) for r in trajectory_records(trajectory)],
    }


@dataclass(frozen=True)
class LedgerRow:
    """One parsed row of an exported ledger."""

    generation: int
    counts: GenotypeCounts
    n: int
    p_counting: float | None
    q_counting: float | None
    p_sqrt: float | None
    q_sqrt: float | None
    sqrt_residual: float | None
    fAA: float | None
    fAa: float | None
    faa: float | None
    chi2: float | None
    chi2_p: float | None
    source: str
    note: str


def read_ledger_csv(data: bytes) -> list[LedgerRow]:
    """Parse an exported ledger back into typed rows."""
    text = data.decode("utf-8")
    reader = csv.reader(io.StringIO(text))
    try:
        header = next(reader)
    except StopIteration:
        raise CorruptPayloadError("empty CSV") from None
    if header != CSV_HEADER.split(","):
        raise CorruptPayloadError(f"unexpected CSV header: {','.join(header)}")
    rows = []
    for line in reader:
        if not line:
            continue
        if len(line) != 17:
            raise CorruptPayloadError(f"expected 17 cells, got {len(line)}")
        opt = lambda s: None if s == "" else float(s)
        rows.append(
            LedgerRow(
                generation=int(line[0]),
                counts=GenotypeCounts(AA=int(line[1]), Aa=int(line[2]), aa=int(line[3])),
                n=int(line[4]),
                p_counting=opt(line[5]),
                q_counting=opt(line[6]),
                p_sqrt=opt(line[7]),
                q_sqrt=opt(line[8]),
                sqrt_residual=opt(line[9]),
                fAA=opt(line[10]),
                fAa=opt(line[11]),
                faa=opt(line[12]),
                chi2=opt(line[13]),
                chi2_p=opt(line[14]),
                source=line[15],
                note=line[16],
            )
        )
    return rows


# --------------------------------------------------------------------------
# Persistence documents
# --------------------------------------------------------------------------


def session_to_document(session: ExperimentSession) -> dict:
    """Self-describing dict ready for JSON serialization.

    Derived cells are not persisted; they are recomputed on load, which is
    what guarantees they can never go stale. The seed plus the record count
    fully determine the RNG position (one sub-stream per generation), so a
    reloaded session steps identically.
    """
    p = session.params
    return {
        "schema_version": SCHEMA_VERSION,
        "id": session.id,
        "kind": session.kind.value,
        "params": {
            "kind": p.kind.value,
            "n": p.n,
            "fitness": list(p.fitness),
            "migration_rate": p.migration_rate,
            "migrant_freq": p.migrant_freq,
            "generations": p.generations,
            "seed": p.seed,
            "mode": p.mode,
            "p0": p.p0,
        },
        "created_at": session.created_at.isoformat(),
        "updated_at": session.updated_at.isoformat(),
        "instruction_step": session.instruction_step,
        "records": [
            {
                "t": r.t,
                "source": r.source,
                "counts": {"AA": r.counts.AA, "Aa": r.counts.Aa, "aa": r.counts.aa},
                "note": r.note,
                "warnings": list(r.warnings),
                "model_freqs": (
                    None
                    if r.model_freqs is None
                    else {"p": r.model_freqs.p, "q": r.model_freqs.q}
                ),
                "terminal_status": r.terminal_status,
            }
            for r in session.records
        ],
    }


def session_from_document(doc: dict) -> ExperimentSession:
    """Rebuild a session from its persisted document, recomputing derived rows."""
    if not isinstance(doc, dict) or "schema_version" not in doc:
        raise CorruptPayloadError("not a session document (missing schema_version)")
    version = doc["schema_version"]
    if version != SCHEMA_VERSION:
        raise SchemaVersionError(
            f"document has schema_version {version}; this build reads {SCHEMA_VERSION}"
        )
    try:
        p = doc["params"]
        params = SimulationParams(
            kind=ExperimentKind(p["kind"]),
            n=p["n"],
            fitness=tuple(p["fitness"]),
            migration_rate=p["migration_rate"],
            migrant_freq=p["migrant_freq"],
            generations=p["generations"],
            seed=p["seed"],
            mode=p["mode"],
            p0=p.get("p0"),
        )
        session = ExperimentSession(
            id=doc["id"],
            kind=ExperimentKind(doc["kind"]),
            params=params,
            created_at=datetime.fromisoformat(doc["created_at"]),
            updated_at=datetime.fromisoformat(doc["updated_at"]),
            instruction_step=doc["instruction_step"],
        )
        for r in doc["records"]:
            mf = r.get("model_freqs")
            session.records.append(
                GenerationRecord(
                    t=r["t"],
                    source=r["source"],
                    counts=GenotypeCounts(
                        AA=r["counts"]["AA"], Aa=r["counts"]["Aa"], aa=r["counts"]["aa"]
                    ),
                    derived=None,
                    note=r.get("note", ""),
                    warnings=tuple(r.get("warnings", ())),
                    model_freqs=(
                        None
                        if mf is None
                        else AlleleFrequencies(p=mf["p"], q=mf["q"], normalized=True)
                    ),
                    terminal_status=r.get("terminal_status"),
                )
            )
    except SchemaVersionError:
        raise
    except (KeyError, TypeError, ValueError) as exc:
        raise CorruptPayloadError(f"malformed session document: {exc}") from exc
    _rederive_loaded(session)
    return session


def _rederive_loaded(session: ExperimentSession) -> None:
    """Fill derived cells after a load without touching warnings or status
    (both were persisted as entered)."""
    for i, rec in enumerate(session.records):
        if rec.terminal_status == STATUS_EXTINCT and rec.counts.n == 0:
            continue
        if rec.model_freqs is not None:
            derived = derive_model_row(rec.model_freqs, session.params.n)
        else:
            derived = derive_counts_row(rec.counts)
        session.records[i] = replace(rec, derived=derived)


# --------------------------------------------------------------------------
# API payloads
# --------------------------------------------------------------------------


def record_payload(record: GenerationRecord) -> dict:
    d = record.derived
    return {
        "t": record.t,
        "source": record.source,
        "counts": {"AA": record.counts.AA, "Aa": record.counts.Aa, "aa": record.counts.aa},
        "n": record.counts.n,
        "note": record.note,
        "warnings": list(record.warnings),
        "terminal_status": record.terminal_status,
        "derived": None
        if d is None
        else {
            "counting": {"p": d.counting.p, "q": d.counting.q},
            "sqrt": {"p": d.sqrt.p, "q": d.sqrt.q, "residual": d.sqrt.residual},
            "genotype": {"AA": d.genotype.AA, "Aa": d.genotype.Aa, "aa": d.genotype.aa},
            "expected": {"AA": d.expected.AA, "Aa": d.expected.Aa, "aa": d.expected.aa},
            "chi_square": {
                "statistic": d.chi_square.statistic,
                "df": d.chi_square.df,
                "p_value": d.chi_square.p_value,
                "low_expected_warning": d.chi_square.low_expected_warning,
                "degenerate": d.chi_square.degenerate,
            },
        },
    }


def session_payload(session: ExperimentSession) -> dict:
    p = session.params
    return {
        "id": session.id,
        "kind": session.kind.value,
        "headline_estimator": session.headline_estimator,
        "params": {
            "n": p.n,
            "fitness": list(p.fitness),
            "migration_rate": p.migration_rate,
            "migrant_freq": p.migrant_freq,
            "generations": p.generations,
            "seed": p.seed,
            "mode": p.mode,
            "p0": p.p0,
        },
        "created_at": session.created_at.isoformat(),
        "updated_at": session.updated_at.isoformat(),
        "instruction_step": session.instruction_step,
        "instructions": list(instructions_for(session.kind)),
        "next_generation": session.next_generation,
        "terminal_status": session.terminal_status,
        "records": [record_payload(r) for r in session.records],
    }
