import json

import pytest
from hypothesis import given, settings, strategies as st

from popgenlab import (
    CorruptPayloadError,
    ExperimentKind,
    GenotypeCounts,
    NoDataError,
    SchemaVersionError,
    SequenceError,
    SessionNotFoundError,
    SessionStore,
    TerminalSessionError,
    ValidationError,
    WrongTotalError,
    auto_step,
    chart_series,
    create_session,
    export_csv,
    read_ledger_csv,
    record_manual_counts,
    session_from_document,
    session_to_document,
    update_manual_counts,
)
from popgenlab.session import derive_counts_row


def ideal_session(n=100, seed=7, kind=ExperimentKind.IDEAL_COUNTING):
    return create_session(kind, n=n, seed=seed, generations=20)


class TestCreateSession:
    def test_manual_kinds_start_pending(self):
        s = ideal_session()
        assert s.records == []
        assert s.next_generation == 0
        assert s.instruction_step == 0
        assert s.headline_estimator == "counting"

    def test_sqrt_kind_headlines_sqrt(self):
        s = create_session(ExperimentKind.IDEAL_SQRT, n=50, seed=1)
        assert s.headline_estimator == "sqrt"

    def test_default_sizing_is_fifty(self):
        s = create_session(ExperimentKind.DRIFT, seed=1)
        assert s.params.n == 50

    def test_automated_builds_generation_zero(self):
        s = create_session(ExperimentKind.AUTOMATED, p0=0.5, n=50, seed=1)
        assert s.params.mode == "deterministic"
        assert len(s.records) == 1
        rec = s.records[0]
        assert rec.source == "automatic"
        assert rec.counts == GenotypeCounts(13, 25, 12)
        assert rec.model_freqs.p == 0.5
        assert rec.derived.counting.p == 0.5

    def test_automated_requires_p0(self):
        with pytest.raises(ValidationError):
            create_session(ExperimentKind.AUTOMATED, n=50, seed=1)

    def test_invalid_fitness_rejected(self):
        with pytest.raises(ValidationError) as err:
            create_session(ExperimentKind.SELECTION, fitness=(1, 1, -0.1), seed=1)
        assert "fitness.waa" in err.value.fields

    def test_ids_are_unique(self):
        ids = {create_session(ExperimentKind.DRIFT, seed=1).id for _ in range(50)}
        assert len(ids) == 50


class TestRecordManualCounts:
    def test_derived_row_composed(self):
        s = ideal_session()
        rec = record_manual_counts(s, 0, GenotypeCounts(25, 50, 25))
        assert rec.derived.counting.p == 0.5
        assert rec.derived.sqrt.p == 0.5
        assert rec.derived.sqrt.residual == 0.0
        assert rec.derived.chi_square.statistic == 0.0
        assert rec.source == "manual"
        assert s.next_generation == 1
        assert s.instruction_step == 1

    def test_out_of_order_rejected(self):
        s = ideal_session()
        record_manual_counts(s, 0, GenotypeCounts(25, 50, 25))
        with pytest.raises(SequenceError):
            record_manual_counts(s, 2, GenotypeCounts(25, 50, 25))

    def test_wrong_total_message(self):
        s = ideal_session(n=100)
        with pytest.raises(WrongTotalError) as err:
            record_manual_counts(s, 0, GenotypeCounts(10, 10, 10))
        assert "expected N=100 individuals, got 30" in str(err.value)

    def test_selection_permits_attrition(self):
        s = create_session(ExperimentKind.SELECTION, n=100, fitness=(1, 1, 0), seed=1)
        record_manual_counts(s, 0, GenotypeCounts(25, 50, 25))
        rec = record_manual_counts(s, 1, GenotypeCounts(25, 50, 0))
        assert rec.counts.n == 75
        with pytest.raises(WrongTotalError):
            record_manual_counts(s, 2, GenotypeCounts(80, 50, 0))

    def test_conservation_warning_on_miscount(self):
        s = ideal_session(n=100)
        record_manual_counts(s, 0, GenotypeCounts(25, 50, 25))
        ok = record_manual_counts(s, 1, GenotypeCounts(30, 40, 30))  # same p
        assert ok.warnings == ()
        bad = record_manual_counts(s, 2, GenotypeCounts(30, 41, 29))  # p drifted
        assert bad.warnings and "conservation" in bad.warnings[0]

    def test_refused_after_terminal(self):
        s = create_session(ExperimentKind.DRIFT, n=50, seed=1)
        record_manual_counts(s, 0, GenotypeCounts(50, 0, 0))
        assert s.terminal_status == "fixed"
        with pytest.raises(TerminalSessionError):
            record_manual_counts(s, 1, GenotypeCounts(50, 0, 0))


class TestUpdateManualCounts:
    def test_rederives_row(self):
        s = ideal_session(n=100)
        record_manual_counts(s, 0, GenotypeCounts(25, 50, 25))
        updated = update_manual_counts(s, 0, GenotypeCounts(36, 48, 16))
        assert updated.derived.counting.p == pytest.approx(0.6)

    def test_unentered_row_rejected(self):
        s = ideal_session()
        with pytest.raises(SequenceError):
            update_manual_counts(s, 0, GenotypeCounts(25, 50, 25))

    def test_automatic_rows_not_editable(self):
        s = create_session(ExperimentKind.AUTOMATED, p0=0.5, n=50, seed=1)
        with pytest.raises(ValidationError):
            update_manual_counts(s, 0, GenotypeCounts(13, 25, 12))

    def test_editing_generation_zero_rebaselines_warnings(self):
        s = ideal_session(n=100)
        record_manual_counts(s, 0, GenotypeCounts(25, 50, 25))
        record_manual_counts(s, 1, GenotypeCounts(36, 48, 16))
        assert s.records[1].warnings  # p moved 0.5 -> 0.6
        update_manual_counts(s, 0, GenotypeCounts(36, 48, 16))
        assert s.records[1].warnings == ()

    @settings(max_examples=40, deadline=None)
    @given(
        st.lists(
            st.tuples(st.integers(0, 100), st.integers(0, 100)).map(
                lambda xy: GenotypeCounts(xy[0], min(100 - xy[0], xy[1]), 100 - xy[0] - min(100 - xy[0], xy[1]))
            ),
            min_size=1,
            max_size=5,
        ),
        st.data(),
    )
    def test_derived_rows_never_stale(self, layers, data):
        s = ideal_session(n=100)
        for t, counts in enumerate(layers):
            record_manual_counts(s, t, counts)
        target = data.draw(st.integers(0, len(layers) - 1))
        new_counts = data.draw(
            st.integers(0, 100).map(lambda k: GenotypeCounts(k, 100 - k, 0))
        )
        update_manual_counts(s, target, new_counts)
        fresh = derive_counts_row(new_counts)
        assert s.records[target].derived == fresh


class TestAutoStep:
    def test_requires_generation_zero(self):
        s = ideal_session()
        with pytest.raises(SequenceError):
            auto_step(s)

    def test_ideal_conserves_p_exactly(self):
        s = ideal_session(n=100)
        record_manual_counts(s, 0, GenotypeCounts(25, 50, 25))
        for _ in range(10):
            rec = auto_step(s)
            assert rec.derived.counting.p == 0.5
            assert rec.source == "automatic"

    def test_replay_from_same_seed_is_identical(self):
        runs = []
        for _ in range(2):
            s = create_session(ExperimentKind.DRIFT, n=50, seed=2024)
            record_manual_counts(s, 0, GenotypeCounts(13, 25, 12))
            runs.append([auto_step(s).counts for _ in range(8)])
        assert runs[0] == runs[1]

    def test_deterministic_selection_composes_engine_example(self):
        s = create_session(
            ExperimentKind.SELECTION, n=100, fitness=(1, 1, 0), mode="deterministic", seed=1
        )
        record_manual_counts(s, 0, GenotypeCounts(25, 50, 25))
        rec = auto_step(s)
        assert rec.derived.counting.q == pytest.approx(1 / 3, abs=1e-12)
        assert rec.model_freqs is not None

    def test_fixation_is_terminal(self):
        s = create_session(ExperimentKind.DRIFT, n=4, seed=5, generations=500)
        record_manual_counts(s, 0, GenotypeCounts(1, 2, 1))
        while s.terminal_status is None:
            auto_step(s)
        assert s.terminal_status in ("fixed", "lost")
        with pytest.raises(TerminalSessionError):
            auto_step(s)

    def test_gene_flow_deterministic_geometric_identity(self):
        p0, pm, m = 0.2, 0.9, 0.3
        s = create_session(
            ExperimentKind.GENE_FLOW,
            n=50,
            seed=1,
            migration_rate=m,
            migrant_freq=pm,
            mode="deterministic",
        )
        record_manual_counts(s, 0, GenotypeCounts(2, 16, 32))  # gene-counting p = 0.2
        for t in range(1, 12):
            rec = auto_step(s)
            expected_gap = (1 - m) ** t * abs(p0 - pm)
            assert abs(abs(rec.derived.counting.p - pm) - expected_gap) <= 1e-12

    def test_automated_stochastic_mode_override(self):
        s = create_session(ExperimentKind.AUTOMATED, p0=0.5, n=50, seed=6, mode="stochastic")
        assert s.records[0].model_freqs is None
        rec = auto_step(s)
        # ideal chain in stochastic mode conserves the gene pool exactly
        assert rec.derived.counting.p == s.records[0].derived.counting.p

    def test_extinction_appends_terminal_record(self):
        s = create_session(ExperimentKind.SELECTION, n=10, fitness=(0, 0, 0), seed=5)
        record_manual_counts(s, 0, GenotypeCounts(4, 3, 3))
        rec = auto_step(s)
        assert rec.terminal_status == "extinct"
        assert rec.counts.n == 0
        assert rec.derived is None
        with pytest.raises(TerminalSessionError):
            auto_step(s)


class TestChartSeries:
    def one_row_session(self):
        s = ideal_session(n=100)
        record_manual_counts(s, 0, GenotypeCounts(25, 50, 25))
        return s

    def test_stacked_segments_and_labels(self):
        chart = chart_series(self.one_row_session(), "stacked_labeled")
        (column,) = chart.columns
        assert [seg.value for seg in column.segments] == [0.25, 0.50, 0.25]
        assert [seg.label for seg in column.segments] == ["0.25", "0.5", "0.25"]
        assert chart.panels == ()

    def test_line_graph_constant_for_ideal(self):
        s = self.one_row_session()
        for _ in range(6):
            auto_step(s)
        chart = chart_series(s, "line_graph")
        assert len(chart.p) == 7
        assert set(chart.p) == {0.5}

    def test_nested_widths_strictly_increase(self):
        s = self.one_row_session()
        for _ in range(5):
            auto_step(s)
        chart = chart_series(s, "nested_columns")
        for panel in chart.panels:
            widths = [col.width for col in panel.columns]
            assert all(a < b for a, b in zip(widths, widths[1:]))
            assert [col.t for col in panel.columns] == list(range(6))
            assert all(f"= {col.value:.12g}" in col.hover for col in panel.columns)

    def test_segments_sum_to_one(self):
        s = create_session(ExperimentKind.DRIFT, n=50, seed=31)
        record_manual_counts(s, 0, GenotypeCounts(13, 25, 12))
        for _ in range(10):
            if s.terminal_status:
                break
            auto_step(s)
        chart = chart_series(s, "stacked_labeled")
        for column in chart.columns:
            assert sum(seg.value for seg in column.segments) == pytest.approx(1.0, abs=1e-9)

    def test_empty_session_has_no_data(self):
        with pytest.raises(NoDataError):
            chart_series(ideal_session(), "line_graph")

    def test_unknown_variant(self):
        with pytest.raises(ValidationError):
            chart_series(self.one_row_session(), "pie")


class TestCsvRoundTrip:
    def full_session(self):
        s = create_session(ExperimentKind.DRIFT, n=50, seed=99)
        record_manual_counts(s, 0, GenotypeCounts(13, 25, 12), note="parent generation")
        for _ in range(5):
            if s.terminal_status:
                break
            auto_step(s)
        return s

    def test_header_is_exact(self):
        data = export_csv(self.full_session())
        assert data.splitlines()[0] == (
            b"generation,D,H,R,N,p_counting,q_counting,p_sqrt,q_sqrt,sqrt_residual,"
            b"fAA,fAa,faa,chi2,chi2_p,source,note"
        )

    def test_round_trip_counts_exact_and_reals_close(self):
        s = self.full_session()
        rows = read_ledger_csv(export_csv(s))
        assert len(rows) == len(s.records)
        for row, rec in zip(rows, s.records):
            assert row.counts == rec.counts
            assert row.generation == rec.t
            assert row.source == rec.source
            assert row.note == rec.note
            d = rec.derived
            assert abs(row.p_counting - d.counting.p) <= 1e-9
            assert abs(row.q_counting - d.counting.q) <= 1e-9
            assert abs(row.p_sqrt - d.sqrt.p) <= 1e-9
            assert abs(row.sqrt_residual - d.sqrt.residual) <= 1e-9
            assert abs(row.fAA - d.genotype.AA) <= 1e-9
            assert abs(row.chi2 - d.chi_square.statistic) <= 1e-9
            assert abs(row.chi2_p - d.chi_square.p_value) <= 1e-9

    def test_empty_note_cell_is_empty(self):
        s = ideal_session(n=100)
        record_manual_counts(s, 0, GenotypeCounts(25, 50, 25))
        line = export_csv(s).splitlines()[1]
        assert line.endswith(b",manual,")

    def test_lf_endings_and_dot_decimals(self):
        data = export_csv(self.full_session())
        assert b"\r" not in data
        assert b"0.5" in data

    def test_export_empty_session_rejected(self):
        with pytest.raises(NoDataError):
            export_csv(ideal_session())

    def test_bad_header_rejected(self):
        with pytest.raises(CorruptPayloadError):
            read_ledger_csv(b"nope,nope\n1,2\n")


class TestPersistence:
    def drift_session(self, steps=4):
        s = create_session(ExperimentKind.DRIFT, n=50, seed=1234, generations=50)
        record_manual_counts(s, 0, GenotypeCounts(13, 25, 12))
        for _ in range(steps):
            auto_step(s)
        return s

    def test_document_round_trip_field_for_field(self):
        s = self.drift_session()
        clone = session_from_document(session_to_document(s))
        assert clone == s

    def test_json_serializable(self):
        doc = session_to_document(self.drift_session())
        clone = session_from_document(json.loads(json.dumps(doc)))
        assert clone.records == self.drift_session().records

    def test_resume_steps_identically(self):
        a = self.drift_session(steps=3)
        b = session_from_document(session_to_document(a))
        for _ in range(4):
            assert auto_step(a) == auto_step(b)

    def test_future_schema_version_rejected(self):
        doc = session_to_document(self.drift_session())
        doc["schema_version"] = 99
        with pytest.raises(SchemaVersionError):
            session_from_document(doc)

    def test_corrupt_document_rejected(self):
        doc = session_to_document(self.drift_session())
        del doc["params"]
        with pytest.raises(CorruptPayloadError):
            session_from_document(doc)
        with pytest.raises(CorruptPayloadError):
            session_from_document({"hello": "world"})

    def test_store_round_trip_memory(self):
        store = SessionStore()
        s = self.drift_session()
        store.save(s)
        assert store.load(s.id) is s
        with pytest.raises(SessionNotFoundError):
            store.load("missing")

    def test_store_round_trip_disk(self, tmp_path):
        store = SessionStore(tmp_path)
        s = self.drift_session()
        store.save(s)
        reopened = SessionStore(tmp_path)
        assert reopened.load(s.id) == s
        assert reopened.ids() == [s.id]

    def test_store_corrupt_file(self, tmp_path):
        store = SessionStore(tmp_path)
        (tmp_path / "bad.json").write_text("{not json", encoding="utf-8")
        with pytest.raises(CorruptPayloadError):
            store.load("bad")
