import csv
import io
import json

import pytest

from popgenlab import (
    ExperimentKind,
    GenotypeCounts,
    auto_step,
    create_session,
    export_csv,
    record_manual_counts,
    session_to_document,
)
from popgenlab.cli import main
from popgenlab.session import CSV_HEADER


def run_cli(capsysbinary, *argv):
    code = main(list(argv))
    captured = capsysbinary.readouterr()
    return code, captured.out, captured.err


def parse_rows(data: bytes):
    return list(csv.DictReader(io.StringIO(data.decode())))


class TestSimulate:
    def test_same_seed_same_bytes(self, capsysbinary):
        args = ("simulate", "--kind", "drift", "--n", "30", "--generations", "15", "--seed", "123")
        code1, out1, err1 = run_cli(capsysbinary, *args)
        code2, out2, err2 = run_cli(capsysbinary, *args)
        assert code1 == code2 == 0
        assert out1 == out2
        assert b"seed: 123" in err1

    def test_random_seed_is_printed(self, capsysbinary):
        code, out, err = run_cli(capsysbinary, "simulate", "--kind", "ideal", "--generations", "2")
        assert code == 0
        seed = int(err.split(b"seed:")[1].split()[0])
        code2, out2, _ = run_cli(
            capsysbinary, "simulate", "--kind", "ideal", "--generations", "2", "--seed", str(seed)
        )
        assert code2 == 0
        assert out2 == out

    def test_absorbing_start_is_constant(self, capsysbinary):
        code, out, _ = run_cli(
            capsysbinary,
            "simulate", "--kind", "drift", "--p0", "1.0", "--n", "20",
            "--generations", "50", "--seed", "9",
        )
        assert code == 0
        rows = parse_rows(out)
        assert all(row["p_counting"] == "1" for row in rows)

    def test_deterministic_selection_shows_one_third(self, capsysbinary):
        code, out, _ = run_cli(
            capsysbinary,
            "simulate", "--kind", "selection", "--fitness", "1,1,0",
            "--mode", "deterministic", "--p0", "0.5", "--generations", "1", "--seed", "1",
        )
        assert code == 0
        rows = parse_rows(out)
        assert rows[1]["q_counting"] == "0.333333333333"

    def test_json_format(self, capsysbinary):
        code, out, _ = run_cli(
            capsysbinary,
            "simulate", "--kind", "ideal", "--generations", "3", "--seed", "4",
            "--format", "json",
        )
        assert code == 0
        doc = json.loads(out)
        assert doc["schema_version"] == 1
        assert doc["status"] == "completed"
        assert len(doc["generations"]) == 4

    def test_output_file(self, capsysbinary, tmp_path):
        target = tmp_path / "run.csv"
        code, out, _ = run_cli(
            capsysbinary,
            "simulate", "--kind", "ideal", "--generations", "2", "--seed", "4",
            "--output", str(target),
        )
        assert code == 0
        assert out == b""
        assert target.read_bytes().splitlines()[0].decode() == CSV_HEADER

    def test_unknown_kind_is_usage_error(self, capsysbinary):
        code, _, err = run_cli(capsysbinary, "simulate", "--kind", "wat")
        assert code == 1
        assert b"unknown kind" in err

    def test_missing_kind_is_usage_error(self, capsysbinary):
        code, _, _ = run_cli(capsysbinary, "simulate")
        assert code == 1

    def test_bad_parameter_is_usage_error(self, capsysbinary):
        code, _, err = run_cli(
            capsysbinary, "simulate", "--kind", "selection", "--fitness", "1,1,2", "--seed", "1"
        )
        assert code == 1
        assert b"fitness" in err


class TestBatch:
    def test_lln_csv(self, capsysbinary):
        code, out, err = run_cli(
            capsysbinary,
            "batch", "--study", "lln", "--sizes", "20,200", "--replicates", "200",
            "--p0", "0.5", "--seed", "8",
        )
        assert code == 0
        rows = parse_rows(out)
        assert [row["n"] for row in rows] == ["20", "200"]
        assert float(rows[0]["std_p"]) > float(rows[1]["std_p"])

    def test_fixation_json(self, capsysbinary):
        code, out, _ = run_cli(
            capsysbinary,
            "batch", "--study", "fixation", "--n", "6", "--replicates", "300",
            "--max-generations", "300", "--p0", "0.5", "--seed", "8", "--format", "json",
        )
        assert code == 0
        doc = json.loads(out)
        assert doc["study"] == "fixation"
        assert doc["rows"][0]["fixation_fraction"] == pytest.approx(0.5, abs=0.1)

    def test_single_replicate_is_usage_error(self, capsysbinary):
        code, _, err = run_cli(
            capsysbinary, "batch", "--study", "lln", "--sizes", "20", "--replicates", "1"
        )
        assert code == 1
        assert b"replicates" in err

    def test_lln_requires_sizes(self, capsysbinary):
        code, _, err = run_cli(capsysbinary, "batch", "--study", "lln", "--replicates", "10")
        assert code == 1
        assert b"sizes" in err


class TestAnalyze:
    def test_text_summary(self, capsysbinary):
        code, out, _ = run_cli(capsysbinary, "analyze", "--counts", "30,40,30")
        assert code == 0
        assert b"statistic=4" in out
        assert b"p=0.5" in out

    def test_json_payload(self, capsysbinary):
        code, out, _ = run_cli(capsysbinary, "analyze", "--counts", "25,50,25", "--format", "json")
        doc = json.loads(out)
        assert doc["derived"]["chi_square"]["statistic"] == 0.0

    def test_csv_row(self, capsysbinary):
        code, out, _ = run_cli(capsysbinary, "analyze", "--counts", "36,48,16", "--format", "csv")
        rows = parse_rows(out)
        assert rows[0]["p_counting"] == "0.6"

    def test_bad_counts_usage_error(self, capsysbinary):
        code, _, _ = run_cli(capsysbinary, "analyze", "--counts", "1,2")
        assert code == 1


class TestExport:
    def test_round_trips_saved_session(self, capsysbinary, tmp_path):
        session = create_session(ExperimentKind.DRIFT, n=50, seed=404)
        record_manual_counts(session, 0, GenotypeCounts(13, 25, 12))
        auto_step(session)
        path = tmp_path / "session.json"
        path.write_text(json.dumps(session_to_document(session)), encoding="utf-8")
        code, out, _ = run_cli(capsysbinary, "export", "--input", str(path))
        assert code == 0
        assert out == export_csv(session)

    def test_missing_file_is_runtime_error(self, capsysbinary):
        code, _, err = run_cli(capsysbinary, "export", "--input", "nowhere.json")
        assert code == 2

    def test_not_json_is_runtime_error(self, capsysbinary, tmp_path):
        path = tmp_path / "junk.json"
        path.write_text("{", encoding="utf-8")
        code, _, _ = run_cli(capsysbinary, "export", "--input", str(path))
        assert code == 2


def test_help_exits_zero(capsysbinary):
    code, _, _ = run_cli(capsysbinary, "--help")
    assert code == 0
