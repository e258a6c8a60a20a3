import csv
import io
import json
import subprocess
import sys

import pytest

from conftest import log_line
from toksat.cli import main


def run_cli(*argv, capsys=None):
    try:
        code = main([str(a) for a in argv])
    except SystemExit as exc:  # argparse usage errors exit directly
        code = exc.code
    out, err = capsys.readouterr()
    return code, out, err


def parse_csv(text):
    rows = list(csv.reader(io.StringIO(text)))
    return rows[0], rows[1:]


class TestValidate:
    def test_clean_corpus(self, tmp_corpus, capsys):
        logs, _, _ = tmp_corpus
        code, out, err = run_cli("validate", "--logs", logs, "--k", "3", capsys=capsys)
        assert code == 0
        assert out.strip() == "24 records, 0 diagnostics"

    def test_diagnostics_printed_per_utterance(self, tmp_corpus, capsys):
        logs, _, _ = tmp_corpus
        code, out, err = run_cli("validate", "--logs", logs, "--k", "5", capsys=capsys)
        assert code == 0
        lines = out.strip().splitlines()
        assert lines[-1] == "24 records, 24 diagnostics"
        assert lines[0].startswith("aa-0\tKMismatch: step 0 has 3 candidates")

    def test_malformed_log_is_input_error(self, tmp_path, capsys):
        bad = tmp_path / "bad.jsonl"
        bad.write_text('{"utt_id": "u1"\n', encoding="utf-8")
        code, out, err = run_cli("validate", "--logs", str(bad), capsys=capsys)
        assert code == 1
        assert "error" in err

    def test_missing_file_is_input_error(self, tmp_path, capsys):
        code, out, err = run_cli(
            "validate", "--logs", str(tmp_path / "absent.jsonl"), capsys=capsys
        )
        assert code == 1


class TestUsageErrors:
    def test_missing_required_flag(self, capsys):
        code, out, err = run_cli("validate", capsys=capsys)
        assert code == 1
        assert "required" in err

    def test_unknown_subcommand(self, capsys):
        code, out, err = run_cli("frobnicate", capsys=capsys)
        assert code == 1

    def test_no_subcommand_prints_help(self, capsys):
        code, out, err = run_cli(capsys=capsys)
        assert code == 1
        assert "COMMAND" in err

    def test_bad_flag_value(self, capsys):
        code, out, err = run_cli("validate", "--logs", "x", "--k", "many", capsys=capsys)
        assert code == 1


class TestNarrowCommands:
    def test_discover_stdout(self, tmp_corpus, capsys):
        logs, _, _ = tmp_corpus
        code, out, err = run_cli("discover", "--logs", logs, capsys=capsys)
        assert code == 0
        header, rows = parse_csv(out)
        assert header == ["language", "checkpoint_min", "unique_tokens"]
        aa = [r for r in rows if r[0] == "aa"]
        assert len(aa) == 12
        counts = [int(r[2]) for r in aa]
        assert counts[0] == 30 and counts[-1] == 36
        assert all(a <= b for a, b in zip(counts, counts[1:]))

    def test_discover_out_dir(self, tmp_corpus, tmp_path, capsys):
        logs, _, _ = tmp_corpus
        out_dir = tmp_path / "csv"
        code, out, err = run_cli(
            "discover", "--logs", logs, "--out", str(out_dir), capsys=capsys
        )
        assert code == 0
        target = out_dir / "discovery.csv"
        assert str(target) in out
        assert target.read_text(encoding="utf-8").startswith("language,")

    def test_fit_reports_both_languages(self, tmp_corpus, capsys):
        logs, _, _ = tmp_corpus
        code, out, err = run_cli("fit", "--logs", logs, capsys=capsys)
        assert code == 0
        header, rows = parse_csv(out)
        assert header[:5] == ["language", "A", "k", "B", "t90_minutes"]
        assert [r[0] for r in rows] == ["aa", "bb"]
        for row in rows:
            # Either a full parameter row or a named failure, never silence.
            assert (row[1] != "") != (row[-1] != "")

    def test_zipf_constant_frequencies(self, tmp_corpus, capsys):
        logs, _, _ = tmp_corpus
        code, out, err = run_cli("zipf", "--logs", logs, capsys=capsys)
        assert code == 0
        header, rows = parse_csv(out)
        assert [r[0] for r in rows] == ["aa", "bb"]
        for row in rows:
            assert int(row[header.index("n_points")]) == 36
            assert float(row[header.index("zipf_alpha")]) == pytest.approx(0.0, abs=1e-9)
            assert row[header.index("chosen_model")] == "zipf"

    def test_zipf_off_grid_horizon(self, tmp_corpus, capsys):
        logs, _, _ = tmp_corpus
        code, out, err = run_cli(
            "zipf", "--logs", logs, "--horizon-min", "35", capsys=capsys
        )
        assert code == 1
        assert "checkpoint" in err

    def test_granularity_with_refs(self, tmp_corpus, capsys):
        logs, _, refs = tmp_corpus
        code, out, err = run_cli(
            "granularity", "--logs", logs, "--refs", refs, capsys=capsys
        )
        assert code == 0
        header, rows = parse_csv(out)
        for row in rows:
            assert float(row[header.index("cer")]) == 0.0
            assert row[header.index("included_cer")] == "true"
            assert float(row[header.index("mean_token_length")]) > 0

    def test_granularity_without_refs(self, tmp_corpus, capsys):
        logs, _, _ = tmp_corpus
        code, out, err = run_cli("granularity", "--logs", logs, capsys=capsys)
        assert code == 0
        header, rows = parse_csv(out)
        for row in rows:
            assert row[header.index("cer")] == ""
            assert row[header.index("included_cer")] == "true"

    def test_granularity_off_grid_cer_horizon(self, tmp_corpus, capsys):
        logs, _, refs = tmp_corpus
        code, out, err = run_cli(
            "granularity", "--logs", logs, "--refs", refs,
            "--cer-horizon-min", "15", capsys=capsys,
        )
        assert code == 1


class TestStatsAndReport:
    def test_stats_csv(self, tmp_corpus, capsys):
        logs, meta, refs = tmp_corpus
        code, out, err = run_cli(
            "stats", "--logs", logs, "--meta", meta, "--refs", refs,
            "--k", "3", capsys=capsys,
        )
        assert code == 0
        header, rows = parse_csv(out)
        assert header == ["statistic", "value"]
        table = {r[0]: r[1] for r in rows}
        assert table["n_languages"] == "2"

    def test_stats_json(self, tmp_corpus, capsys):
        logs, meta, refs = tmp_corpus
        code, out, err = run_cli(
            "stats", "--logs", logs, "--meta", meta, "--format", "json",
            "--k", "3", capsys=capsys,
        )
        assert code == 0
        stats = json.loads(out)
        assert stats["n_languages"] == 2

    def test_report_writes_artifacts(self, tmp_corpus, tmp_path, capsys):
        logs, meta, refs = tmp_corpus
        out_dir = tmp_path / "report"
        code, out, err = run_cli(
            "report", "--logs", logs, "--meta", meta, "--refs", refs,
            "--k", "3", "--out", str(out_dir), capsys=capsys,
        )
        assert code == 0
        assert (out_dir / "summary.csv").is_file()
        assert (out_dir / "stats.csv").is_file()
        assert (out_dir / "report.json").is_file()
        svgs = sorted(p.name for p in (out_dir / "figures").iterdir())
        assert svgs == [
            "discovery_vs_hours.svg",
            "rank_frequency.svg",
            "saturation_curves.svg",
            "token_length_vs_hours.svg",
        ]
        assert len(out.strip().splitlines()) == 7

    def test_report_single_format(self, tmp_corpus, tmp_path, capsys):
        logs, meta, refs = tmp_corpus
        out_dir = tmp_path / "report"
        code, out, err = run_cli(
            "report", "--logs", logs, "--meta", meta, "--k", "3",
            "--out", str(out_dir), "--format", "csv", capsys=capsys,
        )
        assert code == 0
        assert (out_dir / "summary.csv").is_file()
        assert not (out_dir / "report.json").exists()
        assert not (out_dir / "figures").exists()

    def test_no_languages_exit_2(self, tmp_corpus, tmp_path, capsys):
        logs, _, _ = tmp_corpus
        meta = tmp_path / "other_meta.csv"
        meta.write_text("language,script,train_hours\nzz,Latin,10\n", encoding="utf-8")
        out_dir = tmp_path / "report"
        code, out, err = run_cli(
            "report", "--logs", logs, "--meta", str(meta), "--k", "3",
            "--out", str(out_dir), capsys=capsys,
        )
        assert code == 2

    def test_exclude_language_flag(self, tmp_corpus, capsys):
        logs, meta, refs = tmp_corpus
        code, out, err = run_cli(
            "stats", "--logs", logs, "--meta", meta, "--format", "json",
            "--k", "3", "--exclude-language", "bb", capsys=capsys,
        )
        assert code == 0
        stats = json.loads(out)
        assert stats["n_languages"] == 1
        assert stats["excluded_by_flag"] == ["bb"]


class TestSynth:
    def test_generates_coherent_corpus(self, tmp_path, capsys):
        out_dir = tmp_path / "synth"
        code, out, err = run_cli(
            "synth", "--seed", "5", "--out", str(out_dir), "--languages", "2",
            "--minutes", "6", "--k", "8", capsys=capsys,
        )
        assert code == 0
        logs = out_dir / "logs.jsonl"
        assert logs.is_file()
        assert (out_dir / "meta.csv").is_file()
        assert (out_dir / "refs.tsv").is_file()
        code, out, err = run_cli(
            "validate", "--logs", str(logs), "--k", "8", capsys=capsys
        )
        assert code == 0
        assert out.strip().endswith("0 diagnostics")

    def test_same_seed_byte_identical(self, tmp_path, capsys):
        blobs = []
        for name in ("a", "b"):
            out_dir = tmp_path / name
            code, _, _ = run_cli(
                "synth", "--seed", "0xDEAD", "--out", str(out_dir),
                "--languages", "2", "--minutes", "4", "--k", "6", capsys=capsys,
            )
            assert code == 0
            blobs.append(tuple(
                (out_dir / f).read_bytes()
                for f in ("logs.jsonl", "meta.csv", "refs.tsv")
            ))
        assert blobs[0] == blobs[1]

    def test_different_seed_differs(self, tmp_path, capsys):
        texts = []
        for seed in ("1", "2"):
            out_dir = tmp_path / f"s{seed}"
            run_cli("synth", "--seed", seed, "--out", str(out_dir),
                    "--languages", "1", "--minutes", "4", "--k", "6", capsys=capsys)
            texts.append((out_dir / "logs.jsonl").read_text(encoding="utf-8"))
        assert texts[0] != texts[1]


class TestEntryPoint:
    def test_module_invocation(self, tmp_path):
        log = tmp_path / "one.jsonl"
        log.write_text(log_line("u1") + "\n", encoding="utf-8")
        proc = subprocess.run(
            [sys.executable, "-m", "toksat", "validate", "--logs", str(log), "--k", "2"],
            capture_output=True,
            text=True,
        )
        assert proc.returncode == 0
        assert "1 records, 0 diagnostics" in proc.stdout
