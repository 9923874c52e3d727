"""Command-line behavior: subcommands, exit codes, file outputs."""

from __future__ import annotations

import pytest

from cnot_cavity_sim.cli import DEFAULTS_FILENAME, main

SMALL_SWEEP = ["sweep", "--ks-count", "3", "--g-count", "3"]


@pytest.fixture(autouse=True)
def run_in_tmp(tmp_path, monkeypatch):
    # every test gets a fresh cwd so defaults files and outputs stay isolated
    monkeypatch.chdir(tmp_path)
    return tmp_path


class TestPoint:
    def test_quoted_point(self, capsys):
        assert main(["point", "--ks-ratio", "0.01", "--g-ratio", "0.01"]) == 0
        out = capsys.readouterr().out
        assert "avg_fidelity=0.9050" in out
        assert "p_success_control_R=0.990099" in out
        assert "p_success_control_L=0.821828" in out
        assert "t0=-0.995024875622" in out

    def test_f_uc_out_of_range(self, capsys):
        assert main(["point", "--f-uc", "1.5"]) == 2
        assert "--f-uc" in capsys.readouterr().err

    def test_degenerate_parameters_still_run(self, capsys):
        code = main(["point", "--ks-ratio", "1e-9", "--g-ratio", "1e-9",
                     "--f-uc", "0.25"])
        assert code == 0
        assert "avg_fidelity=0.5937" in capsys.readouterr().out

    def test_monte_carlo_reports_standard_error(self, capsys):
        code = main(["point", "--avg", "monte_carlo", "--samples", "5000",
                     "--seed", "3"])
        assert code == 0
        assert "std_error=" in capsys.readouterr().out

    def test_bad_convention_string(self, capsys):
        assert main(["point", "--convention", "flipboth/raw"]) == 2
        assert "--convention" in capsys.readouterr().err

    def test_explicit_convention_is_used(self, capsys):
        assert main(["point", "--convention", "flipl/negated/renorm/basis"]) == 0
        assert "convention=flipl/negated/renorm/basis" in capsys.readouterr().out


class TestSweep:
    def test_writes_outputs_and_reports_max(self, run_in_tmp, capsys):
        code = main(SMALL_SWEEP + ["--out", "s.csv", "--pgm", "s.pgm",
                                   "--png", "s.png"])
        assert code == 0
        out = capsys.readouterr().out
        assert "max=" in out and "regime=weak" in out
        assert (run_in_tmp / "s.csv").is_file()
        assert (run_in_tmp / "s.pgm").read_text().startswith("P2\n3 3\n255\n")
        assert (run_in_tmp / "s.png").read_bytes().startswith(b"\x89PNG")

    def test_repeat_runs_are_byte_identical(self, run_in_tmp, capsys):
        assert main(SMALL_SWEEP + ["--out", "a.csv", "--pgm", "a.pgm"]) == 0
        assert main(SMALL_SWEEP + ["--out", "b.csv", "--pgm", "b.pgm"]) == 0
        assert (run_in_tmp / "a.csv").read_bytes() == (run_in_tmp / "b.csv").read_bytes()
        assert (run_in_tmp / "a.pgm").read_bytes() == (run_in_tmp / "b.pgm").read_bytes()

    def test_serial_matches_parallel(self, run_in_tmp, capsys):
        argv = SMALL_SWEEP + ["--avg", "monte_carlo", "--samples", "1000"]
        assert main(argv + ["--out", "ser.csv", "--serial"]) == 0
        assert main(argv + ["--out", "par.csv"]) == 0
        assert (run_in_tmp / "ser.csv").read_bytes() == (run_in_tmp / "par.csv").read_bytes()

    def test_single_cell_grid(self, run_in_tmp, capsys):
        code = main(["sweep", "--ks-min", "0.01", "--ks-count", "1",
                     "--g-min", "0.01", "--g-count", "1", "--out", "one.csv"])
        assert code == 0
        lines = (run_in_tmp / "one.csv").read_text().splitlines()
        assert len(lines) == 5

    def test_bad_axis_is_usage_error(self, capsys):
        assert main(["sweep", "--ks-min", "0", "--ks-scale", "log"]) == 2
        assert "--ks-min" in capsys.readouterr().err

    def test_unwritable_output_is_io_error(self, capsys):
        code = main(SMALL_SWEEP + ["--out", "no/such/dir/s.csv"])
        assert code == 3
        assert "s.csv" in capsys.readouterr().err

    def test_thread_cap_env_must_be_positive(self, monkeypatch, capsys):
        monkeypatch.setenv("CNOTSIM_THREADS", "zero")
        assert main(SMALL_SWEEP + ["--out", "s.csv"]) == 2
        assert "CNOTSIM_THREADS" in capsys.readouterr().err

    def test_thread_cap_env_accepted(self, monkeypatch, capsys):
        monkeypatch.setenv("CNOTSIM_THREADS", "2")
        assert main(SMALL_SWEEP + ["--out", "s.csv"]) == 0


class TestConventions:
    def test_default_search_matches(self, capsys):
        assert main(["conventions"]) == 0
        out = capsys.readouterr().out
        table = [line for line in out.splitlines() if line.count("/") == 3]
        assert len(table) == 36
        assert "flipboth/aswritten/raw/haar" in table[0]
        assert "match" in table[0]

    def test_unreachable_target_exits_one(self, capsys):
        assert main(["conventions", "--target", "0.999", "--tol", "1e-6"]) == 1
        assert "matched=0" in capsys.readouterr().out

    def test_everything_matches_with_huge_tolerance(self, capsys):
        assert main(["conventions", "--tol", "1"]) == 0
        out = capsys.readouterr().out
        assert sum("match" in line for line in out.splitlines()
                   if line.count("/") == 3) == 36

    def test_bad_target(self, capsys):
        assert main(["conventions", "--target", "0"]) == 2
        assert "--target" in capsys.readouterr().err

    def test_pin_writes_defaults_file(self, run_in_tmp, capsys):
        assert main(["conventions", "--pin"]) == 0
        pinned = (run_in_tmp / DEFAULTS_FILENAME).read_text()
        assert "flipboth/aswritten/raw/haar" in pinned

    def test_pinned_convention_used_by_point(self, run_in_tmp, capsys):
        assert main(["conventions", "--pin"]) == 0
        capsys.readouterr()
        assert main(["point"]) == 0
        assert "convention=flipboth/aswritten/raw/haar" in capsys.readouterr().out

    def test_flag_overrides_pinned_convention(self, run_in_tmp, capsys):
        (run_in_tmp / DEFAULTS_FILENAME).write_text("flipl/negated/renorm/basis\n")
        assert main(["point", "--convention", "flipboth/aswritten/raw/uniform"]) == 0
        assert "convention=flipboth/aswritten/raw/uniform" in capsys.readouterr().out

    def test_corrupt_defaults_file_is_usage_error(self, run_in_tmp, capsys):
        (run_in_tmp / DEFAULTS_FILENAME).write_text("not/a/convention\n")
        assert main(["point"]) == 2
        assert DEFAULTS_FILENAME in capsys.readouterr().err


class TestCrosscheck:
    def test_pipeline_agrees_with_closed_form(self, capsys):
        code = main(["crosscheck", "--trials", "50", "--param-sets", "3"])
        assert code == 0
        out = capsys.readouterr().out
        assert "max_deviation=" in out

    def test_seeded_runs_are_identical(self, capsys):
        assert main(["crosscheck", "--trials", "20", "--param-sets", "2",
                     "--seed", "9"]) == 0
        first = capsys.readouterr().out
        assert main(["crosscheck", "--trials", "20", "--param-sets", "2",
                     "--seed", "9"]) == 0
        assert capsys.readouterr().out == first

    def test_single_trial(self, capsys):
        assert main(["crosscheck", "--trials", "1", "--param-sets", "1"]) == 0

    def test_trials_validated(self, capsys):
        assert main(["crosscheck", "--trials", "0"]) == 2
        assert "--trials" in capsys.readouterr().err


class TestParsing:
    def test_no_subcommand_is_usage_error(self, capsys):
        assert main([]) == 2

    def test_unknown_flag_is_usage_error(self, capsys):
        assert main(["point", "--nonsense"]) == 2

    def test_help_exits_zero(self, capsys):
        assert main(["--help"]) == 0
        assert "point" in capsys.readouterr().out
