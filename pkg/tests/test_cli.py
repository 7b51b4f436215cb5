import csv
import io
import json

import pytest

import main
from core.constants import RowKind
from core.logger import setup_logger
from core.reference_tables import reference_cell

EIGHT_TENTHS = ",".join(["0.1"] * 8)
EIGHT_HALVES = ",".join(["0.5"] * 8)


@pytest.fixture(autouse=True)
def restore_logger():
    yield
    # The CLI points its sink at the runner's stderr, which is closed now
    setup_logger("WARNING")


def invoke(runner, *args):
    return runner.invoke(main.cli, list(args))


class TestBound:
    def test_reference_cell(self, runner):
        result = invoke(
            runner, "bound", "--marginals", EIGHT_TENTHS, "--k", "3"
        )

        assert result.exit_code == 0
        row = result.stdout.splitlines()[-1].split()
        assert row == ["3", "3.8092e-02", "3.8090e-02", "3.8092e-02", "21"]

    def test_single_event(self, runner):
        result = invoke(runner, "bound", "--marginals", "0.5", "--k", "1")

        assert result.exit_code == 0
        assert "(collapsed)" in result.stdout
        assert result.stdout.splitlines()[-1].split()[1:4] == [
            "5.0000e-01"
        ] * 3

    def test_two_events_give_frechet_bounds(self, runner):
        result = invoke(
            runner,
            "bound",
            "--marginals",
            "0.2,0.3",
            "--k",
            "2",
            "--rational",
            "--format",
            "csv",
        )

        assert result.exit_code == 0
        assert result.stdout.splitlines() == [
            "k,exact,lower,upper",
            "2,6.0000e-02,0.0000e+00,2.0000e-01",
        ]

    def test_all_k(self, runner):
        result = invoke(
            runner,
            "bound",
            "--marginals",
            EIGHT_HALVES,
            "--all-k",
            "--rational",
        )

        assert result.exit_code == 0
        lines = result.stdout.splitlines()
        assert lines[0] == "s in [-3.9063e-03, 3.9063e-03], p=3, m=4"
        assert len(lines) == 2 + 8
        assert lines[-1].split()[1:4] == [
            "3.9063e-03",
            "0.0000e+00",
            "7.8125e-03",
        ]

    def test_large_n_keeps_its_width(self, runner):
        result = invoke(
            runner,
            "bound",
            "--marginals",
            ",".join(["0.5"] * 1200),
            "--k",
            "600",
            "--format",
            "json",
        )

        assert result.exit_code == 0
        payload = json.loads(result.stdout)
        assert payload["upper"] - payload["lower"] > 0.0115
        assert payload["collapsed"] is False

    def test_json_uses_short_keys(self, runner):
        result = invoke(
            runner,
            "bound",
            "--marginals",
            "0.2,0.3",
            "--k",
            "1",
            "--format",
            "json",
        )

        payload = json.loads(result.stdout)
        assert {"k", "exact", "lower", "upper"} <= payload.keys()
        assert payload["upper"] == pytest.approx(0.5)
        assert payload["lower"] == pytest.approx(0.3)
        assert payload["exact"] == pytest.approx(0.44)

    def test_precision(self, runner):
        result = invoke(
            runner,
            "bound",
            "--marginals",
            "0.5",
            "--k",
            "1",
            "--precision",
            "8",
        )

        assert "5.0000000e-01" in result.stdout

    def test_needs_exactly_one_threshold(self, runner):
        result = invoke(runner, "bound", "--marginals", "0.5")

        assert result.exit_code == 2
        assert "exactly one of --k or --all-k" in result.stderr

    def test_invalid_marginal(self, runner):
        result = invoke(runner, "bound", "--marginals", "0.1,1.2", "--k", "1")

        assert result.exit_code == 2
        assert "value out of [0,1] at index 2" in result.stderr

    def test_threshold_out_of_range(self, runner):
        result = invoke(runner, "bound", "--marginals", "0.1,0.2", "--k", "3")

        assert result.exit_code == 2
        assert "k=3 out of range" in result.stderr

    def test_internal_error(self, runner, monkeypatch):
        def boom(profile, k):
            raise RuntimeError("boom")

        monkeypatch.setattr(main.bounds_service, "sharp_bounds", boom)
        result = invoke(runner, "bound", "--marginals", "0.5", "--k", "1")

        assert result.exit_code == 1
        assert "Internal error: boom" in result.stderr


class TestInterval:
    @pytest.mark.parametrize(
        "marginals, expected",
        [
            ("0.5,0.5,0.5", "[-1.2500e-01, 1.2500e-01], p=1, m=1"),
            ("0.1,0.2,0.3,0.4", "[-2.4000e-03, 3.6000e-03], p=1, m=2"),
            ("0.0,0.5", "[0.0000e+00, 0.0000e+00], p=0, m=1"),
        ],
    )
    def test_text(self, runner, marginals, expected):
        result = invoke(runner, "interval", "--marginals", marginals)

        assert result.exit_code == 0
        assert result.stdout == expected + "\n"

    def test_json(self, runner):
        result = invoke(
            runner,
            "interval",
            "--marginals",
            "0.0,0.5",
            "--format",
            "json",
        )

        assert json.loads(result.stdout)["collapsed"] is True

    def test_input_file(self, runner, tmp_path):
        path = tmp_path / "profile.json"
        path.write_text(json.dumps({"marginals": [0.5, 0.5, 0.5]}))

        result = invoke(runner, "interval", "--input", str(path))

        assert result.exit_code == 0
        assert result.stdout.startswith("[-1.2500e-01, 1.2500e-01]")

    def test_missing_file(self, runner, tmp_path):
        result = invoke(
            runner, "interval", "--input", str(tmp_path / "missing.csv")
        )

        assert result.exit_code == 2
        assert "Error:" in result.stderr

    def test_both_sources(self, runner, tmp_path):
        result = invoke(
            runner,
            "interval",
            "--marginals",
            "0.5",
            "--input",
            str(tmp_path / "x.csv"),
        )

        assert result.exit_code == 2


class TestMeasure:
    def test_even_parity_atoms(self, runner):
        result = invoke(
            runner,
            "measure",
            "--marginals",
            "0.5,0.5,0.5",
            "--s=-0.125",
            "--format",
            "json",
        )

        assert result.exit_code == 0
        payload = json.loads(result.stdout)
        assert set(payload) == {"n", "s", "atoms"}
        assert payload["s"] == -0.125
        atoms = payload["atoms"]
        assert len(atoms) == 8
        for atom in atoms:
            expected = 0.25 if len(atom["subset"]) % 2 else 0.0
            assert atom["prob"] == expected

    def test_zero_endpoint_is_product_measure(self, runner):
        result = invoke(
            runner,
            "measure",
            "--marginals",
            "0.4,0.1",
            "--s-endpoint",
            "zero",
            "--rational",
            "--format",
            "csv",
        )

        assert result.exit_code == 0
        assert result.stdout.splitlines() == [
            "subset,probability",
            ",5.4000e-01",
            "2,6.0000e-02",
            "1,3.6000e-01",
            "1 2,4.0000e-02",
        ]

    def test_text_header(self, runner):
        result = invoke(
            runner,
            "measure",
            "--marginals",
            "0.5,0.5,0.5",
            "--s-endpoint",
            "max",
        )

        assert result.stdout.splitlines()[0] == "n=3 s=1.2500e-01"

    def test_outside_interval(self, runner):
        result = invoke(
            runner, "measure", "--marginals", "0.5,0.5,0.5", "--s", "0.2"
        )

        assert result.exit_code == 2
        assert "s outside feasible interval" in result.stderr


class TestTable:
    @pytest.mark.parametrize("preset", ["paper-table-1", "paper-table-2"])
    def test_preset_matches_reference_rows(self, runner, preset):
        result = invoke(runner, "table", "--preset", preset, "--format", "csv")

        assert result.exit_code == 0
        rows = list(csv.DictReader(io.StringIO(result.stdout)))
        assert len(rows) == 5 * 4 * 5
        checked = 0
        for row in rows:
            kind = RowKind(row["row"])
            if kind in (
                RowKind.SHARP_LOWER,
                RowKind.EXACT,
                RowKind.SHARP_UPPER,
            ):
                expected = reference_cell(row["level"], int(row["k"]), kind)
                assert row["value"] == expected, row
                checked += 1
        assert checked == 60

    def test_text_marks_makarov_deviations(self, runner):
        result = invoke(runner, "table", "--preset", "paper-table-1")

        assert result.exit_code == 0
        assert result.stdout.startswith("n = 8\n")
        assert "a = 0.3" in result.stdout
        assert "* Makarov cell differs from the reference table" in (
            result.stdout
        )

    def test_zero_threshold_is_certain(self, runner):
        result = invoke(
            runner,
            "table",
            "--n",
            "6",
            "--levels",
            "0.1,0.5",
            "--k-range",
            "0:0",
            "--format",
            "csv",
        )

        assert result.exit_code == 0
        rows = list(csv.DictReader(io.StringIO(result.stdout)))
        assert len(rows) == 10
        assert {row["value"] for row in rows} == {"1.0000e+00"}

    def test_unknown_preset(self, runner):
        result = invoke(runner, "table", "--preset", "paper-table-3")

        assert result.exit_code == 2
        assert "unknown table preset" in result.stderr

    def test_bad_k_range(self, runner):
        result = invoke(
            runner, "table", "--n", "4", "--levels", "0.2", "--k-range", "3:1"
        )

        assert result.exit_code == 2

    def test_preset_excludes_custom_options(self, runner):
        result = invoke(
            runner, "table", "--preset", "paper-table-1", "--n", "4"
        )

        assert result.exit_code == 2


class TestVerify:
    def test_mixed_profile(self, runner):
        result = invoke(
            runner,
            "verify",
            "--marginals",
            "0.1,0.2,0.3,0.4",
            "--grid",
            "101",
        )

        assert result.exit_code == 0
        lines = result.stdout.splitlines()
        assert lines[0].startswith("PASS n=4 measures=11")
        assert lines[-1] == "PASS: 1/1 profiles"

    def test_rational_halves_are_exact(self, runner):
        result = invoke(
            runner,
            "verify",
            "--marginals",
            EIGHT_HALVES,
            "--rational",
            "--grid",
            "21",
        )

        assert result.exit_code == 0
        assert "normalization=0.0000e+00" in result.stdout
        assert "tail=0.0000e+00" in result.stdout
        assert result.stdout.endswith("PASS: 1/1 profiles\n")

    def test_random_profiles(self, runner):
        result = invoke(
            runner,
            "verify",
            "--count",
            "3",
            "--max-n",
            "4",
            "--seed",
            "7",
            "--grid",
            "11",
            "--samples",
            "3",
        )

        assert result.exit_code == 0
        assert result.stdout.splitlines()[-1] == "PASS: 3/3 profiles (seed 7)"

    def test_json(self, runner):
        result = invoke(
            runner,
            "verify",
            "--marginals",
            "0.3,0.6",
            "--grid",
            "5",
            "--format",
            "json",
        )

        (run,) = json.loads(result.stdout)
        assert run["passed"] is True
        assert run["marginals"] == [0.3, 0.6]

    def test_enumeration_cap(self, runner):
        result = invoke(
            runner, "verify", "--marginals", ",".join(["0.5"] * 21)
        )

        assert result.exit_code == 2
        assert "exceeds the enumeration cap" in result.stderr
