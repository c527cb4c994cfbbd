import json
from pathlib import Path

import pytest

from weyl_lab.core.domain.result import ResultRecord
from weyl_lab.features.measure_scan.domain.models import SERIES_LIMIT
from weyl_lab.infrastructure.persistence.recorder import read_table
from weyl_lab.presentation.app_command import CommandFactory
from weyl_lab.presentation.cli import run, run_command

SUBCOMMANDS = (
    "eval batch flat moment2 moment4 momentq variance repcount qcount powerpairs profile "
    "cf osc vaughan baker arcs dims disc koksma pattern cantor dimest mass "
    "eps0 frac ladder cexA panel"
).split()


@pytest.fixture
def isolated(tmp_path: Path, monkeypatch: pytest.MonkeyPatch) -> list[str]:
    """存在しない設定ファイルと保存なしで実行する共通フラグ"""
    monkeypatch.delenv("WEYL_LAB_BUDGET", raising=False)
    return ["--config", str(tmp_path / "missing.toml"), "--no-save"]


def _ok(argv: list[str]) -> ResultRecord:
    code, record = run_command(argv)
    assert code == 0
    assert record is not None
    return record


def test_every_subcommand_is_registered() -> None:
    names = [c.name for c in CommandFactory.create_commands()]
    assert set(SUBCOMMANDS) <= set(names)
    assert "config" in names
    assert "records" in names


class TestExitCodes:
    def test_unknown_subcommand(self, capsys: pytest.CaptureFixture[str]) -> None:
        assert run(["frobnicate"]) == 1
        assert "usage" in capsys.readouterr().err

    def test_no_subcommand(self) -> None:
        assert run([]) == 1

    def test_help(self) -> None:
        assert run(["--help"]) == 0

    def test_bad_flag_value(self, isolated: list[str]) -> None:
        assert run(["repcount", "--d", "3", "--n", "twelve", *isolated]) == 2

    def test_missing_required_flag(self, isolated: list[str]) -> None:
        assert run(["eval", "--n", "10", *isolated]) == 2

    def test_validation_error(self, isolated: list[str]) -> None:
        assert run(["repcount", "--d", "1", "--n", "12", *isolated]) == 2

    def test_bad_interval(self, isolated: list[str]) -> None:
        assert run(["moment4", "--d", "3", "--n", "10", "--interval", "0.5,0.2", *isolated]) == 2

    def test_budget_exceeded(self, isolated: list[str]) -> None:
        argv = ["moment4", "--d", "3", "--n", "200", "--budget", "10", *isolated]
        assert run(argv) == 3

    def test_budget_from_env(self, isolated: list[str], monkeypatch: pytest.MonkeyPatch) -> None:
        monkeypatch.setenv("WEYL_LAB_BUDGET", "10")
        assert run(["moment4", "--d", "3", "--n", "200", *isolated]) == 3

    def test_invalid_budget_flag(self, isolated: list[str]) -> None:
        assert run(["repcount", "--d", "3", "--n", "12", "--budget", "0", *isolated]) == 2


class TestSubcommands:
    def test_repcount_taxicab(self, isolated: list[str]) -> None:
        record = _ok(["repcount", "--d", "3", "--k", "0", "--n", "12", *isolated])
        assert record.outputs["total"] == 284
        assert record.outputs["nondiagonal"] == 8

    def test_dims(self, isolated: list[str]) -> None:
        record = _ok(["dims", "--d", "2", "--alpha", "0.6", *isolated])
        assert record.outputs["s"] == pytest.approx(1.7, abs=1e-12)
        assert record.outputs["u"] == pytest.approx(1.75, abs=1e-12)
        assert record.outputs["s_exact"] == "17/10"
        assert record.outputs["boundary_alpha"] is False

    def test_eval(self, isolated: list[str], capsys: pytest.CaptureFixture[str]) -> None:
        record = _ok(["eval", "--d", "3", "--x", "0.1,0.2,0.3", "--n", "1000", *isolated])
        value = record.outputs["value"]
        assert set(value) == {"re", "im"}
        assert record.outputs["magnitude"] == pytest.approx(abs(complex(value["re"], value["im"])))
        assert record.config["params"]["n"] == 1000
        assert record.config["lab"]["save_records"] is False
        assert '"schema": 1' in capsys.readouterr().out

    def test_eval_is_reproducible(self, isolated: list[str]) -> None:
        argv = ["eval", "--x", "0.3", "--d", "3", "--n", "500", "--weights", "random", *isolated]
        assert _ok(argv).outputs == _ok(argv).outputs

    def test_batch_independent_of_workers(self, isolated: list[str]) -> None:
        argv = ["batch", "--d", "2", "--n", "300", "--grid", "32", *isolated]
        one = _ok(argv)
        three = _ok([*argv, "--workers", "3"])
        assert one.outputs == three.outputs

    def test_qcount_diagonal(self, isolated: list[str]) -> None:
        record = _ok(["qcount", "--n", "100", *isolated])
        assert record.outputs["total"] == 2 * 100 * 100 - 100

    def test_cf(self, isolated: list[str]) -> None:
        record = _ok(["cf", "--x", "0.3333333333333333", "--q-max", "10", *isolated])
        assert (record.outputs["a"], record.outputs["q"]) == (1, 3)

    def test_eps0(self, isolated: list[str]) -> None:
        record = _ok(["eps0", "--c", "0.5", "--C", "2", *isolated])
        assert record.outputs["epsilon0"] == pytest.approx(0.0625)

    def test_dimest_thirds_reference(self, isolated: list[str]) -> None:
        argv = ["dimest", "--gamma", "3", "--tau", "0.1", "--rule", "power", "--power", "8"]
        record = _ok([*argv, *isolated])
        assert record.outputs["estimate"] == pytest.approx(record.outputs["reference"], abs=0.1)

    def test_mass_middle_thirds(self, isolated: list[str]) -> None:
        record = _ok(["mass", "--t", "0.6", *isolated])
        assert record.outputs["max_ratio"] <= 4.0

    def test_cexa(self, isolated: list[str]) -> None:
        record = _ok(["cexA", "--n-max", "1000", *isolated])
        assert record.outputs["result"]["measure_bound"] == pytest.approx(SERIES_LIMIT, abs=1e-3)

    def test_moment2_orthogonality(self, isolated: list[str]) -> None:
        record = _ok(["moment2", "--gamma", "3", "--n", "50", *isolated])
        assert record.outputs["total"] == pytest.approx(50.0, rel=1e-9)

    def test_moment4_matches_repcount(self, isolated: list[str]) -> None:
        moment = _ok(["moment4", "--d", "2", "--n", "20", *isolated])
        count = _ok(["repcount", "--d", "2", "--n", "20", *isolated])
        assert moment.outputs["total"] == pytest.approx(count.outputs["total"], rel=1e-9)

    def test_momentq_full_box(self, isolated: list[str]) -> None:
        argv = ["momentq", "--n", "10", "--interval", "0,1", "--interval", "0,1"]
        record = _ok([*argv, *isolated])
        assert record.outputs["total"] == pytest.approx(2 * 10 * 10 - 10, rel=1e-9)

    def test_momentq_needs_box(self, isolated: list[str]) -> None:
        assert run(["momentq", "--n", "10", *isolated]) == 2

    def test_variance(self, isolated: list[str]) -> None:
        argv = ["variance", "--gamma", "3", "--x1", "0.1", "--eps1", "0.01", "--eps0", "0.01"]
        record = _ok([*argv, "--n", "40", "--samples", "16", *isolated])
        assert record.outputs["value"] >= 0
        assert record.outputs["M"] == 20

    def test_powerpairs(self, isolated: list[str]) -> None:
        record = _ok(["powerpairs", "--d", "2", "--k", "5", "--n", "10", *isolated])
        assert record.outputs["count"] == 1
        assert record.outputs["pairs"] == [[3, 2]]

    def test_profile(self, isolated: list[str]) -> None:
        record = _ok(["profile", "--d", "3", "--n", "30", "--samples", "8", *isolated])
        assert record.outputs["shifts"] >= 1
        assert record.outputs["max_count"] >= 0

    def test_profile_exhaustive(self, isolated: list[str]) -> None:
        argv = ["profile", "--d", "3", "--n", "12", "--exhaustive", *isolated]
        record = _ok(argv)
        assert record.outputs["max_count"] >= 2
        assert record.outputs["shifts"] > 100

    def test_osc_closed_form(self, isolated: list[str]) -> None:
        record = _ok(["osc", "--xi", "0.0013", "--n", "100", *isolated])
        assert record.outputs["error"] <= 1e-6 * 100

    def test_vaughan_rational_point(self, isolated: list[str]) -> None:
        argv = ["vaughan", "--a", "1", "--q", "3", "--d", "2", "--n", "100"]
        record = _ok([*argv, *isolated])
        assert record.outputs["residual_ratio"] <= 20

    def test_baker_nearest_fractions(self, isolated: list[str]) -> None:
        record = _ok(["baker", "--x", "0.5,0.25", "--q", "4", "--n", "50", *isolated])
        assert record.outputs["avec"] == [2, 1]
        assert record.outputs["xivec"] == [0.0, 0.0]

    def test_disc_with_ladder(self, isolated: list[str]) -> None:
        argv = ["disc", "--x", "0.1,0.35", "--n", "64", "--verify", "--ladder", "16,32,64"]
        record = _ok([*argv, *isolated])
        assert 0 <= record.outputs["value"] <= 64
        assert record.outputs["ladder_min_normalized"] >= 0

    def test_koksma_probe(self, isolated: list[str]) -> None:
        record = _ok(["koksma", "--x", "0.1,0.2", "--n", "200", *isolated])
        outputs = record.outputs
        assert outputs["ratio"] == pytest.approx(outputs["sum_magnitude"] / outputs["discrepancy"])

    def test_koksma_needs_target(self, isolated: list[str]) -> None:
        assert run(["koksma", *isolated]) == 2

    def test_flat(self, isolated: list[str]) -> None:
        record = _ok(["flat", "--xi", "0.5", "--n", "64", *isolated])
        assert record.outputs["flat"]["ratio"] > 0

    def test_frac_and_ladder(self, isolated: list[str]) -> None:
        frac = _ok(["frac", "--d", "2", "--n", "64", "--grid", "64", *isolated])
        assert 0 <= frac.outputs["fraction"] <= 1
        ladder = _ok(["ladder", "--d", "2", "--ns", "32,64", "--grid", "32", *isolated])
        assert 0 <= ladder.outputs["union_fraction"] <= 1
        assert ladder.outputs["grid_size"] == 32

    def test_panel_subset(self, isolated: list[str]) -> None:
        record = _ok(["panel", "--only", "dims", *isolated])
        assert record.outputs["passed"] is True
        assert list(record.outputs["criteria"]) == ["dims"]

    def test_panel_failure_exit(self, isolated: list[str]) -> None:
        code, record = run_command(["panel", "--only", "dims", "--tolerance-scale", "0", *isolated])
        assert code == 4
        assert record is not None
        assert record.outputs["failures"] == ["dims"]


class TestPersistence:
    def test_output_dir(self, tmp_path: Path, monkeypatch: pytest.MonkeyPatch) -> None:
        monkeypatch.delenv("WEYL_LAB_BUDGET", raising=False)
        out = tmp_path / "results"
        argv = ["batch", "--d", "2", "--n", "50", "--grid", "8"]
        _ok([*argv, "--config", str(tmp_path / "none.toml"), "--output-dir", str(out)])

        records = sorted(out.glob("*/*.json"))
        assert len(records) == 1
        assert records[0].name.startswith("[0.1]BATCH-")
        saved = ResultRecord.parse(records[0].read_text(encoding="utf-8"))
        assert saved.subcommand == "batch"
        assert len(read_table(records[0].with_suffix(".csv"))) == 8

    def test_explicit_paths(self, tmp_path: Path, isolated: list[str]) -> None:
        record_path = tmp_path / "eval.json"
        csv_path = tmp_path / "grid.csv"
        argv = ["batch", "--d", "3", "--n", "40", "--grid", "4", "--interval", "0.1,0.2"]
        record = _ok([*argv, "--output", str(record_path), "--csv", str(csv_path), *isolated])

        assert json.loads(record_path.read_text(encoding="utf-8"))["subcommand"] == "batch"
        assert ResultRecord.parse(record_path.read_text(encoding="utf-8")) == record
        table = read_table(csv_path)
        assert list(table.columns) == ["x", "re", "im", "abs"]
        assert table["x"].between(0.1, 0.2).all()

    def test_config_subcommand(self, tmp_path: Path, monkeypatch: pytest.MonkeyPatch) -> None:
        monkeypatch.delenv("WEYL_LAB_BUDGET", raising=False)
        path = tmp_path / "lab.toml"
        assert run(["config", "--config", str(path), "--workers", "4"]) == 0
        assert "workers = 4" in path.read_text(encoding="utf-8")
        assert run(["config", "--config", str(path), "--defaults"]) == 0
        assert "workers = 1" in path.read_text(encoding="utf-8")

    def test_records_lists_saved_runs(
        self, tmp_path: Path, monkeypatch: pytest.MonkeyPatch
    ) -> None:
        monkeypatch.delenv("WEYL_LAB_BUDGET", raising=False)
        common = ["--config", str(tmp_path / "none.toml"), "--output-dir", str(tmp_path / "out")]
        _ok(["batch", "--d", "2", "--n", "50", "--grid", "8", *common])
        _ok(["repcount", "--d", "3", "--n", "12", *common])

        listing = _ok(["records", *common])
        assert listing.outputs["count"] == 2
        first, second = listing.outputs["records"]
        assert (first["number"], first["subcommand"], first["table_rows"]) == ("0.1", "BATCH", 8)
        assert (second["number"], second["subcommand"], second["table_rows"]) == (
            "0.2",
            "REPCOUNT",
            None,
        )
        assert first["date"] is not None

        only = _ok(["records", "--only", "repcount", *common])
        assert only.outputs["count"] == 1
        assert not list((tmp_path / "out").glob("*/*RECORDS*"))
