from pathlib import Path

import pytest

from weyl_lab.core.constants import DEFAULT_KERNEL_BUDGET
from weyl_lab.core.domain.lab_config import (
    LabConfig,
    resolve_config,
    resolve_kernel_budget,
    resolve_spectrum_budget,
)
from weyl_lab.core.errors import BudgetExceededError, LabValidationError
from weyl_lab.core.services.budget import check_budget


@pytest.fixture
def config_path(tmp_path: Path) -> Path:
    return tmp_path / "configs" / "lab_config.toml"


@pytest.fixture(autouse=True)
def _no_budget_env(monkeypatch: pytest.MonkeyPatch) -> None:
    monkeypatch.delenv("WEYL_LAB_BUDGET", raising=False)


class TestLabConfigFile:
    def test_missing_file_gives_defaults(self, config_path: Path) -> None:
        config = LabConfig.load(config_path)
        assert config == LabConfig()
        assert config.kernel_budget == DEFAULT_KERNEL_BUDGET
        assert config.c0 == 0.25

    def test_save_and_load(self, config_path: Path) -> None:
        config = LabConfig(workers=4, seed=7, arc_slack=12.5)
        config.save(config_path)

        assert LabConfig.load(config_path) == config

    def test_descriptions_become_comments(self, config_path: Path) -> None:
        LabConfig().save(config_path)
        text = config_path.read_text(encoding="utf-8")

        assert "kernel_budget = " in text
        assert "# 並列ワーカー数" in text

    def test_existing_comments_survive(self, config_path: Path) -> None:
        config_path.parent.mkdir(parents=True)
        config_path.write_text("# 手書きのメモ\nworkers = 2\n", encoding="utf-8")

        LabConfig(workers=3).save(config_path)
        text = config_path.read_text(encoding="utf-8")

        assert "# 手書きのメモ" in text
        assert "workers = 3" in text
        assert LabConfig.load(config_path).workers == 3

    def test_broken_file_falls_back_to_defaults(
        self, config_path: Path, capsys: pytest.CaptureFixture[str]
    ) -> None:
        config_path.parent.mkdir(parents=True)
        config_path.write_text("workers = [unclosed\n", encoding="utf-8")

        assert LabConfig.load(config_path) == LabConfig()
        assert "Config load error" in capsys.readouterr().out


class TestOverrides:
    def test_merged_ignores_none(self) -> None:
        config = LabConfig().merged({"workers": None, "seed": 3, "unknown": 1})
        assert config.workers == 1
        assert config.seed == 3

    @pytest.mark.parametrize("field", ["kernel_budget", "spectrum_budget", "workers"])
    def test_non_positive_budget_rejected(self, field: str) -> None:
        with pytest.raises(LabValidationError):
            LabConfig().merged({field: 0})

    def test_env_budget(self, monkeypatch: pytest.MonkeyPatch) -> None:
        monkeypatch.setenv("WEYL_LAB_BUDGET", "12345")
        assert LabConfig().with_env().kernel_budget == 12345
        assert resolve_kernel_budget(None) == 12345
        assert resolve_kernel_budget(99) == 99

    def test_env_budget_must_be_integer(self, monkeypatch: pytest.MonkeyPatch) -> None:
        monkeypatch.setenv("WEYL_LAB_BUDGET", "lots")
        with pytest.raises(LabValidationError):
            LabConfig().with_env()

    def test_precedence(self, config_path: Path, monkeypatch: pytest.MonkeyPatch) -> None:
        """フラグ > 環境変数 > 設定ファイル > 既定値"""
        LabConfig(kernel_budget=100, seed=5).save(config_path)

        assert resolve_config(config_path).kernel_budget == 100

        monkeypatch.setenv("WEYL_LAB_BUDGET", "200")
        resolved = resolve_config(config_path)
        assert resolved.kernel_budget == 200
        assert resolved.seed == 5

        flagged = resolve_config(config_path, {"kernel_budget": 300, "seed": None})
        assert flagged.kernel_budget == 300
        assert flagged.seed == 5

    def test_spectrum_budget_default(self) -> None:
        assert resolve_spectrum_budget(None) == LabConfig().spectrum_budget
        assert resolve_spectrum_budget(10) == 10

    def test_spectrum_budget_covers_largest_pair_spectrum(self) -> None:
        # r_count の既定上限 N = 20000 で N(N+1)/2 個のペアが通ること
        n = 20000
        check_budget("pair spectrum", n * (n + 1) // 2, resolve_spectrum_budget(None))
        with pytest.raises(BudgetExceededError):
            check_budget("pair spectrum", n * (n + 1) // 2, resolve_spectrum_budget(10**6))
