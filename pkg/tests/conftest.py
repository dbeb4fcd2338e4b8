from __future__ import annotations

from pathlib import Path

import pytest

from polysum.core.config import PolysumConfig


def pytest_addoption(parser: pytest.Parser) -> None:
    parser.addoption("--runslow", action="store_true", default=False, help="run slow family and acceptance tests")


def pytest_collection_modifyitems(config: pytest.Config, items: list) -> None:
    if config.getoption("--runslow"):
        return
    skip_slow = pytest.mark.skip(reason="needs --runslow")
    for item in items:
        if "slow" in item.keywords:
            item.add_marker(skip_slow)


@pytest.fixture()
def cfg(tmp_path: Path) -> PolysumConfig:
    return PolysumConfig(
        outputs_dir=tmp_path / "outputs",
        log_dir=tmp_path / "logs",
        cache_dir=tmp_path / "cache",
    )


@pytest.fixture(autouse=True)
def _clean_env(monkeypatch: pytest.MonkeyPatch) -> None:
    for name in (
        "POLYSUM_OUTPUTS_DIR",
        "POLYSUM_LOG_DIR",
        "POLYSUM_CACHE_DIR",
        "POLYSUM_CACHE",
        "POLYSUM_WORKERS",
        "POLYSUM_SEED",
        "POLYSUM_TRIALS",
    ):
        monkeypatch.delenv(name, raising=False)
