from __future__ import annotations

import os
from dataclasses import dataclass
from pathlib import Path
from typing import Optional

from dotenv import load_dotenv

from .errors import ConfigError


@dataclass
class PolysumConfig:
    outputs_dir: Path
    log_dir: Path
    cache_dir: Path
    workers: int = 1
    default_seed: int = 7
    default_trials: int = 20
    cache_enabled: bool = True


def _int_env(name: str, default: int, minimum: int = 0) -> int:
    raw = os.getenv(name)
    if raw is None or raw.strip() == "":
        return default
    try:
        value = int(raw)
    except ValueError as e:
        raise ConfigError(f"{name} must be an integer, got {raw!r}") from e
    if value < minimum:
        raise ConfigError(f"{name} must be >= {minimum}, got {value}")
    return value


def _path_env(name: str, default: Path) -> Path:
    raw = os.getenv(name)
    return Path(raw) if raw else default


def load_config(base_dir: Path, env_file: Optional[Path] = None) -> PolysumConfig:
    env_path = env_file or base_dir / ".env"
    if env_path.exists():
        load_dotenv(env_path)
    outputs = _path_env("POLYSUM_OUTPUTS_DIR", base_dir / "outputs")
    logs = _path_env("POLYSUM_LOG_DIR", base_dir / "logs")
    cache = _path_env("POLYSUM_CACHE_DIR", base_dir / ".polysum_cache")
    cache_flag = (os.getenv("POLYSUM_CACHE") or "1").strip().lower()
    cfg = PolysumConfig(
        outputs_dir=outputs,
        log_dir=logs,
        cache_dir=cache,
        workers=_int_env("POLYSUM_WORKERS", 1, minimum=1),
        default_seed=_int_env("POLYSUM_SEED", 7),
        default_trials=_int_env("POLYSUM_TRIALS", 20),
        cache_enabled=cache_flag not in ("0", "false", "no", "off"),
    )
    for d in (cfg.outputs_dir, cfg.log_dir, cfg.cache_dir):
        d.mkdir(parents=True, exist_ok=True)
    return cfg
