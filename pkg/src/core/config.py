from __future__ import annotations

import os
from dataclasses import dataclass, field
from pathlib import Path
from typing import Literal, Tuple

EraKind = Literal["root", "external"]
ProgramMode = Literal["v1", "e1"]

DEFAULT_SEED = 20240601


def seed_from_env() -> int:
    """Generator seed for the random nets of the test utilities (`QBC_SEED`)."""

    return int(os.getenv("QBC_SEED", str(DEFAULT_SEED)))


@dataclass
class CompilerConfig:
    """Runtime configuration loaded from environment variables."""

    runtime_cache: Path
    isometry_tol: float = 1e-9
    gs_tol: float = 1e-10
    oracle_tol: float = 1e-10
    story_cap: int = 2**20
    seed: int = DEFAULT_SEED
    strict_files: bool = True
    recursion_limit: int = 200
    log_level: str = "INFO"


@dataclass(frozen=True)
class CompileOptions:
    """Per-compilation switches; tolerances default from CompilerConfig."""

    era_kind: EraKind = "root"
    measured_nodes: Tuple[int, ...] = field(default_factory=tuple)
    mode: ProgramMode = "v1"
    exact_dim: bool = False
    isometry_tol: float = 1e-9
    gs_tol: float = 1e-10

    @classmethod
    def from_config(cls, config: CompilerConfig, **overrides) -> "CompileOptions":
        values = {"isometry_tol": config.isometry_tol, "gs_tol": config.gs_tol}
        values.update({k: v for k, v in overrides.items() if v is not None})
        return cls(**values)


def _env_flag(name: str, default: bool) -> bool:
    raw = os.getenv(name)
    if raw is None:
        return default
    return raw.strip().lower() not in {"0", "false", "no", "off", ""}


def load_config() -> CompilerConfig:
    """Load configuration from environment variables with safe defaults."""

    root = Path(__file__).resolve().parents[2]
    runtime_cache = Path(os.getenv("QBC_RUNTIME_CACHE", root / "runtime_cache"))
    runtime_cache.mkdir(parents=True, exist_ok=True)

    return CompilerConfig(
        runtime_cache=runtime_cache,
        isometry_tol=float(os.getenv("QBC_ISOMETRY_TOL", "1e-9")),
        gs_tol=float(os.getenv("QBC_GS_TOL", "1e-10")),
        oracle_tol=float(os.getenv("QBC_ORACLE_TOL", "1e-10")),
        story_cap=int(os.getenv("QBC_STORY_CAP", str(2**20))),
        seed=seed_from_env(),
        strict_files=_env_flag("QBC_STRICT", True),
        recursion_limit=int(os.getenv("QBC_RECURSION_LIMIT", "200")),
        log_level=os.getenv("QBC_LOG_LEVEL", "INFO").strip().upper(),
    )
