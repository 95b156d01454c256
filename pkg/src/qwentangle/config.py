"""Experiment configuration: a flat key/value record, JSON on disk."""

from __future__ import annotations

import dataclasses
import json
import math
from dataclasses import dataclass, fields
from pathlib import Path
from typing import Any

from .errors import ConfigError
from .walk import CoinProfile

__all__ = ["KINDS", "ExperimentConfig", "load_config", "read_config_dict", "PACKAGED_CONFIGS", "packaged_config"]

KINDS = ("bands", "phase-diagram", "walk-single", "walk-two", "conversion", "protection", "bound-states")
INITIAL_LABELS = ("A", "B", "upup", "downdown", "up", "down")
FORMATS = ("csv", "json")

PACKAGED_CONFIGS = Path(__file__).with_name("configs")


@dataclass
class ExperimentConfig:
    kind: str
    theta1: float = math.pi / 4
    theta2: float | None = None
    theta2_minus: float | None = None
    theta2_plus: float | None = None
    width: float = 3.0
    center: float = 0.0
    steps: int = 60
    half_width: int = 62
    initial: str = "B"
    out: str | None = None
    format: str = "csv"
    seed: int = 0
    # extras for the momentum-space drivers
    thetas: list[float] | None = None
    n_k: int = 1024
    grid: int = 64
    stride: int | None = None

    def coins(self) -> CoinProfile:
        if self.theta2_minus is not None or self.theta2_plus is not None:
            if self.theta2_minus is None or self.theta2_plus is None:
                raise ConfigError("theta2_minus and theta2_plus must be given together")
            return CoinProfile.boundary(self.theta1, self.theta2_minus, self.theta2_plus, self.center, self.width)
        return CoinProfile.uniform(self.theta1, self.theta2 if self.theta2 is not None else 0.0)

    def validate(self) -> "ExperimentConfig":
        """Raise :class:`ConfigError` with an actionable message on bad input."""
        if self.kind not in KINDS:
            raise ConfigError(f"unknown experiment kind {self.kind!r}; choose one of {', '.join(KINDS)}")
        if self.format not in FORMATS:
            raise ConfigError(f"format must be csv or json, got {self.format!r}")
        if self.steps < 0:
            raise ConfigError(f"steps must be >= 0, got {self.steps}")
        if self.half_width < 1:
            raise ConfigError(f"half_width must be >= 1, got {self.half_width}")
        if self.width < 0:
            raise ConfigError(f"width must be >= 0, got {self.width}")
        if self.theta2 is not None and self.theta2_minus is not None:
            raise ConfigError("give either theta2 or theta2_minus/theta2_plus, not both")
        for name in ("theta1", "theta2", "theta2_minus", "theta2_plus", "center"):
            v = getattr(self, name)
            if v is not None and not math.isfinite(v):
                raise ConfigError(f"{name} must be finite")
        if self.kind in ("walk-single", "walk-two", "conversion", "protection"):
            if self.half_width < self.steps + 2:
                raise ConfigError(
                    f"half_width={self.half_width} < steps + 2 = {self.steps + 2}; "
                    f"use --half-width {self.steps + 2} or more"
                )
        if self.initial not in INITIAL_LABELS:
            raise ConfigError(f"initial must be one of {', '.join(INITIAL_LABELS)}, got {self.initial!r}")
        if self.kind == "walk-single" and self.initial not in ("up", "down", "upup", "downdown"):
            raise ConfigError("walk-single needs initial up or down")
        if self.kind == "walk-two" and self.initial in ("up", "down"):
            raise ConfigError("walk-two needs a two-particle initial state (A, B, upup, downdown)")
        if self.kind == "bands" and self.n_k < 3:
            raise ConfigError("n_k must be >= 3")
        if self.kind == "phase-diagram" and self.grid < 2:
            raise ConfigError("grid must be >= 2")
        if self.stride is not None and self.stride < 1:
            raise ConfigError("stride must be >= 1")
        if self.kind in ("protection", "bound-states"):
            self._check_asymptotes()
        return self

    def _check_asymptotes(self) -> None:
        from .topology import gap_classification

        coins = self.coins()
        for t2 in coins.asymptotes():
            phase = gap_classification(coins.theta1, t2)
            if not phase.gapped:
                raise ConfigError(
                    f"asymptotic phase (theta1={coins.theta1:.6g}, theta2={t2:.6g}) is {phase.value}; "
                    "bound states are undefined, move theta2_minus/theta2_plus off the gap-closing lines"
                )

    # -- serialization ---------------------------------------------------------

    def to_dict(self) -> dict[str, Any]:
        return dataclasses.asdict(self)

    def to_json(self) -> str:
        return json.dumps(self.to_dict(), indent=1, sort_keys=True) + "\n"

    @classmethod
    def from_dict(cls, data: dict[str, Any]) -> "ExperimentConfig":
        known = {f.name for f in fields(cls)}
        unknown = set(data) - known
        if unknown:
            raise ConfigError(f"unknown config keys: {', '.join(sorted(unknown))}")
        if "kind" not in data:
            raise ConfigError("config needs a 'kind'")
        try:
            cfg = cls(**data)
        except TypeError as exc:
            raise ConfigError(str(exc)) from None
        return cfg._coerce()

    def _coerce(self) -> "ExperimentConfig":
        try:
            for name in ("theta1", "width", "center"):
                setattr(self, name, float(getattr(self, name)))
            for name in ("theta2", "theta2_minus", "theta2_plus"):
                v = getattr(self, name)
                setattr(self, name, None if v is None else float(v))
            for name in ("steps", "half_width", "seed", "n_k", "grid"):
                v = getattr(self, name)
                if isinstance(v, float) and not v.is_integer():
                    raise ConfigError(f"{name} must be an integer, got {v}")
                setattr(self, name, int(v))
            if self.stride is not None:
                self.stride = int(self.stride)
            if self.thetas is not None:
                self.thetas = [float(t) for t in self.thetas]
            self.initial = str(self.initial)
        except (TypeError, ValueError) as exc:
            raise ConfigError(str(exc)) from None
        return self

    @classmethod
    def from_json(cls, text: str) -> "ExperimentConfig":
        return cls.from_dict(_parse(text))


def _parse(text: str) -> dict[str, Any]:
    try:
        data = json.loads(text)
    except json.JSONDecodeError as exc:
        raise ConfigError(f"config is not valid JSON: {exc}") from None
    if not isinstance(data, dict):
        raise ConfigError("config must be a flat JSON object")
    return data


def read_config_dict(path: str | Path) -> dict[str, Any]:
    """Raw key/value pairs of a config file, without defaults filled in."""
    try:
        text = Path(path).read_text()
    except OSError as exc:
        raise ConfigError(f"cannot read config {path}: {exc}") from None
    return _parse(text)


def load_config(path: str | Path) -> ExperimentConfig:
    return ExperimentConfig.from_dict(read_config_dict(path))


def packaged_config(name: str) -> ExperimentConfig:
    """One of the frozen experiment configs shipped with the package."""
    return load_config(PACKAGED_CONFIGS / f"{name}.json")
