"""Tunable constants and run configuration."""

from __future__ import annotations

import json
from dataclasses import asdict, dataclass, field, fields, replace

from .errors import InvalidParameterError, ParseError


@dataclass(frozen=True)
class Constants:
    """Constants hidden inside the asymptotic statements.

    ``c_pad``: rho_pad = c_pad ln n.
    ``c_kappa``: kappa = c_kappa * 2 rho_pad / gamma (must be >= 1 for the sandwich).
    ``c_gamma``: per-level exclusion gamma = epsilon / (c_gamma * levels).
    ``c_alpha``: declared alpha_WC = c_alpha * kappa.
    ``c_beta``: declared beta = c_beta * (h'/h) * tree hop-diameter bound.
    ``c_q``: repetition count q = c_q * ceil(log2 n).
    ``c_m``: super-group merge threshold c_m * log2 n.
    ``c_b``: boosting repeats c_b * ceil(log2 n) for k-Steiner.
    """

    c_pad: float = 2.0
    c_kappa: float = 1.0
    c_gamma: float = 1.0
    c_alpha: float = 8.0
    c_beta: float = 1.0
    c_q: int = 4
    c_m: float = 0.25
    c_b: float = 1.0
    phase_factor: float = 1.0
    iteration_factor: float = 2.0
    retry_budget: int = 8
    resample_budget: int = 64
    group_cap: int = 12

    def __post_init__(self):
        for f in fields(self):
            if getattr(self, f.name) <= 0:
                raise InvalidParameterError(f"constant {f.name} must be positive")
        if self.c_kappa < 1:
            raise InvalidParameterError("c_kappa < 1 voids the worst-case sandwich")

    @classmethod
    def paper(cls) -> "Constants":
        """The literal constants of the analysis (1000 log n phases and iterations, 10 log n threshold)."""
        return cls(c_m=10.0, phase_factor=1000.0, iteration_factor=1000.0)

    def with_overrides(self, **kw) -> "Constants":
        unknown = set(kw) - {f.name for f in fields(self)}
        if unknown:
            raise InvalidParameterError(f"unknown constants: {sorted(unknown)}")
        return replace(self, **kw)

    def to_json(self) -> dict:
        return asdict(self)


DEFAULT_CONSTANTS = Constants()


@dataclass(frozen=True)
class RunConfig:
    seed: int = 0
    hops: int = 2
    epsilon: float = 0.1
    constants: Constants = field(default_factory=Constants)
    input_path: str | None = None
    output_path: str | None = None


def load_config_file(path) -> dict:
    """Read a JSON config: top-level ``seed``/``hops``/``epsilon`` plus a ``constants`` object."""
    try:
        with open(path, encoding="utf-8") as fh:
            data = json.load(fh)
    except (OSError, json.JSONDecodeError) as exc:
        raise ParseError(f"cannot read config {path}: {exc}") from None
    if not isinstance(data, dict):
        raise ParseError("config file must hold a JSON object")
    return data
