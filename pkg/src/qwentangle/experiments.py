"""Drivers that turn an :class:`ExperimentConfig` into tidy tables.

Every driver returns an :class:`ExperimentResult`. Its first table is the main
output; further tables (joint distributions, bound-state lists) ride along and
are written next to it.
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass, field
from pathlib import Path

import numpy as np

from . import __version__
from .config import ExperimentConfig
from .entanglement import antidiagonal_max, mode_density_matrix, negativity, polarization_density_matrix
from .errors import ConfigError, NegligibleOverlap, NoSeparation
from .state import TwoParticleField, localized_spinor, make_localized_pair
from .tables import Table
from .topology import (
    BoundStateReport,
    band_structure,
    bands_table,
    bound_states_table,
    crossed_lines,
    find_bound_states,
    gap_classification,
    phase_diagram_table,
    winding_number,
)
from .walk import evolve, pair_marginals, single_marginals

__all__ = [
    "ExperimentResult",
    "run",
    "run_bands",
    "run_phase_diagram",
    "run_bound_states",
    "run_walk_single",
    "run_walk_two",
    "run_conversion",
    "run_protection",
    "polarization_point",
    "polarization_series",
    "mode_series",
    "render",
    "write_result",
]


@dataclass
class ExperimentResult:
    config: ExperimentConfig
    tables: dict[str, Table]
    metadata: dict = field(default_factory=dict)
    warnings: list[str] = field(default_factory=list)

    @property
    def main(self) -> Table:
        return next(iter(self.tables.values()))


def _base_metadata(cfg: ExperimentConfig) -> dict:
    echo = cfg.to_dict()
    echo.pop("out")  # keeps output independent of where it is written
    return {"config": echo, "version": __version__}


def _phase_summary(theta1: float, theta2: float) -> dict:
    phase = gap_classification(theta1, theta2)
    w = None
    if phase.gapped:
        w = winding_number(band_structure(theta1, theta2))
    return {"theta1": theta1, "theta2": theta2, "phase": phase.value, "W": w}


def _report_metadata(report: BoundStateReport) -> list[dict]:
    return [
        {
            "quasi_energy": b.quasi_energy,
            "center": b.center,
            "decay_length": b.decay_length if math.isfinite(b.decay_length) else None,
            "ipr": b.ipr,
        }
        for b in report.states
    ]


def _bound_state_report(cfg: ExperimentConfig) -> BoundStateReport:
    try:
        return find_bound_states(cfg.coins(), cfg.half_width)
    except ValueError as exc:
        raise ConfigError(str(exc)) from None


# -- momentum space -----------------------------------------------------------


def run_bands(cfg: ExperimentConfig) -> ExperimentResult:
    theta2 = cfg.theta2 if cfg.theta2 is not None else 0.0
    thetas = cfg.thetas if cfg.thetas is not None else [cfg.theta1]
    analyses = [band_structure(t, theta2, cfg.n_k) for t in thetas]
    meta = _base_metadata(cfg)
    meta["curves"] = [
        dict(_phase_summary(a.theta1, a.theta2), gap0=a.gap0, gap_pi=a.gap_pi) for a in analyses
    ]
    return ExperimentResult(cfg, {"bands": bands_table(analyses)}, meta)


def run_phase_diagram(cfg: ExperimentConfig) -> ExperimentResult:
    return ExperimentResult(cfg, {"phase_diagram": phase_diagram_table(cfg.grid, cfg.n_k)}, _base_metadata(cfg))


def run_bound_states(cfg: ExperimentConfig) -> ExperimentResult:
    report = _bound_state_report(cfg)
    coins = cfg.coins()
    meta = _base_metadata(cfg)
    meta["bound_states"] = _report_metadata(report)
    meta["crossed_lines"] = [{"theta2": t, "closes_at": g} for t, g in crossed_lines(coins)]
    meta["asymptotes"] = [_phase_summary(coins.theta1, t) for t in coins.asymptotes()]
    return ExperimentResult(cfg, {"bound_states": bound_states_table(report)}, meta)


# -- real-space walks ---------------------------------------------------------


def _recorded_steps(cfg: ExperimentConfig) -> list[int]:
    stride = cfg.stride or max(cfg.steps, 1)
    steps = list(range(0, cfg.steps + 1, stride))
    if steps[-1] != cfg.steps:
        steps.append(cfg.steps)
    return steps


def run_walk_single(cfg: ExperimentConfig) -> ExperimentResult:
    spin = 0 if cfg.initial in ("up", "upup") else 1
    start = localized_spinor(cfg.half_width, 0, spin)
    traj = evolve(start, cfg.coins(), cfg.steps)
    table = single_marginals(traj, _recorded_steps(cfg))
    return ExperimentResult(cfg, {"marginals": table}, _base_metadata(cfg))


def run_walk_two(cfg: ExperimentConfig) -> ExperimentResult:
    start = make_localized_pair(cfg.half_width, cfg.initial)
    wanted = set(_recorded_steps(cfg))
    kept: list[TwoParticleField] = []
    evolve(start, cfg.coins(), cfg.steps, callback=lambda i, f: kept.append(f) if i in wanted else None, keep=False)
    table = Table(["step", "x1", "x2", "prob"])
    for step, f in zip(sorted(wanted), kept):
        part = pair_marginals([f])
        for row in part.rows:
            table.append([step] + row[1:])
    return ExperimentResult(cfg, {"joint": table}, _base_metadata(cfg))


def polarization_point(field: TwoParticleField) -> tuple[int, float, float | None]:
    """(x_max, detection probability, negativity) at the anti-diagonal maximum.

    While both walkers still sit only on the origin there is no separated pair;
    the spin state at ``(0, 0)`` is used instead.
    """
    try:
        x = antidiagonal_max(field)
    except NoSeparation:
        x = 0
    try:
        rho, prob = polarization_density_matrix(field, x, -x, allow_same_site=(x == 0))
    except NegligibleOverlap:
        return x, float(np.sum(np.abs(field.spin_block(x, -x)) ** 2)), None
    return x, prob, negativity(rho)


def polarization_series(start: TwoParticleField, coins, n_steps: int) -> tuple[Table, TwoParticleField]:
    """Per-step polarization negativity at the anti-diagonal maximum."""
    table = Table(["step", "x_max", "detection_probability", "negativity"])
    last: list[TwoParticleField] = []

    def record(i, f):
        table.append([i, *polarization_point(f)])
        last[:] = [f]

    evolve(start, coins, n_steps, callback=record, keep=False)
    return table, last[0]


def mode_series(start: TwoParticleField, coins, n_steps: int, x: int = 0) -> tuple[Table, TwoParticleField]:
    """Per-step detection probability and mode negativity at site ``x``."""
    table = Table(["step", "detection_probability", "mode_negativity"])
    last: list[TwoParticleField] = []

    def record(i, f):
        try:
            rho, prob = mode_density_matrix(f, x)
            table.append([i, prob, negativity(rho)])
        except NegligibleOverlap:
            block = f.spin_block(x, x)
            table.append([i, float(np.sum(np.abs(block) ** 2)), None])
        last[:] = [f]

    evolve(start, coins, n_steps, callback=record, keep=False)
    return table, last[0]


def _zone_warnings(cfg: ExperimentConfig) -> list[str]:
    coins = cfg.coins()
    out = []
    for t2 in coins.asymptotes():
        if not gap_classification(coins.theta1, t2).gapped:
            out.append(f"asymptotic coin (theta1={coins.theta1:.6g}, theta2={t2:.6g}) is gapless")
    lines = crossed_lines(coins)
    if lines:
        where = ", ".join(f"{t:.6g} ({g})" for t, g in lines)
        out.append(f"coin profile crosses gap-closing lines at theta2 = {where}; it is not within one topological zone")
    return out


def run_conversion(cfg: ExperimentConfig) -> ExperimentResult:
    """Both localized initial states under the same coins, side by side."""
    coins = cfg.coins()
    series = Table(["initial", "step", "x_max", "detection_probability", "negativity"])
    tables: dict[str, Table] = {"series": series}
    for label in ("A", "B"):
        table, final = polarization_series(make_localized_pair(cfg.half_width, label), coins, cfg.steps)
        for row in table.rows:
            series.append([label] + row)
        joint = pair_marginals([final])
        tables[f"joint_{label}"] = Table(joint.columns, ([cfg.steps] + r[1:] for r in joint.rows))
    meta = _base_metadata(cfg)
    meta["crossed_lines"] = [{"theta2": t, "closes_at": g} for t, g in crossed_lines(coins)]
    return ExperimentResult(cfg, tables, meta, _zone_warnings(cfg))


def run_protection(cfg: ExperimentConfig) -> ExperimentResult:
    coins = cfg.coins()
    report = _bound_state_report(cfg)
    table, final = mode_series(make_localized_pair(cfg.half_width, cfg.initial), coins, cfg.steps)
    joint = pair_marginals([final])
    meta = _base_metadata(cfg)
    meta["bound_states"] = _report_metadata(report)
    meta["crossed_lines"] = [{"theta2": t, "closes_at": g} for t, g in crossed_lines(coins)]
    return ExperimentResult(
        cfg,
        {
            "series": table,
            "joint": Table(joint.columns, ([cfg.steps] + r[1:] for r in joint.rows)),
            "bound_states": bound_states_table(report),
        },
        meta,
    )


DRIVERS = {
    "bands": run_bands,
    "phase-diagram": run_phase_diagram,
    "bound-states": run_bound_states,
    "walk-single": run_walk_single,
    "walk-two": run_walk_two,
    "conversion": run_conversion,
    "protection": run_protection,
}


def run(cfg: ExperimentConfig) -> ExperimentResult:
    cfg.validate()
    return DRIVERS[cfg.kind](cfg)


# -- output -------------------------------------------------------------------


def render(result: ExperimentResult, fmt: str | None = None) -> dict[str, str]:
    """Serialized outputs keyed by table name ("" for a single JSON document)."""
    fmt = fmt or result.config.format
    if fmt == "json":
        names = list(result.tables)
        doc = {
            "columns": result.tables[names[0]].to_dict(),
            "metadata": result.metadata,
        }
        if len(names) > 1:
            doc["tables"] = {n: result.tables[n].to_dict() for n in names[1:]}
        return {"": json.dumps(doc, indent=1, sort_keys=True, allow_nan=False) + "\n"}
    return {name: t.to_csv() for name, t in result.tables.items()}


def output_paths(out: str | Path, names: list[str]) -> dict[str, Path]:
    """First table goes to ``out``; the rest to ``<stem>_<name><suffix>`` beside it."""
    out = Path(out)
    paths = {names[0]: out}
    for n in names[1:]:
        paths[n] = out.with_name(f"{out.stem}_{n}{out.suffix}")
    return paths


def write_result(result: ExperimentResult, out: str | Path | None = None, fmt: str | None = None) -> str | list[Path]:
    """Write to ``out`` (and siblings); with no path return the text instead."""
    rendered = render(result, fmt)
    if out is None:
        if len(rendered) == 1:
            return next(iter(rendered.values()))
        return "".join(f"# {name}\n{text}\n" for name, text in rendered.items()).rstrip("\n") + "\n"
    if "" in rendered:
        Path(out).write_text(rendered[""])
        return [Path(out)]
    paths = output_paths(out, list(rendered))
    for name, text in rendered.items():
        paths[name].write_text(text)
    return list(paths.values())
