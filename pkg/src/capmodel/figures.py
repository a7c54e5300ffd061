"""Datasets behind the three standard plots (data only, no rendering).

Figure 1: rho = 1, unconstrained vs r = 5 — variety growth slows once the
range binds.  Figure 2: rho = 1/2, unconstrained vs r = 30 — variety rises,
peaks, and falls; markers give the n where the range starts binding and the
hump onset.  Figure 3: rho = 1/2, one series per r — the wider the range,
the later the hump.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction

from .core import ModelParams, Range, UNBOUNDED
from .errors import DomainError
from .trajectory import TrajectoryPoint, default_n_max, find_hump_onset, run_trajectory

FIGURE_IDS = (1, 2, 3)

_FIG1_RHO = Fraction(1)
_FIG1_R = 5
_FIG2_RHO = Fraction(1, 2)
_FIG2_R = 30
_FIG3_RHO = Fraction(1, 2)
_FIG3_RANGES = (5, 10, 20, 30)


@dataclass(frozen=True)
class FigureSeries:
    name: str
    r: Range
    points: tuple[TrajectoryPoint, ...]


@dataclass(frozen=True)
class FigureData:
    figure_id: int
    rho: Fraction
    series: tuple[FigureSeries, ...]
    markers: dict[str, int] = field(default_factory=dict)


def _series(name: str, rho: Fraction, r: Range, n_max: int) -> FigureSeries:
    traj = run_trajectory(ModelParams(rho, r), n_max)
    return FigureSeries(name=name, r=r, points=traj.points)


def figure_dataset(figure_id: int, n_max: int | None = None) -> FigureData:
    """Compute the dataset for one figure; pure and deterministic."""
    if figure_id not in FIGURE_IDS:
        raise DomainError(f"figure_id must be one of {FIGURE_IDS}, got {figure_id!r}")
    if figure_id == 1:
        n_max = n_max if n_max is not None else default_n_max(_FIG1_R)
        markers = {"constrained_from": _FIG1_R + 1} if n_max >= _FIG1_R + 1 else {}
        return FigureData(
            figure_id=1,
            rho=_FIG1_RHO,
            series=(
                _series("unconstrained", _FIG1_RHO, UNBOUNDED, n_max),
                _series(f"r={_FIG1_R}", _FIG1_RHO, _FIG1_R, n_max),
            ),
            markers=markers,
        )
    if figure_id == 2:
        n_max = n_max if n_max is not None else default_n_max(_FIG2_R)
        markers: dict[str, int] = {}
        if n_max >= _FIG2_R + 1:
            markers["constrained_from"] = _FIG2_R + 1
            onset = find_hump_onset(_FIG2_R, _FIG2_RHO, n_max)
            if onset is not None:
                markers["hump_onset"] = onset
        return FigureData(
            figure_id=2,
            rho=_FIG2_RHO,
            series=(
                _series("unconstrained", _FIG2_RHO, UNBOUNDED, n_max),
                _series(f"r={_FIG2_R}", _FIG2_RHO, _FIG2_R, n_max),
            ),
            markers=markers,
        )
    n_max = n_max if n_max is not None else max(default_n_max(r) for r in _FIG3_RANGES)
    markers = {}
    for r in _FIG3_RANGES:
        if n_max >= r + 1:
            onset = find_hump_onset(r, _FIG3_RHO, n_max)
            if onset is not None:
                markers[f"hump_onset_r={r}"] = onset
    return FigureData(
        figure_id=3,
        rho=_FIG3_RHO,
        series=tuple(_series(f"r={r}", _FIG3_RHO, r, n_max) for r in _FIG3_RANGES),
        markers=markers,
    )
