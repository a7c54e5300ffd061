"""Capability-by-capability development paths and hump location.

A trajectory evaluates the closed forms at every n from 0 to n_max, tagging
each point with its stage and recording two landmark indices: the first n
where the product range binds (always r + 1 for bounded r) and the first n
where the hump condition holds.  Stage progression is not assumed monotone;
if the hump condition ever reverts from True to False along the path, the
trajectory carries a flag instead of failing.
"""

from __future__ import annotations

from dataclasses import dataclass

from .core import (
    EXACT,
    ModelParams,
    Range,
    Scalar,
    Stage,
    UNBOUNDED,
    avg_length,
    checked_rho,
    classify_stage,
    hump_condition,
    variety,
    variety_delta,
)
from .errors import DomainError
from .scalars import Rational


@dataclass(frozen=True)
class TrajectoryPoint:
    n: int
    variety: Scalar
    avg_length: Scalar
    delta_variety: Scalar
    stage: Stage
    constrained: bool


@dataclass(frozen=True)
class Trajectory:
    params: ModelParams
    points: tuple[TrajectoryPoint, ...]
    transition_constrained_at: int | None
    hump_onset_at: int | None
    non_monotone_flag: bool

    def point(self, n: int) -> TrajectoryPoint:
        return self.points[n]


def default_n_max(r: Range) -> int:
    """Long enough to show the hump when there is one: max(3r, 50)."""
    return 50 if r is UNBOUNDED else max(3 * r, 50)


def evaluate_point(params: ModelParams, n: int) -> TrajectoryPoint:
    """All per-n quantities for one point under fixed parameters."""
    rho, r, backend = params.rho, params.r, params.backend
    return TrajectoryPoint(
        n=n,
        variety=variety(n, rho, r, backend),
        avg_length=avg_length(n, rho, r, backend),
        delta_variety=variety_delta(n, rho, r, backend),
        stage=classify_stage(n, rho, r, backend),
        constrained=r is not UNBOUNDED and r < n,
    )


def run_trajectory(params: ModelParams, n_max: int | None = None) -> Trajectory:
    """Evaluate the model at every n = 0..n_max under fixed parameters."""
    if n_max is None:
        n_max = default_n_max(params.r)
    if not isinstance(n_max, int) or isinstance(n_max, bool) or n_max < 0:
        raise DomainError(f"n_max must be a nonnegative integer, got {n_max!r}")
    r = params.r
    points = []
    hump_onset = None
    non_monotone = False
    previous_hump = False
    for n in range(n_max + 1):
        point = evaluate_point(params, n)
        hump = point.stage is Stage.DEVELOPED
        if hump and hump_onset is None:
            hump_onset = n
        if previous_hump and not hump:
            non_monotone = True
        previous_hump = hump
        points.append(point)
    constrained_at = r + 1 if r is not UNBOUNDED and n_max >= r + 1 else None
    return Trajectory(
        params=params,
        points=tuple(points),
        transition_constrained_at=constrained_at,
        hump_onset_at=hump_onset,
        non_monotone_flag=non_monotone,
    )


def find_hump_onset(r: int, rho: Rational, n_max: int) -> int | None:
    """Smallest n <= n_max where variety declines at the next step, or None.

    Scanned with the exact backend.  The condition is defined False for
    r >= n, so the scan starts at n = r + 1.
    """
    if r is UNBOUNDED or not isinstance(r, int) or isinstance(r, bool) or r < 0:
        raise DomainError(f"r must be a bounded nonnegative integer, got {r!r}")
    rho = checked_rho(rho)
    if not isinstance(n_max, int) or n_max < r + 1:
        raise DomainError(f"n_max must be at least r + 1 = {r + 1}, got {n_max!r}")
    for n in range(r + 1, n_max + 1):
        if hump_condition(n, rho, r, EXACT):
            return n
    return None


def sweep_range(
    rho: Rational,
    r_values: list[int],
    n_max: int | None = None,
    backend: str = EXACT,
) -> list[Trajectory]:
    """One trajectory per product range, all over the same n axis."""
    if not r_values:
        raise DomainError("r_values must be nonempty")
    rho = checked_rho(rho)
    if n_max is None:
        n_max = max(default_n_max(r) for r in r_values)
    return [run_trajectory(ModelParams(rho, r, backend), n_max) for r in r_values]


def hump_onsets_nondecreasing(trajectories: list[Trajectory]) -> bool:
    """Whether hump onsets are nondecreasing in r (a reported finding).

    Trajectories are compared in order of product range; an onset that never
    occurs within a trajectory counts as later than any observed one.
    """
    # an unbounded range is wider than any bounded one, so it sorts last
    ordered = sorted(
        trajectories, key=lambda t: (t.params.r is None, t.params.r if t.params.r is not None else 0)
    )
    last = None
    for traj in ordered:
        onset = traj.hump_onset_at
        if onset is None:
            continue
        if last is not None and onset < last:
            return False
        last = onset
    # a missing onset for a larger r is consistent with "later"
    for earlier, later in zip(ordered, ordered[1:]):
        if earlier.hump_onset_at is None and later.hump_onset_at is not None:
            return False
    return True
