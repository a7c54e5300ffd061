"""Closed-form quantities of the combinatorial capability model.

An economy holding ``n`` capabilities can in principle combine any subset of
them into a product; a combination of ``s`` capabilities is viable with
probability ``rho ** s``.  A bounded *product range* ``r`` additionally drops
the simplest products, keeping only lengths in ``[n - r, n]``.  Everything
this module computes follows from two sums over that window:

    variety(n, r)     = sum_{s = max(0, n-r)}^{n}  C(n, s) * rho**s
    avg_length(n, r)  = n * rho * variety(n-1, r) / variety(n, r)

With the range unconstrained these collapse to ``(1 + rho) ** n`` and
``rho * n / (1 + rho)``.  One step of capability growth changes variety by

    variety(n+1, r) - variety(n, r) = rho * variety(n, r) - C(n, r) * rho**(n-r)

(valid for r <= n), so variety declines at the next step exactly when

    variety(n, r) < C(n, r) * rho**(n - r - 1)

which is the onset criterion for the hump in diversification.  Stages are
classified from the same quantities: *developing* while the range does not
bind (r >= n), *transitioning* while it binds but variety still grows, and
*developed* once variety falls.

Two interchangeable arithmetic backends are provided.  The exact backend
(`fractions.Fraction`, integer window sums) makes every identity above hold
with zero tolerance and is the reference for ``n`` up to a thousand or so.
The log-domain backend (`LogScalar`, lgamma-based window sums) trades
exactness for constant-size numbers and is intended for large ``n`` and fast
sweeps; `cross_validate` measures its deviation from the exact backend.

All functions are pure and safe to call concurrently; the only shared state
is an internal memo table of integer window sums.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from enum import Enum
from fractions import Fraction
from functools import lru_cache

from .errors import DomainError
from .scalars import LogScalar, Rational, as_rational

EXACT = "exact"
LOGFLOAT = "logfloat"
BACKENDS = (EXACT, LOGFLOAT)

#: Product range wide enough to never bind (alias for ``None``).
UNBOUNDED = None

#: Log-domain comparisons closer than this (relative) fall back to the exact
#: backend, so the hump boundary can never be misclassified by rounding.
HUMP_DEFER_RTOL = 1e-12

Range = int | None
Scalar = Fraction | LogScalar


class Stage(Enum):
    DEVELOPING = "developing"
    TRANSITIONING = "transitioning"
    DEVELOPED = "developed"


def checked_rho(rho: Rational) -> Fraction:
    """Validate and normalize a viability probability into (0, 1]."""
    value = as_rational(rho)
    if not 0 < value <= 1:
        raise DomainError(f"rho must lie in (0, 1], got {value}")
    return value


def _check_count(n: int, name: str = "n") -> None:
    if not isinstance(n, int) or isinstance(n, bool) or n < 0:
        raise DomainError(f"{name} must be a nonnegative integer, got {n!r}")


def _check_range(r: Range) -> None:
    if r is UNBOUNDED:
        return
    if not isinstance(r, int) or isinstance(r, bool) or r < 0:
        raise DomainError(f"r must be a nonnegative integer or UNBOUNDED, got {r!r}")


def _check_backend(backend: str) -> None:
    if backend not in BACKENDS:
        raise DomainError(f"backend must be one of {BACKENDS}, got {backend!r}")


@dataclass(frozen=True)
class ModelParams:
    """Model parameters: viability probability, product range, backend."""

    rho: Fraction
    r: Range = UNBOUNDED
    backend: str = EXACT

    def __post_init__(self) -> None:
        object.__setattr__(self, "rho", checked_rho(self.rho))
        _check_range(self.r)
        _check_backend(self.backend)


def binomial(n: int, s: int) -> int:
    """C(n, s), with the convention that s outside [0, n] gives 0."""
    _check_count(n)
    if s < 0 or s > n:
        return 0
    return math.comb(n, s)


@lru_cache(maxsize=128)
def _window_table(n: int, p: int, q: int) -> tuple[int, ...]:
    """Suffix sums of scaled window terms for rho = p/q.

    Entry ``j`` is ``sum_{s = n-j}^{n} C(n, s) p**s q**(n-s)``, i.e. the
    numerator of ``variety(n, r=j)`` over the common denominator ``q**n``.
    Built with an integer-exact multiplicative recurrence, one pass per n.
    """
    term = p**n
    acc = term
    out = [acc]
    for s in range(n, 0, -1):
        # C(n, s-1) p^(s-1) q^(n-s+1) from the term for s; both divisions exact
        term = term * s * q // ((n - s + 1) * p)
        acc += term
        out.append(acc)
    return tuple(out)


def _log_binomial(n: int, s: int) -> float:
    return math.lgamma(n + 1) - math.lgamma(s + 1) - math.lgamma(n - s + 1)


def _log_window_sum(n: int, width: int, log_rho: float) -> float:
    """log of sum_{s = n-width}^{n} C(n, s) rho**s, for 0 <= width <= n."""
    lg_top = math.lgamma(n + 1)
    terms = [
        lg_top - math.lgamma(s + 1) - math.lgamma(n - s + 1) + s * log_rho
        for s in range(n - width, n + 1)
    ]
    peak = max(terms)
    return peak + math.log(math.fsum(math.exp(t - peak) for t in terms))


def variety(n: int, rho: Rational, r: Range = UNBOUNDED, backend: str = EXACT) -> Scalar:
    """Expected number of viable products for ``n`` capabilities.

    Unconstrained (``r`` is UNBOUNDED or ``r >= n``) this is
    ``(1 + rho) ** n``; a binding range keeps only lengths in ``[n - r, n]``.
    """
    _check_count(n)
    _check_range(r)
    _check_backend(backend)
    rho = checked_rho(rho)
    p, q = rho.numerator, rho.denominator
    if backend == EXACT:
        if r is UNBOUNDED or r >= n:
            return Fraction((p + q) ** n, q**n)
        return Fraction(_window_table(n, p, q)[r], q**n)
    if r is UNBOUNDED or r >= n:
        return LogScalar.from_log(n * math.log1p(p / q))
    log_rho = math.log(p) - math.log(q)
    return LogScalar.from_log(_log_window_sum(n, r, log_rho))


def avg_length(n: int, rho: Rational, r: Range = UNBOUNDED, backend: str = EXACT) -> Scalar:
    """Expected mean product length.

    ``rho * n / (1 + rho)`` while the range does not bind; in general the
    ratio form ``n * rho * variety(n-1, r) / variety(n, r)``, which equals
    the length-weighted mean over the allowed window.
    """
    _check_count(n)
    _check_range(r)
    _check_backend(backend)
    rho = checked_rho(rho)
    if n == 0:
        return Fraction(0) if backend == EXACT else LogScalar.zero()
    p, q = rho.numerator, rho.denominator
    if backend == EXACT:
        if r is UNBOUNDED or r >= n:
            return Fraction(p * n, p + q)
        # common powers of q cancel between the two window sums
        return Fraction(n * p * _window_table(n - 1, p, q)[r], _window_table(n, p, q)[r])
    if r is UNBOUNDED or r >= n:
        return LogScalar.from_float(n * p / (p + q))
    log_rho = math.log(p) - math.log(q)
    log_prev = _log_window_sum(n - 1, r, log_rho)
    log_cur = _log_window_sum(n, r, log_rho)
    return LogScalar.from_log(math.log(n) + log_rho + log_prev - log_cur)


def variety_delta(n: int, rho: Rational, r: Range = UNBOUNDED, backend: str = EXACT) -> Scalar:
    """One growth step of variety, ``variety(n+1, r) - variety(n, r)`` (signed)."""
    _check_count(n)
    _check_range(r)
    _check_backend(backend)
    rho = checked_rho(rho)
    p, q = rho.numerator, rho.denominator
    if backend == EXACT:
        if r is UNBOUNDED or r >= n + 1:
            return Fraction(p * (p + q) ** n, q ** (n + 1))
        t_next = _window_table(n + 1, p, q)[r]
        t_cur = _window_table(n, p, q)[min(r, n)]
        return Fraction(t_next - q * t_cur, q ** (n + 1))
    if r is UNBOUNDED or r >= n + 1:
        return LogScalar.from_log(math.log(p) - math.log(q) + n * math.log1p(p / q))
    nxt = variety(n + 1, rho, r, LOGFLOAT)
    cur = variety(n, rho, r, LOGFLOAT)
    assert isinstance(nxt, LogScalar) and isinstance(cur, LogScalar)
    return nxt - cur


def _hump_exact(n: int, rho: Fraction, r: int) -> bool:
    lhs = variety(n, rho, r)
    return lhs < binomial(n, r) * rho ** (n - r - 1)


def hump_condition(n: int, rho: Rational, r: Range = UNBOUNDED, backend: str = EXACT) -> bool:
    """Whether variety declines at the next capability while the range binds.

    For ``r < n`` this is exactly ``variety(n+1, r) < variety(n, r)``, tested
    through the closed form ``variety(n, r) < C(n, r) * rho**(n - r - 1)``.
    For ``r >= n`` (range not yet binding at ``n``) it is defined False, so
    the earliest possible onset along a trajectory is ``n = r + 1``; note the
    step from ``n = r`` can still lose variety when
    ``rho * (1 + rho)**r < 1``.

    In the log backend, comparisons within ``HUMP_DEFER_RTOL`` fall back to
    the exact backend so the boundary is never decided by rounding.
    """
    _check_count(n)
    _check_range(r)
    _check_backend(backend)
    rho = checked_rho(rho)
    if r is UNBOUNDED or r >= n:
        return False
    if backend == EXACT:
        return _hump_exact(n, rho, r)
    p, q = rho.numerator, rho.denominator
    log_rho = math.log(p) - math.log(q)
    lhs = _log_window_sum(n, r, log_rho)
    rhs = _log_binomial(n, r) + (n - r - 1) * log_rho
    if abs(lhs - rhs) <= HUMP_DEFER_RTOL * max(1.0, abs(lhs), abs(rhs)):
        return _hump_exact(n, rho, r)
    return lhs < rhs


def classify_stage(n: int, rho: Rational, r: Range = UNBOUNDED, backend: str = EXACT) -> Stage:
    """DEVELOPING while r >= n, then TRANSITIONING until the hump, DEVELOPED after."""
    _check_count(n)
    _check_range(r)
    rho = checked_rho(rho)
    if r is UNBOUNDED or r >= n:
        return Stage.DEVELOPING
    return Stage.DEVELOPED if hump_condition(n, rho, r, backend) else Stage.TRANSITIONING


def _relative_deviation(exact: Fraction, approx: LogScalar) -> float:
    """|approx/exact - 1| computed in log space, safe for huge magnitudes."""
    if exact == 0:
        return 0.0 if approx.sign == 0 else math.inf
    if approx.sign <= 0:
        return math.inf
    log_exact = math.log(exact.numerator) - math.log(exact.denominator)
    return abs(math.expm1(approx.log_abs - log_exact))


@dataclass(frozen=True)
class CrossCheck:
    """Exact vs log-domain evaluation of variety and average length at one point."""

    n: int
    r: Range
    rho: Fraction
    tol: float
    variety_exact: Fraction
    variety_log: LogScalar
    avg_length_exact: Fraction
    avg_length_log: LogScalar
    variety_rel_dev: float
    avg_length_rel_dev: float

    @property
    def max_rel_dev(self) -> float:
        return max(self.variety_rel_dev, self.avg_length_rel_dev)

    @property
    def ok(self) -> bool:
        return self.max_rel_dev <= self.tol


def cross_validate(n: int, rho: Rational, r: Range = UNBOUNDED, tol: float = 1e-9) -> CrossCheck:
    """Evaluate variety and average length on both backends and compare.

    Report-only: deviations beyond ``tol`` flip ``ok`` but never raise.
    """
    if not tol > 0:
        raise DomainError(f"tol must be positive, got {tol!r}")
    _check_count(n)
    _check_range(r)
    rho = checked_rho(rho)
    v_exact = variety(n, rho, r, EXACT)
    v_log = variety(n, rho, r, LOGFLOAT)
    a_exact = avg_length(n, rho, r, EXACT)
    a_log = avg_length(n, rho, r, LOGFLOAT)
    assert isinstance(v_exact, Fraction) and isinstance(a_exact, Fraction)
    assert isinstance(v_log, LogScalar) and isinstance(a_log, LogScalar)
    return CrossCheck(
        n=n,
        r=r,
        rho=rho,
        tol=tol,
        variety_exact=v_exact,
        variety_log=v_log,
        avg_length_exact=a_exact,
        avg_length_log=a_log,
        variety_rel_dev=_relative_deviation(v_exact, v_log),
        avg_length_rel_dev=_relative_deviation(a_exact, a_log),
    )
