"""Least-squares model fitting and bootstrap confidence intervals.

Both models are fit by minimizing the sum of squared residuals on raw counts
with Nelder-Mead simplex descent from a fixed grid of starting points,
followed by restarts from the incumbent until the objective stops improving.
Confidence intervals for the basic reproduction number come from a
residual-resampling bootstrap: replicate curves are the fitted curve plus
resampled residuals (clamped at zero and re-monotonized), each refit from the
base estimate, with 5%/95% empirical quantiles of the replicate R0 values.
"""

from __future__ import annotations

import math
import warnings
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass

import numpy as np

from .curves import EpiCurve
from .epimodels import _EXP_OVERFLOW, _rk4_sir, ExpParams, SirParams, r0_of_sir
from .errors import (
    DegenerateCurveError,
    IdentifiabilityWarning,
    UnrealisticR0Warning,
    UnstableBootstrapError,
)
from .optim import nelder_mead
from .rng import substream

# Deterministic multi-start grids.  The EXP grid spans sub- and super-critical
# reproduction numbers with and without damping; SIR starts combine plausible
# R0 guesses with a small and a large candidate population.
EXP_STARTS = tuple((r0, d) for r0 in (1.1, 1.5, 2.0, 4.0) for d in (0.0, 0.05))
SIR_START_R0 = (1.5, 2.0, 4.0, 8.0)
SIR_START_POP_MULT = (2.0, 20.0)
SIR_START_GAMMA = 0.2

SIR_MAX_RATE = 20.0  # upper bound for both beta and gamma, per day
SIR_MAX_POP_MULT = 1e4  # population searched in [ymax, 1e4 * ymax]
UNREALISTIC_R0 = 20.0

_RESTART_RTOL = 1e-8


@dataclass
class FitResult:
    """Outcome of a least-squares fit."""

    model: str
    params: ExpParams | SirParams
    sse: float
    residuals: np.ndarray  # data minus fitted values, aligned to curve days
    converged: bool
    evaluations: int

    @property
    def r0(self) -> float:
        if self.model == "exp":
            return self.params.r0
        return r0_of_sir(self.params)


@dataclass
class BootstrapInterval:
    """Empirical [5%, 95%] interval for a bootstrapped quantity."""

    quantity: str
    lower: float
    upper: float
    replicates: int
    point: float
    seed: int

    def __post_init__(self):
        if self.lower > self.upper:
            raise ValueError("interval bounds out of order")


@dataclass
class SupercriticalityRow:
    """One rendered report row: is an infodemic possible on this platform?"""

    name: str
    quantity: str
    lower: float
    upper: float
    point: float
    status: str  # supercritical | not_supercritical | inconclusive
    infodemic_possible: bool


def _minimize_multistart(fn, starts, initial_step, xatol, restart_step, max_restarts=6,
                         max_iter=20000):
    """Best-of-starts Nelder-Mead, then restart from the incumbent until the
    relative SSE improvement over one restart drops below 1e-8."""
    best = None
    nfev = 0
    for s in starts:
        res = nelder_mead(fn, s, initial_step=initial_step, xatol=xatol, max_iter=max_iter)
        nfev += res.nfev
        if best is None or res.fun < best.fun:
            best = res
    converged = False
    for _ in range(max_restarts):
        prev = best.fun
        res = nelder_mead(fn, best.x, initial_step=restart_step, xatol=xatol, max_iter=max_iter)
        nfev += res.nfev
        if res.fun < best.fun:
            best = res
        if prev <= 0 or (prev - best.fun) <= _RESTART_RTOL * prev:
            converged = True
            break
    return best, nfev, converged


# ---------------------------------------------------------------------------
# EXP model


def _exp_objective(t: np.ndarray, y: np.ndarray):
    log1p = np.log1p

    def fn(x):
        r0, d = x
        if r0 <= 1e-12 or d <= -0.999:
            return np.inf
        exponent = t * (math.log(r0) - t * log1p(d))
        if exponent.max() > _EXP_OVERFLOW:
            return np.inf
        resid = np.exp(exponent) - y
        return float(resid @ resid)

    return fn


def _fit_exp_arrays(t, y, starts, xatol, max_restarts):
    fn = _exp_objective(t, y)
    best, nfev, converged = _minimize_multistart(
        fn, starts, initial_step=(0.2, 0.02), xatol=xatol,
        restart_step=(1e-4, 1e-4), max_restarts=max_restarts,
    )
    r0_est, d_est = best.x
    sse = best.fun
    if d_est < 0:
        # The damping-free optimum lies on the boundary: re-solve in r0 alone.
        fn1 = lambda z: fn(np.array([z[0], 0.0]))
        res1, nfev1, conv1 = _minimize_multistart(
            fn1, [np.array([r0_est])], initial_step=(1e-3,), xatol=xatol,
            restart_step=(1e-5,), max_restarts=max_restarts,
        )
        r0_est, d_est, sse = float(res1.x[0]), 0.0, res1.fun
        nfev += nfev1
        converged = converged and conv1
    params = ExpParams(r0=float(r0_est), d=float(d_est))
    exponent = t * (math.log(params.r0) - t * math.log1p(params.d))
    residuals = y - np.exp(exponent)
    return FitResult("exp", params, float(sse), residuals, converged, nfev)


def fit_exp(curve: EpiCurve, increments: bool = False, xatol: float = 1e-11,
            max_restarts: int = 6) -> FitResult:
    """Fit the damped-exponential model to a curve.

    By default the model is fit to the cumulative values; ``increments=True``
    instead fits the day-over-day differences (residuals then align to the
    curve's days from the second one on).
    """
    if len(curve) < 3:
        raise ValueError("curve must have at least 3 points")
    t = curve.day.astype(np.float64)
    y = curve.value.astype(np.float64)
    if increments:
        y = np.diff(y)
        t = t[1:]
    if np.all(y == y[0]):
        raise DegenerateCurveError("no growth signal")
    return _fit_exp_arrays(t, y, EXP_STARTS, xatol, max_restarts)


# ---------------------------------------------------------------------------
# SIR model


def _sir_objective(t: np.ndarray, y: np.ndarray, step: float):
    ymax = float(np.max(y))
    log_rate_max = math.log(SIR_MAX_RATE)
    log_n_lo = math.log(ymax)
    log_n_hi = math.log(SIR_MAX_POP_MULT * ymax)

    def fn(x):
        lb, lg, ln, li = x
        if lb > log_rate_max or lg > log_rate_max or lg < -50.0 or lb < -50.0:
            return np.inf
        if ln < log_n_lo or ln > log_n_hi or li > ln or li < -700.0:
            return np.inf
        s, i, r = _rk4_sir(math.exp(lb), math.exp(lg), math.exp(ln), math.exp(li), t, step)
        resid = (i + r) - y
        return float(resid @ resid)

    return fn


def _sir_starts(y):
    ymax = float(np.max(y))
    y0 = max(float(y[0]), 1e-3)
    starts = []
    for r0_start in SIR_START_R0:
        for mult in SIR_START_POP_MULT:
            n = mult * ymax
            i0 = min(y0, n)
            starts.append(np.log([r0_start * SIR_START_GAMMA, SIR_START_GAMMA, n, i0]))
    return starts


def _fit_sir_arrays(t, y, starts, step, xatol, max_restarts):
    fn = _sir_objective(t, y, step)
    best, nfev, converged = _minimize_multistart(
        fn, starts, initial_step=0.3, xatol=xatol,
        restart_step=1e-3, max_restarts=max_restarts, max_iter=6000,
    )
    lb, lg, ln, li = best.x
    params = SirParams(
        beta=math.exp(lb), gamma=math.exp(lg),
        population=math.exp(ln), initial_infected=min(math.exp(li), math.exp(ln)),
    )
    s, i, r = _rk4_sir(params.beta, params.gamma, params.population,
                       params.initial_infected, t, step)
    residuals = y - (i + r)
    return FitResult("sir", params, float(best.fun), residuals, converged, nfev)


def fit_sir(curve: EpiCurve, step: float = 0.05, xatol: float = 1e-8,
            max_restarts: int = 6) -> FitResult:
    """Fit the SIR model (cumulative authors = I + R) to a curve.

    All four parameters (beta, gamma, population, initial infected) are free,
    searched in log space within beta, gamma <= 20/day and population in
    [max value, 1e4 * max value].  Individual rates and the population are
    often poorly identified; the ratio beta/gamma is the robust quantity.
    Emits :class:`UnrealisticR0Warning` when the fitted R0 exceeds 20 and
    :class:`IdentifiabilityWarning` when a parameter lands on a search bound.
    """
    if len(curve) < 5:
        raise ValueError("curve must have at least 5 points")
    t = curve.day.astype(np.float64)
    y = curve.value.astype(np.float64)
    if np.all(y == y[0]):
        raise DegenerateCurveError("no growth signal")
    result = _fit_sir_arrays(t, y, _sir_starts(y), step, xatol, max_restarts)
    _warn_sir(result.params, float(np.max(y)))
    return result


def _warn_sir(params: SirParams, ymax: float):
    r0 = r0_of_sir(params)
    if r0 > UNREALISTIC_R0:
        warnings.warn(
            f"fitted R0 = {r0:.3g} is beyond anything observed in real epidemics; "
            "the growth is likely too abrupt for a continuous compartmental model",
            UnrealisticR0Warning,
            stacklevel=3,
        )
    at_bound = (
        params.population <= 1.01 * ymax
        or params.population >= 0.99 * SIR_MAX_POP_MULT * ymax
        or params.initial_infected >= 0.99 * params.population
        or params.beta >= 0.99 * SIR_MAX_RATE
        or params.gamma >= 0.99 * SIR_MAX_RATE
    )
    if at_bound:
        warnings.warn(
            "a fitted SIR parameter sits at its search bound; absolute rates and "
            "population are not identified, trust only beta/gamma",
            IdentifiabilityWarning,
            stacklevel=3,
        )


# ---------------------------------------------------------------------------
# Bootstrap


def _refit_replicate(model, t, y, base: FitResult, step, xatol):
    if np.all(y == y[0]):
        raise DegenerateCurveError("no growth signal")
    if model == "exp":
        starts = [np.array([base.params.r0, base.params.d])]
        return _fit_exp_arrays(t, y, starts, xatol, max_restarts=4)
    starts = [np.log([base.params.beta, base.params.gamma,
                      base.params.population, base.params.initial_infected])]
    return _fit_sir_arrays(t, y, starts, step, xatol, max_restarts=4)


def bootstrap_r0(curve: EpiCurve, model: str, b: int, seed: int, workers: int = 1,
                 step: float = 0.05) -> BootstrapInterval:
    """Residual-resampling bootstrap interval for the basic reproduction number.

    Replicate ``bi`` draws its resampling indices from an independent Philox
    stream keyed by ``(seed, bi)``, so results are bit-identical for a given
    seed regardless of ``workers`` or replicate execution order.
    """
    if b < 100:
        raise ValueError("bootstrap needs at least 100 replicates")
    if model not in ("exp", "sir"):
        raise ValueError(f"unknown model {model!r}")

    base = fit_exp(curve) if model == "exp" else fit_sir(curve, step=step)
    xatol = 1e-11 if model == "exp" else 1e-8
    t = curve.day.astype(np.float64)
    y = curve.value.astype(np.float64)
    fitted = y - base.residuals
    residuals = base.residuals
    n = len(y)

    def replicate(bi: int) -> float:
        rng = substream(seed, bi)
        idx = rng.integers(0, n, size=n)
        yb = fitted + residuals[idx]
        np.clip(yb, 0.0, None, out=yb)
        yb = np.maximum.accumulate(yb)
        try:
            fit = _refit_replicate(model, t, yb, base, step, xatol)
        except (DegenerateCurveError, ValueError):
            return math.nan
        if not fit.converged or not math.isfinite(fit.r0):
            return math.nan
        return fit.r0

    if workers > 1:
        with ThreadPoolExecutor(max_workers=workers) as pool:
            values = np.array(list(pool.map(replicate, range(b))))
    else:
        values = np.array([replicate(bi) for bi in range(b)])

    failed = int(np.sum(~np.isfinite(values)))
    if failed > 0.2 * b:
        raise UnstableBootstrapError(
            f"unstable bootstrap: {failed}/{b} replicate fits failed"
        )
    good = values[np.isfinite(values)]
    lower, upper = np.quantile(good, [0.05, 0.95])
    return BootstrapInterval(
        quantity=f"R0_{model.upper()}",
        lower=float(lower),
        upper=float(upper),
        replicates=b,
        point=base.r0,
        seed=seed,
    )


def supercriticality_report(intervals, names=None) -> list[SupercriticalityRow]:
    """Classify each interval against the infodemic threshold R0 = 1."""
    intervals = list(intervals)
    if not intervals:
        raise ValueError("need at least one interval")
    if names is None:
        names = [iv.quantity for iv in intervals]
    rows = []
    for name, iv in zip(names, intervals):
        if iv.lower > 1.0:
            status = "supercritical"
        elif iv.upper < 1.0:
            status = "not_supercritical"
        else:
            status = "inconclusive"
        rows.append(
            SupercriticalityRow(
                name=str(name),
                quantity=iv.quantity,
                lower=iv.lower,
                upper=iv.upper,
                point=iv.point,
                status=status,
                infodemic_possible=status == "supercritical",
            )
        )
    return rows
