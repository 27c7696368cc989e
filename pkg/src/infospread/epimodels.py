"""Growth models for author-adoption curves.

Two models are fit to cumulative author counts: a damped exponential
``[r0 / (1 + d)**t] ** t`` whose base reproduction number decays over time,
and the classic SIR compartmental model where the cumulative author count is
identified with I + R and the basic reproduction number is beta / gamma.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .csvio import write_csv
from .errors import CurveDivergedError, SubcriticalError

try:
    from numba import njit

    HAVE_NUMBA = True
except ImportError:  # pragma: no cover - exercised only without numba
    HAVE_NUMBA = False

    def njit(*args, **kwargs):
        if args and callable(args[0]):
            return args[0]

        def deco(fn):
            return fn

        return deco


_EXP_OVERFLOW = 709.0  # exp() overflows float64 just above this exponent

DEFAULT_SIR_STEP = 0.05  # day


@dataclass(frozen=True)
class ExpParams:
    """Damped-exponential parameters: basic reproduction number and damping."""

    r0: float
    d: float = 0.0

    def __post_init__(self):
        if not (self.r0 > 0 and math.isfinite(self.r0)):
            raise ValueError(f"r0 must be positive and finite, got {self.r0}")
        if not (self.d >= 0 and math.isfinite(self.d)):
            raise ValueError(f"d must be non-negative and finite, got {self.d}")


@dataclass(frozen=True)
class SirParams:
    """SIR rates and initial conditions: infection/recovery rates per day."""

    beta: float
    gamma: float
    population: float
    initial_infected: float

    def __post_init__(self):
        if not (self.beta >= 0 and math.isfinite(self.beta)):
            raise ValueError(f"beta must be non-negative, got {self.beta}")
        if not (self.gamma > 0 and math.isfinite(self.gamma)):
            raise ValueError(f"gamma must be positive, got {self.gamma}")
        if not (self.population > 0 and math.isfinite(self.population)):
            raise ValueError(f"population must be positive, got {self.population}")
        if not (0 < self.initial_infected <= self.population):
            raise ValueError(
                "initial_infected must lie in (0, population], got "
                f"{self.initial_infected} with population {self.population}"
            )


@dataclass(frozen=True)
class SirTrajectory:
    """Sampled S/I/R compartments on an increasing time grid."""

    t: np.ndarray
    s: np.ndarray
    i: np.ndarray
    r: np.ndarray
    population: float

    def __post_init__(self):
        t = np.asarray(self.t, dtype=np.float64)
        s = np.asarray(self.s, dtype=np.float64)
        i = np.asarray(self.i, dtype=np.float64)
        r = np.asarray(self.r, dtype=np.float64)
        n = self.population
        if not (len(t) == len(s) == len(i) == len(r)):
            raise ValueError("t, s, i, r must have equal length")
        if np.max(np.abs(s + i + r - n)) > 1e-9 * n:
            raise ValueError("compartments do not conserve the population")
        if min(s.min(), i.min(), r.min()) < -1e-12 * n:
            raise ValueError("compartments significantly negative")
        if np.any(np.diff(r) < -1e-12 * n):
            raise ValueError("recovered compartment must be non-decreasing")
        for name, arr in (("t", t), ("s", s), ("i", i), ("r", r)):
            object.__setattr__(self, name, arr)

    def __len__(self) -> int:
        return len(self.t)

    def to_csv(self, path):
        return write_csv(path, ["t", "s", "i", "r"], zip(self.t, self.s, self.i, self.r))


def exp_model_eval(params: ExpParams, t):
    """Evaluate the damped-exponential model at time(s) ``t``.

    Computed as exp(t * (ln r0 - t * ln(1 + d))), which stays finite and
    accurate where the naive power form would overflow in intermediate steps.
    """
    t_arr = np.asarray(t, dtype=np.float64)
    if np.any(t_arr < 0):
        raise ValueError("t must be non-negative")
    exponent = t_arr * (math.log(params.r0) - t_arr * math.log1p(params.d))
    if np.any(exponent > _EXP_OVERFLOW):
        raise CurveDivergedError("curve diverged")
    out = np.exp(exponent)
    return float(out) if np.isscalar(t) or t_arr.ndim == 0 else out


def exp_turning_point(params: ExpParams) -> float:
    """Time at which the damped-exponential curve peaks.

    The model increases while ln r0 > 2 t ln(1 + d), so the argmax sits at
    t* = ln r0 / (2 ln(1 + d)); without damping the curve never turns.
    """
    if params.d == 0:
        return math.inf
    return math.log(params.r0) / (2.0 * math.log1p(params.d))


@njit(cache=True, nogil=True)
def _rk4_sir(beta, gamma, n, i0, times, step):  # pragma: no cover - jitted
    m = times.shape[0]
    s_out = np.empty(m, dtype=np.float64)
    i_out = np.empty(m, dtype=np.float64)
    r_out = np.empty(m, dtype=np.float64)
    s = n - i0
    i = i0
    r = 0.0
    s_out[0] = s
    i_out[0] = i
    r_out[0] = r
    for seg in range(m - 1):
        dt = times[seg + 1] - times[seg]
        nsub = int(np.ceil(dt / step - 1e-12))
        if nsub < 1:
            nsub = 1
        h = dt / nsub
        for _ in range(nsub):
            f1 = beta * s * i / n
            g1 = gamma * i
            s2 = s - 0.5 * h * f1
            i2 = i + 0.5 * h * (f1 - g1)
            f2 = beta * s2 * i2 / n
            g2 = gamma * i2
            s3 = s - 0.5 * h * f2
            i3 = i + 0.5 * h * (f2 - g2)
            f3 = beta * s3 * i3 / n
            g3 = gamma * i3
            s4 = s - h * f3
            i4 = i + h * (f3 - g3)
            f4 = beta * s4 * i4 / n
            g4 = gamma * i4
            s += h * (-f1 - 2.0 * f2 - 2.0 * f3 - f4) / 6.0
            i += h * ((f1 - g1) + 2.0 * (f2 - g2) + 2.0 * (f3 - g3) + (f4 - g4)) / 6.0
            r += h * (g1 + 2.0 * g2 + 2.0 * g3 + g4) / 6.0
        s_out[seg + 1] = s
        i_out[seg + 1] = i
        r_out[seg + 1] = r
    return s_out, i_out, r_out


def sir_integrate(params: SirParams, grid, step: float = DEFAULT_SIR_STEP) -> SirTrajectory:
    """Fixed-step 4th-order Runge-Kutta solution sampled at ``grid`` points.

    Each grid segment is split into equal substeps no longer than ``step``,
    so every grid point is hit exactly and halving ``step`` exactly doubles
    the substep count (the basis of the step-halving convergence checks).
    """
    if step <= 0:
        raise ValueError("step must be positive")
    grid = np.asarray(grid, dtype=np.float64)
    if grid.ndim != 1 or len(grid) < 1:
        raise ValueError("grid must be a non-empty 1-d sequence")
    if len(grid) > 1 and not np.all(np.diff(grid) > 0):
        raise ValueError("grid must be strictly increasing")
    s, i, r = _rk4_sir(
        float(params.beta),
        float(params.gamma),
        float(params.population),
        float(params.initial_infected),
        grid,
        float(step),
    )
    return SirTrajectory(t=grid, s=s, i=i, r=r, population=params.population)


def sir_cumulative_authors(traj: SirTrajectory) -> np.ndarray:
    """Cumulative author count implied by a trajectory: I + R pointwise."""
    return traj.i + traj.r


def r0_of_sir(params: SirParams) -> float:
    """Basic reproduction number beta / gamma."""
    if params.gamma <= 0:
        raise ValueError("gamma must be positive")
    return params.beta / params.gamma


def herd_threshold(params: SirParams) -> float:
    """Susceptible-population level below which the spread dies out: N / R0."""
    if params.beta == 0:
        raise SubcriticalError("subcritical, no threshold")
    return params.population / r0_of_sir(params)
