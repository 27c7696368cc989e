"""Nelder-Mead simplex minimization.

A compact, deterministic implementation of the classic reflect / expand /
contract / shrink scheme.  Bound handling is delegated to the objective:
infeasible points must return ``+inf`` and the simplex walks back inside.
Ties are broken by stable sorting, so a given start always produces the same
trajectory, which the bootstrap's bit-reproducibility contract relies on.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Callable, Sequence

import numpy as np

_REFLECT = 1.0
_EXPAND = 2.0
_CONTRACT = 0.5
_SHRINK = 0.5


@dataclass
class MinimizeResult:
    x: np.ndarray
    fun: float
    nfev: int
    iterations: int
    converged: bool


def _call(fn: Callable, x: np.ndarray) -> float:
    value = float(fn(x))
    return value if value == value else np.inf  # NaN counts as a wall


def nelder_mead(
    fn: Callable[[np.ndarray], float],
    x0: Sequence[float],
    initial_step: float | Sequence[float] = 0.1,
    xatol: float = 1e-10,
    max_iter: int = 20000,
) -> MinimizeResult:
    """Minimize ``fn`` starting from ``x0``.

    ``initial_step`` sets the edge lengths of the starting simplex (scalar or
    per-coordinate).  Convergence is declared when every vertex lies within
    ``xatol`` of the best one in every coordinate.
    """
    x0 = np.asarray(x0, dtype=np.float64)
    n = x0.size
    if n == 0:
        raise ValueError("x0 must have at least one coordinate")
    steps = np.broadcast_to(np.asarray(initial_step, dtype=np.float64), (n,)).copy()
    if np.any(steps == 0):
        raise ValueError("initial_step entries must be nonzero")

    sim = np.tile(x0, (n + 1, 1))
    for i in range(n):
        sim[i + 1, i] += steps[i]
    fsim = np.array([_call(fn, v) for v in sim])
    nfev = n + 1

    order = np.argsort(fsim, kind="stable")
    sim, fsim = sim[order], fsim[order]

    iterations = 0
    converged = False
    while iterations < max_iter:
        if np.max(np.abs(sim[1:] - sim[0])) <= xatol:
            converged = True
            break
        iterations += 1

        centroid = sim[:-1].mean(axis=0)
        worst = sim[-1]
        xr = centroid + _REFLECT * (centroid - worst)
        fr = _call(fn, xr)
        nfev += 1

        if fr < fsim[0]:
            xe = centroid + _EXPAND * (centroid - worst)
            fe = _call(fn, xe)
            nfev += 1
            if fe < fr:
                sim[-1], fsim[-1] = xe, fe
            else:
                sim[-1], fsim[-1] = xr, fr
        elif fr < fsim[-2]:
            sim[-1], fsim[-1] = xr, fr
        else:
            if fr < fsim[-1]:  # outside contraction
                xc = centroid + _CONTRACT * (xr - centroid)
                fc = _call(fn, xc)
                nfev += 1
                if fc <= fr:
                    sim[-1], fsim[-1] = xc, fc
                else:
                    sim, fsim, nfev = _shrink(fn, sim, fsim, nfev)
            else:  # inside contraction
                xc = centroid + _CONTRACT * (worst - centroid)
                fc = _call(fn, xc)
                nfev += 1
                if fc < fsim[-1]:
                    sim[-1], fsim[-1] = xc, fc
                else:
                    sim, fsim, nfev = _shrink(fn, sim, fsim, nfev)

        order = np.argsort(fsim, kind="stable")
        sim, fsim = sim[order], fsim[order]

    return MinimizeResult(
        x=sim[0].copy(),
        fun=float(fsim[0]),
        nfev=nfev,
        iterations=iterations,
        converged=converged,
    )


def _shrink(fn, sim, fsim, nfev):
    best = sim[0]
    for i in range(1, len(sim)):
        sim[i] = best + _SHRINK * (sim[i] - best)
        fsim[i] = _call(fn, sim[i])
    return sim, fsim, nfev + len(sim) - 1
