"""Derivative-free minimisation helpers for the measurement optimisations."""

from __future__ import annotations

import numpy as np
from scipy.optimize import OptimizeResult, minimize


def multistart_nelder_mead(
    fun,
    starts,
    bounds=None,
    xatol: float = 1e-10,
    fatol: float = 1e-10,
    maxiter: int = 4000,
    screen_tol: float | None = 1e-5,
) -> OptimizeResult:
    """Run bounded Nelder-Mead from every start and keep the lowest minimum.

    With ``screen_tol`` set, every start is first run to that looser
    tolerance and only the best candidate is refined to ``xatol``/``fatol``.
    ``result.nfev`` is the total count over all runs and ``result.nstarts``
    the number of starts.
    """

    def run(x0, xtol, ftol):
        return minimize(
            fun,
            x0,
            method="Nelder-Mead",
            bounds=bounds,
            options={"xatol": xtol, "fatol": ftol, "maxiter": maxiter, "maxfev": 2 * maxiter},
        )

    coarse_x = xatol if screen_tol is None else max(screen_tol, xatol)
    coarse_f = fatol if screen_tol is None else max(screen_tol, fatol)
    best = None
    nfev = 0
    starts = np.atleast_2d(np.asarray(starts, dtype=float))
    for x0 in starts:
        res = run(x0, coarse_x, coarse_f)
        nfev += res.nfev
        if best is None or res.fun < best.fun:
            best = res
    if screen_tol is not None:
        fine = run(best.x, xatol, fatol)
        nfev += fine.nfev
        if fine.fun <= best.fun:
            best = fine
    best.nfev = nfev
    best.nstarts = len(starts)
    return best


def golden_section(fun, a: float, b: float, tol: float = 1e-8, maxiter: int = 200):
    """Minimise a unimodal ``fun`` on ``[a, b]``; returns ``(x, fun(x))``."""
    inv_phi = (np.sqrt(5.0) - 1.0) / 2.0
    c = b - inv_phi * (b - a)
    d = a + inv_phi * (b - a)
    fc, fd = fun(c), fun(d)
    for _ in range(maxiter):
        if abs(b - a) <= tol:
            break
        if fc < fd:
            b, d, fd = d, c, fc
            c = b - inv_phi * (b - a)
            fc = fun(c)
        else:
            a, c, fc = c, d, fd
            d = a + inv_phi * (b - a)
            fd = fun(d)
    x = 0.5 * (a + b)
    return x, fun(x)
