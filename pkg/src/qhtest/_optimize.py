"""One-dimensional minimization on an interval: uniform grid, then golden section."""

from __future__ import annotations

import numpy as np
from scipy.optimize import minimize_scalar

__all__ = ["grid_golden_minimize"]


def grid_golden_minimize(f, lo: float, hi: float, n_grid: int = 64, xtol: float = 1e-8):
    """Minimize a scalar function of one variable on ``[lo, hi]``.

    ``f`` is sampled on ``n_grid`` equally spaced points; the best sample
    and its neighbours form a bracket that golden-section search refines
    until the bracket is narrower than about ``xtol``. This finds the global
    minimum of unimodal (e.g. convex or log-convex) objectives.

    Returns:
        Tuple ``(x_min, f_min)``.
    """
    xs = np.linspace(lo, hi, n_grid)
    fs = np.array([f(x) for x in xs], dtype=float)
    i = int(np.nanargmin(fs))
    best_x, best_f = float(xs[i]), float(fs[i])
    if 0 < i < n_grid - 1 and fs[i] < fs[i - 1] and fs[i] < fs[i + 1]:
        scale = max(abs(xs[i - 1]), abs(xs[i + 1]), 1e-300)
        res = minimize_scalar(
            f, bracket=(xs[i - 1], xs[i], xs[i + 1]), method="golden", tol=xtol / scale
        )
    else:
        a = xs[max(i - 1, 0)]
        b = xs[min(i + 1, n_grid - 1)]
        res = minimize_scalar(f, bounds=(a, b), method="bounded", options={"xatol": xtol})
    if np.isfinite(res.fun) and res.fun < best_f:
        best_x, best_f = float(res.x), float(res.fun)
    return best_x, best_f
