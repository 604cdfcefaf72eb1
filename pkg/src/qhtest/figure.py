"""Comparison of ``1 / (-ln x)`` with ``1 / (2 (1 - sqrt x))`` on ``(0, 1)``.

With ``x`` a fidelity, the first is the fidelity scale of sample
complexity and the second the squared-Bures-distance scale
(``d_B^2 = 2 (1 - sqrt F)``). The second always dominates and the gap
between them never exceeds ``1/2``, which is attained as ``x -> 0``;
as ``x -> 1`` the gap tends to ``1/4``.
"""

from __future__ import annotations

from typing import NamedTuple

import numpy as np

from ._validation import ValidationError

__all__ = ["FigureTable", "fig_compare", "inverse_neg_log", "inverse_bures", "gap"]


class FigureTable(NamedTuple):
    """Columns of the comparison table; row 0 is the ``x -> 0`` limit."""

    x: np.ndarray
    inverse_neg_log: np.ndarray
    inverse_bures: np.ndarray
    gap: np.ndarray

    def rows(self):
        return list(zip(*(c.tolist() for c in self)))


def _u(x):
    with np.errstate(divide="ignore"):
        return -np.log(np.asarray(x, dtype=float))


def inverse_neg_log(x):
    """``1 / (-ln x)``, with the limit ``0`` at ``x = 0``."""
    u = _u(x)
    with np.errstate(divide="ignore"):
        return np.where(np.isinf(u), 0.0, 1.0 / u)


def inverse_bures(x):
    """``1 / (2 (1 - sqrt x))``, computed as ``-1 / (2 expm1(-u/2))`` with ``u = -ln x``."""
    u = _u(x)
    with np.errstate(divide="ignore"):
        return -0.5 / np.expm1(-0.5 * u)


def gap(x):
    """``1/(2(1 - sqrt x)) - 1/(-ln x)``, accurate near ``x = 1``.

    For ``u = -ln x`` below ``1e-3`` the difference is evaluated from its
    series ``1/4 + u/48 - u^3/5760``, which avoids cancellation between two
    large terms.
    """
    u = _u(x)
    small = u < 1e-3
    with np.errstate(divide="ignore", invalid="ignore"):
        direct = inverse_bures(x) - inverse_neg_log(x)
    with np.errstate(invalid="ignore", over="ignore"):
        series = 0.25 + u / 48.0 - u ** 3 / 5760.0
    return np.where(small, series, direct)


def fig_compare(grid_points: int = 101) -> FigureTable:
    """Tabulate both functions and their gap.

    Args:
        grid_points: number of interior points ``x_i = i / (grid_points + 1)``.

    Returns:
        :class:`FigureTable` with ``grid_points + 1`` rows; the first is the
        ``x -> 0`` limit ``(0, 0, 1/2, 1/2)``.

    >>> t = fig_compare(3)
    >>> [round(v, 4) for v in t.rows()[2]]
    [0.5, 1.4427, 1.7071, 0.2644]
    """
    if int(grid_points) != grid_points or grid_points < 2:
        raise ValidationError(f"grid_points must be an integer >= 2, got {grid_points!r}")
    x = np.concatenate([[0.0], np.arange(1, grid_points + 1) / (grid_points + 1)])
    return FigureTable(x, inverse_neg_log(x), inverse_bures(x), gap(x))
