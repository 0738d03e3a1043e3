"""Equilibrium signatures of the LMG phase transition.

Two standard markers of the second-order transition at h = 1: the
excitation gaps E_k - E_0 against field strength (the low-lying spectrum
pairs up and the gap closes exponentially in N for h < 1), and the second
derivative of the ground-state energy per site, whose dip sharpens into a
discontinuity as N grows.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .model import ModelParams, eigenvalues

__all__ = [
    "GapCurve",
    "CurvatureCurve",
    "gap_curve",
    "second_derivative_energy",
    "central_second_difference",
]


@dataclass(frozen=True)
class GapCurve:
    """Excitation gaps E_k - E_0, k = 1..K, over a field grid.

    ``gaps[i, k-1]`` is the k-th gap at ``h_grid[i]``.
    """

    N: int
    gamma: float
    h_grid: np.ndarray
    gaps: np.ndarray


@dataclass(frozen=True)
class CurvatureCurve:
    """Second derivative of E_0/N with respect to h, central differences.

    ``d2e`` covers only the interior of the uniform grid; it aligns with
    ``h_grid[1:-1]`` (see :attr:`h_interior`).
    """

    N: int
    gamma: float
    h_grid: np.ndarray
    d2e: np.ndarray

    @property
    def h_interior(self) -> np.ndarray:
        return self.h_grid[1:-1]


def _ascending_grid(h_grid) -> np.ndarray:
    h = np.asarray(h_grid, dtype=float)
    if h.ndim != 1 or h.size < 1:
        raise ValueError("field grid must be a one-dimensional sequence")
    if np.any(np.diff(h) <= 0):
        raise ValueError("field grid must be strictly ascending")
    return h


def _uniform_step(h: np.ndarray, rtol: float = 1e-12) -> float:
    steps = np.diff(h)
    dh = float(steps[0])
    if np.any(np.abs(steps - dh) > rtol * abs(dh)):
        raise ValueError("field grid must be uniform to 1e-12 relative spacing")
    return dh


def _spectrum_at(N: int, gamma: float, h: float) -> np.ndarray:
    try:
        return eigenvalues(ModelParams(N, h, gamma))
    except np.linalg.LinAlgError as exc:
        raise np.linalg.LinAlgError(f"eigensolve failed at h = {h!r}: {exc}") from exc


def gap_curve(N: int, gamma: float, h_grid, K: int = 5) -> GapCurve:
    """Gaps to the first K excited states at each field value."""
    h = _ascending_grid(h_grid)
    if not 0 <= K <= N:
        raise ValueError(f"need 0 <= K <= N, got K={K}")
    gaps = np.empty((h.size, K))
    for i, hval in enumerate(h):
        w = _spectrum_at(N, gamma, float(hval))
        gaps[i] = w[1:K + 1] - w[0]
    return GapCurve(N=N, gamma=gamma, h_grid=h, gaps=gaps)


def central_second_difference(values: np.ndarray, step: float) -> np.ndarray:
    """Interior-point second difference; annihilates constant offsets exactly."""
    values = np.asarray(values, dtype=float)
    return (values[2:] - 2.0 * values[1:-1] + values[:-2]) / step**2


def second_derivative_energy(N: int, gamma: float, h_grid) -> CurvatureCurve:
    """d^2(E_0/N)/dh^2 on the interior of a uniform field grid."""
    h = _ascending_grid(h_grid)
    if h.size < 3:
        raise ValueError("need at least 3 grid points for a second difference")
    dh = _uniform_step(h)
    e0 = np.array([_spectrum_at(N, gamma, float(hv))[0] / N for hv in h])
    return CurvatureCurve(N=N, gamma=gamma, h_grid=h,
                          d2e=central_second_difference(e0, dh))
