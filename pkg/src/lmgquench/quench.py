"""Sudden-quench dynamics and dynamical orthogonality.

The system starts in the ground state of H(h_i) and, at t = 0, the field
jumps to h_f.  Expanding the initial state over the post-quench eigenbasis
gives the time-dependent overlap in closed form,

    O(t) = sum_j p_j * exp(-i * E_j * t),     p_j = |<psi_0(h_i)|psi_j(h_f)>|^2,

and the time-dependent fidelity (Loschmidt echo) L(t) = |O(t)|^2.  No
time-stepping integrator is involved anywhere; the spectral sum is exact.

Because the quench conserves parity, the initial ground state only
overlaps eigenstates in its own parity sector; with the sector-separated
eigensolve of :mod:`lmgquench.model` the opposite-sector weights are
exact zeros.

The onset of dynamical orthogonality -- the largest h_f along a scan for
which L(t) dips below a threshold within a time window -- is located by a
step scan with two refinements: the threshold crossing itself is bisected
down to step/100, and any scanned local minimum of L_min(h_f) that comes
close to the threshold is rescanned at step/20 first, because near the
transition the sub-threshold dips can be narrower than any reasonable
scan step.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Sequence

import numpy as np

from .model import ModelParams, build_hamiltonian, diagonalize

__all__ = [
    "QuenchSpec",
    "OverlapDistribution",
    "FidelitySeries",
    "ScalingResult",
    "overlap_distribution",
    "overlap_amplitude",
    "fidelity_series",
    "minimum_fidelity",
    "scan_minimum_fidelity",
    "orthogonality_field",
    "extrapolate_critical_field",
]

_INV_GOLDEN = (np.sqrt(5.0) - 1.0) / 2.0

#: Weights below this are dropped from time-series sums (they cannot move
#: L(t) at any tolerance used here, and most of them are exact zeros from
#: the opposite parity sector).
_WEIGHT_FLOOR = 1e-30


@dataclass(frozen=True)
class QuenchSpec:
    """A sudden field quench h_i -> h_f at fixed size and anisotropy."""

    N: int
    gamma: float
    h_i: float
    h_f: float

    def __post_init__(self):
        ModelParams(self.N, self.h_i, self.gamma)
        ModelParams(self.N, self.h_f, self.gamma)

    @property
    def initial_params(self) -> ModelParams:
        return ModelParams(self.N, self.h_i, self.gamma)

    @property
    def final_params(self) -> ModelParams:
        return ModelParams(self.N, self.h_f, self.gamma)


@dataclass(frozen=True)
class OverlapDistribution:
    """Post-quench spectrum with the initial ground state's weights on it.

    ``weights[j]`` is the squared projection of the pre-quench ground
    vector onto the j-th post-quench eigenvector; the weights sum to one
    and vanish identically outside the initial state's parity sector.
    """

    energies: np.ndarray
    weights: np.ndarray
    parity: np.ndarray
    ground_energy_initial: float
    ground_parity_initial: int
    source: QuenchSpec | None = None

    def weighted_levels(self, floor: float = _WEIGHT_FLOOR) -> tuple[np.ndarray, np.ndarray]:
        """Energies and weights of the levels that actually carry weight."""
        keep = self.weights > floor
        return self.energies[keep], self.weights[keep]


@dataclass(frozen=True)
class FidelitySeries:
    """L(t) sampled on a time grid."""

    times: np.ndarray
    values: np.ndarray


@dataclass(frozen=True)
class ScalingResult:
    """Quadratic fit of orthogonality-onset fields against x = 1/N.

    ``coefficients`` are (a, b, c) in h0(x) ~ a + b*x + c*x^2, so ``a``
    is the N -> infinity extrapolation, exposed as ``extrapolated``.
    """

    samples: tuple[tuple[int, float], ...]
    coefficients: tuple[float, float, float]
    residuals: np.ndarray
    extrapolated: float


def _distribution(eig_i_ground: np.ndarray, e0_i: float, parity_i: int,
                  eig_f, source: QuenchSpec | None) -> OverlapDistribution:
    amplitudes = eig_f.vectors.T @ eig_i_ground
    return OverlapDistribution(
        energies=eig_f.energies,
        weights=amplitudes * amplitudes,
        parity=eig_f.parity,
        ground_energy_initial=float(e0_i),
        ground_parity_initial=int(parity_i),
        source=source,
    )


def overlap_distribution(q: QuenchSpec) -> OverlapDistribution:
    """Diagonalize both Hamiltonians and project the initial ground state."""
    eig_i = diagonalize(build_hamiltonian(q.initial_params))
    eig_f = diagonalize(build_hamiltonian(q.final_params))
    return _distribution(eig_i.vectors[:, 0], eig_i.energies[0],
                         eig_i.parity[0], eig_f, q)


def overlap_amplitude(d: OverlapDistribution, t: float) -> complex:
    """O(t) = sum_j p_j exp(-i E_j t)."""
    energies, weights = d.weighted_levels()
    return complex(np.sum(weights * np.exp(-1j * energies * t)))


def _fidelity_on_grid(energies: np.ndarray, weights: np.ndarray,
                      times: np.ndarray) -> np.ndarray:
    out = np.empty(times.size)
    # bound the (n_times, n_levels) phase matrix to ~64 MB
    chunk = max(1, 4_000_000 // max(1, energies.size))
    for lo in range(0, times.size, chunk):
        phases = np.exp(-1j * np.outer(times[lo:lo + chunk], energies))
        out[lo:lo + chunk] = np.abs(phases @ weights) ** 2
    return out


def fidelity_series(d: OverlapDistribution, t_grid) -> FidelitySeries:
    """L(t) = |O(t)|^2 on an ascending time grid."""
    times = np.asarray(t_grid, dtype=float)
    if np.any(np.diff(times) <= 0):
        raise ValueError("time grid must be strictly ascending")
    energies, weights = d.weighted_levels()
    return FidelitySeries(times=times,
                          values=_fidelity_on_grid(energies, weights, times))


def _golden_minimize(f, a: float, b: float, tol: float) -> tuple[float, float]:
    """Golden-section minimum of f on [a, b] to bracket width tol."""
    c = b - _INV_GOLDEN * (b - a)
    d = a + _INV_GOLDEN * (b - a)
    fc, fd = f(c), f(d)
    while b - a > tol:
        if fc < fd:
            b, d, fd = d, c, fc
            c = b - _INV_GOLDEN * (b - a)
            fc = f(c)
        else:
            a, c, fc = c, d, fd
            d = a + _INV_GOLDEN * (b - a)
            fd = f(d)
    t = 0.5 * (a + b)
    return t, f(t)


def minimum_fidelity(d: OverlapDistribution, window: tuple[float, float],
                     grid_points: int = 4000,
                     bracket_tol: float = 1e-6) -> tuple[float, float]:
    """Minimum of L(t) over a time window.

    A coarse scan over ``grid_points`` equally spaced times brackets the
    best candidate, then golden-section refinement shrinks the bracket
    below ``bracket_tol`` time units.  Returns (L_min, t_at_min).
    """
    t_min, t_max = float(window[0]), float(window[1])
    if not 0.0 <= t_min < t_max:
        raise ValueError(f"need 0 <= t_min < t_max, got {window!r}")
    energies, weights = d.weighted_levels()
    times = np.linspace(t_min, t_max, grid_points)
    values = _fidelity_on_grid(energies, weights, times)
    k = int(np.argmin(values))
    dt = times[1] - times[0]

    def f(t):
        return float(np.abs(np.sum(weights * np.exp(-1j * energies * t))) ** 2)

    a = max(t_min, times[k] - dt)
    b = min(t_max, times[k] + dt)
    t_best, f_best = _golden_minimize(f, a, b, bracket_tol)
    if values[k] < f_best:
        return float(values[k]), float(times[k])
    return f_best, t_best


class _QuenchScan:
    """Shared machinery for scans over h_f at fixed (N, gamma, h_i).

    The pre-quench ground state is diagonalized once; each h_f then costs
    one post-quench eigensolve plus the minimum search.  Results are
    cached so that refinement revisits are free.
    """

    def __init__(self, N: int, gamma: float, h_i: float,
                 window: tuple[float, float], grid_points: int = 4000):
        eig_i = diagonalize(build_hamiltonian(ModelParams(N, h_i, gamma)))
        self.N = N
        self.gamma = gamma
        self.h_i = h_i
        self.window = (float(window[0]), float(window[1]))
        self.grid_points = grid_points
        self._ground = eig_i.vectors[:, 0]
        self._e0 = float(eig_i.energies[0])
        self._parity = int(eig_i.parity[0])
        self._cache: dict[float, tuple[float, float]] = {}

    def distribution(self, h_f: float) -> OverlapDistribution:
        eig_f = diagonalize(build_hamiltonian(ModelParams(self.N, h_f, self.gamma)))
        return _distribution(self._ground, self._e0, self._parity, eig_f,
                             QuenchSpec(self.N, self.gamma, self.h_i, h_f))

    def minimum(self, h_f: float) -> tuple[float, float]:
        key = round(float(h_f), 12)
        if key not in self._cache:
            self._cache[key] = minimum_fidelity(self.distribution(key),
                                                self.window, self.grid_points)
        return self._cache[key]


def scan_minimum_fidelity(N: int, gamma: float, h_i: float, h_f_values,
                          window: tuple[float, float],
                          grid_points: int = 4000) -> tuple[np.ndarray, np.ndarray]:
    """L_min and its time, for each h_f in ``h_f_values``."""
    scan = _QuenchScan(N, gamma, h_i, window, grid_points)
    out = [scan.minimum(float(hf)) for hf in np.asarray(h_f_values, dtype=float)]
    lmins = np.array([v[0] for v in out])
    t_at = np.array([v[1] for v in out])
    return lmins, t_at


def orthogonality_field(N: int, gamma: float, h_i: float,
                        scan: tuple[float, float, float],
                        window: tuple[float, float] = (0.0, 10.0),
                        threshold: float = 1e-3,
                        grid_points: int = 4000,
                        promote_below: float = 0.1) -> float | None:
    """First h_f along a scan at which L_min drops to ``threshold``.

    ``scan`` is (h_start, h_end, step); the march runs from h_start toward
    h_end.  When a scanned point crosses the threshold, the crossing field
    is refined by bisection against the previous point down to step/100.
    A scanned local minimum of L_min(h_f) below ``promote_below`` triggers
    a step/20 rescan of its bracket before the march continues, since
    sub-threshold dips near the transition can be narrower than the step.
    Returns None when nothing along the scan reaches the threshold.
    """
    h_start, h_end, step = (float(x) for x in scan)
    if step <= 0:
        raise ValueError("scan step must be positive")
    if threshold <= 0:
        raise ValueError("threshold must be positive")
    sq = _QuenchScan(N, gamma, h_i, window, grid_points)
    direction = 1.0 if h_end >= h_start else -1.0
    n_steps = int(round(abs(h_end - h_start) / step))
    fields = [h_start + direction * step * k for k in range(n_steps + 1)]

    def bisect(h_hit: float, h_miss: float) -> float:
        # invariant: L_min(h_hit) <= threshold < L_min(h_miss)
        while abs(h_miss - h_hit) > step / 100.0:
            mid = 0.5 * (h_hit + h_miss)
            if sq.minimum(mid)[0] <= threshold:
                h_hit = mid
            else:
                h_miss = mid
        return h_hit

    def rescan(h_from: float, h_to: float) -> float | None:
        sub = np.linspace(h_from, h_to, 41)
        prev = sub[0]
        for hf in sub[1:]:
            if sq.minimum(float(hf))[0] <= threshold:
                return bisect(float(hf), float(prev))
            prev = hf
        return None

    values: list[float] = []
    for k, hf in enumerate(fields):
        lmin = sq.minimum(hf)[0]
        values.append(lmin)
        if lmin <= threshold:
            return hf if k == 0 else bisect(hf, fields[k - 1])
        if (k >= 2 and values[k - 1] <= promote_below
                and values[k - 1] < values[k - 2] and values[k - 1] < values[k]):
            found = rescan(fields[k - 2], fields[k])
            if found is not None:
                return found
    return None


def extrapolate_critical_field(samples: Sequence[tuple[int, float]]) -> ScalingResult:
    """Quadratic least-squares fit of h0 against 1/N, extrapolated to N -> inf."""
    samples = tuple((int(n), float(h0)) for n, h0 in samples)
    if len(samples) < 3:
        raise ValueError("need at least 3 (N, h0) samples")
    sizes = np.array([s[0] for s in samples], dtype=float)
    if len(set(sizes)) != len(sizes):
        raise ValueError("sample sizes N must be distinct")
    h0s = np.array([s[1] for s in samples])
    x = 1.0 / sizes
    c2, c1, c0 = np.polyfit(x, h0s, 2)
    fitted = c0 + c1 * x + c2 * x * x
    return ScalingResult(samples=samples,
                         coefficients=(float(c0), float(c1), float(c2)),
                         residuals=h0s - fitted,
                         extrapolated=float(c0))
