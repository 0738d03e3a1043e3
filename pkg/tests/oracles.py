"""Independent reference implementations used only by the tests.

Each oracle deliberately avoids the code path it checks:

* ``propagated_fidelity`` evolves the state with matrix exponentials
  (scaling and squaring) instead of the spectral sum.
* ``damped_integral_spectral`` evaluates the one-sided damped Fourier
  integral by brute-force trapezoid quadrature instead of the Lorentzian
  closed form.  On uniform frequency grids the (exact) trapezoid sum is
  evaluated through a chirp-z transform, otherwise directly.
"""

from __future__ import annotations

import numpy as np
from scipy.linalg import expm
from scipy.signal import czt

from lmgquench import QuenchSpec, OverlapDistribution, build_hamiltonian, ground_state


def propagated_fidelity(q: QuenchSpec, times) -> np.ndarray:
    """|<psi(0)|psi(t)>|^2 by dense matrix-exponential propagation."""
    _, psi0 = ground_state(q.initial_params)
    H_f = build_hamiltonian(q.final_params).entries
    out = np.empty(len(times))
    for i, t in enumerate(times):
        psi_t = expm(-1j * H_f * float(t)) @ psi0
        out[i] = abs(np.vdot(psi0, psi_t)) ** 2
    return out


def trapezoid_transform(values: np.ndarray, dt: float, omega: np.ndarray) -> np.ndarray:
    """sum_k w_k values[k] exp(i*omega*t_k) * dt with trapezoid end weights."""
    g = values.astype(complex).copy()
    g[0] *= 0.5
    g[-1] *= 0.5
    steps = np.diff(omega)
    uniform = steps.size > 0 and np.allclose(steps, steps[0], rtol=1e-12, atol=0.0)
    if uniform and g.size * omega.size > 5_000_000:
        dw = float(steps[0])
        spectrum = czt(g, m=omega.size, w=np.exp(1j * dw * dt),
                       a=np.exp(-1j * float(omega[0]) * dt))
        return spectrum * dt
    out = np.empty(omega.size, dtype=complex)
    t = dt * np.arange(g.size)
    chunk = max(1, 5_000_000 // g.size)
    for lo in range(0, omega.size, chunk):
        block = np.exp(1j * np.outer(omega[lo:lo + chunk], t))
        out[lo:lo + chunk] = block @ g
    return out * dt


def damped_integral_spectral(d: OverlapDistribution, omega, eta: float,
                             phase_step: float = 0.016) -> np.ndarray:
    """2 Re int_0^T exp(i*w*t - eta*t) O(t) dt by trapezoid quadrature.

    T = 20/eta truncates the damped tail at exp(-20).  The step keeps the
    fastest phase advance per sample below ``phase_step`` radians (and in
    any case below 0.1 / max|E|), which bounds the trapezoid error safely
    under 1e-4 relative.
    """
    omega = np.asarray(omega, dtype=float)
    energies, weights = d.weighted_levels(1e-14)
    span = max(float(omega[-1] - energies.min()),
               float(energies.max() - omega[0]))
    level_scale = float(np.max(np.abs(d.energies)))
    dt = min(0.1 / level_scale, phase_step / span)
    horizon = 20.0 / eta
    n_t = int(np.ceil(horizon / dt)) + 1
    t = np.linspace(0.0, horizon, n_t)
    dt = t[1] - t[0]
    overlap = np.zeros(n_t, dtype=complex)
    for e, p in zip(energies, weights):
        overlap += p * np.exp(-1j * e * t)
    overlap *= np.exp(-eta * t)
    return 2.0 * np.real(trapezoid_transform(overlap, dt, omega))
