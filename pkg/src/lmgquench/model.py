"""Collective-spin basis and exact diagonalization of the LMG model.

The ferromagnetic Lipkin-Meshkov-Glick Hamiltonian in a transverse field,
written with collective spin operators S_a = sum_i sigma_a^i / 2,

    H = -(2/N) * (Sx^2 + gamma * Sy^2) - 2*h*Sz,

conserves total angular momentum, so everything here lives in the maximal
sector j = N/2 spanned by the N+1 eigenstates |j, m> of Sz.  In that basis
H is real, symmetric and pentadiagonal (couplings only between m and m+-2),
and it splits into two uncoupled parity sectors according to the index
parity of m + j.  Both facts are exploited: the canonical construction is
the closed-form banded matrix, and the eigensolve runs per parity block on
the tridiagonal form of each block.

``dense_operator_hamiltonian`` builds the same matrix the slow way, from
explicit products of ladder-operator matrices.  It exists purely as an
independent cross-check of the banded construction.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np
from scipy.linalg import eigh_tridiagonal, eigvalsh_tridiagonal

__all__ = [
    "ModelParams",
    "CollectiveBasis",
    "HamiltonianMatrix",
    "EigenDecomposition",
    "build_basis",
    "build_hamiltonian",
    "dense_operator_hamiltonian",
    "collective_spin_operators",
    "diagonalize",
    "eigenvalues",
    "ground_state",
    "degenerate_groups",
]

#: Residue above which the operator-product construction is considered broken.
_IMAG_TOL = 1e-13


def _check_spin_count(N) -> int:
    if isinstance(N, bool) or not isinstance(N, (int, np.integer)):
        raise ValueError(f"number of spins must be an integer, got {N!r}")
    if N < 2:
        raise ValueError(f"number of spins must be >= 2, got {N}")
    return int(N)


@dataclass(frozen=True)
class ModelParams:
    """Parameters of one LMG Hamiltonian instance.

    Parameters
    ----------
    N : int
        Number of spin-1/2 sites, N >= 2.  The coupling constant is set
        to one, so all energies (and h) are dimensionless and times are
        measured in inverse energy units.
    h : float
        Transverse magnetic field strength.  The model is paramagnetic
        for h > 1 and ferromagnetic for h < 1.
    gamma : float
        Anisotropy of the in-plane interaction, 0 <= gamma < 1.
    """

    N: int
    h: float
    gamma: float = 0.0

    def __post_init__(self):
        _check_spin_count(self.N)
        if not np.isfinite(self.h):
            raise ValueError(f"field strength must be finite, got {self.h!r}")
        if not 0.0 <= self.gamma < 1.0:
            raise ValueError(f"anisotropy must satisfy 0 <= gamma < 1, got {self.gamma!r}")


@dataclass(frozen=True)
class CollectiveBasis:
    """The |j, m> eigenbasis of Sz in the maximal-spin sector j = N/2.

    Index i runs from 0 to N and maps to m = -j + i; the parity label of
    basis state i is (-1)**i, which is conserved by the m <-> m+-2
    couplings of the Hamiltonian.
    """

    N: int
    j: float
    dimension: int
    m_values: np.ndarray
    parities: np.ndarray

    def m_of_index(self, i: int) -> float:
        return float(self.m_values[i])

    def parity_of_index(self, i: int) -> int:
        return int(self.parities[i])


@dataclass(frozen=True)
class HamiltonianMatrix:
    """A real symmetric pentadiagonal LMG Hamiltonian in the |j, m> basis."""

    params: ModelParams
    entries: np.ndarray

    @property
    def dimension(self) -> int:
        return self.entries.shape[0]


@dataclass(frozen=True)
class EigenDecomposition:
    """Full spectrum of one Hamiltonian.

    ``energies`` are ascending, ``vectors[:, k]`` is the (real, unit norm)
    eigenvector of ``energies[k]`` and ``parity[k]`` its parity sector.
    Each eigenvector is supported on exactly one parity sector, and its
    largest-magnitude component is positive (first such index on ties),
    which makes the decomposition reproducible bit for bit.
    """

    params: ModelParams
    energies: np.ndarray
    vectors: np.ndarray
    parity: np.ndarray


def _freeze(a: np.ndarray) -> np.ndarray:
    a.setflags(write=False)
    return a


def build_basis(N: int) -> CollectiveBasis:
    """Construct the collective basis for N spins.

    Examples
    --------
    >>> b = build_basis(3)
    >>> b.j, b.dimension
    (1.5, 4)
    >>> list(b.m_values)
    [-1.5, -0.5, 0.5, 1.5]
    """
    N = _check_spin_count(N)
    j = N / 2.0
    m = -j + np.arange(N + 1, dtype=float)
    parities = np.where(np.arange(N + 1) % 2 == 0, 1, -1)
    return CollectiveBasis(N=N, j=j, dimension=N + 1, m_values=_freeze(m),
                           parities=_freeze(parities))


def _band_elements(params: ModelParams) -> tuple[np.ndarray, np.ndarray]:
    """Closed-form main diagonal and second off-diagonal of H."""
    N, h, gamma = params.N, params.h, params.gamma
    j = N / 2.0
    jj = j * (j + 1.0)
    m = -j + np.arange(N + 1, dtype=float)
    diag = -(1.0 + gamma) * (jj - m * m) / N - 2.0 * h * m
    mlow = m[:-2]
    off2 = -(1.0 - gamma) / (2.0 * N) * np.sqrt(
        (jj - mlow * (mlow + 1.0)) * (jj - (mlow + 1.0) * (mlow + 2.0)))
    return diag, off2


def build_hamiltonian(params: ModelParams) -> HamiltonianMatrix:
    """Assemble the LMG Hamiltonian from its closed-form matrix elements.

    The only nonzero entries are

        H[k, k]   = -(1+gamma) * (j(j+1) - m^2) / N - 2*h*m
        H[k+2, k] = -(1-gamma) / (2N) * sqrt((j(j+1) - m(m+1)) * (j(j+1) - (m+1)(m+2)))

    with m = -j + k.  Symmetry is exact by construction.
    """
    if not isinstance(params, ModelParams):
        params = ModelParams(*params)
    diag, off2 = _band_elements(params)
    dim = params.N + 1
    H = np.zeros((dim, dim))
    k = np.arange(dim)
    H[k, k] = diag
    k2 = np.arange(dim - 2)
    H[k2 + 2, k2] = off2
    H[k2, k2 + 2] = off2
    return HamiltonianMatrix(params=params, entries=_freeze(H))


def collective_spin_operators(N: int) -> dict[str, np.ndarray]:
    """Dense matrices of Sz, S+, S-, Sx, Sy in the |j, m> basis.

    Sz is diagonal in m; the ladder operators carry the standard
    sqrt(j(j+1) - m(m+-1)) elements.  Sx and Sy are derived from them,
    so Sy is purely imaginary.
    """
    N = _check_spin_count(N)
    j = N / 2.0
    jj = j * (j + 1.0)
    dim = N + 1
    m = -j + np.arange(dim, dtype=float)
    sz = np.diag(m)
    # S+|j,m> = sqrt(j(j+1) - m(m+1)) |j,m+1>
    sp = np.zeros((dim, dim))
    raising = np.sqrt(jj - m[:-1] * (m[:-1] + 1.0))
    sp[np.arange(1, dim), np.arange(dim - 1)] = raising
    sm = sp.T.copy()
    sx = (sp + sm) / 2.0
    sy = (sp - sm) / 2.0j
    return {"z": sz, "plus": sp, "minus": sm, "x": sx, "y": sy}


def dense_operator_hamiltonian(params: ModelParams) -> HamiltonianMatrix:
    """Build H = -(2/N)(Sx^2 + gamma*Sy^2) - 2*h*Sz by explicit products.

    Cross-check oracle for :func:`build_hamiltonian`; O(N^3) instead of
    O(N), so only sensible at test scale.

    Raises
    ------
    RuntimeError
        If the result carries an imaginary residue above 1e-13, which
        would indicate an error in the operator algebra.
    """
    if not isinstance(params, ModelParams):
        params = ModelParams(*params)
    ops = collective_spin_operators(params.N)
    sx, sy, sz = ops["x"], ops["y"], ops["z"]
    H = -(2.0 / params.N) * (sx @ sx + params.gamma * (sy @ sy)) - 2.0 * params.h * sz
    residue = float(np.max(np.abs(H.imag))) if np.iscomplexobj(H) else 0.0
    if residue > _IMAG_TOL:
        raise RuntimeError(
            f"operator products left an imaginary residue of {residue:.3e}")
    H = np.ascontiguousarray(H.real) if np.iscomplexobj(H) else H
    return HamiltonianMatrix(params=params, entries=_freeze(H))


def _sector_bands(entries: np.ndarray, start: int) -> tuple[np.ndarray, np.ndarray, np.ndarray]:
    """Diagonal and off-diagonal of one parity block, with its global indices."""
    dim = entries.shape[0]
    idx = np.arange(start, dim, 2)
    d = entries[idx, idx]
    e = entries[idx[:-1], idx[:-1] + 2] if len(idx) > 1 else np.zeros(0)
    return d, e, idx


def _solve_sector(d: np.ndarray, e: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
    if len(d) == 1:
        return d.copy(), np.ones((1, 1))
    return eigh_tridiagonal(d, e)


def _check_pentadiagonal(entries: np.ndarray) -> None:
    dim = entries.shape[0]
    if entries.shape != (dim, dim):
        raise ValueError("Hamiltonian entries must be square")
    if not np.array_equal(entries, entries.T):
        raise ValueError("Hamiltonian entries must be exactly symmetric")
    mask = np.ones((dim, dim), dtype=bool)
    k = np.arange(dim)
    mask[k, k] = False
    k2 = np.arange(dim - 2)
    mask[k2 + 2, k2] = False
    mask[k2, k2 + 2] = False
    if np.any(entries[mask] != 0.0):
        raise ValueError("Hamiltonian entries must vanish off the 0 and +-2 diagonals")


def diagonalize(H: HamiltonianMatrix) -> EigenDecomposition:
    """Full eigendecomposition, solved independently per parity sector.

    Because even and odd basis indices never couple, each sector reduces
    to a real symmetric tridiagonal problem.  Solving them separately
    keeps every eigenvector exactly inside one sector even where the two
    sectors are degenerate to machine precision (h < 1 at large N).
    Ties in the merged ascending order resolve even sector first.
    """
    _check_pentadiagonal(H.entries)
    dim = H.entries.shape[0]
    energies, columns, labels = [], [], []
    for start, label in ((0, 1), (1, -1)):
        d, e, idx = _sector_bands(H.entries, start)
        w, v = _solve_sector(d, e)
        full = np.zeros((dim, len(idx)))
        full[idx, :] = v
        energies.append(w)
        columns.append(full)
        labels.append(np.full(len(idx), label, dtype=int))
    w = np.concatenate(energies)
    V = np.hstack(columns)
    par = np.concatenate(labels)
    order = np.argsort(w, kind="stable")
    w, V, par = w[order], V[:, order], par[order]
    # sign convention: largest-magnitude component positive, first index on ties
    lead = np.argmax(np.abs(V), axis=0)
    flip = V[lead, np.arange(dim)] < 0.0
    V[:, flip] *= -1.0
    return EigenDecomposition(params=H.params, energies=_freeze(w),
                              vectors=_freeze(V), parity=_freeze(par))


def eigenvalues(params: ModelParams) -> np.ndarray:
    """Ascending spectrum only; cheaper than :func:`diagonalize`."""
    H = build_hamiltonian(params)
    ws = []
    for start in (0, 1):
        d, e, _ = _sector_bands(H.entries, start)
        ws.append(eigvalsh_tridiagonal(d, e) if len(d) > 1 else d)
    return np.sort(np.concatenate(ws), kind="stable")


def ground_state(params: ModelParams) -> tuple[float, np.ndarray]:
    """Lowest eigenpair of the LMG Hamiltonian.

    For h < 1 the gap above the ground state is exponentially small in N;
    the strictly lowest computed eigenvalue is returned, with the sector
    tie broken deterministically by :func:`diagonalize`.
    """
    dec = diagonalize(build_hamiltonian(params))
    return float(dec.energies[0]), dec.vectors[:, 0]


def degenerate_groups(energies: np.ndarray, tol: float = 1e-10) -> list[slice]:
    """Partition an ascending spectrum into groups closer than ``tol``.

    Grouping is by chaining: consecutive gaps <= tol belong to one group.
    Downstream quantities must be invariant under basis rotations inside
    each group.
    """
    energies = np.asarray(energies)
    if energies.size == 0:
        return []
    breaks = np.nonzero(np.diff(energies) > tol)[0] + 1
    edges = np.concatenate(([0], breaks, [energies.size]))
    return [slice(int(a), int(b)) for a, b in zip(edges[:-1], edges[1:])]
