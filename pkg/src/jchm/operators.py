"""Dense matrix representations of the one-site and mean-field Hamiltonians.

All energies are dimensionless: frequencies are divided by the l-photon
coupling strength, so the coupling itself enters with unit prefactor.  The
conserved combination L = l * excitation + photon number commutes with the
one-site Hamiltonian; only the hopping drive proportional to psi mixes its
sectors.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .hilbert import HilbertSpace

# Alias kept for signatures: real symmetric (dim, dim) float64 array.
SymmetricMatrix = np.ndarray


@dataclass(frozen=True)
class ModelParams:
    """Dimensionless parameters of one lattice-site mean-field problem.

    omega is the cavity frequency, Omega the atomic splitting, mu the
    chemical potential, kappa the hopping amplitude and z the lattice
    coordination number.  The detuning omega - Omega is derived, not stored.
    """

    l: int
    omega: float
    Omega: float
    mu: float = 1.0
    kappa: float = 0.0
    z: int = 2

    def __post_init__(self) -> None:
        if not 1 <= self.l <= 4:
            raise ValueError(f"l must be between 1 and 4, got {self.l}")
        if self.kappa < 0:
            raise ValueError(f"kappa must be non-negative, got {self.kappa}")
        if self.z < 1:
            raise ValueError(f"z must be a positive integer, got {self.z}")

    @property
    def delta(self) -> float:
        """Detuning omega - Omega."""
        return self.omega - self.Omega

    @classmethod
    def resonant(cls, l: int, omega: float, mu: float = 1.0,
                 kappa: float = 0.0, z: int = 2) -> "ModelParams":
        """Zero-detuning parameters, Omega = omega."""
        return cls(l=l, omega=omega, Omega=omega, mu=mu, kappa=kappa, z=z)


def coupling_elements(l: int, n_max: int) -> np.ndarray:
    """Matrix elements <e,n| sigma+ a^l |g,n+l> = sqrt((n+l)!/n!) for n = 0..n_max-l.

    Computed as a running product of (n+1)...(n+l); no factorial overflow.
    """
    n = np.arange(n_max - l + 1, dtype=np.float64)
    prod = np.ones_like(n)
    for k in range(1, l + 1):
        prod = prod * (n + k)
    return np.sqrt(prod)


def build_mpjc(params: ModelParams, space: HilbertSpace) -> SymmetricMatrix:
    """One-site l-photon Hamiltonian Omega sigma+sigma- + omega a+a + (sigma+ a^l + h.c.)."""
    if params.l != space.l:
        raise ValueError(f"params have l={params.l}, space has l={space.l}")
    n = np.arange(space.n_max + 1)
    g = 2 * n        # indices of |g,n>
    e = 2 * n + 1    # indices of |e,n>
    h = np.zeros((space.dim, space.dim))
    h[g, g] = params.omega * n
    h[e, e] = params.Omega + params.omega * n
    c = coupling_elements(space.l, space.n_max)
    rows = e[: space.n_max - space.l + 1]
    cols = g[space.l:]
    h[rows, cols] = c
    h[cols, rows] = c
    return h


def build_l_diag(space: HilbertSpace) -> np.ndarray:
    """Diagonal of the conserved quantity L in the basis ordering, as floats."""
    n = np.arange(space.n_max + 1, dtype=np.float64)
    d = np.empty(space.dim)
    d[0::2] = n
    d[1::2] = n + space.l
    return d


def build_mean_field(params: ModelParams, psi: float,
                     space: HilbertSpace) -> SymmetricMatrix:
    """Mean-field Hamiltonian in the grand-canonical frame.

    Adds to the one-site matrix the scalar z*kappa*psi**2, the chemical-
    potential term -mu*L on the diagonal, and the hopping drive
    -z*kappa*psi*(a + a+).  psi may be negative; the spectrum is even in it.
    At psi = 0 the result is bitwise independent of kappa.
    """
    h = build_mpjc(params, space)
    idx = np.arange(space.dim)
    if params.mu != 0.0:
        h[idx, idx] -= params.mu * build_l_diag(space)
    drive = params.z * params.kappa * psi
    if drive != 0.0:
        h[idx, idx] += drive * psi
        n = np.arange(space.n_max)
        amp = -drive * np.sqrt(n + 1.0)
        for s in (0, 1):  # photon raising keeps the atomic state
            i = 2 * n + s
            j = 2 * (n + 1) + s
            h[i, j] = amp
            h[j, i] = amp
    return h
