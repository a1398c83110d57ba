"""Shared independent oracles.

These deliberately avoid the package's own matrix builders: sector blocks are
written out entry by entry with math.factorial, and reference ground energies
come from enumerating every conserved-quantity sector of the truncated space
with numpy's full eigensolver.  Agreement between the package and these
oracles is then a two-route check, not a tautology.
"""

import math

import numpy as np


def sector_matrix(l: int, L: int, omega: float, Omega: float | None = None,
                  mu: float = 1.0) -> np.ndarray:
    """2x2 block of the zero-drive Hamiltonian at quantum number L >= l,
    in the basis {|e, L-l>, |g, L>}."""
    if Omega is None:
        Omega = omega
    c = math.sqrt(math.factorial(L) / math.factorial(L - l))
    return np.array([
        [Omega + (L - l) * omega - L * mu, c],
        [c, L * omega - L * mu],
    ])


def sector_eigs(l: int, L: int, omega: float, Omega: float | None = None,
                mu: float = 1.0) -> np.ndarray:
    """Both sector eigenvalues, ascending."""
    return np.linalg.eigvalsh(sector_matrix(l, L, omega, Omega, mu))


def zero_drive_ground_oracle(l: int, omega: float, mu: float, n_max: int,
                             Omega: float | None = None) -> float:
    """Ground energy of the psi = 0 problem on the truncated space.

    Enumerates sectors directly: the 1x1 states |g, L> for L < l, the 2x2
    blocks for l <= L <= n_max, and the 1x1 excited states |e, n> whose
    partner |g, n+l> falls outside the truncation.
    """
    if Omega is None:
        Omega = omega
    candidates = [L * (omega - mu) for L in range(0, min(l, n_max + 1))]
    for L in range(l, n_max + 1):
        candidates.append(float(sector_eigs(l, L, omega, Omega, mu)[0]))
    for n in range(n_max - l + 1, n_max + 1):
        candidates.append(Omega + n * omega - mu * (n + l))
    return float(min(candidates))
