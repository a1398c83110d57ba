"""Ground energy as a function of the order parameter and its minimisation.

The drive amplitude psi is treated variationally: the full mean-field matrix
is rebuilt and rediagonalised at every psi, never linearised.  The spectrum
is even in psi, so only psi >= 0 is searched.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .eigen import DEFAULT_TOL, smallest_eigpair
from .hilbert import HilbertSpace
from .operators import ModelParams, build_l_diag, build_mean_field

_INV_PHI = (math.sqrt(5.0) - 1.0) / 2.0


@dataclass(frozen=True)
class PsiSearchSpec:
    """Protocol for minimising the ground energy over psi in [0, psi_max].

    A coarse scan brackets every local minimum, golden-section refines them,
    and minimisers within energy_tie_eps of the psi = 0 energy collapse to
    exactly zero so the insulating solution is reported cleanly.
    """

    psi_max: float
    coarse_steps: int = 64
    refine_tol: float = 1e-6
    psi_zero_eps: float = 1e-3
    energy_tie_eps: float = 1e-9

    def __post_init__(self) -> None:
        if self.coarse_steps < 8:
            raise ValueError(f"coarse_steps must be at least 8, got {self.coarse_steps}")
        if not 0.0 < self.refine_tol < self.psi_zero_eps < self.psi_max:
            raise ValueError(
                "need 0 < refine_tol < psi_zero_eps < psi_max, got "
                f"refine_tol={self.refine_tol}, psi_zero_eps={self.psi_zero_eps}, "
                f"psi_max={self.psi_max}"
            )
        if self.energy_tie_eps < 0:
            raise ValueError(f"energy_tie_eps must be non-negative, got {self.energy_tie_eps}")

    @classmethod
    def for_truncation(cls, n_max: int, **overrides) -> "PsiSearchSpec":
        """Default bracket sqrt(n_max)/2: the displaced-field photon number
        psi_max**2 stays a factor 4 inside the truncation."""
        return cls(psi_max=math.sqrt(n_max) / 2.0, **overrides)


@dataclass(frozen=True)
class MeanFieldSolution:
    """Minimised mean-field ground state at one parameter point."""

    psi_star: float
    energy: float
    ground_vector: np.ndarray
    l_expect: float
    n_max_used: int


class BracketExhausted(RuntimeError):
    """The energy minimum sits at psi_max; the search interval is too small.

    Carries the best solution found at the interval edge in .solution.
    """

    def __init__(self, message: str, solution: MeanFieldSolution):
        super().__init__(message)
        self.solution = solution


def energy_at_psi(params: ModelParams, psi: float, space: HilbertSpace,
                  tol: float = DEFAULT_TOL) -> float:
    """Smallest eigenvalue of the mean-field Hamiltonian at fixed psi."""
    return smallest_eigpair(build_mean_field(params, psi, space), tol).value


def expected_L(vector: np.ndarray, space: HilbertSpace) -> float:
    """Expectation of the conserved quantity L in a unit-norm state."""
    return float(np.dot(vector * vector, build_l_diag(space)))


def _golden_section(f, a: float, b: float, tol: float) -> tuple[float, float]:
    """Minimise f on [a, b]; returns the best evaluated (x, f(x))."""
    c = b - _INV_PHI * (b - a)
    d = a + _INV_PHI * (b - a)
    yc, yd = f(c), f(d)
    best = (c, yc) if yc <= yd else (d, yd)
    while (b - a) > tol:
        if yc < yd:
            b, d, yd = d, c, yc
            c = b - _INV_PHI * (b - a)
            yc = f(c)
            if yc < best[1]:
                best = (c, yc)
        else:
            a, c, yc = c, d, yd
            d = a + _INV_PHI * (b - a)
            yd = f(d)
            if yd < best[1]:
                best = (d, yd)
    return best


def _solution_at(params: ModelParams, psi: float, space: HilbertSpace,
                 tol: float) -> MeanFieldSolution:
    pair = smallest_eigpair(build_mean_field(params, psi, space), tol)
    return MeanFieldSolution(
        psi_star=float(psi),
        energy=pair.value,
        ground_vector=pair.vector,
        l_expect=expected_L(pair.vector, space),
        n_max_used=space.n_max,
    )


def minimize_over_psi(params: ModelParams, space: HilbertSpace,
                      spec: PsiSearchSpec,
                      tol: float = DEFAULT_TOL) -> MeanFieldSolution:
    """Global minimum of the ground energy over psi in [0, psi_max].

    Every local minimum of the coarse scan is refined by golden section, so a
    first-order (two-minimum) energy landscape is still resolved.  Ties with
    the psi = 0 energy within energy_tie_eps report psi_star = 0.  If the
    minimum sits against psi_max the bracket cannot be trusted and
    BracketExhausted is raised with the edge solution attached.
    """

    def energy(p: float) -> float:
        return energy_at_psi(params, p, space, tol)

    psis = np.linspace(0.0, spec.psi_max, spec.coarse_steps)
    coarse = np.array([energy(p) for p in psis])

    best_psi = 0.0
    best_e = float(coarse[0])
    last = len(psis) - 1
    for i in range(len(psis)):
        left = coarse[i - 1] if i > 0 else np.inf
        right = coarse[i + 1] if i < last else np.inf
        if coarse[i] <= left and coarse[i] <= right:
            if coarse[i] < best_e:
                best_psi, best_e = float(psis[i]), float(coarse[i])
            a = psis[max(i - 1, 0)]
            b = psis[min(i + 1, last)]
            p, e = _golden_section(energy, a, b, spec.refine_tol)
            if e < best_e:
                best_psi, best_e = p, e

    if float(coarse[0]) <= best_e + spec.energy_tie_eps:
        # flat or insulating landscape: report the symmetric solution exactly
        return _solution_at(params, 0.0, space, tol)

    if best_psi >= spec.psi_max - 2.0 * spec.refine_tol:
        raise BracketExhausted(
            f"energy minimum sits at psi_max={spec.psi_max:g}; "
            "the search interval (and likely n_max) is too small",
            _solution_at(params, best_psi, space, tol),
        )
    return _solution_at(params, best_psi, space, tol)
