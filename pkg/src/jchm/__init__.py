"""Zero-temperature mean-field phase diagrams of l-photon Jaynes-Cummings-Hubbard lattices.

A two-level atom in every cavity exchanges l photons at a time; cavities are
coupled by photon hopping, treated in the mean-field decoupling with a real
order parameter psi.  The package classifies parameter points as Mott
insulator MI(L), superfluid, or forbidden (no convergent ground state),
sweeps phase diagrams, and carries the closed-form zero-hopping results the
numerics are checked against.
"""

from .analytic import (
    BoundaryCurve,
    Branch,
    SectorSpec,
    Side,
    asymptotic_slope,
    coupling_strength,
    resonant_ground_energy,
    resonant_sector_energy,
    sector_energy,
    solve_sector_crossing,
    solve_sector_zero,
    strong_coupling_boundary,
    strong_coupling_curve,
)
from .classify import (
    ConvergenceReport,
    IndeterminatePhaseError,
    PhaseKind,
    PhaseLabel,
    PhasePoint,
    classify_point,
    convergence_probe,
    default_n_max,
)
from .eigen import EigPair, EigensolverError, smallest_eigpair
from .groundstate import (
    BracketExhausted,
    MeanFieldSolution,
    PsiSearchSpec,
    energy_at_psi,
    expected_L,
    minimize_over_psi,
)
from .hilbert import Atom, BasisState, HilbertSpace, build_space, l_eigenvalue
from .operators import (
    ModelParams,
    SymmetricMatrix,
    build_l_diag,
    build_mean_field,
    build_mpjc,
    coupling_elements,
)
from .sweep import (
    BoundarySegment,
    GridSpec,
    PhaseGrid,
    classify_at,
    energy_scan,
    extract_boundary,
    params_for,
    refine_boundary,
    run_grid,
)

__version__ = "0.1.0"

__all__ = [
    "Atom", "BasisState", "HilbertSpace", "build_space", "l_eigenvalue",
    "ModelParams", "SymmetricMatrix", "build_mpjc", "build_mean_field",
    "build_l_diag", "coupling_elements",
    "EigPair", "EigensolverError", "smallest_eigpair",
    "PsiSearchSpec", "MeanFieldSolution", "BracketExhausted",
    "energy_at_psi", "minimize_over_psi", "expected_L",
    "PhaseKind", "PhaseLabel", "ConvergenceReport", "PhasePoint",
    "IndeterminatePhaseError", "classify_point", "convergence_probe",
    "default_n_max",
    "Branch", "Side", "SectorSpec", "BoundaryCurve", "sector_energy",
    "resonant_sector_energy", "resonant_ground_energy", "solve_sector_zero",
    "solve_sector_crossing", "asymptotic_slope", "strong_coupling_boundary",
    "strong_coupling_curve", "coupling_strength",
    "GridSpec", "PhaseGrid", "BoundarySegment", "run_grid", "refine_boundary",
    "energy_scan", "extract_boundary", "classify_at", "params_for",
    "__version__",
]
