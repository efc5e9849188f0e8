"""Optimal constants, spectra, flows and inequality certificates for
magnetic-flux Schrodinger problems on the circle, sphere, torus, plane and
three-dimensional space."""

from .constants import (
    FluxParams,
    PlanarParams,
    Regime,
    SpectrumResult,
    UltraIndex,
    felli_schneider_b,
    interpolation_lower_bound,
    normalize_flux,
    planar_mu_closed,
    planar_symmetry_thresholds,
    ring_rigidity_threshold,
    sphere2_spectrum,
    sphere_ground_energy,
    torus_low_modes,
    ultraspherical_eigenvalue,
)
from .errors import SolverError
from .grids import DiscreteField, Domain, FieldKind, Grid, Measure, build_grid, inverse_l2_term, lp_norm, magnetic_energy
from .ring import OptimizationResult, RingProblem, SolverOptions, locate_bifurcation, optimal_constant_ring, second_variation_coefficient
from .spectra import OperatorKind, OperatorSpec, eigen_solve, weighted_poincare_check
from .torus import TorusProblem, minimize_rayleigh_torus, run_bakry_emery_flow, tensorization_check
from .planar import (
    EmdenFowlerField,
    ckn_equivalence_check,
    extremal_profile,
    gn_constant,
    hs_rayleigh_quotient,
    k1_second_variation,
    solve_radial_euler_lagrange,
)
from .certify import CertificateReport, InequalityId, Verdict, evaluate_certificate, run_suite

__version__ = "0.1.0"
