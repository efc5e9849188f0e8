"""Closed-form constants, thresholds and eigenvalue formulas for magnetic-flux problems.

Everything in this module is an exact formula evaluation (no solvers); the
numerical modules cross-check these values independently.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from enum import Enum

import numpy as np
from scipy.special import gammaln

__all__ = [
    "Regime",
    "FluxParams",
    "UltraIndex",
    "PlanarParams",
    "SpectrumResult",
    "normalize_flux",
    "ultraspherical_eigenvalue",
    "sphere_ground_energy",
    "sphere2_spectrum",
    "ring_rigidity_threshold",
    "torus_low_modes",
    "planar_symmetry_thresholds",
    "planar_mu_closed",
    "felli_schneider_b",
    "interpolation_lower_bound",
]


class Regime(Enum):
    SUBQUADRATIC = "subquadratic"
    SUPERQUADRATIC = "superquadratic"


def _check_exponent(p: float) -> None:
    if not np.isfinite(p) or p <= 1.0:
        raise ValueError(f"exponent p must be finite and > 1, got {p}")
    if p == 2.0:
        raise ValueError("p = 2 is not supported (treated only as a limit)")


def normalize_flux(a_raw: float) -> float:
    """Reduce a flux to [0, 1/2] using 1-periodicity and the reflection a -> 1-a."""
    if not np.isfinite(a_raw):
        raise ValueError(f"flux must be finite, got {a_raw}")
    frac = a_raw - math.floor(a_raw)
    return min(frac, 1.0 - frac)


@dataclass(frozen=True)
class FluxParams:
    """Normalized flux and interpolation exponent with its regime.

    q is the dual exponent: p/(p-2) in the superquadratic regime,
    p/(2-p) in the subquadratic one.
    """

    a_raw: float
    a: float
    p: float
    regime: Regime
    q: float

    @classmethod
    def make(cls, a_raw: float, p: float) -> "FluxParams":
        _check_exponent(p)
        a = normalize_flux(a_raw)
        if p < 2.0:
            regime, q = Regime.SUBQUADRATIC, p / (2.0 - p)
        else:
            regime, q = Regime.SUPERQUADRATIC, p / (p - 2.0)
        return cls(a_raw=float(a_raw), a=a, p=float(p), regime=regime, q=q)


@dataclass(frozen=True)
class UltraIndex:
    """Mode number and half-flux index of the singular Gegenbauer problem."""

    ell: int
    a_half: float

    def __post_init__(self) -> None:
        if self.ell < 0 or int(self.ell) != self.ell:
            raise ValueError(f"ell must be a non-negative integer, got {self.ell}")
        if self.a_half < 0:
            raise ValueError(f"a_half must be >= 0, got {self.a_half}")


def ultraspherical_eigenvalue(idx: UltraIndex) -> float:
    """Eigenvalue (ell + 2*a_half)(ell + 2*a_half + 1) of the singular z-problem."""
    t = idx.ell + 2.0 * idx.a_half
    return t * (t + 1.0)


def sphere_ground_energy(a: float) -> float:
    """Lowest magnetic eigenvalue on the 2-sphere: min_k |k-a|(|k-a|+1).

    The minimum is taken over |k| <= 3 after normalization; for normalized
    flux the minimizer is k = 0, the window guards un-normalized inputs.
    """
    an = normalize_flux(a)
    return min(abs(k - an) * (abs(k - an) + 1.0) for k in range(-3, 4))


@dataclass
class SpectrumResult:
    """Ascending eigenvalues with mode labels and discretization metadata."""

    eigenvalues: np.ndarray
    labels: list  # (k, ell) tuples, parallel to eigenvalues
    resolution: dict = field(default_factory=dict)
    est_error: np.ndarray | None = None

    def __post_init__(self) -> None:
        self.eigenvalues = np.asarray(self.eigenvalues, dtype=float)
        if np.any(np.diff(self.eigenvalues) < -1e-12):
            raise ValueError("eigenvalues must be ascending")


def sphere2_spectrum(a: float, ell_max: int, k_max: int) -> tuple[SpectrumResult, float]:
    """Exact magnetic spectrum (ell+|k-a|)(ell+|k-a|+1) on the 2-sphere.

    Returns all modes with 0 <= ell <= ell_max, |k| <= k_max sorted ascending,
    plus the ground energy min_k |k-a|(|k-a|+1).
    """
    if ell_max < 0 or k_max < 0:
        raise ValueError("ell_max and k_max must be >= 0")
    entries = []
    for k in range(-k_max, k_max + 1):
        nu = abs(k - a)
        for ell in range(ell_max + 1):
            entries.append(((ell + nu) * (ell + nu + 1.0), (k, ell)))
    entries.sort(key=lambda t: t[0])
    vals = np.array([e[0] for e in entries])
    labels = [e[1] for e in entries]
    result = SpectrumResult(vals, labels, resolution={"exact": True})
    return result, sphere_ground_energy(a)


def ring_rigidity_threshold(fp: FluxParams) -> float:
    """Parameter value below which ring optimizers are the constants.

    Superquadratic: lambda* = (1 - a^2 (p+2)) / (p-2).
    Subquadratic:   mu*     = (1 - 4 a^2) / (2-p).
    """
    a, p = fp.a, fp.p
    if fp.regime is Regime.SUPERQUADRATIC:
        return (1.0 - a * a * (p + 2.0)) / (p - 2.0)
    return (1.0 - 4.0 * a * a) / (2.0 - p)


def torus_low_modes(a: float) -> tuple[float, float, float]:
    """Three lowest Fourier modes (a^2, (1-a)^2, 1+a^2) of the magnetic torus."""
    if not 0.0 <= a <= 0.5:
        raise ValueError(f"flux must lie in [0, 1/2] (normalize first), got {a}")
    return (a * a, (1.0 - a) ** 2, 1.0 + a * a)


def planar_symmetry_thresholds(a: float, p: float) -> tuple[float, float]:
    """Radial-symmetry threshold pair (lambda_star, lambda_bullet) on the plane.

    lambda_star bounds the region where the radial extremal is optimal;
    above lambda_bullet the optimal functions are certified non-radial.
    lambda_bullet is a sufficient-condition constant: the exact first-harmonic
    instability point lies slightly below it for a > 0 (see planar module).
    """
    _check_exponent(p)
    if p <= 2.0:
        raise ValueError(f"superquadratic exponent p > 2 required, got {p}")
    if not 0.0 <= a <= 0.5:
        raise ValueError(f"flux must lie in [0, 1/2], got {a}")
    lam_star = 4.0 * (1.0 - 4.0 * a * a) / (p * p - 4.0) - a * a
    disc = p**4 - a * a * (p - 2.0) ** 2 * (p + 2.0) * (3.0 * p - 2.0)
    lam_bullet = (8.0 * (math.sqrt(disc) + 2.0) - 4.0 * p * (p + 4.0)) / (
        (p - 2.0) ** 3 * (p + 2.0)
    ) - a * a
    if lam_star > lam_bullet + 1e-12:
        raise AssertionError(
            f"threshold ordering violated: lambda_star={lam_star} > lambda_bullet={lam_bullet}"
        )
    return lam_star, lam_bullet


def _hs_gamma_factor(p: float) -> float:
    """K = 2 sqrt(pi) Gamma(p/(p-2)) / ((p-2) Gamma(p/(p-2) + 1/2)) via log-gamma."""
    r = p / (p - 2.0)
    return math.exp(
        math.log(2.0) + 0.5 * math.log(math.pi) + gammaln(r) - math.log(p - 2.0) - gammaln(r + 0.5)
    )


def planar_mu_closed(a: float, p: float, lam: float) -> tuple[float, bool]:
    """Closed-form weighted interpolation constant on the plane.

    Returns (value, optimal) with

        value = (p/2) (2 pi)^(1-2/p) (lam + a^2)^((1+2/p)/2) K^(1-2/p)

    which is the weighted Rayleigh quotient of the radial extremal
    (|x|^alpha + |x|^-alpha)^(-2/(p-2)).  It is the optimal constant exactly
    when lam <= lambda_star(a, p); outside that range `optimal` is False and
    the number is a formula value only (quotient of the radial branch).

    The exponent on (lam + a^2) is (1+2/p)/2: the one-dimensional reduction
    scales exactly as kappa^(1/2 + 1/p) under s -> s/sqrt(kappa).
    """
    _check_exponent(p)
    if p <= 2.0:
        raise ValueError(f"superquadratic exponent p > 2 required, got {p}")
    kappa = lam + a * a
    if kappa < 0.0:
        raise ValueError(f"lambda must exceed -a^2, got lambda={lam}, a={a}")
    if kappa == 0.0:
        return 0.0, True
    value = (
        (p / 2.0)
        * (2.0 * math.pi) ** (1.0 - 2.0 / p)
        * kappa ** ((1.0 + 2.0 / p) / 2.0)
        * _hs_gamma_factor(p) ** (1.0 - 2.0 / p)
    )
    lam_star, _ = planar_symmetry_thresholds(a, p)
    return value, bool(lam <= lam_star + 1e-15)


def felli_schneider_b(a_ckn: float) -> float:
    """Power-weight curve b(a) = a - a/sqrt(1+a^2) separating radial symmetry."""
    if a_ckn > 0.0:
        raise ValueError(f"weight exponent must be <= 0, got {a_ckn}")
    return a_ckn - a_ckn / math.sqrt(1.0 + a_ckn * a_ckn)


@dataclass(frozen=True)
class PlanarParams:
    """Parameters of the weighted planar problems.

    b = a_ckn + 2/p is fixed by scale invariance and
    alpha = ((p-2)/2) sqrt(lam + a^2) is the extremal decay rate.
    """

    a: float
    p: float
    lam: float
    a_ckn: float = 0.0
    gamma: float | None = None

    def __post_init__(self) -> None:
        _check_exponent(self.p)
        if self.p <= 2.0:
            raise ValueError("superquadratic exponent p > 2 required")
        if not 0.0 <= self.a <= 0.5:
            raise ValueError(f"flux must lie in [0, 1/2], got {self.a}")
        if self.a_ckn > 0.0:
            raise ValueError("CKN weight exponent must be <= 0")
        if self.lam + self.a * self.a < 0.0:
            raise ValueError("lambda must exceed -a^2")
        if self.gamma is not None and self.gamma >= self.a_ckn**2 + self.a**2 - 1e-15:
            raise ValueError("gamma must be < a_ckn^2 + a^2")

    @property
    def b(self) -> float:
        return self.a_ckn + 2.0 / self.p

    @property
    def alpha(self) -> float:
        return 0.5 * (self.p - 2.0) * math.sqrt(self.lam + self.a * self.a)


def interpolation_lower_bound(domain: str, a: float, p: float, param: float) -> float:
    """Proven lower bound for the optimal interpolation constant.

    domain='sphere2' (superquadratic, param = lambda > -Lambda_a):
        2 (lambda + Lambda_a) / (2 + (p-2) Lambda_a),
    valid for lambda <= 2/(p-2).
    domain='torus2' (subquadratic, param = mu in (0, 1/(2-p)]):
        mu + (1 - mu (2-p)) a^2.
    """
    _check_exponent(p)
    if domain == "sphere2":
        if p <= 2.0:
            raise ValueError("sphere2 bound requires p > 2")
        ground = sphere_ground_energy(a)
        if param <= -ground:
            raise ValueError(f"lambda must exceed -{ground}, got {param}")
        if param > 2.0 / (p - 2.0) + 1e-15:
            raise ValueError(
                f"lambda={param} outside the validity range (<= {2.0 / (p - 2.0)})"
            )
        return 2.0 * (param + ground) / (2.0 + (p - 2.0) * ground)
    if domain == "torus2":
        if p >= 2.0:
            raise ValueError("torus2 bound requires p < 2")
        if not 0.0 < param <= 1.0 / (2.0 - p) + 1e-15:
            raise ValueError(
                f"mu={param} outside (0, {1.0 / (2.0 - p)}]"
            )
        an = normalize_flux(a)
        return param + (1.0 - param * (2.0 - p)) * an * an
    raise ValueError(f"unknown domain {domain!r}")
