"""Inequality certificates: quadrature of both sides of every named bound on
deterministic pseudo-random test families, with margins and verdicts.

Each certificate reports which constant source it used: a closed form, a
computed ring optimum, a proven lower bound (which only weakens the claimed
inequality), or a closed-form inverse.  Quadrature errors are estimated by
re-evaluating both sides on the stride-2 coarsening of the same samples.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from enum import Enum

import numpy as np
from scipy.special import roots_jacobi, roots_legendre

from . import testfields as tf
from .constants import (
    FluxParams,
    Regime,
    interpolation_lower_bound,
    normalize_flux,
    planar_mu_closed,
    planar_symmetry_thresholds,
    ring_rigidity_threshold,
)
from .errors import SolverError
from .planar import EmdenFowlerField, extremal_profile
from .ring import RingProblem, SolverOptions, optimal_constant_ring
from .spectra import OperatorKind, OperatorSpec, eigen_solve
from .testfields import CylinderField, Family, SphereField

__all__ = [
    "InequalityId",
    "Verdict",
    "CertificateReport",
    "evaluate_certificate",
    "run_suite",
    "hardy_r3_pair",
    "SATURATION_REL_TOL",
]

SATURATION_REL_TOL = 1e-6
SOLVER_TOL = 1e-8


class InequalityId(Enum):
    KLT_S1_SUPER = "KLT_S1_SUPER"
    KLT_S1_SUPER_SPECTRAL = "KLT_S1_SUPER_SPECTRAL"
    HARDY_R2_SUPER = "HARDY_R2_SUPER"
    HARDY_S2 = "HARDY_S2"
    RING_INV_NORM = "RING_INV_NORM"
    KLT_S1_SUB = "KLT_S1_SUB"
    KLT_S1_SUB_THRESHOLD = "KLT_S1_SUB_THRESHOLD"
    HARDY_R2_SUB = "HARDY_R2_SUB"
    HARDY_R3_HALF = "HARDY_R3_HALF"
    HARDY_R3_SUB = "HARDY_R3_SUB"
    HARDY_R2_PLAIN = "HARDY_R2_PLAIN"
    HS_R2 = "HS_R2"
    KLT_R2 = "KLT_R2"
    HARDY_R2_MAIN = "HARDY_R2_MAIN"
    HARDY_R3_RADIAL = "HARDY_R3_RADIAL"
    HARDY_R3_CYL = "HARDY_R3_CYL"
    EKHOLM_PORTMANN = "EKHOLM_PORTMANN"


class Verdict(Enum):
    HOLDS = "Holds"
    SATURATED = "Saturated"
    VIOLATED = "Violated"


@dataclass
class CertificateReport:
    id: InequalityId
    params: dict
    lhs: float
    rhs: float
    margin: float
    quad_error: float
    verdict: Verdict
    constant_source: str


def _verdict(lhs: float, rhs: float, quad_error: float) -> Verdict:
    margin = lhs - rhs
    scale = max(abs(lhs), abs(rhs), 1e-300)
    if abs(margin) <= SATURATION_REL_TOL * scale:
        return Verdict.SATURATED
    if margin < -(quad_error + SOLVER_TOL * scale):
        return Verdict.VIOLATED
    return Verdict.HOLDS


# -- shared grids ------------------------------------------------------------

EF_AXIS = np.linspace(-18.0, 18.0, 1201)
NTHETA_EF = 48
CYL_RHO = (np.arange(96) + 0.5) * (8.0 / 96)
CYL_Z = np.linspace(-8.0, 8.0, 193)
NTHETA_CYL = 32
SPHERE_NZ = 128
SPHERE_NTHETA = 64


def _trap_weights(x: np.ndarray) -> np.ndarray:
    w = np.empty_like(x)
    w[1:-1] = 0.5 * (x[2:] - x[:-2])
    w[0] = 0.5 * (x[1] - x[0])
    w[-1] = 0.5 * (x[-1] - x[-2])
    return w


# -- ring-side ingredients ------------------------------------------------------

def _ring_mean(v: np.ndarray) -> float:
    return float(np.mean(v))


def _ring_energy(psi: np.ndarray, a: float) -> float:
    n = len(psi)
    k = np.fft.fftfreq(n, d=1.0 / n)
    spec = np.fft.fft(psi) / n
    return float(np.sum((k - a) ** 2 * np.abs(spec) ** 2))


def _ring_lq_norm(v: np.ndarray, q: float) -> float:
    return _ring_mean(np.abs(v) ** q) ** (1.0 / q)


def ring_constant_super(a: float, p: float, lam: float) -> tuple[float, str]:
    """Optimal superquadratic ring constant at spectral shift lam."""
    fp = FluxParams.make(a, p)
    if a * a * (p + 2.0) + lam * (p - 2.0) <= 1.0 + 1e-12:
        return a * a + lam, "closed-form"
    res = optimal_constant_ring(RingProblem(fp, lam, SolverOptions(n=128)))
    return res.value, "ring-optimizer"


def ring_constant_sub(a: float, p: float, mu: float) -> tuple[float, str]:
    fp = FluxParams.make(a, p)
    if mu * (2.0 - p) + 4.0 * a * a <= 1.0 + 1e-12:
        return a * a + mu, "closed-form"
    res = optimal_constant_ring(RingProblem(fp, mu, SolverOptions(n=128)))
    return res.value, "ring-optimizer"


def ring_lambda_inverse_super(a: float, p: float, mu: float) -> tuple[float, str]:
    """Inverse of lam -> optimal constant: closed form in the rigidity window,
    otherwise a bisection against the computed constant."""
    mu_star = (1.0 - 4.0 * a * a) / (p - 2.0)
    if mu <= mu_star + 1e-12:
        return mu - a * a, "closed-form-inverse"
    lo, hi = mu_star - a * a, mu  # constant is concave increasing with slope <= 1
    for _ in range(60):
        mid = 0.5 * (lo + hi)
        val, _ = ring_constant_super(a, p, mid)
        if val < mu:
            lo = mid
        else:
            hi = mid
        if hi - lo < 1e-6 * max(1.0, abs(hi)):
            break
    return 0.5 * (lo + hi), "numeric-inverse(reduced-confidence)"


# -- planar (log-radial) ingredients ---------------------------------------------

def _ef_coarsen(f: EmdenFowlerField) -> EmdenFowlerField:
    return EmdenFowlerField(f.s[::2], {k: (v[::2], dv[::2]) for k, (v, dv) in f.sectors.items()})


def _ef_energy(f: EmdenFowlerField, a: float) -> float:
    ds = f.ds
    tot = 0.0
    for k, (v, dv) in f.sectors.items():
        tot += float(np.sum(np.abs(dv) ** 2 + (k - a) ** 2 * np.abs(v) ** 2)) * ds
    return 2.0 * np.pi * tot


def _ef_mass(f: EmdenFowlerField, s_weight: np.ndarray | None = None) -> float:
    ds = f.ds
    tot = 0.0
    for _k, (v, _dv) in f.sectors.items():
        dens = np.abs(v) ** 2
        if s_weight is not None:
            dens = dens * s_weight
        tot += float(np.sum(dens)) * ds
    return 2.0 * np.pi * tot


def _ef_weighted_mass(f: EmdenFowlerField, w: np.ndarray) -> float:
    """int w(s, theta) |psi|^2 ds dtheta on the matching theta grid."""
    ntheta = w.shape[1]
    phys = f.physical(ntheta)
    return float(np.sum(w * np.abs(phys) ** 2)) * f.ds * (2.0 * np.pi / ntheta)


def _ef_pnorm_mass(f: EmdenFowlerField, p: float, s_weight: np.ndarray | None = None) -> float:
    kmax = max(abs(k) for k in f.sectors)
    ntheta = max(16, 4 * (kmax + 1))
    phys = np.abs(f.physical(ntheta)) ** p
    if s_weight is not None:
        phys = phys * s_weight[:, None]
    return float(np.sum(phys)) * f.ds * (2.0 * np.pi / ntheta)


# -- cylindrical ingredients -----------------------------------------------------

def _cyl_coarsen(f: CylinderField) -> CylinderField:
    return CylinderField(
        f.rho[::2], f.z[::2],
        {k: (h[::2, ::2], dhr[::2, ::2], dhz[::2, ::2]) for k, (h, dhr, dhz) in f.sectors.items()},
    )


def _cyl_sector_weights(f: CylinderField) -> np.ndarray:
    return (_trap_weights(f.rho) * f.rho)[:, None] * _trap_weights(f.z)[None, :] * 2.0 * np.pi


def _cyl_energy(f: CylinderField, a: float, include_angular: bool = True) -> float:
    w = _cyl_sector_weights(f)
    rho2 = f.rho[:, None] ** 2
    tot = 0.0
    for k, (h, dhr, dhz) in f.sectors.items():
        dens = np.abs(dhr) ** 2 + np.abs(dhz) ** 2
        if include_angular:
            dens = dens + (k - a) ** 2 * np.abs(h) ** 2 / rho2
        tot += float(np.sum(w * dens))
    return tot


def _cyl_mass(f: CylinderField, weight: np.ndarray | float = 1.0) -> float:
    w = _cyl_sector_weights(f)
    tot = 0.0
    for _k, (h, _dr, _dz) in f.sectors.items():
        tot += float(np.sum(w * weight * np.abs(h) ** 2))
    return tot


def _cyl_theta_weighted_mass(f: CylinderField, phi_theta: np.ndarray, radial_weight: np.ndarray) -> float:
    """int phi(theta) W(rho, z) |psi|^2 rho drho dtheta dz."""
    ntheta = len(phi_theta)
    theta = 2.0 * np.pi * np.arange(ntheta) / ntheta
    vals = f.values(theta)
    w = (_trap_weights(f.rho) * f.rho)[:, None, None] * (2.0 * np.pi / ntheta) * _trap_weights(f.z)[None, None, :]
    return float(np.sum(w * phi_theta[None, :, None] * radial_weight[:, None, :] * np.abs(vals) ** 2))


# -- sphere ingredients ------------------------------------------------------------

def _sphere_energy(f: SphereField, n_quad: int = 120) -> float:
    total = 0.0
    for k, (amp, coeffs) in f.sectors.items():
        ah = f.a_half(k)
        a2 = 2.0 * ah
        qp = np.polynomial.polynomial.polyder(coeffs)
        if ah > 0:
            zj, wj = roots_jacobi(n_quad, a2 - 1.0, a2 - 1.0)
            qv = np.polynomial.polynomial.polyval(zj, coeffs)
            qpv = np.polynomial.polynomial.polyval(zj, qp)
            core = ((1.0 - zj * zj) * qpv - a2 * zj * qv) ** 2 + a2 * a2 * qv * qv
            total += abs(amp) ** 2 * 0.5 * float(np.sum(wj * core))
        else:
            zj, wj = roots_legendre(n_quad)
            qpv = np.polynomial.polynomial.polyval(zj, qp)
            total += abs(amp) ** 2 * 0.5 * float(np.sum(wj * (1.0 - zj * zj) * qpv**2))
    return total


def _sphere_grid(nz: int = SPHERE_NZ, ntheta: int = SPHERE_NTHETA):
    z, wz = roots_legendre(nz)
    theta = 2.0 * np.pi * np.arange(ntheta) / ntheta
    w = wz[:, None] / (2.0 * ntheta)  # d sigma = dz dtheta / (4 pi)
    return z, theta, np.broadcast_to(w, (nz, ntheta))


# -- parameter draws ----------------------------------------------------------------

def _draw(seed: int, cid: InequalityId):
    return np.random.default_rng([seed, list(InequalityId).index(cid)])


def _super_params(rng) -> tuple[float, float]:
    return float(rng.uniform(0.05, 0.45)), float(rng.uniform(2.5, 6.0))


def _sub_params(rng) -> tuple[float, float]:
    return float(rng.uniform(0.05, 0.45)), float(rng.uniform(1.2, 1.8))


# -- evaluators ----------------------------------------------------------------------

def _eval_klt_s1_super(params, psi, phi):
    a, p, q = params["a"], params["p"], params["q"]
    const, source = ring_constant_super(a, p, 0.0)

    def sides(stride):
        ps, ph = psi[::stride], phi[::stride]
        lhs = _ring_energy(ps, a)
        rhs = const / _ring_lq_norm(ph, q) * _ring_mean(ph * np.abs(ps) ** 2)
        return lhs, rhs

    return sides, source


def _eval_klt_s1_super_spectral(params, psi, phi):
    a, p, q = params["a"], params["p"], params["q"]
    mu = _ring_lq_norm(phi, q)
    lam_inv, source = ring_lambda_inverse_super(a, p, mu)

    def sides(stride):
        ps, ph = psi[::stride], phi[::stride]
        lhs = _ring_energy(ps, a) - _ring_mean(ph * np.abs(ps) ** 2)
        rhs = -lam_inv * _ring_mean(np.abs(ps) ** 2)
        return lhs, rhs

    return sides, source


def _eval_hardy_r2_super(params, psi, phi):
    a, p, q = params["a"], params["p"], params["q"]
    const, source = ring_constant_super(a, p, 0.0)
    tau = const / _ring_lq_norm(phi, q)

    def sides(stride):
        f = _ef_coarsen(psi) if stride == 2 else psi
        lhs = _ef_energy(f, a)
        w = np.ones((len(f.s), len(phi))) * phi[None, :]
        rhs = tau * _ef_weighted_mass(f, w)
        return lhs, rhs

    return sides, source


def _eval_hardy_s2(params, psi, phi_grid):
    a, p, q = params["a"], params["p"], params["q"]
    const = interpolation_lower_bound("sphere2", a, p, 0.0)
    source = "lower-bound"
    z, theta, w = _sphere_grid()
    phi = phi_grid
    norm_phi = float(np.sum(w * np.abs(phi) ** q)) ** (1.0 / q)

    def sides(stride):
        nq = 120 if stride == 1 else 60
        lhs = _sphere_energy(psi, n_quad=nq)
        zz, tt, ww = (z, theta, w) if stride == 1 else _sphere_grid(SPHERE_NZ // 2, SPHERE_NTHETA // 2)
        if stride == 1:
            vals = psi.values(z, theta)
            rhs = const / norm_phi * float(np.sum(w * phi * np.abs(vals) ** 2))
        else:
            vals = psi.values(zz, tt)
            phs = tf.sphere_potential(params["seed"], zz, tt)
            rhs = const / norm_phi * float(np.sum(ww * phs * np.abs(vals) ** 2))
        return lhs, rhs

    return sides, source


def _eval_ring_inv_norm(params, psi, phi):
    def sides(stride):
        u = psi[::stride]
        n = len(u)
        k = np.fft.rfftfreq(n, d=1.0 / n)
        spec = np.fft.rfft(u) / n
        mult = np.ones_like(k)
        mult[1:] = 2.0
        if n % 2 == 0:
            mult[-1] = 1.0
        kin = float(np.sum(mult * k * k * np.abs(spec) ** 2))
        inv = 1.0 / _ring_mean(u**-2.0) if np.min(u) > 1e-8 * _ring_mean(u) else 0.0
        lhs = kin + 0.25 * inv
        rhs = 0.25 * _ring_mean(u * u)
        return lhs, rhs

    return sides, "closed-form"


def _eval_klt_s1_sub(params, psi, phi):
    a, p, q = params["a"], params["p"], params["q"]
    mu = 1.0 / _ring_lq_norm(phi**-1.0, q)
    const, source = ring_constant_sub(a, p, mu)
    n = len(phi)
    spec = eigen_solve(
        OperatorSpec(OperatorKind.RING_SCHRODINGER, a=a, potential=phi, resolution=n), 1
    )
    lam1 = float(spec.eigenvalues[0])
    est = float(spec.est_error[0])

    def sides(stride):
        return lam1, const

    return sides, source, est


def _eval_klt_s1_sub_threshold(params, psi, phi):
    a, p, q = params["a"], params["p"], params["q"]
    coef = (1.0 - 4.0 * a * a) / (2.0 - p)

    def sides(stride):
        ps, ph = psi[::stride], phi[::stride]
        lhs = _ring_energy(ps, a) + coef * _ring_lq_norm(ph**-1.0, q) * _ring_mean(ph * np.abs(ps) ** 2)
        rhs = (coef + a * a) * _ring_mean(np.abs(ps) ** 2)
        return lhs, rhs

    return sides, "closed-form"


def _eval_hardy_r2_sub(params, psi, phi):
    a, p, q = params["a"], params["p"], params["q"]
    coef = (1.0 - 4.0 * a * a) / (2.0 - p)
    phi = phi * _ring_lq_norm(phi**-1.0, q)  # scale so |phi^-1|_q = 1

    def sides(stride):
        f = _ef_coarsen(psi) if stride == 2 else psi
        w = np.ones((len(f.s), len(phi))) * phi[None, :]
        lhs = _ef_energy(f, a) + coef * _ef_weighted_mass(f, w)
        rhs = (coef + a * a) * _ef_mass(f)
        return lhs, rhs

    return sides, "closed-form"


def _eval_hardy_r3_half(params, psi, phi):
    def sides(stride):
        f = _cyl_coarsen(psi) if stride == 2 else psi
        lhs = _cyl_energy(f, 0.0, include_angular=False)
        inv_x2 = 1.0 / (f.rho[:, None] ** 2 + f.z[None, :] ** 2)
        rhs = 0.25 * _cyl_mass(f, inv_x2)
        return lhs, rhs

    return sides, "closed-form"


def hardy_r3_half_square_identity(psi: CylinderField) -> tuple[float, float]:
    """(lhs - rhs, completed-square quadrature) for the half-space bound."""
    w = _cyl_sector_weights(psi)
    rho = psi.rho[:, None]
    z = psi.z[None, :]
    wsq = rho**2 + z**2
    square = 0.0
    for _k, (h, dhr, dhz) in psi.sectors.items():
        square += float(
            np.sum(
                w
                * (
                    np.abs(dhr + rho * h / (2.0 * wsq)) ** 2
                    + np.abs(dhz + z * h / (2.0 * wsq)) ** 2
                )
            )
        )
    lhs = _cyl_energy(psi, 0.0, include_angular=False)
    rhs = 0.25 * _cyl_mass(psi, 1.0 / wsq)
    return lhs - rhs, square


def _eval_hardy_r3_sub(params, psi, phi):
    a, p, q = params["a"], params["p"], params["q"]
    coef = (1.0 - 4.0 * a * a) / (2.0 - p)
    phi = phi * _ring_lq_norm(phi**-1.0, q)  # now |phi^-1|_q = 1

    def sides(stride):
        f = _cyl_coarsen(psi) if stride == 2 else psi
        inv_rho2 = np.broadcast_to(1.0 / f.rho[:, None] ** 2, (len(f.rho), len(f.z)))
        inv_x2 = 1.0 / (f.rho[:, None] ** 2 + f.z[None, :] ** 2)
        lhs = _cyl_energy(f, a) + coef * _cyl_theta_weighted_mass(f, phi, inv_rho2)
        rhs = 0.25 * _cyl_mass(f, inv_x2) + (coef + a * a) * _cyl_mass(f, inv_rho2)
        return lhs, rhs

    return sides, "closed-form"


def _eval_hardy_r2_plain(params, psi, phi):
    a = params["a"]
    const = normalize_flux(a) ** 2

    def sides(stride):
        f = _ef_coarsen(psi) if stride == 2 else psi
        return _ef_energy(f, a), const * _ef_mass(f)

    return sides, "closed-form"


def _eval_hs_r2(params, psi, phi):
    a, p, lam = params["a"], params["p"], params["lam"]
    mu, optimal = planar_mu_closed(a, p, lam)
    source = "closed-form" if optimal else "radial-branch(reduced-confidence)"

    def sides(stride):
        f = _ef_coarsen(psi) if stride == 2 else psi
        lhs = _ef_energy(f, a) + lam * _ef_mass(f)
        rhs = mu * _ef_pnorm_mass(f, p) ** (2.0 / p)
        return lhs, rhs

    return sides, source


def _eval_klt_r2(params, psi, chi):
    a, p, q = params["a"], params["p"], params["q"]
    ds = psi.ds
    ntheta = chi.shape[1]
    mu = (float(np.sum(np.abs(chi) ** q)) * ds * 2.0 * np.pi / ntheta) ** (1.0 / q)
    lam_inv, source = _planar_lambda_inverse(a, p, mu)

    def sides(stride):
        if stride == 1:
            f, w = psi, chi
        else:
            f, w = _ef_coarsen(psi), chi[::2]
        lhs = _ef_energy(f, a) - _ef_weighted_mass(f, w)
        rhs = -lam_inv * _ef_mass(f)
        return lhs, rhs

    return sides, source


def _planar_lambda_inverse(a: float, p: float, mu: float) -> tuple[float, str]:
    lam_star, _ = planar_symmetry_thresholds(a, p)
    mu_star, _ = planar_mu_closed(a, p, lam_star)
    c_k, _ = planar_mu_closed(a, p, 1.0 - a * a)  # value at kappa = 1
    lam = (mu / c_k) ** (2.0 * p / (p + 2.0)) - a * a
    if mu <= mu_star + 1e-15:
        return lam, "closed-form-inverse"
    return lam, "radial-branch-inverse(reduced-confidence)"


def _eval_hardy_r2_main(params, psi, phi):
    a, p, q = params["a"], params["p"], params["q"]
    if a * a > 4.0 / (12.0 + p * p):
        raise ValueError("explicit constant needs a^2 <= 4/(12+p^2)")
    mu0, _ = planar_mu_closed(a, p, 0.0)
    ds = psi.ds
    ntheta = phi.shape[1]
    norm_phi = (float(np.sum(np.abs(phi) ** q)) * ds * 2.0 * np.pi / ntheta) ** (1.0 / q)

    def sides(stride):
        if stride == 1:
            f, w = psi, phi
        else:
            f, w = _ef_coarsen(psi), phi[::2]
        lhs = _ef_energy(f, a)
        rhs = mu0 / norm_phi * _ef_weighted_mass(f, w)
        return lhs, rhs

    return sides, "closed-form"


def _eval_hardy_r3_radial(params, psi, phi):
    a = params["a"]
    p = params.get("p")
    if p is None:
        const = a * (a + 1.0)
        source = "spectral-ground(a(a+1))"
    else:
        const = interpolation_lower_bound("sphere2", a, p, 0.0)
        source = "lower-bound"
    # phi is a callable of (zeta, theta); the suite uses phi == 1
    def sides(stride):
        f = _cyl_coarsen(psi) if stride == 2 else psi
        inv_x2 = 1.0 / (f.rho[:, None] ** 2 + f.z[None, :] ** 2)
        lhs = _cyl_energy(f, a)
        if phi is None:
            rhs = (0.25 + const) * _cyl_mass(f, inv_x2)
        else:
            theta = 2.0 * np.pi * np.arange(NTHETA_CYL) / NTHETA_CYL
            zeta = (f.z[None, :] * np.sqrt(inv_x2))  # z/|x| per (rho, z)
            vals = f.values(theta)
            w3 = (_trap_weights(f.rho) * f.rho)[:, None, None] * (2.0 * np.pi / NTHETA_CYL) * _trap_weights(f.z)[None, None, :]
            phiv = phi(zeta[:, None, :], theta[None, :, None])
            norm = _sphere_lq_norm_callable(phi, params["q"])
            dens = (0.25 + const / norm * phiv) * inv_x2[:, None, :]
            rhs = float(np.sum(w3 * dens * np.abs(vals) ** 2))
        return lhs, rhs

    return sides, source


def _sphere_lq_norm_callable(phi, q: float) -> float:
    z, wz = roots_legendre(SPHERE_NZ)
    theta = 2.0 * np.pi * np.arange(SPHERE_NTHETA) / SPHERE_NTHETA
    vals = phi(z[:, None], theta[None, :])
    return float(np.sum(wz[:, None] / (2.0 * SPHERE_NTHETA) * np.abs(vals) ** q)) ** (1.0 / q)


def _eval_hardy_r3_cyl(params, psi, phi):
    a, p, q = params["a"], params["p"], params["q"]
    const, source = ring_constant_super(a, p, 0.0)
    norm_phi = _ring_lq_norm(phi, q)

    def sides(stride):
        f = _cyl_coarsen(psi) if stride == 2 else psi
        inv_rho2 = np.broadcast_to(1.0 / f.rho[:, None] ** 2, (len(f.rho), len(f.z)))
        inv_x2 = 1.0 / (f.rho[:, None] ** 2 + f.z[None, :] ** 2)
        lhs = _cyl_energy(f, a)
        rhs = 0.25 * _cyl_mass(f, inv_x2) + const / norm_phi * _cyl_theta_weighted_mass(f, phi, inv_rho2)
        return lhs, rhs

    return sides, source


def _eval_ekholm_portmann(params, psi, phi):
    a = params["a"]

    def sides(stride):
        f = _cyl_coarsen(psi) if stride == 2 else psi
        inv_x2 = 1.0 / (f.rho[:, None] ** 2 + f.z[None, :] ** 2)
        return _cyl_energy(f, a), (0.25 + a * a) * _cyl_mass(f, inv_x2)

    return sides, "closed-form"


# -- field construction per id ------------------------------------------------------

def _default_inputs(cid: InequalityId, params: dict):
    seed = params["seed"]
    n = 128
    if cid in (InequalityId.KLT_S1_SUPER, InequalityId.KLT_S1_SUPER_SPECTRAL,
               InequalityId.KLT_S1_SUB_THRESHOLD):
        psi = tf.ring_complex_field(seed, n).values
        phi = tf.ring_potential(seed + 1, n)
        if cid is InequalityId.KLT_S1_SUPER_SPECTRAL:
            a, p, q = params["a"], params["p"], params["q"]
            cap = 0.9 * (1.0 - 4.0 * a * a) / (p - 2.0)
            phi = phi * (cap / _ring_lq_norm(phi, q))
        return psi, phi
    if cid is InequalityId.RING_INV_NORM:
        return tf.ring_positive_profile(seed, n), None
    if cid is InequalityId.KLT_S1_SUB:
        phi = tf.ring_potential(seed + 1, n)
        a, p, q = params["a"], params["p"], params["q"]
        if params.get("force_rigidity", True):
            cap = 0.9 * (1.0 - 4.0 * a * a) / (2.0 - p)
            mu = 1.0 / _ring_lq_norm(phi**-1.0, q)
            phi = phi * (cap / mu)
        return None, phi
    if cid in (InequalityId.HARDY_R2_SUPER, InequalityId.HARDY_R2_SUB):
        psi = tf.planar_field(seed, EF_AXIS, Family.GAUSSIAN_BUMP_PHASE)
        phi = tf.ring_potential(seed + 1, NTHETA_EF)
        return psi, phi
    if cid is InequalityId.HARDY_S2:
        psi = tf.sphere_field(seed, params["a"])
        z, theta, _ = _sphere_grid()
        phi = tf.sphere_potential(seed + 1, z, theta)
        return psi, phi
    if cid in (InequalityId.HARDY_R2_PLAIN, InequalityId.HS_R2):
        fam = Family.GAUSSIAN_BUMP_PHASE if seed % 2 else Family.COMPACT_SUPPORT_SMOOTH
        return tf.planar_field(seed, EF_AXIS, fam), None
    if cid is InequalityId.KLT_R2:
        psi = tf.planar_field(seed, EF_AXIS, Family.COMPACT_SUPPORT_SMOOTH)
        chi = tf.planar_scalar_weight(seed + 1, EF_AXIS, NTHETA_EF)
        a, p, q = params["a"], params["p"], params["q"]
        lam_star, _ = planar_symmetry_thresholds(a, p)
        mu_star, _ = planar_mu_closed(a, p, lam_star)
        ds = EF_AXIS[1] - EF_AXIS[0]
        mu = (float(np.sum(chi**q)) * ds * 2.0 * np.pi / NTHETA_EF) ** (1.0 / q)
        chi = chi * (0.9 * mu_star / mu)
        return psi, chi
    if cid is InequalityId.HARDY_R2_MAIN:
        psi = tf.planar_field(seed, EF_AXIS, Family.GAUSSIAN_BUMP_PHASE)
        phi = tf.planar_scalar_weight(seed + 1, EF_AXIS, NTHETA_EF)
        return psi, phi
    if cid in (InequalityId.HARDY_R3_HALF, InequalityId.HARDY_R3_SUB,
               InequalityId.HARDY_R3_RADIAL, InequalityId.HARDY_R3_CYL,
               InequalityId.EKHOLM_PORTMANN):
        fam = Family.COMPACT_SUPPORT_SMOOTH if seed % 2 else Family.GAUSSIAN_BUMP_PHASE
        psi = tf.cylinder_field(seed, CYL_RHO, CYL_Z, fam)
        phi = None  # constant-weight case for the radial and plain bounds
        if cid in (InequalityId.HARDY_R3_CYL, InequalityId.HARDY_R3_SUB):
            phi = tf.ring_potential(seed + 1, NTHETA_CYL)
        return psi, phi
    raise ValueError(f"no default inputs for {cid}")


def _default_params(cid: InequalityId, seed: int) -> dict:
    rng = _draw(seed, cid)
    params: dict = {"seed": seed}
    super_ids = {
        InequalityId.KLT_S1_SUPER, InequalityId.KLT_S1_SUPER_SPECTRAL,
        InequalityId.HARDY_R2_SUPER, InequalityId.HARDY_S2, InequalityId.HS_R2,
        InequalityId.KLT_R2, InequalityId.HARDY_R2_MAIN, InequalityId.HARDY_R3_CYL,
        InequalityId.HARDY_R3_RADIAL,
    }
    sub_ids = {
        InequalityId.KLT_S1_SUB, InequalityId.KLT_S1_SUB_THRESHOLD,
        InequalityId.HARDY_R2_SUB, InequalityId.HARDY_R3_SUB,
    }
    if cid in super_ids:
        a, p = _super_params(rng)
        if cid is InequalityId.HARDY_R2_MAIN:
            p = float(rng.uniform(4.5, 6.0))
            a = float(rng.uniform(0.05, 0.9 * 2.0 / math.sqrt(12.0 + p * p)))
        params.update(a=a, p=p, q=p / (p - 2.0))
        if cid is InequalityId.HS_R2:
            lam_star, _ = planar_symmetry_thresholds(a, p)
            t = float(rng.uniform(0.3, 1.0))
            params["lam"] = -a * a + t * (lam_star + a * a)
    elif cid in sub_ids:
        a, p = _sub_params(rng)
        params.update(a=a, p=p, q=p / (2.0 - p))
    else:
        params["a"] = float(rng.uniform(0.05, 0.45))
    return params


_EVALUATORS = {
    InequalityId.KLT_S1_SUPER: _eval_klt_s1_super,
    InequalityId.KLT_S1_SUPER_SPECTRAL: _eval_klt_s1_super_spectral,
    InequalityId.HARDY_R2_SUPER: _eval_hardy_r2_super,
    InequalityId.HARDY_S2: _eval_hardy_s2,
    InequalityId.RING_INV_NORM: _eval_ring_inv_norm,
    InequalityId.KLT_S1_SUB: _eval_klt_s1_sub,
    InequalityId.KLT_S1_SUB_THRESHOLD: _eval_klt_s1_sub_threshold,
    InequalityId.HARDY_R2_SUB: _eval_hardy_r2_sub,
    InequalityId.HARDY_R3_HALF: _eval_hardy_r3_half,
    InequalityId.HARDY_R3_SUB: _eval_hardy_r3_sub,
    InequalityId.HARDY_R2_PLAIN: _eval_hardy_r2_plain,
    InequalityId.HS_R2: _eval_hs_r2,
    InequalityId.KLT_R2: _eval_klt_r2,
    InequalityId.HARDY_R2_MAIN: _eval_hardy_r2_main,
    InequalityId.HARDY_R3_RADIAL: _eval_hardy_r3_radial,
    InequalityId.HARDY_R3_CYL: _eval_hardy_r3_cyl,
    InequalityId.EKHOLM_PORTMANN: _eval_ekholm_portmann,
}


def evaluate_certificate(cid: InequalityId, params: dict | None = None,
                         psi=None, phi=None) -> CertificateReport:
    """Quadrature both sides of the named inequality and classify the margin.

    If psi/phi are omitted, the id's default deterministic family is generated
    from params['seed'].  The report records the constant source used.
    """
    if params is None:
        params = _default_params(cid, 0)
    elif "q" not in params and "p" in params and params.get("p") is not None:
        p = params["p"]
        params = dict(params)
        params["q"] = p / (p - 2.0) if p > 2 else p / (2.0 - p)
    if psi is None and phi is None:
        psi, phi = _default_inputs(cid, params)
    out = _EVALUATORS[cid](params, psi, phi)
    if len(out) == 3:
        sides, source, extra_err = out
    else:
        (sides, source), extra_err = out, 0.0
    lhs, rhs = sides(1)
    lhs2, rhs2 = sides(2)
    quad_error = abs(lhs - lhs2) + abs(rhs - rhs2) + extra_err
    margin = lhs - rhs
    return CertificateReport(
        id=cid,
        params={k: v for k, v in params.items()},
        lhs=lhs,
        rhs=rhs,
        margin=margin,
        quad_error=quad_error,
        verdict=_verdict(lhs, rhs, quad_error),
        constant_source=source,
    )


def run_suite(ids=None, n_seeds: int = 200, seed0: int = 0) -> list[CertificateReport]:
    """Randomized certificate suite: n_seeds deterministic draws per id."""
    ids = list(InequalityId) if ids is None else list(ids)
    reports = []
    for cid in ids:
        for s in range(seed0, seed0 + n_seeds):
            params = _default_params(cid, s)
            reports.append(evaluate_certificate(cid, params))
    return reports


def hardy_r3_pair(a: float, seed: int) -> tuple[CertificateReport, CertificateReport]:
    """Baseline and improved radial bounds evaluated on the identical field."""
    psi = tf.cylinder_field(seed, CYL_RHO, CYL_Z, Family.COMPACT_SUPPORT_SMOOTH)
    rep_base = evaluate_certificate(InequalityId.EKHOLM_PORTMANN, {"a": a, "seed": seed}, psi=psi)
    rep_impr = evaluate_certificate(InequalityId.HARDY_R3_RADIAL, {"a": a, "seed": seed}, psi=psi)
    return rep_base, rep_impr


def saturation_cases() -> list[CertificateReport]:
    """The two asserted equality cases: constant potential in the rigidity
    window for the subquadratic spectral bound, and the radial extremal for
    the weighted planar bound below its symmetry threshold."""
    reports = []
    a, p = 0.3, 1.5
    c = 0.9 * (1.0 - 4.0 * a * a) / (2.0 - p)
    n = 128
    phi = np.full(n, c)
    params = {"a": a, "p": p, "q": p / (2.0 - p), "seed": 0, "force_rigidity": False}
    reports.append(evaluate_certificate(InequalityId.KLT_S1_SUB, params, psi=None, phi=phi))
    a, p = 0.2, 4.0
    lam = 0.5 * planar_symmetry_thresholds(a, p)[0]
    psi = extremal_profile(a, p, lam)
    params = {"a": a, "p": p, "q": p / (p - 2.0), "lam": lam, "seed": 0}
    reports.append(evaluate_certificate(InequalityId.HS_R2, params, psi=psi))
    return reports
