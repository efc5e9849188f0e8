"""Planar weighted interpolation machinery in log-radial coordinates.

With s = log r all inverse-square-weighted integrals become translation
invariant on the cylinder (s, theta), the radial extremal is a cosh profile
and the Euler-Lagrange equation reduces to u'' = kappa u - u^{p-1} with
kappa = lambda + a^2.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np
from scipy.integrate import solve_ivp
from scipy.linalg import eigh

from .constants import planar_mu_closed, planar_symmetry_thresholds
from .errors import SolverError

__all__ = [
    "EmdenFowlerField",
    "log_radial_axis",
    "extremal_profile",
    "hs_rayleigh_quotient",
    "ShootingResult",
    "solve_radial_euler_lagrange",
    "k1_second_variation",
    "locate_k1_sign_change",
    "GNRecord",
    "gn_constant",
    "CknRecord",
    "ckn_equivalence_check",
]

TAIL_TOL = 1e-10


@dataclass
class EmdenFowlerField:
    """Angular-sector samples on a uniform log-radial axis.

    sectors maps the angular mode k to (values, d/ds values); fields are
    expected to decay below TAIL_TOL of their peak at the truncation ends.
    """

    s: np.ndarray
    sectors: dict = field(default_factory=dict)

    def __post_init__(self) -> None:
        peak = max(float(np.max(np.abs(v))) for v, _ in self.sectors.values())
        tail = max(
            max(abs(complex(v[0])), abs(complex(v[-1]))) for v, _ in self.sectors.values()
        )
        self.decay_check = tail / peak if peak > 0 else 0.0
        if peak == 0.0:
            raise ValueError("field is identically zero")
        if self.decay_check > TAIL_TOL:
            raise ValueError(
                f"tail magnitude {self.decay_check:.2e} of peak exceeds {TAIL_TOL}: enlarge the truncation"
            )

    @property
    def ds(self) -> float:
        return float(self.s[1] - self.s[0])

    def physical(self, ntheta: int) -> np.ndarray:
        """Reconstruct samples on the (s, theta) product grid."""
        theta = 2.0 * np.pi * np.arange(ntheta) / ntheta
        out = np.zeros((len(self.s), ntheta), dtype=complex)
        for k, (v, _) in self.sectors.items():
            out += v[:, None] * np.exp(1j * k * theta)[None, :]
        return out


def log_radial_axis(kappa: float, span: float = 30.0, h: float = 0.05) -> np.ndarray:
    """Uniform s-axis wide enough that e^{-sqrt(kappa) L} is negligible."""
    if kappa <= 0:
        raise ValueError("kappa = lambda + a^2 must be positive")
    half = span / math.sqrt(kappa)
    n = 2 * int(math.ceil(half / h)) + 1
    return np.linspace(-half, half, n)


def extremal_profile(a: float, p: float, lam: float, s: np.ndarray | None = None) -> EmdenFowlerField:
    """Radial cosh extremal (cosh(alpha s))^{-2/(p-2)}, peak normalized to 1."""
    kappa = lam + a * a
    if kappa <= 0:
        raise ValueError("degenerate profile: lambda = -a^2 gives alpha = 0")
    alpha = 0.5 * (p - 2.0) * math.sqrt(kappa)
    m = 2.0 / (p - 2.0)
    if s is None:
        s = log_radial_axis(kappa)
    vals = np.cosh(alpha * s) ** (-m)
    dvals = -m * alpha * np.tanh(alpha * s) * vals
    return EmdenFowlerField(s, {0: (vals.astype(complex), dvals.astype(complex))})


def hs_rayleigh_quotient(psi: EmdenFowlerField, a: float, p: float, lam: float) -> float:
    """Weighted quotient (magnetic energy + lam inverse-square mass) over the
    weighted p-norm, all weights flattened by the log-radial coordinates."""
    ds = psi.ds
    num = 0.0
    for k, (v, dv) in psi.sectors.items():
        num += float(np.sum(np.abs(dv) ** 2 + ((k - a) ** 2 + lam) * np.abs(v) ** 2)) * ds
    num *= 2.0 * np.pi
    kmax = max(abs(k) for k in psi.sectors)
    ntheta = max(16, 4 * (kmax + 1))
    phys = psi.physical(ntheta)
    den = float(np.sum(np.abs(phys) ** p)) * ds * (2.0 * np.pi / ntheta)
    if den <= 0:
        raise ValueError("zero denominator")
    return num / den ** (2.0 / p)


# -- radial Euler-Lagrange shooting ----------------------------------------

@dataclass
class ShootingResult:
    profile: EmdenFowlerField
    mu_numeric: float
    amplitude: float
    bracket: tuple[float, float]


def _classify_line_orbit(b: float, kappa: float, p: float, s_max: float) -> int:
    """+1 if the orbit from (b, 0) crosses u = 0 (supercritical), -1 if it
    turns with u > 0 (subcritical)."""
    s0 = 1e-6
    u2 = kappa * b - b ** (p - 1.0)
    y0 = [b + 0.5 * u2 * s0 * s0, u2 * s0]

    def rhs(_s, y):
        return [y[1], kappa * y[0] - np.sign(y[0]) * np.abs(y[0]) ** (p - 1.0)]

    cross = lambda _s, y: y[0]
    cross.terminal, cross.direction = True, -1.0
    turn = lambda _s, y: y[1]
    turn.terminal, turn.direction = True, 1.0
    sol = solve_ivp(rhs, (s0, s_max), y0, method="DOP853", rtol=1e-12, atol=1e-14,
                    events=[cross, turn])
    if sol.t_events[0].size:
        return 1
    if sol.t_events[1].size:
        return -1
    # no event: decide by the conserved energy sign
    h_energy = b**p / p - 0.5 * kappa * b * b
    return 1 if h_energy > 0 else -1


def solve_radial_euler_lagrange(a: float, p: float, lam: float,
                                s: np.ndarray | None = None) -> ShootingResult:
    """Homoclinic profile of u'' = kappa u - u^{p-1} by bisection shooting on
    the even initial value, with an energy-based criterion for the
    supercritical/subcritical dichotomy.

    The reported profile is integrated on the zero-energy manifold
    u' = -u sqrt(kappa - (2/p) u^{p-2}) from the located amplitude, which is
    stable in the decaying direction (forward integration of the second-order
    equation amplifies the bisection residual exponentially).
    """
    kappa = lam + a * a
    if kappa <= 0:
        raise ValueError("lambda must exceed -a^2 strictly")
    if s is None:
        s = log_radial_axis(kappa)
    s_max = 40.0 / math.sqrt(kappa)

    lo = kappa ** (1.0 / (p - 2.0)) * 1.000001  # just above the constant equilibrium
    if _classify_line_orbit(lo, kappa, p, s_max) != -1:
        raise SolverError(f"shooting bracket failed: b={lo} already supercritical")
    hi = 2.0 * lo
    scans = 0
    while _classify_line_orbit(hi, kappa, p, s_max) != 1:
        hi *= 2.0
        scans += 1
        if scans > 40:
            raise SolverError(f"no supercritical amplitude found up to b={hi}")
    while (hi - lo) > 1e-13 * hi:
        mid = 0.5 * (lo + hi)
        if _classify_line_orbit(mid, kappa, p, s_max) == 1:
            hi = mid
        else:
            lo = mid
    b = 0.5 * (lo + hi)

    # dense profile on the zero-energy branch
    half = s[s >= 0]
    u2 = kappa * b - b ** (p - 1.0)
    u4 = (kappa - (p - 1.0) * b ** (p - 2.0)) * u2
    s0 = 1e-3 / math.sqrt(kappa)

    def taylor(t):
        return b + 0.5 * u2 * t * t + u4 * t**4 / 24.0

    def g(u):
        return np.sqrt(np.maximum(kappa * u * u - (2.0 / p) * np.abs(u) ** p, 0.0))

    sol = solve_ivp(
        lambda _t, y: [-g(y[0])],
        (s0, float(half[-1]) + 1e-9),
        [taylor(s0)],
        method="DOP853",
        rtol=1e-13,
        atol=1e-16,
        dense_output=True,
    )
    u_half = np.where(half <= s0, taylor(half), sol.sol(np.maximum(half, s0))[0])
    n_half = len(u_half)
    n = len(s)
    u = np.empty(n)
    u[n - n_half:] = u_half
    u[: n - n_half] = u_half[1: n - n_half + 1][::-1] if n % 2 == 1 else u_half[: n - n_half][::-1]
    du = -np.sign(s) * g(u)
    profile = EmdenFowlerField(s, {0: (u.astype(complex), du.astype(complex))})
    mu_num = hs_rayleigh_quotient(profile, a, p, lam)
    return ShootingResult(profile, mu_num, b, (lo, hi))


# -- first angular harmonic second variation --------------------------------

def _periodic_lap_dense(n: int, length: float) -> np.ndarray:
    k = np.fft.fftfreq(n, d=length / n) * 2.0 * np.pi
    eye = np.eye(n)
    return np.fft.ifft((k * k)[:, None] * np.fft.fft(eye, axis=0), axis=0).real


def k1_second_variation(a: float, p: float, lam: float, n: int = 448,
                        span: float = 50.0) -> float:
    """Smallest eigenvalue of the linearization of the weighted quotient
    around the radial extremal, restricted to the first angular harmonic.

    The e^{i theta} and e^{-i theta} components couple through the real
    background; the operator is the two-component block

        [ -d2 + (1-a)^2 + lam - W      -C/2 ]
        [ -C/2       -d2 + (1+a)^2 + lam - W ]

    with W = (p/2) c u0^{p-2}, C = (p-2) c u0^{p-2} and c the Euler-Lagrange
    multiplier of the extremal.  A negative value certifies symmetry breaking.
    """
    kappa = lam + a * a
    if kappa <= 0:
        raise ValueError("lambda must exceed -a^2 strictly")
    alpha = 0.5 * (p - 2.0) * math.sqrt(kappa)
    m = 2.0 / (p - 2.0)
    half = span / math.sqrt(kappa)
    s = -half + 2.0 * half * np.arange(n) / n
    hs = 2.0 * half / n
    u0 = np.cosh(alpha * s) ** (-m)
    du0 = -m * alpha * np.tanh(alpha * s) * u0
    c = float(np.sum(du0**2 + kappa * u0**2) / np.sum(u0**p))
    w_diag = 0.5 * p * c * u0 ** (p - 2.0)
    coup = (p - 2.0) * c * u0 ** (p - 2.0)
    lap = _periodic_lap_dense(n, 2.0 * half)
    block = np.zeros((2 * n, 2 * n))
    block[:n, :n] = lap + np.diag((1.0 - a) ** 2 + lam - w_diag)
    block[n:, n:] = lap + np.diag((1.0 + a) ** 2 + lam - w_diag)
    block[:n, n:] = np.diag(-0.5 * coup)
    block[n:, :n] = np.diag(-0.5 * coup)
    vals = eigh(block, eigvals_only=True, subset_by_index=[0, 0])
    return float(vals[0])


def locate_k1_sign_change(a: float, p: float, tol: float = 1e-4, n: int = 448) -> float:
    """Bisection in lambda for the zero of the first-harmonic bottom eigenvalue."""
    lam_star, lam_bullet = planar_symmetry_thresholds(a, p)
    lo = lam_star - 0.05 * (lam_star + a * a)
    hi = lam_bullet + 0.05 * (lam_bullet + a * a)
    flo = k1_second_variation(a, p, lo, n=n)
    fhi = k1_second_variation(a, p, hi, n=n)
    if not (flo > 0 > fhi):
        raise SolverError(f"no sign change bracketed in [{lo}, {hi}]: ({flo}, {fhi})")
    while (hi - lo) > tol:
        mid = 0.5 * (lo + hi)
        if k1_second_variation(a, p, mid, n=n) > 0:
            lo = mid
        else:
            hi = mid
    return 0.5 * (lo + hi)


# -- unweighted Gagliardo-Nirenberg constant --------------------------------

@dataclass
class GNRecord:
    c_p: float
    mu_values: dict
    constants_inverse_power: dict  # mu(lam) / lam^{2/p}
    constants_direct_power: dict   # mu(lam) / lam^{p/2}
    exponent_fit: float
    conventions: tuple = ("lam^(2/p) matches the L2-shift arrangement",
                          "lam^(p/2) matches the Lp-shift arrangement")


def _classify_radial(b: float, lam: float, p: float, r_max: float) -> int:
    r0 = 1e-6
    c2 = lam * b - b ** (p - 1.0)
    y0 = [b + 0.25 * c2 * r0 * r0, 0.5 * c2 * r0]

    def rhs(r, y):
        return [y[1], -y[1] / r + lam * y[0] - np.sign(y[0]) * np.abs(y[0]) ** (p - 1.0)]

    cross = lambda _r, y: y[0]
    cross.terminal, cross.direction = True, -1.0
    turn = lambda _r, y: y[1]
    turn.terminal, turn.direction = True, 1.0
    sol = solve_ivp(rhs, (r0, r_max), y0, method="DOP853", rtol=1e-12, atol=1e-14,
                    events=[cross, turn])
    if sol.t_events[0].size:
        return 1
    if sol.t_events[1].size:
        return -1
    return 1 if sol.y[0, -1] < 0 else -1


def _gn_quotient(lam: float, p: float) -> float:
    """Optimal constant of |grad u|^2 + lam |u|_2^2 >= mu(lam) |u|_p^2 on the
    plane via the radial ground state of -Lap u + lam u = u^{p-1}."""
    r_scan = 35.0 / math.sqrt(lam)
    lo = lam ** (1.0 / (p - 2.0)) * 1.000001
    if _classify_radial(lo, lam, p, r_scan) != -1:
        raise SolverError("radial shooting bracket failed at the lower end")
    hi = 2.0 * lo
    scans = 0
    while _classify_radial(hi, lam, p, r_scan) != 1:
        hi *= 2.0
        scans += 1
        if scans > 40:
            raise SolverError("no supercritical amplitude found")
    while (hi - lo) > 1e-13 * hi:
        mid = 0.5 * (lo + hi)
        if _classify_radial(mid, lam, p, r_scan) == 1:
            hi = mid
        else:
            lo = mid
    b = 0.5 * (lo + hi)

    r0 = 1e-6
    r_cut = 12.0 / math.sqrt(lam)
    c2 = lam * b - b ** (p - 1.0)
    y0 = [b + 0.25 * c2 * r0 * r0, 0.5 * c2 * r0]

    def rhs(r, y):
        return [y[1], -y[1] / r + lam * y[0] - np.sign(y[0]) * np.abs(y[0]) ** (p - 1.0)]

    sol = solve_ivp(rhs, (r0, r_cut), y0, method="DOP853", rtol=1e-12, atol=1e-15,
                    dense_output=True)
    r = np.linspace(r0, r_cut, 12000)
    u, du = sol.sol(r)
    w = 2.0 * np.pi * r
    dr = r[1] - r[0]
    grad2 = float(np.sum(w * du * du)) * dr
    mass2 = float(np.sum(w * u * u)) * dr
    massp = float(np.sum(w * np.abs(u) ** p)) * dr
    return (grad2 + lam * mass2) / massp ** (2.0 / p)


def gn_constant(p: float, lams: tuple = (0.5, 1.0, 2.0)) -> GNRecord:
    """Unweighted planar interpolation constant from radial shooting, with the
    empirical scaling exponent of its lambda-dependence.

    Two printed power conventions exist for mu(lam); the scale-invariant
    extraction is mu(lam)/lam^{2/p} (the log-log fit lands on 2/p), and both
    are reported.
    """
    if p <= 2:
        raise ValueError("superquadratic exponent p > 2 required")
    mus = {lam: _gn_quotient(lam, p) for lam in lams}
    inv_pow = {lam: mu / lam ** (2.0 / p) for lam, mu in mus.items()}
    dir_pow = {lam: mu / lam ** (p / 2.0) for lam, mu in mus.items()}
    xs = np.log(np.array(list(mus.keys())))
    ys = np.log(np.array(list(mus.values())))
    slope = float(np.polyfit(xs, ys, 1)[0])
    return GNRecord(
        c_p=inv_pow[1.0] if 1.0 in inv_pow else list(inv_pow.values())[0],
        mu_values=mus,
        constants_inverse_power=inv_pow,
        constants_direct_power=dir_pow,
        exponent_fit=slope,
    )


# -- power-weight equivalence transform -------------------------------------

@dataclass
class CknRecord:
    lhs_ckn: float
    rhs_identity: float
    discrepancy: float
    inequality_lhs: float | None = None
    inequality_rhs: float | None = None
    inequality_margin: float | None = None


def ckn_equivalence_check(phi: EmdenFowlerField, a: float, a_ckn: float,
                          gamma: float | None = None, p: float | None = None) -> CknRecord:
    """Verify the power-weight identity

        int |grad_A phi|^2 / |x|^{2 a_ckn} = int |grad_A psi|^2
                                             + a_ckn^2 int |psi|^2/|x|^2

    with psi = |x|^{-a_ckn} phi, by quadrature in log-radial coordinates.
    When gamma and p are given the full weighted inequality with constant
    mu(a_ckn^2 - gamma) is evaluated as well.
    """
    if a_ckn > 0:
        raise ValueError("weight exponent must be <= 0")
    s = phi.s
    ds = phi.ds
    ew = np.exp(-2.0 * a_ckn * s)
    lhs = 0.0
    rhs = 0.0
    psi_sectors = {}
    for k, (v, dv) in phi.sectors.items():
        lhs += float(np.sum((np.abs(dv) ** 2 + (k - a) ** 2 * np.abs(v) ** 2) * ew)) * ds
        psi = np.exp(-a_ckn * s) * v
        dpsi = np.exp(-a_ckn * s) * (dv - a_ckn * v)
        psi_sectors[k] = (psi, dpsi)
        rhs += float(
            np.sum(np.abs(dpsi) ** 2 + ((k - a) ** 2 + a_ckn**2) * np.abs(psi) ** 2)
        ) * ds
    lhs *= 2.0 * np.pi
    rhs *= 2.0 * np.pi
    rec = CknRecord(lhs, rhs, lhs - rhs)
    if gamma is not None and p is not None:
        if gamma >= a_ckn**2 + a * a:
            raise ValueError("gamma must be < a_ckn^2 + a^2")
        lam = a_ckn**2 - gamma
        mu, _ = planar_mu_closed(a, p, lam)
        mass = 0.0
        for k, (v, _) in phi.sectors.items():
            mass += float(np.sum(np.abs(v) ** 2 * ew)) * ds
        mass *= 2.0 * np.pi
        kmax = max(abs(k) for k in phi.sectors)
        ntheta = max(16, 4 * (kmax + 1))
        phys = phi.physical(ntheta)
        pnorm = float(np.sum(np.abs(phys) ** p * np.exp(-a_ckn * p * s)[:, None])) * ds * (
            2.0 * np.pi / ntheta
        )
        rec.inequality_lhs = lhs
        rec.inequality_rhs = gamma * mass + mu * pnorm ** (2.0 / p)
        rec.inequality_margin = rec.inequality_lhs - rec.inequality_rhs
    return rec
