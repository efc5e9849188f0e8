"""Grids, quadrature weights, norms and discrete magnetic energies.

Measure conventions: the ring and the torus carry the normalized probability
measure (weights sum to 1); interval, log-radial and cylindrical grids carry
Lebesgue weights.  Log-radial grids keep the e^{2s} volume factor so plain and
inverse-square-weighted planar integrals are both available.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from enum import Enum

import numpy as np
from scipy.special import roots_legendre

__all__ = [
    "Domain",
    "Measure",
    "Grid",
    "FieldKind",
    "DiscreteField",
    "build_grid",
    "lp_norm",
    "magnetic_energy",
    "inverse_l2_term",
    "ring_derivative",
    "EPS_VANISH_FACTOR",
]

MIN_RESOLUTION = 16
EPS_VANISH_FACTOR = 1e-8  # profiles below this fraction of their mean count as vanishing


class Domain(Enum):
    RING_S1 = "ring_s1"
    TORUS_T2 = "torus_t2"
    INTERVAL_Z = "interval_z"
    LOG_RADIAL = "log_radial"
    CYLINDRICAL_R3 = "cylindrical_r3"


class Measure(Enum):
    NORMALIZED = "normalized"
    LEBESGUE = "lebesgue"


@dataclass
class Grid:
    """Immutable sampled domain: coordinate arrays plus quadrature weights.

    `weights` integrates functions sampled on the full (product) grid; for the
    cylindrical grid it already contains the rho volume factor.
    """

    domain: Domain
    nodes: tuple
    weights: np.ndarray
    measure: Measure
    meta: dict = field(default_factory=dict)

    @property
    def shape(self) -> tuple:
        return tuple(len(n) for n in self.nodes)

    def integrate(self, values: np.ndarray) -> float | complex:
        return np.sum(self.weights * values)


def build_grid(domain: Domain, resolution, truncation: float | None = None) -> Grid:
    """Construct a grid: uniform nodes on periodic directions, Gauss-Legendre
    on the interval, composite rules on the log-radial and cylindrical grids.

    resolution: int for 1-d domains, tuple of ints for product domains.
    truncation: half-width L for LOG_RADIAL, (R_rho, R_z) for CYLINDRICAL_R3.
    """
    if domain is Domain.RING_S1:
        n = int(resolution)
        _check_res(n)
        theta = 2.0 * np.pi * np.arange(n) / n
        w = np.full(n, 1.0 / n)
        return Grid(domain, (theta,), w, Measure.NORMALIZED)

    if domain is Domain.TORUS_T2:
        nx, ny = (resolution, resolution) if np.isscalar(resolution) else resolution
        _check_res(nx), _check_res(ny)
        x = 2.0 * np.pi * np.arange(nx) / nx - np.pi
        y = 2.0 * np.pi * np.arange(ny) / ny - np.pi
        w = np.full((nx, ny), 1.0 / (nx * ny))
        return Grid(domain, (x, y), w, Measure.NORMALIZED)

    if domain is Domain.INTERVAL_Z:
        n = int(resolution)
        _check_res(n)
        z, w = roots_legendre(n)
        return Grid(domain, (z,), w, Measure.LEBESGUE)

    if domain is Domain.LOG_RADIAL:
        n = int(resolution)
        _check_res(n)
        if truncation is None or truncation <= 0:
            raise ValueError("LOG_RADIAL needs a truncation half-width L > 0")
        s = np.linspace(-truncation, truncation, n)
        h = s[1] - s[0]
        w = np.full(n, h)
        w[0] = w[-1] = 0.5 * h
        return Grid(
            domain, (s,), w, Measure.LEBESGUE, meta={"L": truncation, "volume_factor": np.exp(2.0 * s)}
        )

    if domain is Domain.CYLINDRICAL_R3:
        nr, nt, nz = resolution
        _check_res(nr), _check_res(nt), _check_res(nz)
        if truncation is None:
            raise ValueError("CYLINDRICAL_R3 needs truncation (R_rho, R_z)")
        r_rho, r_z = truncation
        h_rho = r_rho / nr
        rho = (np.arange(nr) + 0.5) * h_rho  # half-cell offset keeps rho > 0
        theta = 2.0 * np.pi * np.arange(nt) / nt
        z = np.linspace(-r_z, r_z, nz)
        h_z = z[1] - z[0]
        wz = np.full(nz, h_z)
        wz[0] = wz[-1] = 0.5 * h_z
        w = (h_rho * rho)[:, None, None] * (2.0 * np.pi / nt) * wz[None, None, :]
        return Grid(domain, (rho, theta, z), w, Measure.LEBESGUE, meta={"R_rho": r_rho, "R_z": r_z})

    raise ValueError(f"unknown domain {domain}")


def _check_res(n: int) -> None:
    if n < MIN_RESOLUTION:
        raise ValueError(f"resolution {n} below minimum {MIN_RESOLUTION}")


class FieldKind(Enum):
    COMPLEX = "complex"
    REAL_POSITIVE = "real_positive"


@dataclass
class DiscreteField:
    grid: Grid
    values: np.ndarray
    kind: FieldKind = FieldKind.COMPLEX

    def __post_init__(self) -> None:
        self.values = np.asarray(self.values)
        if not np.all(np.isfinite(self.values.view(float) if np.iscomplexobj(self.values) else self.values)):
            raise ValueError("field values must be finite")
        if self.kind is FieldKind.REAL_POSITIVE:
            if np.iscomplexobj(self.values) or np.any(self.values < 0):
                raise ValueError("REAL_POSITIVE fields must be real with values >= 0")


def lp_norm(f: DiscreteField, p: float) -> float:
    """(sum_i w_i |f_i|^p)^(1/p) under the grid's measure."""
    if p < 1.0:
        raise ValueError(f"p must be >= 1, got {p}")
    return float(f.grid.integrate(np.abs(f.values) ** p) ** (1.0 / p))


def ring_derivative(values: np.ndarray) -> np.ndarray:
    """Spectral derivative of a periodic sample (2*pi period)."""
    n = len(values)
    k = np.fft.fftfreq(n, d=1.0 / n)
    if n % 2 == 0:
        k = k.copy()
        k[n // 2] = 0.0  # Nyquist mode has no well-defined odd derivative
    return np.fft.ifft(1j * k * np.fft.fft(values))


def _torus_gradient(values: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
    nx, ny = values.shape
    kx = np.fft.fftfreq(nx, d=1.0 / nx)
    ky = np.fft.fftfreq(ny, d=1.0 / ny)
    if nx % 2 == 0:
        kx = kx.copy()
        kx[nx // 2] = 0.0
    if ny % 2 == 0:
        ky = ky.copy()
        ky[ny // 2] = 0.0
    vhat = np.fft.fft2(values)
    dx = np.fft.ifft2(1j * kx[:, None] * vhat)
    dy = np.fft.ifft2(1j * ky[None, :] * vhat)
    return dx, dy


def magnetic_energy(f: DiscreteField, a: float) -> float:
    """Discrete magnetic Dirichlet energy with flux a.

    The flux is used as given (no normalization): gauge covariance
    energy(e^{ik theta} f, a + k) = energy(f, a) is part of the contract.
    """
    g = f.grid
    vals = f.values.astype(complex)
    if g.domain is Domain.RING_S1:
        d = ring_derivative(vals) - 1j * a * vals
        return float(g.integrate(np.abs(d) ** 2).real)
    if g.domain is Domain.TORUS_T2:
        dx, dy = _torus_gradient(vals)
        return float(g.integrate(np.abs(dx) ** 2 + np.abs(dy - 1j * a * vals) ** 2).real)
    if g.domain is Domain.LOG_RADIAL:
        # values shaped (n_s, n_theta); ds dtheta measure equals the planar
        # magnetic energy of the corresponding field on R^2
        if vals.ndim != 2:
            raise ValueError("log-radial magnetic energy expects (s, theta) samples")
        s = g.nodes[0]
        ds = np.gradient(vals, s, axis=0)
        nt = vals.shape[1]
        kt = np.fft.fftfreq(nt, d=1.0 / nt)
        dth = np.fft.ifft(1j * kt[None, :] * np.fft.fft(vals, axis=1), axis=1)
        wcol = g.weights[:, None] * (2.0 * np.pi / nt)
        return float(np.sum(wcol * (np.abs(ds) ** 2 + np.abs(dth - 1j * a * vals) ** 2)).real)
    if g.domain is Domain.CYLINDRICAL_R3:
        if vals.shape != g.shape:
            raise ValueError("cylindrical magnetic energy expects (rho, theta, z) samples")
        rho, theta, z = g.nodes
        drho = np.gradient(vals, rho, axis=0)
        dz = np.gradient(vals, z, axis=2)
        nt = len(theta)
        kt = np.fft.fftfreq(nt, d=1.0 / nt)
        dth = np.fft.ifft(1j * kt[None, :, None] * np.fft.fft(vals, axis=1), axis=1)
        dens = (
            np.abs(drho) ** 2
            + np.abs((dth - 1j * a * vals)) ** 2 / rho[:, None, None] ** 2
            + np.abs(dz) ** 2
        )
        return float(g.integrate(dens).real)
    raise ValueError(f"magnetic energy not defined on {g.domain}")


def inverse_l2_term(u: DiscreteField) -> float:
    """(sum w_i u_i^-2)^-1 with the vanishing convention: 0 if u nearly vanishes."""
    if u.kind is not FieldKind.REAL_POSITIVE:
        raise ValueError("inverse L2 term requires a real non-negative profile")
    vals = np.asarray(u.values, dtype=float)
    mean = float(u.grid.integrate(vals))
    if np.min(vals) < EPS_VANISH_FACTOR * mean:
        return 0.0
    return float(1.0 / u.grid.integrate(vals**-2.0))
