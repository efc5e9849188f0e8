"""Deterministic test-function families for the certificate suites.

Every family is seeded (numpy PCG64) and carries analytic derivatives where
finite differences would limit quadrature accuracy: planar fields live on the
log-radial axis as angular sectors, cylindrical fields as (rho, z) sectors
with compact support away from the axis, sphere fields as sectors
(1-z^2)^{a_half} q(z) with polynomial regular part.
"""

from __future__ import annotations

from dataclasses import dataclass
from enum import Enum

import numpy as np

from .planar import EmdenFowlerField

__all__ = [
    "Family",
    "RingField",
    "SphereField",
    "CylinderField",
    "generate_test_function",
    "ring_positive_profile",
    "ring_complex_field",
    "ring_potential",
    "torus_positive_profile",
    "planar_field",
    "planar_scalar_weight",
    "sphere_field",
    "sphere_potential",
    "cylinder_field",
    "bump",
    "dbump",
]


class Family(Enum):
    FOURIER_BANDLIMITED = "fourier_bandlimited"
    POSITIVE_PROFILE = "positive_profile"
    GAUSSIAN_BUMP_PHASE = "gaussian_bump_phase"
    COMPACT_SUPPORT_SMOOTH = "compact_support_smooth"


MAX_BAND = 8


def bump(t: np.ndarray) -> np.ndarray:
    """C-infinity bump supported on |t| < 1, peak value 1."""
    t = np.asarray(t, dtype=float)
    out = np.zeros_like(t)
    inside = np.abs(t) < 1.0
    ti = t[inside]
    out[inside] = np.exp(1.0 - 1.0 / (1.0 - ti * ti))
    return out


def dbump(t: np.ndarray) -> np.ndarray:
    t = np.asarray(t, dtype=float)
    out = np.zeros_like(t)
    inside = np.abs(t) < 1.0
    ti = t[inside]
    out[inside] = np.exp(1.0 - 1.0 / (1.0 - ti * ti)) * (-2.0 * ti / (1.0 - ti * ti) ** 2)
    return out


# -- ring / torus ------------------------------------------------------------

@dataclass
class RingField:
    values: np.ndarray  # complex samples on the uniform theta grid

    @property
    def n(self) -> int:
        return len(self.values)


def ring_complex_field(seed: int, n: int = 256, band: int = MAX_BAND) -> RingField:
    rng = np.random.default_rng(seed)
    theta = 2.0 * np.pi * np.arange(n) / n
    vals = np.zeros(n, dtype=complex)
    for k in range(-band, band + 1):
        c = (rng.normal() + 1j * rng.normal()) / (1.0 + abs(k))
        vals += c * np.exp(1j * k * theta)
    return RingField(vals)


def ring_positive_profile(seed: int, n: int = 256, band: int = MAX_BAND,
                          amplitude: float = 0.6) -> np.ndarray:
    rng = np.random.default_rng(seed)
    theta = 2.0 * np.pi * np.arange(n) / n
    vals = np.zeros(n)
    for k in range(1, band + 1):
        vals += rng.normal() / k * np.cos(k * theta) + rng.normal() / k * np.sin(k * theta)
    peak = np.max(np.abs(vals))
    if peak > 0:
        vals *= amplitude / peak
    return 1.0 + vals


def ring_potential(seed: int, n: int = 256, band: int = 4, floor: float = 0.3) -> np.ndarray:
    """Strictly positive bandlimited potential on the ring."""
    return np.maximum(ring_positive_profile(seed, n, band, amplitude=1.0 - floor), floor)


def torus_positive_profile(seed: int, shape: tuple = (48, 48), band: int = 6,
                           amplitude: float = 0.6) -> np.ndarray:
    rng = np.random.default_rng(seed)
    nx, ny = shape
    x = 2.0 * np.pi * np.arange(nx) / nx
    y = 2.0 * np.pi * np.arange(ny) / ny
    vals = np.zeros(shape)
    for _ in range(10):
        kx, ky = rng.integers(-band, band + 1, size=2)
        if kx == 0 and ky == 0:
            continue
        amp = rng.normal() / (1.0 + abs(kx) + abs(ky))
        phase = rng.uniform(0, 2 * np.pi)
        vals += amp * np.cos(kx * x[:, None] + ky * y[None, :] + phase)
    peak = np.max(np.abs(vals))
    if peak > 0:
        vals *= amplitude / peak
    return 1.0 + vals


# -- log-radial planar fields -------------------------------------------------

def planar_field(seed: int, s: np.ndarray, family: Family, kmax: int = 2,
                 pure_positive: bool = False) -> EmdenFowlerField:
    rng = np.random.default_rng(seed)
    if pure_positive:
        v = np.zeros_like(s)
        dv = np.zeros_like(s)
        for _ in range(3):
            amp = abs(rng.normal()) + 0.2
            c = rng.uniform(-2.5, 2.5)
            w = rng.uniform(0.3, 1.0)
            g = np.exp(-w * (s - c) ** 2)
            v += amp * g
            dv += amp * (-2.0 * w * (s - c)) * g
        return EmdenFowlerField(s, {0: (v.astype(complex), dv.astype(complex))})
    sectors = {}
    for k in range(-kmax, kmax + 1):
        v = np.zeros_like(s, dtype=complex)
        dv = np.zeros_like(s, dtype=complex)
        for _ in range(rng.integers(1, 3)):
            amp = rng.normal() + 1j * rng.normal()
            c = rng.uniform(-3.0, 3.0)
            if family is Family.GAUSSIAN_BUMP_PHASE:
                w = rng.uniform(0.3, 1.2)
                g = np.exp(-w * (s - c) ** 2)
                v += amp * g
                dv += amp * (-2.0 * w * (s - c)) * g
            elif family is Family.COMPACT_SUPPORT_SMOOTH:
                width = rng.uniform(2.0, 5.0)
                v += amp * bump((s - c) / width)
                dv += amp * dbump((s - c) / width) / width
            else:
                raise ValueError(f"family {family} not defined on the log-radial axis")
        sectors[k] = (v, dv)
    return EmdenFowlerField(s, sectors)


def planar_scalar_weight(seed: int, s: np.ndarray, ntheta: int, nonneg: bool = True):
    """Smooth scalar weight on the (s, theta) cylinder, compactly supported
    in s (so weighted planar integrals of it stay finite)."""
    rng = np.random.default_rng(seed)
    theta = 2.0 * np.pi * np.arange(ntheta) / ntheta
    w = np.zeros((len(s), ntheta))
    for _ in range(3):
        c = rng.uniform(-3.0, 3.0)
        width = rng.uniform(2.0, 5.0)
        k = rng.integers(0, 3)
        phase = rng.uniform(0, 2 * np.pi)
        sbump = bump((s - c) / width)
        if nonneg:
            amp = abs(rng.normal()) + 0.2
            th = 0.5 * (1.0 + np.cos(k * theta + phase))
        else:
            amp = rng.normal()
            th = np.cos(k * theta + phase)
        w += amp * sbump[:, None] * th[None, :]
    return w


# -- sphere fields -------------------------------------------------------------

@dataclass
class SphereField:
    """Sum over sectors A_k (1-z^2)^{a_half_k} q_k(z) e^{i k theta}."""

    a: float
    sectors: dict  # k -> (complex amplitude, real poly coefficients low->high)

    def a_half(self, k: int) -> float:
        return 0.5 * abs(k - self.a)

    def sector_values(self, k: int, z: np.ndarray) -> np.ndarray:
        amp, coeffs = self.sectors[k]
        return amp * (1.0 - z * z) ** self.a_half(k) * np.polynomial.polynomial.polyval(z, coeffs)

    def values(self, z: np.ndarray, theta: np.ndarray) -> np.ndarray:
        out = np.zeros((len(z), len(theta)), dtype=complex)
        for k in self.sectors:
            out += self.sector_values(k, z)[:, None] * np.exp(1j * k * theta)[None, :]
        return out


def sphere_field(seed: int, a: float, kmax: int = 2, deg: int = 3) -> SphereField:
    rng = np.random.default_rng(seed)
    sectors = {}
    for k in range(-kmax, kmax + 1):
        amp = (rng.normal() + 1j * rng.normal()) / (1.0 + abs(k))
        coeffs = rng.normal(size=deg + 1) / (1.0 + np.arange(deg + 1))
        sectors[k] = (amp, coeffs)
    return SphereField(a, sectors)


def sphere_potential(seed: int, z: np.ndarray, theta: np.ndarray, nonneg: bool = True) -> np.ndarray:
    rng = np.random.default_rng(seed)
    w = np.zeros((len(z), len(theta)))
    for _ in range(4):
        j = rng.integers(0, 3)
        m = rng.integers(0, 3)
        phase = rng.uniform(0, 2 * np.pi)
        w += rng.normal() / (1.0 + j + m) * (z**j)[:, None] * np.cos(m * theta + phase)[None, :]
    if nonneg:
        w = w - np.min(w) + 0.1 * (np.max(np.abs(w)) + 1e-12)
    return w


# -- cylindrical fields ---------------------------------------------------------

@dataclass
class CylinderField:
    """Sectors k -> (h, dh/drho, dh/dz) sampled on the (rho, z) product grid;
    the full field is sum_k h_k(rho, z) e^{i k theta}."""

    rho: np.ndarray
    z: np.ndarray
    sectors: dict

    def values(self, theta: np.ndarray) -> np.ndarray:
        out = np.zeros((len(self.rho), len(theta), len(self.z)), dtype=complex)
        for k, (h, _, _) in self.sectors.items():
            out += h[:, None, :] * np.exp(1j * k * theta)[None, :, None]
        return out


def cylinder_field(seed: int, rho: np.ndarray, z: np.ndarray, family: Family,
                   kmax: int = 2, rho_support: tuple = (0.8, 6.0),
                   z_support: float = 6.0) -> CylinderField:
    rng = np.random.default_rng(seed)
    sectors = {}
    r_lo, r_hi = rho_support
    for k in range(-kmax, kmax + 1):
        h = np.zeros((len(rho), len(z)), dtype=complex)
        dhr = np.zeros_like(h)
        dhz = np.zeros_like(h)
        for _ in range(rng.integers(1, 3)):
            amp = rng.normal() + 1j * rng.normal()
            cr = rng.uniform(r_lo + 0.6, r_hi - 0.6)
            wr = rng.uniform(0.5, min(cr - r_lo, r_hi - cr))
            cz = rng.uniform(-0.5 * z_support, 0.5 * z_support)
            wz = rng.uniform(1.0, 0.5 * z_support)
            if family is Family.COMPACT_SUPPORT_SMOOTH:
                rpart, drpart = bump((rho - cr) / wr), dbump((rho - cr) / wr) / wr
                zpart, dzpart = bump((z - cz) / wz), dbump((z - cz) / wz) / wz
            elif family is Family.GAUSSIAN_BUMP_PHASE:
                # gaussian in z, compact in rho (the axis must stay excluded)
                rpart, drpart = bump((rho - cr) / wr), dbump((rho - cr) / wr) / wr
                g = np.exp(-((z - cz) / wz) ** 2)
                zpart, dzpart = g, -2.0 * (z - cz) / wz**2 * g
            else:
                raise ValueError(f"family {family} not defined on the cylindrical grid")
            h += amp * rpart[:, None] * zpart[None, :]
            dhr += amp * drpart[:, None] * zpart[None, :]
            dhz += amp * rpart[:, None] * dzpart[None, :]
        sectors[k] = (h, dhr, dhz)
    return CylinderField(rho, z, sectors)


def generate_test_function(domain: str, family: Family, seed: int, **kw):
    """Deterministic test field for `domain` from the named family.

    domain: 'ring' | 'torus' | 'sphere2' | 'planar_ef' | 'cylinder3'.
    Extra keyword arguments fix the grid (axis, resolution, flux for sphere
    sectors); identical arguments give identical samples.
    """
    if domain == "ring":
        if family is Family.FOURIER_BANDLIMITED:
            return ring_complex_field(seed, **kw)
        if family is Family.POSITIVE_PROFILE:
            return ring_positive_profile(seed, **kw)
    elif domain == "torus":
        if family is Family.POSITIVE_PROFILE:
            return torus_positive_profile(seed, **kw)
    elif domain == "sphere2":
        if family is Family.FOURIER_BANDLIMITED:
            return sphere_field(seed, **kw)
    elif domain == "planar_ef":
        if family in (Family.GAUSSIAN_BUMP_PHASE, Family.COMPACT_SUPPORT_SMOOTH):
            return planar_field(seed, family=family, **kw)
    elif domain == "cylinder3":
        if family in (Family.GAUSSIAN_BUMP_PHASE, Family.COMPACT_SUPPORT_SMOOTH):
            return cylinder_field(seed, family=family, **kw)
    else:
        raise ValueError(f"unknown domain {domain!r}")
    raise ValueError(f"family {family} incompatible with domain {domain!r}")
