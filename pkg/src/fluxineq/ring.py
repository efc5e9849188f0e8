"""Optimal interpolation constants on the magnetic ring.

Subquadratic regime: minimize

    Q[u] = (|u'|_2^2 + a^2 |u^{-1}|_2^{-2} + mu |u|_p^2) / |u|_2^2

over positive profiles; superquadratic regime: minimize the counterpart with
lambda |u|_2^2 upstairs and |u|_p^2 downstairs.  Constants are optimal exactly
up to the rigidity threshold; beyond it a symmetry-broken branch takes over.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .constants import FluxParams, Regime, ring_rigidity_threshold
from .errors import SolverError
from .grids import EPS_VANISH_FACTOR

__all__ = [
    "SolverOptions",
    "RingProblem",
    "OptimizationResult",
    "RingQuotient",
    "projected_descent",
    "optimal_constant_ring",
    "second_variation_coefficient",
    "locate_bifurcation",
    "BifurcationEstimate",
]

SYMMETRY_DEVIATION_TOL = 1e-6


@dataclass
class SolverOptions:
    n: int = 256
    max_iter: int = 40000
    grad_tol: float = 1e-10
    restarts: int = 0
    seed: int = 0
    step0: float = 0.02


@dataclass
class RingProblem:
    fp: FluxParams
    param: float  # lambda (superquadratic) or mu (subquadratic)
    opts: SolverOptions = field(default_factory=SolverOptions)

    def __post_init__(self) -> None:
        if self.fp.regime is Regime.SUBQUADRATIC:
            if self.param <= 0:
                raise ValueError(f"mu must be > 0, got {self.param}")
        else:
            if self.param <= -self.fp.a ** 2:
                raise ValueError(f"lambda must exceed -a^2, got {self.param}")


@dataclass
class OptimizationResult:
    value: float
    profile: np.ndarray
    symmetric: bool
    gap_to_constant: float
    iterations: int
    grad_norm: float
    restarts: int
    inverse_term_zeroed: bool = False

    def __post_init__(self) -> None:
        if self.value < -1e-10:
            raise SolverError(f"negative quotient {self.value}: internal inconsistency")


class RingQuotient:
    """Scalar ring quotient with analytic weighted gradient on a uniform grid."""

    def __init__(self, fp: FluxParams, param: float, n: int, zero_inverse: bool = False):
        self.fp = fp
        self.param = float(param)
        self.n = int(n)
        self.theta = 2.0 * np.pi * np.arange(n) / n
        k = np.fft.rfftfreq(n, d=1.0 / n)
        self.k2 = k * k
        self.zero_inverse = zero_inverse or fp.a == 0.0

    # weighted inner product: mean over nodes (normalized measure)
    def _mean(self, v: np.ndarray) -> float:
        return float(np.mean(v))

    def _d2(self, u: np.ndarray) -> np.ndarray:
        return np.fft.irfft(-self.k2 * np.fft.rfft(u), n=self.n)

    def kinetic(self, u: np.ndarray) -> float:
        spec = np.fft.rfft(u) / self.n
        mult = np.ones_like(self.k2)
        mult[1:] = 2.0  # one-sided spectrum of a real signal
        if self.n % 2 == 0:
            mult[-1] = 1.0
        return float(np.sum(mult * self.k2 * np.abs(spec) ** 2))

    def parts(self, u: np.ndarray):
        ekin = self.kinetic(u)
        if self.zero_inverse:
            s, inv = None, 0.0
        else:
            s = self._mean(u**-2.0)
            inv = self.fp.a ** 2 / s
        mp = self._mean(u**self.fp.p)
        m2 = self._mean(u * u)
        return ekin, s, inv, mp, m2

    def value(self, u: np.ndarray) -> float:
        ekin, _, inv, mp, m2 = self.parts(u)
        p = self.fp.p
        if self.fp.regime is Regime.SUBQUADRATIC:
            return (ekin + inv + self.param * mp ** (2.0 / p)) / m2
        return (ekin + inv + self.param * m2) / mp ** (2.0 / p)

    def value_and_grad(self, u: np.ndarray):
        p = self.fp.p
        ekin, s, inv, mp, m2 = self.parts(u)
        g_kin = -2.0 * self._d2(u)
        g_inv = 0.0 if self.zero_inverse else 2.0 * self.fp.a ** 2 * s**-2.0 * u**-3.0
        g_lp = 2.0 * mp ** (2.0 / p - 1.0) * u ** (p - 1.0)
        if self.fp.regime is Regime.SUBQUADRATIC:
            num = ekin + inv + self.param * mp ** (2.0 / p)
            den = m2
            g_num = g_kin + g_inv + self.param * g_lp
            g_den = 2.0 * u
        else:
            num = ekin + inv + self.param * m2
            den = mp ** (2.0 / p)
            g_num = g_kin + g_inv + self.param * 2.0 * u
            g_den = g_lp
        q = num / den
        grad = (g_num - q * g_den) / den
        return q, grad

    def normalize(self, u: np.ndarray) -> np.ndarray:
        if self.fp.regime is Regime.SUBQUADRATIC:
            return u / np.sqrt(self._mean(u * u))
        return u / self._mean(u**self.fp.p) ** (1.0 / self.fp.p)


def projected_descent(q, u0: np.ndarray, opts: SolverOptions):
    """Monotone normalized descent with Barzilai-Borwein trial steps.

    `q` provides value_and_grad and normalize; positivity is kept by clipping
    at the vanishing floor, and a floor hit is reported to the caller.
    """
    floor = EPS_VANISH_FACTOR
    u = q.normalize(np.maximum(u0, floor))
    f, g = q.value_and_grad(u)
    t = opts.step0
    clipped = False
    prev_u, prev_g = None, None
    it = 0
    for it in range(1, opts.max_iter + 1):
        gnorm2 = float(np.mean(g * g))
        gnorm = np.sqrt(gnorm2)
        if gnorm <= opts.grad_tol * max(abs(f), 1e-2):
            break
        if prev_u is not None:
            du = u - prev_u
            dg = g - prev_g
            denom = float(np.mean(du * dg))
            if denom > 0:
                t = min(max(float(np.mean(du * du)) / denom, 1e-7), 50.0)
            else:
                t = opts.step0
        accepted = False
        for _ in range(60):
            trial = u - t * g
            lo = floor * float(np.mean(np.abs(trial)))
            hit = bool(np.any(trial < lo))
            trial = q.normalize(np.maximum(trial, lo))
            f_trial, g_trial = q.value_and_grad(trial)
            if f_trial <= f - 1e-4 * t * gnorm2 or f_trial < f - 1e-16 * abs(f):
                prev_u, prev_g = u, g
                u, f, g = trial, f_trial, g_trial
                clipped = clipped or hit
                accepted = True
                break
            t *= 0.5
            if t < 1e-16:
                break
        if not accepted:
            break  # stalled: f is at a numerical minimum along -g
    return u, f, float(np.sqrt(np.mean(g * g))), it, clipped


def optimal_constant_ring(rp: RingProblem) -> OptimizationResult:
    """Minimize the ring quotient over positive profiles, multi-started from
    the constant and from 1 + 0.3 cos(theta); classify the minimizer."""
    opts = rp.opts
    q = RingQuotient(rp.fp, rp.param, opts.n)
    theta = q.theta
    starts = [np.ones(opts.n), 1.0 + 0.3 * np.cos(theta)]
    rng = np.random.default_rng(opts.seed)
    for _ in range(opts.restarts):
        coef = rng.normal(size=4) * (0.3 / np.arange(1, 5))
        bump = sum(c * np.cos((j + 1) * theta + rng.uniform(0, 2 * np.pi)) for j, c in enumerate(coef))
        starts.append(1.0 + 0.5 * bump / max(1.0, np.max(np.abs(bump))))

    best = None
    total_iters = 0
    for u0 in starts:
        u, f, gnorm, iters, clipped = projected_descent(q, u0, opts)
        total_iters += iters
        if clipped:
            # profile touched the positivity floor: vanishing-limit regime,
            # re-run with the inverse-norm term dropped
            qz = RingQuotient(rp.fp, rp.param, opts.n, zero_inverse=True)
            u, f, gnorm, it2, _ = projected_descent(qz, u, opts)
            total_iters += it2
            cand = (f, u, gnorm, True)
        else:
            cand = (f, u, gnorm, False)
        if best is None or cand[0] < best[0]:
            best = cand
    if best is None:
        raise SolverError("all ring optimizer starts failed")
    f, u, gnorm, zeroed = best
    mean_u = float(np.mean(u))
    deviation = float(np.max(np.abs(u - mean_u))) / abs(mean_u)
    const_val = rp.fp.a ** 2 + rp.param
    return OptimizationResult(
        value=f,
        profile=u,
        symmetric=deviation < SYMMETRY_DEVIATION_TOL,
        gap_to_constant=const_val - f,
        iterations=total_iters,
        grad_norm=gnorm,
        restarts=len(starts) - 2,
        inverse_term_zeroed=zeroed,
    )


def second_variation_coefficient(a: float, p: float, mu: float, n: int = 1024) -> float:
    """Quadratic coefficient of Q[1 + eps cos] - Q[1] by Richardson over eps.

    The expansion is even in eps, so two evaluations eliminate the eps^2
    correction of the difference quotient; the result matches
    (1 - 4 a^2 - mu (2-p)) / 2 and changes sign exactly at the rigidity
    threshold.
    """
    fp = FluxParams.make(a, p)
    if fp.regime is not Regime.SUBQUADRATIC:
        raise ValueError("subquadratic exponent p < 2 required")
    q = RingQuotient(fp, mu, n)
    base = fp.a ** 2 + mu

    def coeff(eps: float) -> float:
        return (q.value(1.0 + eps * np.cos(q.theta)) - base) / eps**2

    c1, c2 = coeff(1e-3), coeff(5e-4)
    return (4.0 * c2 - c1) / 3.0


@dataclass
class BifurcationEstimate:
    threshold: float
    bracket: tuple[float, float]
    closed_form: float
    evaluations: int


def locate_bifurcation(a: float, p: float, regime: Regime | str, rel_width: float = 1e-3,
                       opts: SolverOptions | None = None) -> BifurcationEstimate:
    """Bisect on the spectral parameter between symmetric and symmetry-broken
    minimizers of the ring quotient; cross-checks the closed-form threshold.

    The initial bracket is [0.5x, 2x] the closed-form threshold, taken in the
    shifted variable lambda + a^2 for the superquadratic regime so that it is
    positive and stays inside the admissible half-line.
    """
    if isinstance(regime, str):
        regime = Regime(regime)
    p_eff = p if (p < 2) == (regime is Regime.SUBQUADRATIC) else None
    if p_eff is None:
        raise ValueError(f"exponent p={p} inconsistent with regime {regime}")
    fp = FluxParams.make(a, p)
    closed = ring_rigidity_threshold(fp)
    opts = opts or SolverOptions(n=128)
    shift = 0.0 if regime is Regime.SUBQUADRATIC else fp.a ** 2
    pivot = closed + shift  # positive unless a = 1/2 exactly
    if pivot <= 0:
        raise SolverError(f"degenerate threshold {closed}: no bisection bracket exists")
    lo, hi = 0.5 * pivot - shift, 2.0 * pivot - shift

    def is_symmetric(param: float) -> bool:
        res = optimal_constant_ring(RingProblem(fp, param, opts))
        return res.symmetric

    evals = 2
    if not is_symmetric(lo) or is_symmetric(hi):
        raise SolverError(
            f"bisection bracket not established in [{lo}, {hi}] for a={a}, p={p}"
        )
    while (hi - lo) > rel_width * (0.5 * (hi + lo) + shift):
        mid = 0.5 * (lo + hi)
        evals += 1
        if is_symmetric(mid):
            lo = mid
        else:
            hi = mid
    return BifurcationEstimate(0.5 * (lo + hi), (lo, hi), closed, evals)
