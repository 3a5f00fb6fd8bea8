"""Weighted Hankel-type integrals  I = int_0^inf t^nu e^{-(t/r)^alpha} J_mu(t) dt.

Three strategies:

* ``small_r_direct`` (r <= r_small): the envelope kills the integrand
  before oscillation matters; sum Gauss-Legendre panels up to an
  envelope cutoff.
* ``direct_accelerated``: integrate between consecutive zeros of J_mu,
  sum the envelope-dominated head directly, and feed the alternating
  tail of partial sums to the Wynn epsilon transform.
* ``contour`` (half-integer mu, i.e. odd dimension): rotate the path
  onto a ray in the lower half plane where J_mu trades for the
  exponentially decaying K_mu; non-oscillatory quadrature.

For large r and large nu the oscillatory representation suffers
catastrophic cancellation (panel magnitudes grow like r^{nu+1/2} while
the integral stays O(1) or smaller).  When the predicted float64 floor
endangers the requested tolerance, the engine first lowers nu through
the exact integration-by-parts identity

    I[nu, mu] = (alpha/r^alpha) I[nu+alpha-1, mu+1] - (nu-mu-1) I[nu-1, mu+1]

and recurses; the identity holds whenever nu+mu > -1.
"""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass

import numpy as np
from scipy import special as _sp
from scipy.integrate import quad

from .errors import (
    DomainError,
    NoConvergenceError,
    UnsupportedDimensionError,
)
from .special import BesselOrder, bessel_j_zeros, bessel_k_ray

__all__ = [
    "HankelIntegrand",
    "QuadResult",
    "Strategy",
    "hankel_integral",
    "hankel_integral_direct",
    "hankel_integral_contour",
    "recursion_residual",
    "admissible_beta_interval",
    "default_beta",
]

_EPS = np.finfo(float).eps
_MIN_TOL = 1e-12


class Strategy(enum.Enum):
    DIRECT_ACCELERATED = "direct_accelerated"
    CONTOUR = "contour"
    SMALL_R_DIRECT = "small_r_direct"


@dataclass(frozen=True)
class HankelIntegrand:
    """Parameters of the integrand t^nu e^{-(t/r)^alpha} J_mu(t).

    Convergence at the origin needs nu + mu > -1 (the integrand behaves
    like t^{nu+mu} there); the envelope guarantees convergence at
    infinity for every r > 0.
    """

    nu: float
    mu: float
    alpha: float
    r: float

    def __post_init__(self):
        BesselOrder(self.mu)  # validates mu >= -1/2
        if not (0.0 < self.alpha < 2.0):
            raise DomainError(f"alpha must lie in (0, 2), got {self.alpha}")
        if not self.r > 0.0:
            raise DomainError(f"r must be positive, got {self.r}")
        if not self.nu + self.mu > -1.0:
            raise DomainError(
                f"nu + mu must exceed -1 for integrability, got "
                f"nu={self.nu}, mu={self.mu}"
            )

    @property
    def mu_is_half_integer(self) -> bool:
        return BesselOrder(self.mu).is_half_integer


@dataclass(frozen=True)
class QuadResult:
    """Quadrature outcome: value, internal-consistency error bound,
    strategy tag and evaluation count."""

    value: float
    err_estimate: float
    strategy: Strategy
    evals: int

    def __post_init__(self):
        if self.evals <= 0:
            raise DomainError("evals must be positive")


# ---------------------------------------------------------------------------
# shared machinery

_GL_NODES, _GL_WEIGHTS = _sp.roots_legendre(16)

_zero_cache: dict[float, np.ndarray] = {}


def _zeros(mu: float, count: int) -> np.ndarray:
    cached = _zero_cache.get(mu)
    if cached is None or len(cached) < count:
        grown = max(count, 64, 0 if cached is None else int(1.5 * len(cached)))
        _zero_cache[mu] = bessel_j_zeros(mu, grown)
    return _zero_cache[mu]


def _panel_integrals(nu, mu, alpha, r, edges):
    """Fixed 16-point Gauss-Legendre integral over each [edges_k, edges_{k+1}]."""
    a = edges[:-1]
    b = edges[1:]
    half = 0.5 * (b - a)
    mid = 0.5 * (a + b)
    t = mid[:, None] + half[:, None] * _GL_NODES[None, :]
    w = half[:, None] * _GL_WEIGHTS[None, :]
    vals = t**nu * np.exp(-((t / r) ** alpha)) * _sp.jv(mu, t)
    return np.sum(vals * w, axis=1)


def _first_panel(nu, mu, alpha, r, upper, tol):
    """Adaptive quadrature of the possibly-singular panel [0, upper]."""

    def f(t):
        return t**nu * math.exp(-((t / r) ** alpha)) * _sp.jv(mu, t)

    val, err, info = quad(
        f, 0.0, upper, epsabs=0.0, epsrel=max(0.1 * tol, 1e-13),
        limit=200, full_output=True,
    )[:3]
    return val, err, info["neval"]


def _wynn_epsilon(partial_sums: np.ndarray):
    """Safeguarded Wynn epsilon extrapolants of a partial-sum sequence.

    Entry k of the returned array walks the counter-diagonal reachable
    from S_0..S_k down the even columns and keeps the deepest entry that
    is still trustworthy: entries bred from vanishing differences are
    marked invalid (the table has converged there; anything deeper is
    noise), and the walk also stops once corrections start growing.
    """
    s = np.asarray(partial_sums, dtype=float)
    n = len(s)
    cols: dict[int, np.ndarray] = {0: s}
    valid: dict[int, np.ndarray] = {0: np.isfinite(s)}
    eps_minus_one = np.zeros(n + 1)
    valid_minus_one = np.ones(n + 1, dtype=bool)
    for j in range(1, n):
        prev = cols[j - 1]
        prev_prev = eps_minus_one if j == 1 else cols[j - 2]
        pv = valid[j - 1]
        ppv = valid_minus_one if j == 1 else valid[j - 2]
        diff = prev[1:] - prev[:-1]
        with np.errstate(divide="ignore", invalid="ignore", over="ignore"):
            nxt = prev_prev[1 : len(prev)] + 1.0 / diff
        ok = (
            np.isfinite(nxt)
            & (diff != 0.0)
            & pv[1:]
            & pv[:-1]
            & ppv[1 : len(prev)]
        )
        nxt = np.where(ok, nxt, prev[1:])
        cols[j] = nxt
        valid[j] = ok
    approx = np.empty(n)
    for k in range(n):
        best = s[k]
        prev_step = math.inf
        j = 2
        while j <= k:
            if not valid[j][k - j]:
                break
            v = cols[j][k - j]
            step = abs(v - best)
            if step > 4.0 * prev_step:
                break
            best = v
            prev_step = max(step, 1e-300)
            j += 2
        approx[k] = best
    return approx


def _limit_magnitude(nu: float, mu: float) -> float:
    """|2^nu Gamma((nu+mu+1)/2) / Gamma((mu-nu+1)/2)|, the large-r limit
    magnitude in reciprocal-Gamma form (finite on the whole domain)."""
    a = 0.5 * (nu + mu + 1.0)
    b = 0.5 * (mu - nu + 1.0)
    if a <= 0.0:
        return 0.0
    rg = float(_sp.rgamma(b))
    return float(2.0**nu * math.exp(math.lgamma(a)) * abs(rg))


def _abs_sum_scale(nu: float, alpha: float, r: float) -> float:
    """Estimate of sum_k |panel_k| ~ 0.51 int t^{nu-1/2} e^{-(t/r)^a} dt."""
    a = (nu + 0.5) / alpha
    if a <= 0.0:
        return 1.0
    ln = math.log(0.507) + (nu + 0.5) * math.log(r) + math.lgamma(a) - math.log(alpha)
    return math.exp(min(ln, 700.0))


def _value_scale(nu: float, mu: float, alpha: float, r: float) -> float:
    """Rough magnitude of the integral, for absolute-tolerance floors."""
    direct = _limit_magnitude(nu, mu)
    sub = (alpha / r**alpha) * _limit_magnitude(nu + alpha - 1.0, mu + 1.0)
    return max(direct, sub, 1e-300)


# ---------------------------------------------------------------------------
# direct strategies

_MAX_TAIL_PANELS = 30


def _envelope_cutoff(nu: float, alpha: float, r: float, tol: float) -> float:
    """T with the integrand tail beyond T below ~tol relative."""
    u = math.log(1.0 / tol) + 25.0
    for _ in range(4):
        t_val = r * u ** (1.0 / alpha)
        u = math.log(1.0 / tol) + 25.0 + max(nu - 0.5, 0.0) * math.log(max(t_val, 2.0))
    return r * u ** (1.0 / alpha)


def _direct_small_r(item: HankelIntegrand, tol: float) -> QuadResult:
    nu, mu, alpha, r = item.nu, item.mu, item.alpha, item.r
    t_cut = _envelope_cutoff(nu, alpha, r, tol)
    zeros = _zeros(mu, max(int(t_cut / 2.5) + 8, 8))
    if t_cut <= zeros[0]:
        val, err, n = _first_panel(nu, mu, alpha, r, t_cut, tol)
        return QuadResult(val, err + tol * abs(val), Strategy.SMALL_R_DIRECT, n)
    k_cut = int(np.searchsorted(zeros, t_cut))
    edges = zeros[: k_cut + 1]  # runs one zero past t_cut; envelope is dead there
    p0, p0_err, n0 = _first_panel(nu, mu, alpha, r, edges[0], tol)
    panels = _panel_integrals(nu, mu, alpha, r, edges)
    total = p0 + math.fsum(panels.tolist())
    tail = abs(panels[-1]) + tol * abs(total)
    err = p0_err + tail + _EPS * (abs(p0) + float(np.sum(np.abs(panels))))
    return QuadResult(total, err, Strategy.SMALL_R_DIRECT,
                      n0 + panels.size * _GL_NODES.size)


def _direct_accelerated(item: HankelIntegrand, tol: float, depth: int = 0,
                        budget_scale: float = 1.0) -> QuadResult:
    nu, mu, alpha, r = item.nu, item.mu, item.alpha, item.r

    # cancellation-floor guard: lower nu by parts when float64 cannot
    # deliver the requested tolerance at this (nu, r)
    scale = _value_scale(nu, mu, alpha, r)
    floor = 4.0 * _EPS * _abs_sum_scale(nu, alpha, r)
    if floor > 0.05 * tol * scale and depth < 8 and r > 1.0:
        coeff_b = alpha / r**alpha
        sub_tol = max(tol / 4.0, _MIN_TOL)
        res_b = _direct_accelerated(
            HankelIntegrand(nu + alpha - 1.0, mu + 1.0, alpha, r),
            sub_tol, depth + 1, budget_scale,
        )
        coeff_a = nu - mu - 1.0
        if coeff_a != 0.0:
            res_a = _direct_accelerated(
                HankelIntegrand(nu - 1.0, mu + 1.0, alpha, r),
                sub_tol, depth + 1, budget_scale,
            )
            value = coeff_b * res_b.value - coeff_a * res_a.value
            err = abs(coeff_b) * res_b.err_estimate + abs(coeff_a) * res_a.err_estimate
            evals = res_a.evals + res_b.evals
        else:
            value = coeff_b * res_b.value
            err = abs(coeff_b) * res_b.err_estimate
            evals = res_b.evals
        return QuadResult(value, err, Strategy.DIRECT_ACCELERATED, evals)

    t_peak = r * (nu / alpha) ** (1.0 / alpha) if nu > 0.0 else 0.0
    zeros = _zeros(mu, max(int(t_peak / 3.0) + 8, 16))
    k_peak = int(np.searchsorted(zeros, t_peak))
    max_tail = max(int(_MAX_TAIL_PANELS * budget_scale), 8)

    p0, p0_err, n0 = _first_panel(nu, mu, alpha, r, _zeros(mu, 1)[0], tol)
    evals = n0

    n_panels = k_peak + max_tail + 2
    zeros = _zeros(mu, n_panels + 1)
    panels = _panel_integrals(nu, mu, alpha, r, zeros[: n_panels + 1])
    evals += panels.size * _GL_NODES.size

    head = p0 + math.fsum(panels[:k_peak].tolist())
    abs_floor = _EPS * (abs(p0) + float(np.sum(np.abs(panels))))

    tail_panels = panels[k_peak:]
    hit = _accelerate(head, tail_panels, tol, abs_floor)
    if hit is None:
        # one budget extension before giving up
        extra = max_tail
        zeros = _zeros(mu, n_panels + extra + 1)
        more = _panel_integrals(nu, mu, alpha, r, zeros[n_panels : n_panels + extra + 1])
        evals += more.size * _GL_NODES.size
        abs_floor += _EPS * float(np.sum(np.abs(more)))
        tail_panels = np.concatenate([tail_panels, more])
        hit = _accelerate(head, tail_panels, tol, abs_floor)
    if hit is None:
        raise NoConvergenceError(
            f"series acceleration stalled for nu={nu}, mu={mu}, "
            f"alpha={alpha}, r={r} at tol={tol}"
        )
    best, best_err = hit
    err = best_err + abs_floor + p0_err
    return QuadResult(float(best), float(err), Strategy.DIRECT_ACCELERATED, evals)


def _accelerate(head: float, tail_panels: np.ndarray, tol: float,
                abs_floor: float):
    """Run the epsilon transform over tail partial sums; return
    (value, consistency error) once two consecutive extrapolants agree
    within tolerance, or None if the sequence never settles."""
    partial = head + np.cumsum(tail_panels)
    approx = _wynn_epsilon(partial)
    deltas = np.abs(np.diff(approx))
    for m in range(5, len(approx)):
        thr = max(tol * abs(approx[m]), 2.0 * abs_floor)
        if deltas[m - 1] <= thr and deltas[m - 2] <= 30.0 * thr:
            return float(approx[m]), float(deltas[m - 1])
    return None


def hankel_integral_direct(item: HankelIntegrand, tol: float = 1e-9,
                           budget_scale: float = 1.0) -> QuadResult:
    """Oscillatory-path evaluation; picks the small-r or accelerated form."""
    _check_tol(tol)
    if item.r <= 1.0:
        return _direct_small_r(item, tol)
    return _direct_accelerated(item, tol, budget_scale=budget_scale)


# ---------------------------------------------------------------------------
# contour strategy

def admissible_beta_interval(alpha: float) -> tuple[float, float]:
    """Open interval of ray angles with positive decay for both the
    K-Bessel factor and the rotated envelope."""
    upper = min(0.5 * math.pi * (1.0 / alpha - 1.0), 0.0)
    return (-0.5 * math.pi, upper)


def default_beta(alpha: float) -> float:
    lo, hi = admissible_beta_interval(alpha)
    return 0.5 * (lo + hi)


def hankel_integral_contour(item: HankelIntegrand, beta: float | None = None,
                            tol: float = 1e-9,
                            budget_scale: float = 1.0) -> QuadResult:
    """Ray-rotated evaluation
    I = (2/pi) Re( e^{i pi (nu-mu)/2} int_{ray} z^nu e^{-(z/r)^a e^{i a pi/2}} K_mu(z) dz ).

    Requires half-integer mu (odd dimension) and nu > |mu| - 1 so the
    ray integrand is integrable at the origin.
    """
    _check_tol(tol)
    nu, mu, alpha, r = item.nu, item.mu, item.alpha, item.r
    if not item.mu_is_half_integer:
        raise UnsupportedDimensionError(
            "contour strategy needs half-integer mu (odd dimension)"
        )
    if not nu > abs(mu) - 1.0:
        raise DomainError(
            f"contour representation requires nu > |mu| - 1, got "
            f"nu={nu}, mu={mu}"
        )
    if beta is None:
        beta = default_beta(alpha)
    lo, hi = admissible_beta_interval(alpha)
    if not (lo < beta < hi):
        raise DomainError(
            f"beta={beta} outside the admissible open interval ({lo}, {hi})"
        )

    cos_b = math.cos(beta)
    env_angle = alpha * (beta + 0.5 * math.pi)
    env_phase = complex(math.cos(env_angle), math.sin(env_angle))
    prefactor = (2.0 / math.pi) * np.exp(1j * (0.5 * math.pi * (nu - mu) + beta * (nu + 1.0)))

    def f(s):
        z_env = -((s / r) ** alpha) * env_phase
        kval = bessel_k_ray(mu, np.asarray(s), beta)
        return float(np.real(prefactor * s**nu * np.exp(z_env) * kval))

    s_max = (-math.log(tol) + 40.0) / cos_b * budget_scale
    pts = [p for p in (1.0, 5.0, 20.0) if p < s_max]
    val, abserr, info = quad(
        f, 0.0, s_max, points=pts or None,
        epsabs=0.0, epsrel=max(0.1 * tol, 1e-13),
        limit=int(200 * budget_scale), full_output=True,
    )[:3]
    trunc = (
        abs(prefactor)
        * math.sqrt(0.5 * math.pi)
        * 2.0
        * s_max ** (nu - 0.5)
        * math.exp(-cos_b * s_max)
        / cos_b
    )
    return QuadResult(float(val), float(abserr + trunc), Strategy.CONTOUR,
                      int(info["neval"]))


# ---------------------------------------------------------------------------
# dispatcher and identities

def _check_tol(tol: float):
    if tol < _MIN_TOL:
        raise DomainError(f"tol must be >= {_MIN_TOL}, got {tol}")


def hankel_integral(item: HankelIntegrand, tol: float = 1e-9,
                    r_small: float = 1.0, r_osc: float = 10.0,
                    budget_scale: float = 1.0) -> QuadResult:
    """Strategy dispatcher.

    r <= r_small -> small-r direct; half-integer mu with r > r_osc and an
    origin-integrable ray -> contour; everything else -> accelerated
    oscillatory path.
    """
    _check_tol(tol)
    if item.r <= r_small:
        return _direct_small_r(item, tol)
    if (
        item.r > r_osc
        and item.mu_is_half_integer
        and item.nu > abs(item.mu) - 1.0
    ):
        return hankel_integral_contour(item, None, tol, budget_scale)
    return _direct_accelerated(item, tol, budget_scale=budget_scale)


def recursion_residual(d: int, kappa: float, alpha: float, r: float,
                       tol: float = 1e-9) -> float:
    """Relative residual of the exact nu-lowering identity

        I(d, k, r) = (alpha/r^alpha) I(d+2, k+alpha-2, r) - k I(d+2, k-2, r)

    (in kernel-parameter form; all three integrals evaluated numerically).
    """
    if not kappa + d > 0.0:
        raise DomainError("identity requires kappa > -d")
    lhs_item = HankelIntegrand(0.5 * d + kappa, 0.5 * d - 1.0, alpha, r)
    b_item = HankelIntegrand(0.5 * d + kappa + alpha - 1.0, 0.5 * d, alpha, r)
    lhs = hankel_integral(lhs_item, tol).value
    rhs = (alpha / r**alpha) * hankel_integral(b_item, tol).value
    if kappa != 0.0:
        a_item = HankelIntegrand(0.5 * d + kappa - 1.0, 0.5 * d, alpha, r)
        rhs -= kappa * hankel_integral(a_item, tol).value
    return abs(lhs - rhs) / (abs(lhs) + abs(rhs) + 1e-300)
