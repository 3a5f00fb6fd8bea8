"""Gamma and Bessel evaluations backing the quadrature engines.

Real-argument Gamma, J_mu and K_mu are delegated to scipy.special behind
the domain contracts enforced here.  Two pieces are implemented locally
because no library routine covers them for real order:

* positive zeros of J_mu for arbitrary real order mu >= -1/2
  (McMahon asymptotic guesses polished by Newton iteration), and
* K_mu on complex arguments for half-integer mu, where the function is a
  finite elementary sum -- the only complex case the contour quadrature
  ever needs.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np
from scipy import special as _sp

from .errors import DomainError, NoConvergenceError, UnsupportedOrderError

__all__ = [
    "BesselOrder",
    "gamma",
    "bessel_j",
    "bessel_j_zeros",
    "bessel_k",
]

_GAMMA_OVERFLOW = 171.62  # largest x with Gamma(x) finite in float64


@dataclass(frozen=True)
class BesselOrder:
    """Order mu of J_mu or K_mu.

    Only mu >= -1/2 ever arises here (mu = d/2 - 1 or d/2 for integer
    dimension d >= 1), so smaller orders are rejected outright.
    """

    mu: float

    def __post_init__(self):
        if not math.isfinite(self.mu):
            raise DomainError(f"Bessel order must be finite, got {self.mu}")
        if self.mu < -0.5:
            raise DomainError(f"Bessel order must be >= -1/2, got {self.mu}")

    @property
    def is_half_integer(self) -> bool:
        """True when 2*mu is an odd integer (exact float check)."""
        two_mu = 2.0 * self.mu
        return two_mu == round(two_mu) and int(round(two_mu)) % 2 != 0

    @classmethod
    def coerce(cls, order) -> "BesselOrder":
        if isinstance(order, cls):
            return order
        return cls(float(order))


def gamma(x: float) -> float:
    """Gamma(x) for x > 0; raises on nonpositive x and on overflow."""
    x = float(x)
    if not x > 0.0:
        raise DomainError(f"gamma requires x > 0, got {x}")
    if x > _GAMMA_OVERFLOW:
        raise OverflowError(f"gamma({x}) exceeds the double-precision range")
    return float(_sp.gamma(x))


def bessel_j(order, t):
    """Bessel function of the first kind J_mu(t) for t >= 0, mu >= -1/2.

    Accepts scalar or ndarray t; scalar input returns a float.
    """
    mu = BesselOrder.coerce(order).mu
    t_arr = np.asarray(t, dtype=float)
    if np.any(t_arr < 0.0):
        raise DomainError("bessel_j requires t >= 0")
    out = _sp.jv(mu, t_arr)
    # jv(mu, 0) for mu in (-1/2, 0) diverges; mu >= -1/2 keeps it finite,
    # with J_{-1/2} -> +inf handled by scipy as inf only at exactly t=0.
    if np.isscalar(t) or t_arr.ndim == 0:
        return float(out)
    return out


def _mcmahon_guess(mu: float, k: np.ndarray) -> np.ndarray:
    """McMahon's large-k expansion for the k-th positive zero of J_mu."""
    b = (k + 0.5 * mu - 0.25) * math.pi
    m = 4.0 * mu * mu
    return (
        b
        - (m - 1.0) / (8.0 * b)
        - 4.0 * (m - 1.0) * (7.0 * m - 31.0) / (3.0 * (8.0 * b) ** 3)
    )


def _jv_prime(mu: float, t: np.ndarray) -> np.ndarray:
    return _sp.jv(mu - 1.0, t) - (mu / t) * _sp.jv(mu, t)


def bessel_j_zeros(order, n: int) -> np.ndarray:
    """First n positive zeros of J_mu, strictly increasing.

    McMahon initial guesses refined by Newton iteration until the update
    drops below 1e-14 relative.  Half-integer +-1/2 orders use the exact
    trigonometric zeros.
    """
    mu = BesselOrder.coerce(order).mu
    n = int(n)
    if n < 1:
        raise DomainError("bessel_j_zeros requires n >= 1")
    k = np.arange(1, n + 1, dtype=float)
    if mu == 0.5:
        return k * math.pi
    if mu == -0.5:
        return (k - 0.5) * math.pi
    z = _mcmahon_guess(mu, k)
    # McMahon can be rough for the first zeros when mu > 1; nudge any
    # non-increasing guesses apart before polishing.
    z = np.maximum.accumulate(z)
    for _ in range(60):
        f = _sp.jv(mu, z)
        df = _jv_prime(mu, z)
        step = f / df
        # guard Newton from jumping across a neighbouring zero
        step = np.clip(step, -1.2, 1.2)
        z = z - step
        if np.max(np.abs(step) / z) < 1e-14:
            break
    if np.any(np.diff(z) <= 0.0) or z[0] <= 0.0:
        raise NoConvergenceError(f"zero refinement failed for mu={mu}")
    return z


def _k_half_integer(mu: float, z: complex) -> complex:
    """K_{n+1/2}(z) as the finite elementary sum; exact for half-integer mu."""
    n = int(round(abs(mu) - 0.5))
    zc = complex(z)
    pref = np.sqrt(math.pi / (2.0 * zc)) * np.exp(-zc)
    acc = 0.0j
    term = 1.0 + 0.0j
    for k in range(0, n + 1):
        if k > 0:
            # (n+k)! / (k! (n-k)!) / 2^k built up incrementally
            term = term * (n + k) * (n - k + 1) / (2.0 * k)
        acc += term / zc**k
    return complex(pref * acc)


def bessel_k(order, z):
    """Modified Bessel function of the second kind K_mu(z), Re z > 0.

    Real z: any mu >= -1/2 (scipy).  Complex z: half-integer mu only,
    where the elementary closed form is exact; other orders raise
    UnsupportedOrderError.
    """
    ord_ = BesselOrder.coerce(order)
    mu = ord_.mu
    if isinstance(z, complex) and z.imag != 0.0:
        if not z.real > 0.0:
            raise DomainError(f"bessel_k requires Re z > 0, got {z}")
        if not ord_.is_half_integer:
            raise UnsupportedOrderError(
                "complex-argument K_mu is provided only for half-integer mu"
            )
        return _k_half_integer(mu, z)
    x = float(np.real(z))
    if not x > 0.0:
        raise DomainError(f"bessel_k requires Re z > 0, got {z}")
    return float(_sp.kv(mu, x))


def bessel_k_ray(order, s: np.ndarray, beta: float) -> np.ndarray:
    """Vectorised K_mu(s * e^{i beta}) for half-integer mu and s > 0.

    Used by the contour quadrature; separate from bessel_k so the array
    path stays allocation-light.
    """
    ord_ = BesselOrder.coerce(order)
    if not ord_.is_half_integer:
        raise UnsupportedOrderError(
            "ray evaluation of K_mu requires half-integer mu"
        )
    n = int(round(abs(ord_.mu) - 0.5))
    z = s * np.exp(1j * beta)
    pref = np.sqrt(math.pi / (2.0 * z)) * np.exp(-z)
    acc = np.ones_like(z)
    if n > 0:
        term = np.ones_like(z)
        inv = 1.0 / z
        coeff = 1.0
        for k in range(1, n + 1):
            coeff = coeff * (n + k) * (n - k + 1) / (2.0 * k)
            term = term * inv
            acc = acc + coeff * term
    return pref * acc
