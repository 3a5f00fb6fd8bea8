"""Closed-form large-radius tail constants with exact parity branching.

For each operator family the generic constant vanishes on a lattice of
integer orders (even orders for the laplacian family, odd orders for the
gradient family); there the decay steepens by alpha and a degenerate
branch supplies the leading constant.  Branch selection happens on exact
rationals only: a kappa merely close to an integer stays on the generic
branch (its constant is then small and the asymptotic regime sets in
only at very large radius).

The degenerate-branch prefactors deserve a note.  Two candidate forms
differ in the literature-style sources this module was written against;
the ones implemented here, with prefactors (alpha + kappa) for the
laplacian branch and (d + alpha + kappa - 1)(alpha + kappa - 1) for the
gradient branch, are the ones confirmed by the closed-form Cauchy
oracles and the derivative-of-tail identity (see the reconciliation
tests); they also follow from applying integer powers of the (negative)
Laplacian to the base-order tail.

All Gamma/cosine products are computed in log space with separate sign
tracking so large d + kappa cannot overflow.
"""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass

from .errors import DomainError, ParityError
from .params import KappaOrder

__all__ = [
    "Branch",
    "AsymptoticConstant",
    "hankel_limit",
    "k_bessel_moment",
    "laplacian_tail_constant",
    "laplacian_tail_constant_even",
    "gradient_tail_constant",
    "gradient_tail_constant_odd",
    "laplacian_constant",
    "gradient_constant",
    "laplacian_tail",
    "gradient_tail",
]


class Branch(enum.Enum):
    LAPLACIAN_GENERIC = "laplacian_generic"
    LAPLACIAN_EVEN = "laplacian_even_degenerate"
    GRADIENT_GENERIC = "gradient_generic"
    GRADIENT_ODD = "gradient_odd_degenerate"
    HANKEL_LIMIT = "hankel_limit"


@dataclass(frozen=True)
class AsymptoticConstant:
    """A tail constant, its branch, and the power of radius it multiplies.

    For the gradient branches ``value`` stores the notation-level
    constant; the directional tail coefficient is its negative (see
    ``gradient_tail``).
    """

    value: float
    branch: Branch
    decay_exponent: float


def _signed_exp(log_mag: float, sign: float) -> float:
    if sign == 0.0:
        return 0.0
    return sign * math.exp(log_mag)


def _cos_factor(x: float) -> tuple[float, float]:
    """(log |cos(pi x / 2)|, sign), exact on integer x."""
    if x == round(x):
        m = int(round(x)) % 4
        if m in (1, 3):
            return (-math.inf, 0.0)
        return (0.0, 1.0 if m == 0 else -1.0)
    c = math.cos(0.5 * math.pi * x)
    if c == 0.0:
        return (-math.inf, 0.0)
    return (math.log(abs(c)), math.copysign(1.0, c))


def hankel_limit(nu: float, mu: float) -> float:
    """r -> infinity limit of int_0^inf t^nu e^{-(t/r)^a} J_mu(t) dt:

        (2^nu / pi) Gamma((nu-mu+1)/2) Gamma((nu+mu+1)/2) cos(pi (nu-mu)/2)

    valid for nu > |mu| - 1 (independent of the envelope exponent), and
    exactly zero when nu - mu is an odd integer.
    """
    if not nu > abs(mu) - 1.0:
        raise DomainError(f"hankel_limit requires nu > |mu| - 1, got nu={nu}, mu={mu}")
    log_cos, sign = _cos_factor(nu - mu)
    if sign == 0.0:
        return 0.0
    log_mag = (
        nu * math.log(2.0)
        - math.log(math.pi)
        + math.lgamma(0.5 * (nu - mu + 1.0))
        + math.lgamma(0.5 * (nu + mu + 1.0))
        + log_cos
    )
    return _signed_exp(log_mag, sign)


def k_bessel_moment(nu: float, mu: float) -> float:
    """int_0^inf t^nu K_mu(t) dt = 2^{nu-1} Gamma((nu-mu+1)/2) Gamma((nu+mu+1)/2)
    for nu > |mu| - 1.

    The 2^{nu-1} prefactor is the one consistent with ``hankel_limit``
    through its (2/pi) cosine factor and is confirmed by direct
    quadrature (int_0^inf t K_0 dt = 1); see the oracle test.
    """
    if not nu > abs(mu) - 1.0:
        raise DomainError(
            f"k_bessel_moment requires nu > |mu| - 1, got nu={nu}, mu={mu}"
        )
    log_mag = (
        (nu - 1.0) * math.log(2.0)
        + math.lgamma(0.5 * (nu - mu + 1.0))
        + math.lgamma(0.5 * (nu + mu + 1.0))
    )
    return math.exp(log_mag)


def _min_d2(d: int) -> float:
    return float(min(d, 2))


def laplacian_tail_constant(d: int, alpha: float, kappa) -> AsymptoticConstant:
    """Generic-branch constant of radius^{d+kappa} times the laplacian
    profile:  2^k pi^{-d/2-1} Gamma((d+k)/2) Gamma(k/2+1) cos((k+1) pi/2).

    Defined for kappa > -(d ^ 2) excluding even integers >= 0, where the
    cosine vanishes and the degenerate branch takes over.
    """
    k = KappaOrder.coerce(kappa)
    kv = k.value
    if not kv > -_min_d2(d):
        raise DomainError(
            f"generic laplacian branch needs kappa > -min(d,2), got {kv}"
        )
    if k.is_even_integer and k.num >= 0:
        raise ParityError(
            f"kappa = {k} is an even integer: the generic constant vanishes; "
            f"use laplacian_tail_constant_even"
        )
    log_cos, sign = _cos_factor(kv + 1.0)
    log_mag = (
        kv * math.log(2.0)
        - (0.5 * d + 1.0) * math.log(math.pi)
        + math.lgamma(0.5 * (d + kv))
        + math.lgamma(0.5 * kv + 1.0)
        + log_cos
    )
    return AsymptoticConstant(_signed_exp(log_mag, sign),
                              Branch.LAPLACIAN_GENERIC, d + kv)


def laplacian_tail_constant_even(d: int, alpha: float, kappa) -> AsymptoticConstant:
    """Degenerate-branch constant of radius^{d+alpha+kappa} times the
    laplacian profile, for even integer kappa >= 0:

        (alpha+k) 2^{k+alpha-1} pi^{-d/2-1}
            Gamma((alpha+k)/2) Gamma((d+alpha+k)/2) cos((alpha+k-1) pi/2).
    """
    k = KappaOrder.coerce(kappa)
    if not (k.is_even_integer and k.num >= 0):
        raise ParityError(
            f"degenerate laplacian branch needs an even integer kappa >= 0, "
            f"got {k}"
        )
    if not (0.0 < alpha < 2.0):
        raise DomainError(f"alpha must lie in (0, 2), got {alpha}")
    kv = k.value
    log_cos, sign = _cos_factor(alpha + kv - 1.0)
    log_mag = (
        math.log(alpha + kv)
        + (kv + alpha - 1.0) * math.log(2.0)
        - (0.5 * d + 1.0) * math.log(math.pi)
        + math.lgamma(0.5 * (alpha + kv))
        + math.lgamma(0.5 * (d + alpha + kv))
        + log_cos
    )
    return AsymptoticConstant(_signed_exp(log_mag, sign),
                              Branch.LAPLACIAN_EVEN, d + alpha + kv)


def gradient_tail_constant(d: int, alpha: float, kappa) -> AsymptoticConstant:
    """Generic-branch gradient constant (the notation-level value)

        N = - 2^k pi^{-d/2-1} Gamma((k+1)/2) Gamma((d+k+1)/2) cos(k pi/2)

    for kappa > 1 - (d ^ 2) excluding odd integers; the directional tail
    coefficient is -N with denominator power d + kappa + 1.
    """
    k = KappaOrder.coerce(kappa)
    kv = k.value
    if not kv > 1.0 - _min_d2(d):
        raise DomainError(
            f"generic gradient branch needs kappa > 1 - min(d,2), got {kv}"
        )
    if k.is_odd_integer:
        raise ParityError(
            f"kappa = {k} is an odd integer: the generic constant vanishes; "
            f"use gradient_tail_constant_odd"
        )
    log_cos, sign = _cos_factor(kv)
    log_mag = (
        kv * math.log(2.0)
        - (0.5 * d + 1.0) * math.log(math.pi)
        + math.lgamma(0.5 * (kv + 1.0))
        + math.lgamma(0.5 * (d + kv + 1.0))
        + log_cos
    )
    return AsymptoticConstant(_signed_exp(log_mag, -sign),
                              Branch.GRADIENT_GENERIC, d + kv + 1.0)


def gradient_tail_constant_odd(d: int, alpha: float, kappa) -> AsymptoticConstant:
    """Degenerate-branch gradient constant for odd integer kappa >= 1:

        N = (d+alpha+k-1)(alpha+k-1) 2^{k+alpha-2} pi^{-d/2-1}
                Gamma((alpha+k-1)/2) Gamma((d+alpha+k-1)/2) cos((alpha+k) pi/2)

    with directional coefficient -N and denominator power d+alpha+kappa+1.
    """
    k = KappaOrder.coerce(kappa)
    if not (k.is_odd_integer and k.num >= 1):
        raise ParityError(
            f"degenerate gradient branch needs an odd integer kappa >= 1, got {k}"
        )
    if not (0.0 < alpha < 2.0):
        raise DomainError(f"alpha must lie in (0, 2), got {alpha}")
    kv = k.value
    log_cos, sign = _cos_factor(alpha + kv)
    log_mag = (
        math.log(d + alpha + kv - 1.0)
        + math.log(alpha + kv - 1.0)
        + (kv + alpha - 2.0) * math.log(2.0)
        - (0.5 * d + 1.0) * math.log(math.pi)
        + math.lgamma(0.5 * (alpha + kv - 1.0))
        + math.lgamma(0.5 * (d + alpha + kv - 1.0))
        + log_cos
    )
    return AsymptoticConstant(_signed_exp(log_mag, sign),
                              Branch.GRADIENT_ODD, d + alpha + kv + 1.0)


def laplacian_constant(d: int, alpha: float, kappa) -> AsymptoticConstant:
    """Parity dispatch between the generic and even-degenerate branches."""
    k = KappaOrder.coerce(kappa)
    if k.is_even_integer and k.num >= 0:
        return laplacian_tail_constant_even(d, alpha, k)
    return laplacian_tail_constant(d, alpha, k)


def gradient_constant(d: int, alpha: float, kappa) -> AsymptoticConstant:
    """Parity dispatch between the generic and odd-degenerate branches."""
    k = KappaOrder.coerce(kappa)
    if k.is_odd_integer and k.num >= 1:
        return gradient_tail_constant_odd(d, alpha, k)
    return gradient_tail_constant(d, alpha, k)


def laplacian_tail(d: int, alpha: float, kappa, radius: float) -> float:
    """Leading tail approximation constant * radius^{-decay} of the
    laplacian profile, on the parity-correct branch."""
    if not radius > 0.0:
        raise DomainError("tail approximation needs radius > 0")
    const = laplacian_constant(d, alpha, kappa)
    return const.value * radius ** (-const.decay_exponent)


def gradient_tail(d: int, alpha: float, kappa, radius: float) -> float:
    """Leading tail of Im(gradient kernel . x/|x|): the directional
    coefficient -N times radius^{1-decay} (the numerator (x, e) equals
    radius along the radial direction)."""
    if not radius > 0.0:
        raise DomainError("tail approximation needs radius > 0")
    const = gradient_constant(d, alpha, kappa)
    return -const.value * radius ** (1.0 - const.decay_exponent)
