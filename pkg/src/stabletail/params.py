"""Parameter records: process parameters and exact rational orders.

Operator orders arrive as exact rationals so that the parity decisions
taken by the asymptotic branches (even/odd integer order) are exact,
never epsilon-based.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction

import numpy as np

from .errors import DomainError

__all__ = ["StableParams", "KappaOrder", "as_point"]


@dataclass(frozen=True)
class StableParams:
    """Dimension, stability index and diffusivity of the process.

    alpha = 2 (the Gaussian case) is excluded: every evaluation here
    targets the strictly stable range 0 < alpha < 2.
    """

    d: int
    alpha: float
    c: float = 1.0

    def __post_init__(self):
        if int(self.d) != self.d or self.d < 1:
            raise DomainError(f"dimension must be a positive integer, got {self.d}")
        object.__setattr__(self, "d", int(self.d))
        if not (0.0 < self.alpha < 2.0):
            raise DomainError(f"alpha must lie strictly in (0, 2), got {self.alpha}")
        if not self.c > 0.0:
            raise DomainError(f"c must be positive, got {self.c}")


@dataclass(frozen=True)
class KappaOrder:
    """Exact rational operator order kappa = num/den in lowest terms."""

    num: int
    den: int = 1

    def __post_init__(self):
        if self.den == 0:
            raise DomainError("kappa denominator must be nonzero")
        num, den = int(self.num), int(self.den)
        if den < 0:
            num, den = -num, -den
        g = math.gcd(abs(num), den)
        if g > 1:
            num //= g
            den //= g
        object.__setattr__(self, "num", num)
        object.__setattr__(self, "den", den)

    @classmethod
    def coerce(cls, kappa) -> "KappaOrder":
        if isinstance(kappa, cls):
            return kappa
        if isinstance(kappa, (int, np.integer)):
            return cls(int(kappa))
        if isinstance(kappa, Fraction):
            return cls(kappa.numerator, kappa.denominator)
        if isinstance(kappa, str):
            return cls.parse(kappa)
        raise DomainError(
            f"kappa must be an exact rational (int, Fraction, KappaOrder or "
            f"'num/den' string), got {kappa!r}; floats are rejected because "
            f"parity branching must be exact"
        )

    @classmethod
    def parse(cls, text: str) -> "KappaOrder":
        parts = text.strip().split("/")
        try:
            if len(parts) == 1:
                return cls(int(parts[0]))
            if len(parts) == 2:
                return cls(int(parts[0]), int(parts[1]))
        except ValueError:
            pass
        raise DomainError(
            f"cannot parse kappa {text!r}: use an exact rational like '1/2' "
            f"or '-3/1' (decimals are not accepted)"
        )

    @property
    def value(self) -> float:
        return self.num / self.den

    @property
    def fraction(self) -> Fraction:
        return Fraction(self.num, self.den)

    @property
    def is_integer(self) -> bool:
        return self.den == 1

    @property
    def is_even_integer(self) -> bool:
        return self.den == 1 and self.num % 2 == 0

    @property
    def is_odd_integer(self) -> bool:
        return self.den == 1 and self.num % 2 != 0

    def __float__(self) -> float:
        return self.value

    def __str__(self) -> str:
        return f"{self.num}/{self.den}"


def as_point(x, d: int) -> np.ndarray:
    """Coerce x (scalar for d=1, or length-d sequence) to a float vector."""
    arr = np.atleast_1d(np.asarray(x, dtype=float))
    if arr.ndim != 1 or arr.size != d:
        raise DomainError(f"point must have {d} coordinates, got shape {arr.shape}")
    return arr
