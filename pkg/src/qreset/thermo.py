"""Unit conventions and thermal-environment functions.

Conventions used throughout the package:

* frequencies are cyclic and measured in GHz (``f = omega / 2 pi``),
* times in microseconds, rates in inverse microseconds,
* energies are dimensionless multiples of ``k_B T`` (obtained by weighting
  populations with the thermal ratio ``hbar omega / k_B T``).
"""

from __future__ import annotations

import math
from dataclasses import dataclass

__all__ = [
    "H_OVER_KB_K_PER_GHZ",
    "RAD_PER_US_PER_GHZ",
    "LN2",
    "Environment",
    "ThermoDomainError",
    "thermal_ratio",
    "occupation",
    "equilibrium_population",
    "entropy",
]

# h/k_B expressed in kelvin per GHz of cyclic frequency, so that
# hbar*omega/(k_B*T) = H_OVER_KB_K_PER_GHZ * f[GHz] / T[K].
H_OVER_KB_K_PER_GHZ = 0.04799243

# 1 GHz of cyclic frequency in angular units of 1/us.
RAD_PER_US_PER_GHZ = 2.0e3 * math.pi

LN2 = math.log(2.0)


class ThermoDomainError(ValueError):
    """Raised when a thermal function is evaluated outside its domain."""


@dataclass(frozen=True)
class Environment:
    """Thermal environment at a fixed temperature.

    Parameters
    ----------
    temperature_K:
        Environment temperature in kelvin, strictly positive.  Zero is
        rejected so that occupation numbers and equilibrium populations
        stay finite-valued; use a microkelvin-scale proxy for the
        zero-temperature limit.
    """

    temperature_K: float

    def __post_init__(self) -> None:
        if not (self.temperature_K > 0.0 and math.isfinite(self.temperature_K)):
            raise ThermoDomainError(
                f"temperature must be finite and > 0, got {self.temperature_K!r}"
            )

    @property
    def ratio_per_ghz(self) -> float:
        """Thermal ratio accumulated per GHz of cyclic frequency."""
        return H_OVER_KB_K_PER_GHZ / self.temperature_K


def thermal_ratio(f_ghz: float, env: Environment) -> float:
    """Return ``x = hbar*omega/(k_B*T)`` for a cyclic frequency in GHz."""
    if f_ghz < 0.0:
        raise ThermoDomainError(f"frequency must be >= 0, got {f_ghz!r}")
    return env.ratio_per_ghz * f_ghz


def occupation(x: float) -> float:
    """Bose occupation ``n = 1/(e^x - 1)`` for ``x > 0``.

    Evaluated through ``expm1`` (or the ``e^-x`` expansion for large
    arguments) so that both the small-``x`` divergence and the deep
    quantum regime keep full relative accuracy.
    """
    if not x > 0.0:
        raise ThermoDomainError(f"occupation requires x > 0, got {x!r}")
    if x > 350.0:
        # 1/(e^x-1) = e^-x * (1 + e^-x + ...); the correction is below 1e-150.
        return math.exp(-x)
    return 1.0 / math.expm1(x)


def equilibrium_population(x: float) -> float:
    """Thermal excited-state population ``p_eq = 1/(e^x + 1)`` for ``x >= 0``.

    Uses the overflow-safe form ``e^-x / (1 + e^-x)``, valid for any
    non-negative argument; underflows cleanly to 0 in the deep quantum
    regime instead of overflowing.
    """
    if x < 0.0:
        raise ThermoDomainError(f"equilibrium population requires x >= 0, got {x!r}")
    e = math.exp(-x)
    return e / (1.0 + e)


def entropy(p_e: float) -> float:
    """Binary entropy ``S/k_B = p ln p + (1-p) ln(1-p)`` (non-positive).

    The endpoint values ``p in {0, 1}`` return exactly 0 by the usual
    limit convention.
    """
    if not 0.0 <= p_e <= 1.0:
        raise ThermoDomainError(f"population must lie in [0, 1], got {p_e!r}")
    if p_e == 0.0 or p_e == 1.0:
        return 0.0
    return p_e * math.log(p_e) + (1.0 - p_e) * math.log1p(-p_e)
