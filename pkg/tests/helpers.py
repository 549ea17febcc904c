"""Independent oracles shared by the test modules.

These deliberately avoid the package's integration and scan machinery:
closed-form chained exponentials for piecewise-constant dynamics, and a
plain dense scan for maximization.
"""

from __future__ import annotations

import math

from qreset import Environment, SpectrumModel, equilibrium_population, eval_rate, thermal_ratio


def chained_exponential_population(
    p0: float,
    segments: list[tuple[float, float]],
    model: SpectrumModel,
    env: Environment,
    rate_cap: float | None = 1.0e6,
) -> float:
    """Exact population after a sequence of (f_GHz, dt_us) segments."""
    p = p0
    for f, dt in segments:
        rate = eval_rate(model, f, rate_cap)
        p_eq = equilibrium_population(thermal_ratio(f, env))
        p = p_eq + (p - p_eq) * math.exp(-rate * dt)
    return p


def brute_force_argmax(fn, lo: float, hi: float, n: int) -> tuple[float, float]:
    """Dense-grid argmax with leftward tie-breaking."""
    best_f, best_v = lo, fn(lo)
    for i in range(1, n):
        f = lo + (hi - lo) * i / (n - 1)
        v = fn(f)
        if v > best_v:
            best_f, best_v = f, v
    return best_f, best_v
