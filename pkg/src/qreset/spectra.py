"""Decoherence-rate spectra and the control window they are scanned over.

Four built-in spectral models cover the common superconducting-qubit
environments (a resonator-induced Lorentzian peak, a filtered
"protected" line with a pole inside the tuning window, a mixed
flux/dielectric/Purcell background, and a giant-atom filter dip), plus
a tabulated variant for measured data.

Rates are returned in 1/us.  Frequency arguments are cyclic GHz; the
dimensional formulas (Lorentzian, protected, filter dip) are evaluated
with angular quantities internally, while the mixed model uses its
published raw-number convention directly.
"""

from __future__ import annotations

import io
import math
from dataclasses import dataclass
from typing import Callable, NamedTuple, TextIO, Union

from .thermo import RAD_PER_US_PER_GHZ

__all__ = [
    "DEFAULT_RATE_CAP",
    "DEFAULT_GRID_POINTS",
    "Lorentzian",
    "Protected",
    "Mixed",
    "JQF",
    "Tabulated",
    "SpectrumModel",
    "ControlBounds",
    "SpectrumError",
    "SpectrumRangeError",
    "SpectrumParseError",
    "ArgmaxResult",
    "CoherenceTime",
    "GuidelineReport",
    "eval_rate",
    "argmax_rate",
    "coherence_time",
    "guideline_report",
    "load_tabulated",
    "dump_tabulated",
]

# Rates above this value (1/us) are clipped; keeps scans over poles finite
# and deterministic.  Configurable per call.
DEFAULT_RATE_CAP = 1.0e6

DEFAULT_GRID_POINTS = 4001

# Bracket width at which golden-section refinement stops, in GHz.
REFINE_TOL_GHZ = 1.0e-6

_INV_PHI = (math.sqrt(5.0) - 1.0) / 2.0


class SpectrumError(ValueError):
    """Invalid spectrum parameters."""


class SpectrumRangeError(SpectrumError):
    """Evaluation outside a tabulated spectrum's domain."""


class SpectrumParseError(SpectrumError):
    """Malformed tabulated-spectrum input."""

    def __init__(self, line_no: int, message: str) -> None:
        super().__init__(f"line {line_no}: {message}")
        self.line_no = line_no


def _require_positive(**fields: float) -> None:
    for name, value in fields.items():
        if not (value > 0.0 and math.isfinite(value)):
            raise SpectrumError(f"{name} must be finite and > 0, got {value!r}")


@dataclass(frozen=True)
class Lorentzian:
    """Resonator-induced Lorentzian peak: coupling g, linewidth kappa, center f_r."""

    g_ghz: float = 0.107
    kappa_ghz: float = 0.044
    f_r_ghz: float = 5.4

    def __post_init__(self) -> None:
        _require_positive(g=self.g_ghz, kappa=self.kappa_ghz, f_r=self.f_r_ghz)


@dataclass(frozen=True)
class Protected:
    """Filtered line with a zero at f_f and a pole at f_r (both in the GHz window)."""

    kappa_ghz: float = 0.005
    g_ghz: float = 0.150
    f_f_ghz: float = 5.0
    f_r_ghz: float = 6.5

    def __post_init__(self) -> None:
        _require_positive(
            kappa=self.kappa_ghz, g=self.g_ghz, f_f=self.f_f_ghz, f_r=self.f_r_ghz
        )


@dataclass(frozen=True)
class Mixed:
    """Flux + dielectric + Purcell + residual background of a tunable flux qubit.

    Coefficients follow the published raw-number convention: frequencies
    enter as plain 2pi-GHz numerics and the sum is already a rate in 1/us.
    """

    c_phi: float = 0.5
    c_q: float = 0.001
    c_purcell: float = 0.08
    f_r_ghz: float = 8.27
    kappa_ghz: float = 0.0015
    c_other: float = 0.02

    def __post_init__(self) -> None:
        _require_positive(
            c_phi=self.c_phi,
            c_q=self.c_q,
            c_purcell=self.c_purcell,
            f_r=self.f_r_ghz,
            kappa=self.kappa_ghz,
            c_other=self.c_other,
        )


@dataclass(frozen=True)
class JQF:
    """Giant-atom filter: bare decay time tau0, filtered decay time tau, dip at f_0."""

    tau0_us: float = 9.1
    tau_us: float = 98.0
    four_kappa_j_ghz: float = 0.0508
    f_0_ghz: float = 5.011

    def __post_init__(self) -> None:
        _require_positive(
            tau0=self.tau0_us,
            tau=self.tau_us,
            four_kappa_j=self.four_kappa_j_ghz,
            f_0=self.f_0_ghz,
        )


@dataclass(frozen=True)
class Tabulated:
    """Piecewise-linear spectrum through strictly increasing (f_GHz, rate_1/us) points."""

    points: tuple[tuple[float, float], ...]

    def __post_init__(self) -> None:
        if len(self.points) < 2:
            raise SpectrumError("tabulated spectrum needs at least 2 points")
        prev_f = -math.inf
        for f, rate in self.points:
            if not math.isfinite(f) or not math.isfinite(rate):
                raise SpectrumError(f"non-finite table entry ({f!r}, {rate!r})")
            if f <= prev_f:
                raise SpectrumError("tabulated frequencies must be strictly increasing")
            if rate < 0.0:
                raise SpectrumError(f"negative rate {rate!r} at f={f!r}")
            prev_f = f

    @property
    def f_min_ghz(self) -> float:
        return self.points[0][0]

    @property
    def f_max_ghz(self) -> float:
        return self.points[-1][0]


SpectrumModel = Union[Lorentzian, Protected, Mixed, JQF, Tabulated]


@dataclass(frozen=True)
class ControlBounds:
    """Tuning window around the computation frequency, plus protocol constants.

    ``f_cp`` is the computation frequency, the window is
    ``[f_cp - delta_f, f_cp + delta_f]``, ``tau_sw`` the fixed duration of
    each frequency switch and ``epsilon`` the target terminal excited
    population.
    """

    f_cp_ghz: float = 5.0
    delta_f_ghz: float = 3.0
    tau_sw_us: float = 0.010
    epsilon: float = 1.0e-5

    def __post_init__(self) -> None:
        _require_positive(
            f_cp=self.f_cp_ghz, delta_f=self.delta_f_ghz, tau_sw=self.tau_sw_us
        )
        if not (0.0 < self.epsilon < 0.5):
            raise SpectrumError(f"epsilon must lie in (0, 0.5), got {self.epsilon!r}")
        if self.f_min_ghz <= 0.0:
            raise SpectrumError(
                f"lower frequency bound must be > 0, got {self.f_min_ghz!r}"
            )

    @property
    def f_min_ghz(self) -> float:
        return self.f_cp_ghz - self.delta_f_ghz

    @property
    def f_max_ghz(self) -> float:
        return self.f_cp_ghz + self.delta_f_ghz


def _lorentzian_rate(model: Lorentzian, f: float) -> float:
    half = 0.5 * model.kappa_ghz
    shape = half * half / ((f - model.f_r_ghz) ** 2 + half * half)
    peak = RAD_PER_US_PER_GHZ * model.g_ghz * model.g_ghz / model.kappa_ghz
    return peak * shape


def _protected_rate(model: Protected, f: float) -> float:
    ff2 = model.f_f_ghz * model.f_f_ghz
    fr2 = model.f_r_ghz * model.f_r_ghz
    f2 = f * f
    num = 4.0 * model.kappa_ghz * model.g_ghz**2 * model.f_r_ghz**3 * (ff2 - f2) ** 2
    den = f * (fr2 - ff2) ** 2 * (fr2 - f2) ** 2
    if den == 0.0:
        return math.inf
    return RAD_PER_US_PER_GHZ * num / den


def _mixed_rate(model: Mixed, f: float) -> float:
    purcell = (
        model.c_purcell
        * model.kappa_ghz**2
        / ((f - model.f_r_ghz) ** 2 + model.kappa_ghz**2)
    )
    return model.c_phi / f**0.9 + model.c_q * f + purcell + model.c_other


def _jqf_rate(model: JQF, f: float) -> float:
    w2 = model.four_kappa_j_ghz * model.four_kappa_j_ghz
    shape = w2 / ((f - model.f_0_ghz) ** 2 + w2)
    return 1.0 / (model.tau0_us + model.tau_us * shape)


def _tabulated_rate(model: Tabulated, f: float) -> float:
    pts = model.points
    if f < pts[0][0] or f > pts[-1][0]:
        raise SpectrumRangeError(
            f"f={f!r} outside tabulated domain [{pts[0][0]!r}, {pts[-1][0]!r}]"
        )
    lo, hi = 0, len(pts) - 1
    while hi - lo > 1:
        mid = (lo + hi) // 2
        if pts[mid][0] <= f:
            lo = mid
        else:
            hi = mid
    f0, r0 = pts[lo]
    f1, r1 = pts[hi]
    if f == f0:
        return r0
    if f == f1:
        return r1
    return r0 + (r1 - r0) * (f - f0) / (f1 - f0)


_RATE_DISPATCH = {
    Lorentzian: _lorentzian_rate,
    Protected: _protected_rate,
    Mixed: _mixed_rate,
    JQF: _jqf_rate,
    Tabulated: _tabulated_rate,
}


def eval_rate(
    model: SpectrumModel, f_ghz: float, rate_cap: float | None = DEFAULT_RATE_CAP
) -> float:
    """Evaluate the decoherence rate at a cyclic frequency, in 1/us.

    ``rate_cap`` clips singular spectra (the protected model has a pole
    inside the default window); pass ``None`` for the raw value.
    """
    if not f_ghz > 0.0:
        raise SpectrumError(f"frequency must be > 0, got {f_ghz!r}")
    try:
        rate = _RATE_DISPATCH[type(model)](model, f_ghz)
    except KeyError:
        raise TypeError(f"unknown spectrum model {model!r}") from None
    if rate_cap is not None and rate > rate_cap:
        return rate_cap
    return rate


def rate_fn(
    model: SpectrumModel, rate_cap: float | None = DEFAULT_RATE_CAP
) -> Callable[[float], float]:
    """Capped rate evaluator specialized to one model (hot-loop form).

    Skips per-call dispatch and domain checks; callers must stay at
    f > 0 and inside any tabulated domain.
    """
    raw = _RATE_DISPATCH[type(model)]
    if rate_cap is None:
        return lambda f: raw(model, f)
    cap = rate_cap

    def capped(f: float) -> float:
        r = raw(model, f)
        return cap if r > cap else r

    return capped


class ArgmaxResult(NamedTuple):
    f_ghz: float
    rate_per_us: float
    cap_hit: bool


class CoherenceTime(NamedTuple):
    t1_us: float
    infinite: bool


def _golden_max(
    fn: Callable[[float], float], a: float, b: float, tol: float
) -> tuple[float, float]:
    """Golden-section maximization on [a, b]; deterministic, leftward-biased ties."""
    c = b - _INV_PHI * (b - a)
    d = a + _INV_PHI * (b - a)
    fc = fn(c)
    fd = fn(d)
    while (b - a) > tol:
        if fc >= fd:
            b, d, fd = d, c, fc
            c = b - _INV_PHI * (b - a)
            fc = fn(c)
        else:
            a, c, fc = c, d, fd
            d = a + _INV_PHI * (b - a)
            fd = fn(d)
    mid = 0.5 * (a + b)
    return mid, fn(mid)


def _leftmost_cap_edge(
    fn: Callable[[float], float], a: float, b: float, cap: float, tol: float
) -> float:
    """Leftmost f in (a, b] with fn(f) >= cap, located by bisection.

    Assumes fn(a) < cap <= fn(b).
    """
    lo, hi = a, b
    while hi - lo > tol:
        mid = 0.5 * (lo + hi)
        if fn(mid) >= cap:
            hi = mid
        else:
            lo = mid
    return hi


def _scan_max(
    fn: Callable[[float], float],
    f_lo: float,
    f_hi: float,
    grid_points: int,
    cap: float | None,
    tol: float,
) -> tuple[float, float, bool]:
    """Grid scan + golden refinement, ties broken toward smaller f.

    Returns (f*, value*, cap_hit).  When the maximum sits on a capped
    plateau with exact value ties, the plateau's left edge is returned.
    """
    if grid_points < 3:
        raise SpectrumError(f"grid needs >= 3 points, got {grid_points}")
    step = (f_hi - f_lo) / (grid_points - 1)
    fs = [f_lo + i * step for i in range(grid_points - 1)] + [f_hi]
    vals = [fn(f) for f in fs]
    best = 0
    for i in range(1, len(vals)):
        if vals[i] > vals[best]:
            best = i
    f_best, v_best = fs[best], vals[best]
    cap_hit = cap is not None and v_best >= cap

    if cap_hit:
        # Exact ties across the capped plateau: honor the smaller-f tie-break
        # by bisecting for the plateau's left edge.
        left = best
        while left > 0 and vals[left - 1] >= cap:
            left -= 1
        if left == best and best > 0:
            edge = _leftmost_cap_edge(fn, fs[best - 1], f_best, cap, tol)
        elif left > 0:
            edge = _leftmost_cap_edge(fn, fs[left - 1], fs[left], cap, tol)
        else:
            edge = fs[0]
        return edge, v_best, True

    a = fs[best - 1] if best > 0 else fs[0]
    b = fs[best + 1] if best < len(fs) - 1 else fs[-1]
    if fn(a) == v_best and fn(b) == v_best:
        # Flat neighborhood (constant spectrum): keep the leftmost grid argmax.
        return f_best, v_best, False
    f_ref, v_ref = _golden_max(fn, a, b, tol)
    if cap is not None and v_ref >= cap:
        # Refinement climbed onto a capped plateau narrower than the grid
        # spacing; every grid value was below the cap, so fn(a) < cap.
        edge = _leftmost_cap_edge(fn, a, f_ref, cap, tol)
        return edge, v_ref, True
    if v_ref > v_best or (v_ref == v_best and f_ref < f_best):
        f_best, v_best = f_ref, v_ref
    return f_best, v_best, False


def argmax_rate(
    model: SpectrumModel,
    bounds: ControlBounds,
    *,
    grid_points: int = DEFAULT_GRID_POINTS,
    rate_cap: float | None = DEFAULT_RATE_CAP,
) -> ArgmaxResult:
    """Maximize the (capped) rate over the control window.

    Dense grid scan followed by golden-section refinement in the best
    bracket; deterministic for a fixed grid, ties toward smaller f.
    """
    f, rate, cap_hit = _scan_max(
        lambda x: eval_rate(model, x, rate_cap),
        bounds.f_min_ghz,
        bounds.f_max_ghz,
        grid_points,
        rate_cap,
        REFINE_TOL_GHZ,
    )
    return ArgmaxResult(f, rate, cap_hit)


def coherence_time(
    model: SpectrumModel,
    bounds: ControlBounds,
    *,
    rate_cap: float | None = DEFAULT_RATE_CAP,
) -> CoherenceTime:
    """T1 at the computation frequency; flagged infinite when the rate is zero."""
    rate = eval_rate(model, bounds.f_cp_ghz, rate_cap)
    if rate == 0.0:
        return CoherenceTime(math.inf, True)
    return CoherenceTime(1.0 / rate, False)


@dataclass(frozen=True)
class GuidelineReport:
    """Spectral-design indicators over a control window.

    ``contrast`` is the rate at the computation frequency over the rate at
    the restoring frequency (small is good); ``trend_slope`` the
    least-squares linear trend of the rate across the window (an
    increasing trend avoids the speed-versus-target trade-off).
    """

    contrast: float
    rate_at_f_cp: float
    restoring_f_ghz: float
    rate_at_restoring: float
    trend_slope: float
    trend_sign: int
    cap_hit: bool
    notes: tuple[str, ...]


def guideline_report(
    model: SpectrumModel,
    bounds: ControlBounds,
    *,
    grid_points: int = DEFAULT_GRID_POINTS,
    rate_cap: float | None = DEFAULT_RATE_CAP,
) -> GuidelineReport:
    best = argmax_rate(model, bounds, grid_points=grid_points, rate_cap=rate_cap)
    rate_cp = eval_rate(model, bounds.f_cp_ghz, rate_cap)
    contrast = rate_cp / best.rate_per_us if best.rate_per_us > 0.0 else math.inf

    step = (bounds.f_max_ghz - bounds.f_min_ghz) / (grid_points - 1)
    n = grid_points
    mean_f = bounds.f_min_ghz + 0.5 * (bounds.f_max_ghz - bounds.f_min_ghz)
    num = 0.0
    den = 0.0
    for i in range(n):
        f = bounds.f_min_ghz + i * step
        df = f - mean_f
        num += df * eval_rate(model, f, rate_cap)
        den += df * df
    slope = num / den
    sign = 0 if slope == 0.0 else (1 if slope > 0.0 else -1)

    notes: list[str] = []
    if isinstance(model, Mixed):
        notes.append(
            "mixed model evaluated with raw 2pi-GHz numerics per its published"
            " unit convention"
        )
    if rate_cp == 0.0:
        notes.append("zero rate at the computation frequency: coherence time infinite")
    if best.cap_hit:
        notes.append(f"scan hit the rate cap ({rate_cap!r}/us); peak value is capped")
    return GuidelineReport(
        contrast=contrast,
        rate_at_f_cp=rate_cp,
        restoring_f_ghz=best.f_ghz,
        rate_at_restoring=best.rate_per_us,
        trend_slope=slope,
        trend_sign=sign,
        cap_hit=best.cap_hit,
        notes=tuple(notes),
    )


def load_tabulated(source: str | TextIO) -> Tabulated:
    """Parse a tabulated spectrum from CSV rows ``f_GHz,rate_per_us``.

    A single header row is allowed.  Parsing is locale-independent (dot
    decimal separator); errors name the offending line.
    """
    stream = io.StringIO(source) if isinstance(source, str) else source
    points: list[tuple[float, float]] = []
    for line_no, raw in enumerate(stream, start=1):
        line = raw.strip()
        if not line:
            continue
        if line_no == 1 and line.lower().replace(" ", "") == "f_ghz,rate_per_us":
            continue
        parts = line.split(",")
        if len(parts) != 2:
            raise SpectrumParseError(line_no, f"expected 2 comma-separated fields, got {len(parts)}")
        try:
            f = float(parts[0])
            rate = float(parts[1])
        except ValueError:
            raise SpectrumParseError(line_no, f"not numeric: {line!r}") from None
        if not math.isfinite(f) or not math.isfinite(rate):
            raise SpectrumParseError(line_no, f"non-finite value: {line!r}")
        if rate < 0.0:
            raise SpectrumParseError(line_no, f"negative rate {rate!r}")
        if points and f <= points[-1][0]:
            raise SpectrumParseError(line_no, f"frequency {f!r} not strictly increasing")
        points.append((f, rate))
    if len(points) < 2:
        raise SpectrumParseError(0, "need at least 2 data rows")
    return Tabulated(tuple(points))


def dump_tabulated(model: Tabulated) -> str:
    """Serialize a tabulated spectrum; round-trips exactly through load_tabulated."""
    lines = ["f_GHz,rate_per_us"]
    for f, rate in model.points:
        lines.append(f"{f!r},{rate!r}")
    return "\n".join(lines) + "\n"
