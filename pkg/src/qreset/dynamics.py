"""Qubit state evolution under piecewise-constant frequency control.

The population obeys ``dp_e/dt = -rate(f) * (p_e - p_eq(f))`` and the
coherence decays at half the rate while rotating at the (angular) qubit
frequency.  For a frequency held constant over a step the solution is
exact, so the integrator is an exponential stepper: accuracy is limited
only by how often the control is refreshed, never by the stiffness of
the rate (which spans many orders of magnitude across spectra).
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Iterable, Protocol, TextIO

import numpy as np

from .spectra import ControlBounds, SpectrumModel, coherence_time, eval_rate, rate_fn
from .thermo import Environment, RAD_PER_US_PER_GHZ, equilibrium_population, thermal_ratio

__all__ = [
    "QubitState",
    "Numerics",
    "Trajectory",
    "DecoherenceFactor",
    "IntegrationError",
    "NoDescentError",
    "step_constant",
    "integrate_restore",
    "decoherence_factor",
]

_POSITIVITY_TOL = 1.0e-12


class IntegrationError(RuntimeError):
    """Integration failed (limits exceeded or state invariants violated)."""


class NoDescentError(IntegrationError):
    """The control law cannot decrease the population toward the target."""


@dataclass(frozen=True)
class QubitState:
    """Excited population and the real/imaginary coherence of a 2x2 density matrix."""

    p_e: float
    p_r: float = 0.0
    p_i: float = 0.0

    def __post_init__(self) -> None:
        if not -_POSITIVITY_TOL <= self.p_e <= 1.0 + _POSITIVITY_TOL:
            raise ValueError(f"p_e must lie in [0, 1], got {self.p_e!r}")
        radius = self.p_r * self.p_r + self.p_i * self.p_i
        if radius > self.p_e * (1.0 - self.p_e) + _POSITIVITY_TOL:
            raise ValueError(
                "coherence violates density-matrix positivity: "
                f"|c|^2={radius!r} > p_e(1-p_e)={self.p_e * (1.0 - self.p_e)!r}"
            )

    @property
    def coherence_abs(self) -> float:
        return math.hypot(self.p_r, self.p_i)


@dataclass(frozen=True)
class Numerics:
    """Integrator and scan settings.

    ``step_log_bound`` caps the per-step decay of ``ln(p_e - p_eq)``;
    ``control_drift_ghz`` caps how far the control may move per step
    (default: 1/16 of the scan-grid resolution, tight enough that the
    trapezoidal rate integrals agree with the exact staircase to ~1e-5).
    """

    step_log_bound: float = 0.05
    grid_points: int = 4001
    rate_cap: float | None = 1.0e6
    control_drift_ghz: float | None = None
    step_limit: int = 10_000_000
    time_limit_t1: float = 1.0e4

    def drift_cap(self, bounds: ControlBounds) -> float:
        if self.control_drift_ghz is not None:
            return self.control_drift_ghz
        span = bounds.f_max_ghz - bounds.f_min_ghz
        return span / (self.grid_points - 1) / 16.0


class ControlRuntime(Protocol):
    """Per-trajectory control state produced by a law's ``bind``."""

    def frequency(self, p_e: float, t_us: float, f_anchor: float | None) -> float: ...

    def next_transition_after(self, t_us: float) -> float | None: ...


class ControlLawProtocol(Protocol):
    def bind(
        self,
        model: SpectrumModel,
        env: Environment,
        bounds: ControlBounds,
        numerics: Numerics,
    ) -> ControlRuntime: ...


@dataclass
class Trajectory:
    """Sampled restoring trajectory.

    Samples are taken at the start of every constant-control segment plus
    one terminal row; the frequency in row k is held on
    ``[t[k], t[k+1])``, and the terminal row repeats the frequency that
    was held into the final time.
    """

    t_us: np.ndarray
    f_ghz: np.ndarray
    p_e: np.ndarray
    p_r: np.ndarray
    p_i: np.ndarray
    rate_per_us: np.ndarray
    p_eq: np.ndarray
    tau_st_us: float
    termination: str
    epsilon: float
    _cum_rate: np.ndarray = field(default=None, repr=False)  # type: ignore[assignment]

    @property
    def terminal_state(self) -> QubitState:
        return QubitState(float(self.p_e[-1]), float(self.p_r[-1]), float(self.p_i[-1]))

    @property
    def n_samples(self) -> int:
        return int(self.t_us.size)

    def schedule(self) -> tuple[tuple[float, float], ...]:
        """Control breakpoints (t, f) reproducing this trajectory's segments."""
        n = self.n_samples
        return tuple(
            (float(self.t_us[k]), float(self.f_ghz[k])) for k in range(max(n - 1, 1))
        )

    def cumulative_rate_integral(self) -> np.ndarray:
        """Trapezoidal cumulative integral of the recorded rates."""
        if self._cum_rate is None:
            dt = np.diff(self.t_us)
            mids = 0.5 * (self.rate_per_us[1:] + self.rate_per_us[:-1])
            self._cum_rate = np.concatenate([[0.0], np.cumsum(mids * dt)])
        return self._cum_rate

    def to_csv(self, stream: TextIO) -> None:
        stream.write("t_us,f_GHz,p_e,p_r,p_i,rate_per_us,p_eq\n")
        cols = (self.t_us, self.f_ghz, self.p_e, self.p_r, self.p_i, self.rate_per_us, self.p_eq)
        for k in range(self.n_samples):
            stream.write(",".join(repr(float(col[k])) for col in cols) + "\n")


def _advance(
    p_e: float,
    p_r: float,
    p_i: float,
    rate: float,
    p_eq: float,
    f_ghz: float,
    dt_us: float,
) -> tuple[float, float, float]:
    """Exact solution of the constant-control equations over one step."""
    decay = math.exp(-rate * dt_us)
    p_e2 = p_eq + (p_e - p_eq) * decay
    amp = math.exp(-0.5 * rate * dt_us)
    theta = RAD_PER_US_PER_GHZ * f_ghz * dt_us
    c, s = math.cos(theta), math.sin(theta)
    p_r2 = amp * (p_r * c + p_i * s)
    p_i2 = amp * (p_i * c - p_r * s)
    return p_e2, p_r2, p_i2


def step_constant(
    state: QubitState,
    f_ghz: float,
    dt_us: float,
    model: SpectrumModel,
    env: Environment,
    *,
    rate_cap: float | None = None,
) -> QubitState:
    """Advance the state by ``dt_us`` at a fixed control frequency."""
    if not dt_us > 0.0:
        raise ValueError(f"dt must be > 0, got {dt_us!r}")
    rate = eval_rate(model, f_ghz, rate_cap)
    p_eq = equilibrium_population(thermal_ratio(f_ghz, env))
    p_e, p_r, p_i = _advance(state.p_e, state.p_r, state.p_i, rate, p_eq, f_ghz, dt_us)
    return QubitState(p_e, p_r, p_i)


def integrate_restore(
    initial: QubitState,
    law: ControlLawProtocol,
    model: SpectrumModel,
    env: Environment,
    bounds: ControlBounds,
    numerics: Numerics = Numerics(),
    *,
    t_final: float | None = None,
) -> Trajectory:
    """Integrate the restoring dynamics under a control law.

    With ``t_final=None`` the run terminates when the population crosses
    the reset precision ``bounds.epsilon`` (located in closed form within
    the final segment); otherwise it runs open loop up to ``t_final``
    exactly, which is how deviation studies replay recorded schedules.

    The step size is adapted so that ``ln(p_e - p_eq)`` changes by at
    most ``numerics.step_log_bound`` per step and the control frequency
    moves by at most the drift cap per step.
    """
    eps = bounds.epsilon
    precision_mode = t_final is None
    if precision_mode and initial.p_e <= eps:
        raise ValueError(f"initial p_e={initial.p_e!r} must exceed epsilon={eps!r}")

    runtime = law.bind(model, env, bounds, numerics)
    drift_cap = numerics.drift_cap(bounds)
    rate_at = rate_fn(model, numerics.rate_cap)
    ratio_c = env.ratio_per_ghz
    t1 = coherence_time(model, bounds, rate_cap=numerics.rate_cap).t1_us
    t_limit = numerics.time_limit_t1 * t1 if math.isfinite(t1) else math.inf
    if t_final is not None:
        t_limit = math.inf

    ts: list[float] = []
    fs: list[float] = []
    pes: list[float] = []
    prs: list[float] = []
    pis: list[float] = []
    rates: list[float] = []
    peqs: list[float] = []

    def record(t: float, f: float, pe: float, pr: float, pi: float, rate: float, peq: float) -> None:
        ts.append(t)
        fs.append(f)
        pes.append(pe)
        prs.append(pr)
        pis.append(pi)
        rates.append(rate)
        peqs.append(peq)

    pe, pr, pi = initial.p_e, initial.p_r, initial.p_i
    t = 0.0
    steps = 0
    f_next: float | None = None
    f_anchor: float | None = None
    dt_drift_hint = math.inf
    termination = "precision"
    tau = 0.0

    while True:
        f = f_next if f_next is not None else runtime.frequency(pe, t, f_anchor)
        f_next = None
        f_anchor = f
        rate = rate_at(f)
        e = math.exp(-ratio_c * f)
        peq = e / (1.0 + e)
        gap = pe - peq

        if t_final is not None and t >= t_final:
            record(t, f, pe, pr, pi, rate, peq)
            termination, tau = "horizon", t
            break
        if steps >= numerics.step_limit:
            record(t, f, pe, pr, pi, rate, peq)
            termination, tau = "step_limit", t
            break
        if t >= t_limit:
            record(t, f, pe, pr, pi, rate, peq)
            termination, tau = "time_limit", t
            break
        if precision_mode and gap <= 0.0:
            record(t, f, pe, pr, pi, rate, peq)
            raise NoDescentError(
                f"control law chose f={f!r} GHz with p_eq={peq!r} >= p_e={pe!r};"
                " the precision target is unreachable from here"
            )

        record(t, f, pe, pr, pi, rate, peq)

        t_bp = runtime.next_transition_after(t)
        dt_free = numerics.step_log_bound / rate if rate > 0.0 else math.inf
        dt_free = min(dt_free, dt_drift_hint)

        # Terminal crossing within the upcoming segment, in closed form.
        if precision_mode and rate > 0.0 and peq < eps:
            dt_cross = math.log(gap / (eps - peq)) / rate
            if (
                dt_cross <= dt_free
                and (t_bp is None or t + dt_cross <= t_bp)
                and t + dt_cross <= t_limit
            ):
                _, pr, pi = _advance(pe, pr, pi, rate, peq, f, dt_cross)
                pe = eps
                tau = t + dt_cross
                record(tau, f, pe, pr, pi, rate, peq)
                termination = "precision"
                break

        # Pick the step; scheduled transitions, the horizon and the time
        # limit are landed on exactly and are exempt from drift control.
        dt, snap_to = dt_free, None
        if t_bp is not None and t_bp > t and t_bp - t <= dt:
            dt, snap_to = t_bp - t, t_bp
        if t_final is not None and t_final - t <= dt:
            dt, snap_to = t_final - t, t_final
        if t_limit < math.inf and t_limit - t <= dt:
            dt, snap_to = t_limit - t, t_limit
        if not math.isfinite(dt):
            # Zero rate and nothing to wait for: the state can never move.
            termination, tau = "time_limit", t
            break
        dt = max(dt, 1.0e-18)

        if snap_to is not None:
            pe, pr, pi = _advance(pe, pr, pi, rate, peq, f, dt)
            t = snap_to
            steps += 1
            continue

        # Free step: shrink it if the control would move too fast.  A move
        # that does not shrink with dt is not step-driven (e.g. a hop
        # across a capped plateau) and is accepted as-is.
        retries = 0
        df_prev = math.inf
        while True:
            pe2, pr2, pi2 = _advance(pe, pr, pi, rate, peq, f, dt)
            f_probe = runtime.frequency(pe2, t + dt, f)
            df = abs(f_probe - f)
            if df <= 2.0 * drift_cap or retries >= 60 or df >= 0.9 * df_prev:
                break
            df_prev = df
            dt *= max(0.25, 0.8 * drift_cap / df)
            retries += 1

        pe, pr, pi, t = pe2, pr2, pi2, t + dt
        f_next = f_probe
        steps += 1
        dt_floor = 1.0e-3 * (numerics.step_log_bound / rate) if rate > 0.0 else dt
        if df > 0.0:
            dt_drift_hint = max(min(dt * drift_cap / df, dt * 2.0), dt_floor)
        else:
            dt_drift_hint = dt_drift_hint * 2.0

    return Trajectory(
        t_us=np.asarray(ts),
        f_ghz=np.asarray(fs),
        p_e=np.asarray(pes),
        p_r=np.asarray(prs),
        p_i=np.asarray(pis),
        rate_per_us=np.asarray(rates),
        p_eq=np.asarray(peqs),
        tau_st_us=tau,
        termination=termination,
        epsilon=eps,
    )


class DecoherenceFactor:
    """Accumulated decoherence suppression ``eta(t) = exp(-int_0^t rate ds)``."""

    def __init__(self, t_us: np.ndarray, cum_rate: np.ndarray) -> None:
        self._t = t_us
        self._cum = cum_rate

    def __call__(self, t_us: float) -> float:
        if t_us <= self._t[0]:
            return 1.0
        if t_us >= self._t[-1]:
            return math.exp(-float(self._cum[-1]))
        return math.exp(-float(np.interp(t_us, self._t, self._cum)))

    @property
    def at_terminal(self) -> float:
        return math.exp(-float(self._cum[-1]))

    def exponent(self, t_us: float) -> float:
        return float(np.interp(t_us, self._t, self._cum))


def decoherence_factor(trajectory: Trajectory) -> DecoherenceFactor:
    """Build ``eta(t)`` from a trajectory's recorded rates (trapezoidal)."""
    if trajectory.n_samples == 0:
        raise ValueError("trajectory has no samples")
    return DecoherenceFactor(trajectory.t_us, trajectory.cumulative_rate_integral())
