"""Open-loop robustness of a recorded reset protocol.

A baseline optimal run is recorded once; deviated initial states or
control times are then propagated under the *unmodified* schedule, as an
experiment without feedback would.  Initial-state errors are suppressed
by the accumulated decoherence factor (populations by eta, coherences by
sqrt(eta), since coherences decay at half the population rate), and the
final state is scored with the two-level Uhlmann fidelity against the
reset target diag(1-eps, eps).
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import TextIO

import numpy as np

from .control import FixedSchedule
from .dynamics import (
    DecoherenceFactor,
    Numerics,
    QubitState,
    Trajectory,
    decoherence_factor,
    integrate_restore,
)
from .spectra import ControlBounds, SpectrumModel
from .thermo import Environment

__all__ = [
    "PopulationDeviation",
    "CoherenceDeviation",
    "ControlTimeDeviation",
    "DeviationSpec",
    "DeviationResult",
    "Baseline",
    "make_baseline",
    "run_deviation",
    "fidelity",
    "SensitivityReport",
    "sensitivity_report",
    "SweepCurve",
    "fidelity_sweep",
]


@dataclass(frozen=True)
class PopulationDeviation:
    """Initial state diag(p, 1-p) instead of the maximum-entropy p=1/2."""

    p: float

    def __post_init__(self) -> None:
        if not 0.0 <= self.p <= 1.0:
            raise ValueError(f"population must lie in [0, 1], got {self.p!r}")


@dataclass(frozen=True)
class CoherenceDeviation:
    """Initial coherence of magnitude |c| <= 1/2 on top of the p=1/2 state."""

    c_abs: float
    c_phase: float = 0.0

    def __post_init__(self) -> None:
        if not 0.0 <= self.c_abs <= 0.5:
            raise ValueError(
                f"|c| must lie in [0, 0.5] for a positive state, got {self.c_abs!r}"
            )


@dataclass(frozen=True)
class ControlTimeDeviation:
    """Run the recorded schedule for tau + delta_tau instead of tau."""

    delta_tau_us: float


DeviationSpec = PopulationDeviation | CoherenceDeviation | ControlTimeDeviation


@dataclass(frozen=True)
class DeviationResult:
    final_state: QubitState
    fidelity: float
    trajectory: Trajectory


@dataclass(frozen=True)
class Baseline:
    """A recorded optimal run and everything needed to replay it open loop."""

    model: SpectrumModel
    env: Environment
    bounds: ControlBounds
    numerics: Numerics
    trajectory: Trajectory
    schedule: FixedSchedule

    @property
    def tau_st_us(self) -> float:
        return self.trajectory.tau_st_us

    def eta(self) -> DecoherenceFactor:
        return decoherence_factor(self.trajectory)

    def replay(self, initial: QubitState, t_final_us: float) -> Trajectory:
        return integrate_restore(
            initial,
            self.schedule,
            self.model,
            self.env,
            self.bounds,
            self.numerics,
            t_final=t_final_us,
        )


def make_baseline(
    model: SpectrumModel,
    env: Environment,
    bounds: ControlBounds,
    law,
    numerics: Numerics = Numerics(),
) -> Baseline:
    trajectory = integrate_restore(
        QubitState(0.5, 0.0, 0.0), law, model, env, bounds, numerics
    )
    if trajectory.termination != "precision":
        raise RuntimeError(
            f"baseline run terminated by {trajectory.termination!r}, not precision"
        )
    return Baseline(
        model=model,
        env=env,
        bounds=bounds,
        numerics=numerics,
        trajectory=trajectory,
        schedule=FixedSchedule.from_trajectory(trajectory),
    )


def fidelity(state: QubitState, epsilon: float) -> float:
    """Uhlmann fidelity of a qubit state against the target diag(1-eps, eps).

    Uses the two-level closed form
    ``F = Tr(rho sigma) + 2 sqrt(det rho det sigma)``.
    """
    if not 0.0 < epsilon < 0.5:
        raise ValueError(f"epsilon must lie in (0, 0.5), got {epsilon!r}")
    p = state.p_e
    det_rho = p * (1.0 - p) - (state.p_r**2 + state.p_i**2)
    if det_rho < -1.0e-12:
        raise ValueError(f"state violates positivity: det rho = {det_rho!r}")
    det_rho = max(det_rho, 0.0)
    det_sigma = epsilon * (1.0 - epsilon)
    overlap = (1.0 - epsilon) * (1.0 - p) + epsilon * p
    return overlap + 2.0 * math.sqrt(det_rho * det_sigma)


def _initial_state(spec: DeviationSpec, tau_st_us: float) -> tuple[QubitState, float]:
    if isinstance(spec, PopulationDeviation):
        return QubitState(spec.p, 0.0, 0.0), tau_st_us
    if isinstance(spec, CoherenceDeviation):
        return (
            QubitState(
                0.5,
                spec.c_abs * math.cos(spec.c_phase),
                spec.c_abs * math.sin(spec.c_phase),
            ),
            tau_st_us,
        )
    if isinstance(spec, ControlTimeDeviation):
        t_f = tau_st_us + spec.delta_tau_us
        if t_f < 0.0:
            raise ValueError(
                f"delta_tau={spec.delta_tau_us!r} rewinds past the protocol start"
            )
        return QubitState(0.5, 0.0, 0.0), t_f
    raise TypeError(f"unknown deviation spec {spec!r}")


def run_deviation(spec: DeviationSpec, baseline: Baseline) -> DeviationResult:
    """Propagate a deviated initial condition under the recorded schedule."""
    initial, t_f = _initial_state(spec, baseline.tau_st_us)
    trajectory = baseline.replay(initial, t_f)
    final = trajectory.terminal_state
    return DeviationResult(
        final_state=final,
        fidelity=fidelity(final, baseline.bounds.epsilon),
        trajectory=trajectory,
    )


@dataclass(frozen=True)
class SensitivityReport:
    """Finite-difference sensitivities against closed-form predictions.

    The population channel is compared against the decoherence factor at
    the final time.  The coherence channel decays at half the population
    rate, so the dynamics predict sqrt(eta); the difference against an
    eta-scaling prediction is reported alongside for reference.
    """

    eta_terminal: float
    population_fd: float
    population_rel_diff: float
    coherence_fd: float
    coherence_sqrt_eta: float
    coherence_rel_diff_vs_sqrt_eta: float
    coherence_rel_diff_vs_eta: float
    control_time_fd: float
    control_time_predicted: float
    control_time_rel_diff: float


def sensitivity_report(
    baseline: Baseline,
    *,
    dp: float = 1.0e-3,
    dc: float = 1.0e-3,
    dtau_frac: float = 1.0e-3,
) -> SensitivityReport:
    tau = baseline.tau_st_us
    eps = baseline.bounds.epsilon
    eta = baseline.eta().at_terminal

    hi = run_deviation(PopulationDeviation(0.5 + dp), baseline).final_state.p_e
    lo = run_deviation(PopulationDeviation(0.5 - dp), baseline).final_state.p_e
    pop_fd = (hi - lo) / (2.0 * dp)
    pop_rel = abs(pop_fd - eta) / eta

    c0 = 0.25
    chi = run_deviation(CoherenceDeviation(c0 + dc), baseline).final_state.coherence_abs
    clo = run_deviation(CoherenceDeviation(c0 - dc), baseline).final_state.coherence_abs
    coh_fd = (chi - clo) / (2.0 * dc)
    sqrt_eta = math.sqrt(eta)
    coh_rel_sqrt = abs(coh_fd - sqrt_eta) / sqrt_eta
    coh_rel_eta = abs(coh_fd - eta) / eta

    dtau = dtau_frac * tau
    rate_term = float(baseline.trajectory.rate_per_us[-1])
    pe_plus = run_deviation(ControlTimeDeviation(+dtau), baseline).final_state.p_e
    pe_minus = run_deviation(ControlTimeDeviation(-dtau), baseline).final_state.p_e
    ct_fd = abs(pe_plus - pe_minus) / (2.0 * rate_term * dtau)
    ct_pred = eps  # eps * eta(delta_tau) at delta_tau -> 0
    ct_rel = abs(ct_fd - ct_pred) / ct_pred

    return SensitivityReport(
        eta_terminal=eta,
        population_fd=pop_fd,
        population_rel_diff=pop_rel,
        coherence_fd=coh_fd,
        coherence_sqrt_eta=sqrt_eta,
        coherence_rel_diff_vs_sqrt_eta=coh_rel_sqrt,
        coherence_rel_diff_vs_eta=coh_rel_eta,
        control_time_fd=ct_fd,
        control_time_predicted=ct_pred,
        control_time_rel_diff=ct_rel,
    )


@dataclass(frozen=True)
class SweepCurve:
    axis: str
    deviation: np.ndarray
    fidelity: np.ndarray
    final_p_e: np.ndarray
    final_coh_abs: np.ndarray

    def to_csv(self, stream: TextIO) -> None:
        stream.write("deviation_value,fidelity,final_p_e,final_coh_abs\n")
        cols = (self.deviation, self.fidelity, self.final_p_e, self.final_coh_abs)
        for k in range(self.deviation.size):
            stream.write(",".join(repr(float(col[k])) for col in cols) + "\n")


_AXES = ("population", "coherence", "control_time")


def fidelity_sweep(baseline: Baseline, axis: str, n_points: int) -> SweepCurve:
    """Sweep one deviation axis over its full admissible range.

    Axes: initial population over [0, 1]; initial coherence magnitude
    over [0, 0.5]; control-time offset over [-tau/2, +5 tau].
    """
    if axis not in _AXES:
        raise ValueError(f"axis must be one of {_AXES}, got {axis!r}")
    if n_points < 2:
        raise ValueError(f"need at least 2 points, got {n_points}")
    tau = baseline.tau_st_us
    if axis == "population":
        values = np.linspace(0.0, 1.0, n_points)
        specs = [PopulationDeviation(float(v)) for v in values]
    elif axis == "coherence":
        values = np.linspace(0.0, 0.5, n_points)
        specs = [CoherenceDeviation(float(v)) for v in values]
    else:
        values = np.linspace(-0.5 * tau, 5.0 * tau, n_points)
        specs = [ControlTimeDeviation(float(v)) for v in values]

    fid = np.empty(n_points)
    pes = np.empty(n_points)
    cohs = np.empty(n_points)
    for k, spec in enumerate(specs):
        result = run_deviation(spec, baseline)
        fid[k] = result.fidelity
        pes[k] = result.final_state.p_e
        cohs[k] = result.final_state.coherence_abs
    return SweepCurve(
        axis=axis, deviation=values, fidelity=fid, final_p_e=pes, final_coh_abs=cohs
    )
