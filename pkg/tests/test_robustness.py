from __future__ import annotations

import math

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from qreset import (
    CoherenceDeviation,
    ControlTimeDeviation,
    PopulationDeviation,
    QubitState,
    decoherence_factor,
    fidelity,
    fidelity_sweep,
    run_deviation,
    sensitivity_report,
)

EPS = 1.0e-5


def test_fidelity_identical_state():
    assert fidelity(QubitState(EPS), EPS) == pytest.approx(1.0, abs=1e-12)


def test_fidelity_swapped_populations():
    expected = 4.0 * EPS * (1.0 - EPS)
    assert fidelity(QubitState(1.0 - EPS), EPS) == pytest.approx(expected, rel=1e-9)


def test_fidelity_pure_superposition():
    # det rho = 0 for the pure |+> state, leaving only the overlap term.
    assert fidelity(QubitState(0.5, 0.5, 0.0), EPS) == pytest.approx(0.5, abs=1e-12)


@settings(max_examples=80)
@given(
    p_e=st.floats(min_value=0.0, max_value=1.0),
    coh_frac=st.floats(min_value=0.0, max_value=1.0),
    phase=st.floats(min_value=0.0, max_value=2.0 * math.pi),
)
def test_fidelity_bounded(p_e, coh_frac, phase):
    radius = coh_frac * math.sqrt(p_e * (1.0 - p_e))
    state = QubitState(p_e, radius * math.cos(phase), radius * math.sin(phase))
    f = fidelity(state, EPS)
    assert 0.0 <= f <= 1.0 + 1e-12


def test_deviation_spec_validation():
    with pytest.raises(ValueError):
        PopulationDeviation(1.2)
    with pytest.raises(ValueError):
        CoherenceDeviation(0.51)


def test_replay_reproduces_baseline(baselines):
    for name, baseline in baselines.items():
        replay = baseline.replay(QubitState(0.5), baseline.tau_st_us)
        assert replay.termination == "horizon"
        drift = abs(replay.terminal_state.p_e - baseline.trajectory.terminal_state.p_e)
        assert drift < 1e-9


def test_no_deviation_reaches_target(baselines):
    for name, baseline in baselines.items():
        result = run_deviation(PopulationDeviation(0.5), baseline)
        assert result.fidelity >= 1.0 - 2.0 * EPS


def test_full_population_deviation(baselines):
    baseline = baselines["lz"]
    result = run_deviation(PopulationDeviation(1.0), baseline)
    assert result.final_state.p_e <= 2.0 * EPS
    assert result.fidelity > 0.9999


def test_full_coherence_deviation(baselines):
    baseline = baselines["lz"]
    for phase in (0.0, 1.1, math.pi):
        result = run_deviation(CoherenceDeviation(0.5, phase), baseline)
        assert result.final_state.coherence_abs <= 0.5 * math.sqrt(2.0 * EPS) * 1.001
        assert result.fidelity > 0.999


def test_control_time_rewind_bound(baselines):
    baseline = baselines["lz"]
    with pytest.raises(ValueError):
        run_deviation(ControlTimeDeviation(-2.0 * baseline.tau_st_us), baseline)


def test_population_sensitivity_matches_eta(baselines):
    for name in ("lz", "mix"):
        report = sensitivity_report(baselines[name])
        assert report.population_rel_diff < 1e-4


def test_coherence_sensitivity_follows_half_rate(baselines):
    # The dynamics damp coherences at half the population rate, so the
    # finite-difference slope follows sqrt(eta); an eta-scaling reading is
    # off by 1/sqrt(eta), i.e. by orders of magnitude, and the report
    # carries that disagreement explicitly.
    report = sensitivity_report(baselines["lz"])
    assert report.coherence_rel_diff_vs_sqrt_eta < 1e-4
    assert report.coherence_rel_diff_vs_eta > 10.0


def test_control_time_sensitivity_scale(baselines):
    for name in ("lz", "prot"):
        report = sensitivity_report(baselines[name])
        assert report.control_time_rel_diff < 0.01


def test_population_sweep_fidelity_floor(baselines):
    curve = fidelity_sweep(baselines["lz"], "population", 21)
    assert curve.fidelity.min() > 0.9999
    assert curve.deviation[0] == 0.0 and curve.deviation[-1] == 1.0


def test_coherence_sweep_endpoint_ordering(baselines):
    curve = fidelity_sweep(baselines["lz"], "coherence", 11)
    assert curve.fidelity[0] >= curve.fidelity[-1]
    assert np.all(curve.fidelity > 0.999)


def test_control_time_sweep_forward_errors_order_epsilon(baselines):
    baseline = baselines["lz"]
    curve = fidelity_sweep(baseline, "control_time", 12)
    forward = curve.deviation >= 0.0
    assert np.all(np.abs(curve.final_p_e[forward] - EPS) <= 1.5 * EPS)
    assert np.all(curve.fidelity[forward] > 0.9999)
    # Rewinding half the protocol leaves the state visibly unreset.
    assert curve.final_p_e[0] > 100.0 * EPS


def test_sweep_axis_validation(baselines):
    with pytest.raises(ValueError):
        fidelity_sweep(baselines["lz"], "detuning", 5)
    with pytest.raises(ValueError):
        fidelity_sweep(baselines["lz"], "population", 1)


def test_eta_suppresses_population_errors(baselines):
    # Terminal population error ~ |p - 1/2| * eta(tau) for every channel.
    baseline = baselines["jqf"]
    eta = decoherence_factor(baseline.trajectory).at_terminal
    for p in (0.0, 0.25, 0.75, 1.0):
        result = run_deviation(PopulationDeviation(p), baseline)
        predicted = abs(p - 0.5) * eta
        observed = abs(result.final_state.p_e - baseline.trajectory.terminal_state.p_e)
        # eta carries the trapezoidal-sampling error of the rate integral,
        # bounded at 1e-4 relative by the step controls.
        assert observed == pytest.approx(predicted, rel=1e-4)
