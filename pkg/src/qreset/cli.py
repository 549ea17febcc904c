"""Command-line reproduction harness.

Commands::

    qreset run                  one scenario -> report.json + trajectory.csv
    qreset figure fig2|fig3a|fig3b|fig4   plot-ready CSV data
    qreset sweep                one scenario swept along one numeric field
    qreset calibrate-temperature  best-fit environment temperature
    qreset spectra              rate tables for the built-in spectra

Scenarios are flat JSON objects with an optional nested ``numerics``
object; unknown keys are errors, not warnings, because silent typos in
physics parameters are the main reproduction hazard.  Outputs are
deterministic: identical configs produce byte-identical files.
"""

from __future__ import annotations

import argparse
import hashlib
import json
import math
import sys
from dataclasses import dataclass, field, fields, replace
from pathlib import Path
from typing import Mapping, Sequence

import numpy as np

from .control import (
    ConstantAtPeak,
    FixedSchedule,
    TimeLocalOptimal,
    schedule_from_csv,
    schedule_to_csv,
)
from .dynamics import IntegrationError, Numerics, Trajectory
from .reset import (
    AchievabilityError,
    IntegrationLimitError,
    ResetReport,
    epsilon_min,
    report_csv_header,
    report_to_csv_row,
    report_to_dict,
    run_reset,
    thermodynamic_length_bound,
)
from .robustness import fidelity_sweep, make_baseline
from .spectra import (
    JQF,
    ControlBounds,
    Lorentzian,
    Mixed,
    Protected,
    SpectrumError,
    SpectrumModel,
    Tabulated,
    eval_rate,
    load_tabulated,
)
from .thermo import LN2, Environment

__all__ = [
    "ConfigError",
    "ScenarioNumerics",
    "Scenario",
    "BUILTIN_SCENARIO_NAMES",
    "builtin_scenario",
    "CalibrationResult",
    "calibrate_temperature",
    "PAPER_W_EX_NORM_TARGETS",
    "main",
    "console_main",
]


class ConfigError(ValueError):
    """Invalid scenario configuration."""


_SPECTRUM_KINDS = ("lz", "prot", "mix", "jqf")

_SPECTRUM_CLASSES = {
    "lz": Lorentzian,
    "prot": Protected,
    "mix": Mixed,
    "jqf": JQF,
}

# Published normalized extra-work values for the four built-in spectra,
# used as default calibration targets.
PAPER_W_EX_NORM_TARGETS = {"lz": 18.53, "prot": 22.51, "mix": 6.24, "jqf": 6.37}

BUILTIN_SCENARIO_NAMES = ("lz-default", "prot-default", "mix-default", "jqf-default")


@dataclass(frozen=True)
class ScenarioNumerics:
    grid_points: int = 4001
    step_log_bound: float = 0.05
    rate_cap_per_us: float | None = 1.0e6
    control_drift_ghz: float | None = None
    step_limit: int = 10_000_000
    time_limit_t1: float = 1.0e4
    control_mode: str = "tracked"

    def __post_init__(self) -> None:
        if self.control_mode not in ("tracked", "global"):
            raise ConfigError(
                f"numerics.control_mode must be 'tracked' or 'global',"
                f" got {self.control_mode!r}"
            )

    def to_numerics(self) -> Numerics:
        return Numerics(
            step_log_bound=self.step_log_bound,
            grid_points=self.grid_points,
            rate_cap=self.rate_cap_per_us,
            control_drift_ghz=self.control_drift_ghz,
            step_limit=self.step_limit,
            time_limit_t1=self.time_limit_t1,
        )


@dataclass(frozen=True)
class Scenario:
    """One fully specified reset run."""

    name: str
    spectrum: str = "lz"
    spectrum_params: Mapping[str, float] = field(default_factory=dict)
    temperature_K: float = 0.010
    f_cp_GHz: float = 5.0
    delta_f_GHz: float = 3.0
    tau_sw_us: float = 0.010
    epsilon: float = 1.0e-5
    control: str = "time_local"
    numerics: ScenarioNumerics = field(default_factory=ScenarioNumerics)

    def to_dict(self) -> dict:
        return {
            "name": self.name,
            "spectrum": self.spectrum,
            "spectrum_params": dict(self.spectrum_params),
            "temperature_K": self.temperature_K,
            "f_cp_GHz": self.f_cp_GHz,
            "delta_f_GHz": self.delta_f_GHz,
            "tau_sw_us": self.tau_sw_us,
            "epsilon": self.epsilon,
            "control": self.control,
            "numerics": {
                f.name: getattr(self.numerics, f.name)
                for f in fields(ScenarioNumerics)
            },
        }

    @classmethod
    def from_dict(cls, data: Mapping) -> "Scenario":
        if not isinstance(data, Mapping):
            raise ConfigError(f"scenario must be a JSON object, got {type(data).__name__}")
        known = {f.name for f in fields(cls)}
        unknown = set(data) - known
        if unknown:
            raise ConfigError(f"unknown scenario key(s): {sorted(unknown)}")
        payload = dict(data)
        num_data = payload.pop("numerics", {})
        if not isinstance(num_data, Mapping):
            raise ConfigError("numerics must be a JSON object")
        num_known = {f.name for f in fields(ScenarioNumerics)}
        num_unknown = set(num_data) - num_known
        if num_unknown:
            raise ConfigError(f"unknown numerics key(s): {sorted(num_unknown)}")
        params = payload.pop("spectrum_params", {})
        if not isinstance(params, Mapping):
            raise ConfigError("spectrum_params must be a JSON object")
        if "spectrum" not in payload:
            raise ConfigError("scenario is missing the 'spectrum' key")
        if "name" not in payload:
            payload["name"] = str(payload["spectrum"])
        try:
            numerics = ScenarioNumerics(**num_data)
            return cls(spectrum_params=dict(params), numerics=numerics, **payload)
        except TypeError as exc:
            raise ConfigError(str(exc)) from None

    def build_model(self, base_dir: Path | None = None) -> SpectrumModel:
        kind = self.spectrum
        if kind.startswith("tabulated:"):
            path = Path(kind.split(":", 1)[1])
            if base_dir is not None and not path.is_absolute():
                path = base_dir / path
            if self.spectrum_params:
                raise ConfigError("spectrum_params not applicable to tabulated spectra")
            try:
                with open(path, "r", encoding="utf-8") as fh:
                    return load_tabulated(fh)
            except OSError as exc:
                raise ConfigError(f"cannot read tabulated spectrum: {exc}") from None
        if kind not in _SPECTRUM_KINDS:
            raise ConfigError(
                f"spectrum must be one of {_SPECTRUM_KINDS} or 'tabulated:<path>',"
                f" got {kind!r}"
            )
        cls = _SPECTRUM_CLASSES[kind]
        valid = {f.name for f in fields(cls)}
        unknown = set(self.spectrum_params) - valid
        if unknown:
            raise ConfigError(
                f"unknown {kind} spectrum parameter(s): {sorted(unknown)};"
                f" valid: {sorted(valid)}"
            )
        try:
            return cls(**self.spectrum_params)
        except SpectrumError as exc:
            raise ConfigError(str(exc)) from None

    def build_law(self, base_dir: Path | None = None):
        mode = self.numerics.control_mode
        if self.control == "time_local":
            return TimeLocalOptimal(mode=mode)
        if self.control == "constant":
            return ConstantAtPeak()
        if self.control.startswith("schedule:"):
            path = Path(self.control.split(":", 1)[1])
            if base_dir is not None and not path.is_absolute():
                path = base_dir / path
            try:
                with open(path, "r", encoding="utf-8") as fh:
                    return schedule_from_csv(fh)
            except OSError as exc:
                raise ConfigError(f"cannot read schedule: {exc}") from None
        raise ConfigError(
            f"control must be 'time_local', 'constant' or 'schedule:<path>',"
            f" got {self.control!r}"
        )

    def build(self, base_dir: Path | None = None):
        model = self.build_model(base_dir)
        try:
            env = Environment(temperature_K=self.temperature_K)
            bounds = ControlBounds(
                f_cp_ghz=self.f_cp_GHz,
                delta_f_ghz=self.delta_f_GHz,
                tau_sw_us=self.tau_sw_us,
                epsilon=self.epsilon,
            )
        except ValueError as exc:
            raise ConfigError(str(exc)) from None
        law = self.build_law(base_dir)
        return model, env, bounds, law, self.numerics.to_numerics()


def builtin_scenario(name: str) -> Scenario:
    key = name.removesuffix("-default")
    if key not in _SPECTRUM_KINDS or name not in BUILTIN_SCENARIO_NAMES:
        raise ConfigError(
            f"unknown builtin scenario {name!r}; valid: {BUILTIN_SCENARIO_NAMES}"
        )
    return Scenario(name=name, spectrum=key)


def load_scenario(path: Path) -> Scenario:
    try:
        with open(path, "r", encoding="utf-8") as fh:
            data = json.load(fh)
    except OSError as exc:
        raise ConfigError(f"cannot read config: {exc}") from None
    except json.JSONDecodeError as exc:
        raise ConfigError(f"invalid JSON in {path}: {exc}") from None
    return Scenario.from_dict(data)


def _canonical_json(data) -> str:
    return json.dumps(data, sort_keys=True, separators=(",", ":"))


def scenario_hash(scenario: Scenario) -> str:
    digest = hashlib.sha256(_canonical_json(scenario.to_dict()).encode()).hexdigest()
    return digest[:12]


def _write_json(path: Path, data) -> None:
    path.write_text(json.dumps(data, indent=2) + "\n", encoding="utf-8")


def _run_dir(out_dir: Path, scenario: Scenario) -> Path:
    return out_dir / f"{scenario.name}-{scenario_hash(scenario)}"


def _execute(
    scenario: Scenario, base_dir: Path | None = None
) -> tuple[ResetReport, Trajectory]:
    model, env, bounds, law, numerics = scenario.build(base_dir)
    return run_reset(model, env, bounds, law, numerics)


# ----------------------------------------------------------------------------
# run
# ----------------------------------------------------------------------------


def cmd_run(args: argparse.Namespace) -> int:
    scenario = _resolve_scenario(args)
    scenario = _apply_overrides(scenario, args)
    out_dir = Path(args.out)
    report, trajectory = _execute(scenario, _config_base_dir(args))
    run_dir = _run_dir(out_dir, scenario)
    run_dir.mkdir(parents=True, exist_ok=True)
    _write_json(run_dir / "config.json", scenario.to_dict())
    if args.format == "csv":
        with open(run_dir / "report.csv", "w", encoding="utf-8") as fh:
            fh.write(",".join(report_csv_header()) + "\n")
            fh.write(",".join(report_to_csv_row(report)) + "\n")
    else:
        _write_json(run_dir / "report.json", report_to_dict(report))
    with open(run_dir / "trajectory.csv", "w", encoding="utf-8") as fh:
        trajectory.to_csv(fh)
    with open(run_dir / "schedule.csv", "w", encoding="utf-8") as fh:
        schedule_to_csv(trajectory.schedule(), fh)
    print(
        f"{scenario.name}: tau_st_us={report.tau_st!r}"
        f" tau_st_over_T1={report.tau_st_over_T1!r}"
        f" W_ex_norm={report.W_ex_norm!r}"
    )
    return 0


def _resolve_scenario(args: argparse.Namespace) -> Scenario:
    if getattr(args, "config", None):
        return load_scenario(Path(args.config))
    if getattr(args, "scenario", None):
        return builtin_scenario(args.scenario)
    raise ConfigError("either --config PATH or --scenario NAME is required")


def _config_base_dir(args: argparse.Namespace) -> Path | None:
    if getattr(args, "config", None):
        return Path(args.config).resolve().parent
    return None


def _apply_overrides(scenario: Scenario, args: argparse.Namespace) -> Scenario:
    numerics = scenario.numerics
    if getattr(args, "grid", None) is not None:
        numerics = replace(numerics, grid_points=args.grid)
    if getattr(args, "cap", None) is not None:
        numerics = replace(numerics, rate_cap_per_us=args.cap)
    if numerics is not scenario.numerics:
        scenario = replace(scenario, numerics=numerics)
    return scenario


# ----------------------------------------------------------------------------
# figure
# ----------------------------------------------------------------------------

_FIG4_POINTS = {"population": 41, "coherence": 21, "control_time": 31}


def _figure_scenarios(args: argparse.Namespace) -> list[Scenario]:
    if getattr(args, "config_dir", None):
        base = Path(args.config_dir)
        return [load_scenario(base / f"{k}.json") for k in _SPECTRUM_KINDS]
    return [builtin_scenario(n) for n in BUILTIN_SCENARIO_NAMES]


def cmd_figure(args: argparse.Namespace) -> int:
    out_dir = Path(args.out)
    out_dir.mkdir(parents=True, exist_ok=True)
    scenarios = _figure_scenarios(args)
    which = args.which

    if which == "fig2":
        for scenario in scenarios:
            key = scenario.spectrum
            report, trajectory = _execute(scenario)
            with open(out_dir / f"fig2_control_{key}.csv", "w", encoding="utf-8") as fh:
                fh.write("t_us,p_e,f_GHz\n")
                for k in range(trajectory.n_samples):
                    fh.write(
                        f"{float(trajectory.t_us[k])!r},{float(trajectory.p_e[k])!r},"
                        f"{float(trajectory.f_ghz[k])!r}\n"
                    )
            model, env, bounds, law, numerics = scenario.build()
            grid = np.linspace(bounds.f_min_ghz, bounds.f_max_ghz, 1201)
            with open(out_dir / f"fig2_spectrum_{key}.csv", "w", encoding="utf-8") as fh:
                fh.write("f_GHz,rate_per_us\n")
                for f in grid:
                    fh.write(f"{float(f)!r},{eval_rate(model, float(f), numerics.rate_cap)!r}\n")
        return 0

    if which == "fig3a":
        terminal_rows = []
        for scenario in scenarios:
            key = scenario.spectrum
            report, trajectory = _execute(scenario)
            t1 = report.T1
            idx = _decimate_indices(trajectory.n_samples, 2000)
            with open(out_dir / f"fig3a_{key}.csv", "w", encoding="utf-8") as fh:
                fh.write("t_us,t_over_T1,p_e\n")
                for k in idx:
                    t = float(trajectory.t_us[k])
                    ratio = t / t1 if math.isfinite(t1) else 0.0
                    fh.write(f"{t!r},{ratio!r},{float(trajectory.p_e[k])!r}\n")
            terminal_rows.append(
                (key, float(trajectory.t_us[-1]), report.tau_st_over_T1, float(trajectory.p_e[-1]))
            )
        with open(out_dir / "fig3a_terminals.csv", "w", encoding="utf-8") as fh:
            fh.write("spectrum,t_us,t_over_T1,p_e\n")
            for key, t, ratio, pe in terminal_rows:
                fh.write(f"{key},{t!r},{ratio!r},{pe!r}\n")
        return 0

    if which == "fig3b":
        rows = []
        for scenario in scenarios:
            report, _ = _execute(scenario)
            ratio = (
                report.T_reset / report.T1 if math.isfinite(report.T1) else 0.0
            )
            rows.append((scenario.spectrum, ratio, report.W_ex_norm, report.t1_infinite))
        with open(out_dir / "fig3b_points.csv", "w", encoding="utf-8") as fh:
            fh.write("spectrum,T_reset_over_T1,W_ex_norm,t1_infinite\n")
            for key, ratio, w, flag in rows:
                fh.write(f"{key},{ratio!r},{w!r},{str(flag).lower()}\n")
        xs = np.logspace(-3, 1, 121)
        with open(out_dir / "fig3b_bound.csv", "w", encoding="utf-8") as fh:
            fh.write("T_reset_over_T1,W_TL_norm\n")
            for x in xs:
                fh.write(f"{float(x)!r},{thermodynamic_length_bound(float(x)) / LN2!r}\n")
        return 0

    if which == "fig4":
        for scenario in scenarios:
            key = scenario.spectrum
            model, env, bounds, law, numerics = scenario.build()
            baseline = make_baseline(model, env, bounds, law, numerics)
            for axis, n_points in _FIG4_POINTS.items():
                curve = fidelity_sweep(baseline, axis, n_points)
                with open(
                    out_dir / f"fig4_{key}_{axis}.csv", "w", encoding="utf-8"
                ) as fh:
                    curve.to_csv(fh)
        return 0

    raise ConfigError(f"unknown figure {which!r}")


def _decimate_indices(n: int, max_rows: int) -> list[int]:
    if n <= max_rows:
        return list(range(n))
    stride = (n - 1) / (max_rows - 1)
    idx = sorted({round(i * stride) for i in range(max_rows)})
    if idx[-1] != n - 1:
        idx.append(n - 1)
    return idx


# ----------------------------------------------------------------------------
# sweep
# ----------------------------------------------------------------------------

_SWEEPABLE = ("temperature_K", "epsilon", "f_cp_GHz", "delta_f_GHz", "tau_sw_us")


def parse_axis(spec: str) -> tuple[str, float, float, int]:
    try:
        name, rng = spec.split("=", 1)
        start_s, stop_s, n_s = rng.split(":")
        start, stop, n = float(start_s), float(stop_s), int(n_s)
    except ValueError:
        raise ConfigError(
            f"axis must look like 'field=start:stop:n', got {spec!r}"
        ) from None
    if n < 1:
        raise ConfigError(f"axis needs n >= 1 points, got {n}")
    if name not in _SWEEPABLE:
        raise ConfigError(f"unknown sweep field {name!r}; valid: {_SWEEPABLE}")
    return name, start, stop, n


def cmd_sweep(args: argparse.Namespace) -> int:
    scenario = _resolve_scenario(args)
    name, start, stop, n = parse_axis(args.axis)
    values = [start] if n == 1 else list(np.linspace(start, stop, n))
    out_dir = Path(args.out)
    out_dir.mkdir(parents=True, exist_ok=True)
    rows = []
    for value in values:
        point = replace(scenario, **{name: float(value)})
        report, _ = _execute(point, _config_base_dir(args))
        rows.append((float(value), report))
    path = out_dir / f"sweep_{scenario.name}_{name}.csv"
    with open(path, "w", encoding="utf-8") as fh:
        fh.write(",".join([name] + report_csv_header()) + "\n")
        for value, report in rows:
            fh.write(",".join([repr(value)] + report_to_csv_row(report)) + "\n")
    print(f"wrote {path}")
    return 0


# ----------------------------------------------------------------------------
# calibrate-temperature
# ----------------------------------------------------------------------------

# Coarser but much faster settings for the temperature scan; the W values
# they produce agree with the default numerics to ~1e-3 relative.
CALIBRATION_NUMERICS = ScenarioNumerics(grid_points=2001, control_drift_ghz=3.0e-3)


@dataclass(frozen=True)
class CalibrationResult:
    best_temperature_K: float
    sse: float
    computed: dict[str, float]
    targets: dict[str, float]
    residuals: dict[str, float]


def calibrate_temperature(
    targets: Mapping[str, float],
    *,
    t_lo_K: float = 0.005,
    t_hi_K: float = 0.020,
    n_scan: int = 64,
    numerics: ScenarioNumerics = CALIBRATION_NUMERICS,
) -> CalibrationResult:
    """Best-fit environment temperature against target W_ex/(k_B T ln 2) values.

    Scans ``n_scan`` temperatures uniformly, minimizing the sum of squared
    relative errors over the named built-in spectra, then refines with a
    golden-section pass inside the best bracket.
    """
    unknown = set(targets) - set(_SPECTRUM_KINDS)
    if unknown:
        raise ConfigError(f"unknown spectra in targets: {sorted(unknown)}")
    if not targets:
        raise ConfigError("at least one target is required")
    for key, value in targets.items():
        if not value > 0.0:
            raise ConfigError(f"target for {key!r} must be > 0, got {value!r}")

    def computed_at(temperature: float) -> dict[str, float]:
        out = {}
        for key in targets:
            scenario = Scenario(
                name=key, spectrum=key, temperature_K=temperature, numerics=numerics
            )
            report, _ = _execute(scenario)
            out[key] = report.W_ex_norm
        return out

    def sse_at(temperature: float) -> float:
        values = computed_at(temperature)
        return sum(
            ((values[k] - targets[k]) / targets[k]) ** 2 for k in targets
        )

    temps = list(np.linspace(t_lo_K, t_hi_K, n_scan))
    errors = [sse_at(float(t)) for t in temps]
    best = min(range(n_scan), key=lambda i: (errors[i], i))
    lo = temps[best - 1] if best > 0 else temps[0]
    hi = temps[best + 1] if best < n_scan - 1 else temps[-1]

    inv_phi = (math.sqrt(5.0) - 1.0) / 2.0
    a, b = float(lo), float(hi)
    c = b - inv_phi * (b - a)
    d = a + inv_phi * (b - a)
    fc, fd = sse_at(c), sse_at(d)
    while (b - a) > 1.0e-6:
        if fc <= fd:
            b, d, fd = d, c, fc
            c = b - inv_phi * (b - a)
            fc = sse_at(c)
        else:
            a, c, fc = c, d, fd
            d = a + inv_phi * (b - a)
            fd = sse_at(d)
    best_t = 0.5 * (a + b)
    computed = computed_at(best_t)
    residuals = {k: (computed[k] - targets[k]) / targets[k] for k in targets}
    sse = sum(r * r for r in residuals.values())
    return CalibrationResult(
        best_temperature_K=best_t,
        sse=sse,
        computed=computed,
        targets=dict(targets),
        residuals=residuals,
    )


def cmd_calibrate(args: argparse.Namespace) -> int:
    raw = [float(x) for x in args.targets.split(",")]
    if len(raw) != 4:
        raise ConfigError(
            f"--targets needs four comma-separated values (lz,prot,mix,jqf),"
            f" got {len(raw)}"
        )
    targets = dict(zip(_SPECTRUM_KINDS, raw))
    result = calibrate_temperature(
        targets, t_lo_K=args.t_lo, t_hi_K=args.t_hi, n_scan=args.n_scan
    )
    print(f"best-fit temperature: {result.best_temperature_K * 1e3:.4f} mK")
    for key in _SPECTRUM_KINDS:
        print(
            f"  {key}: computed={result.computed[key]:.4f}"
            f" target={result.targets[key]:.4f}"
            f" residual={result.residuals[key] * 100.0:+.2f}%"
        )
    if args.out:
        payload = {
            "best_temperature_K": result.best_temperature_K,
            "sse": result.sse,
            "computed": result.computed,
            "targets": result.targets,
            "residuals": result.residuals,
        }
        _write_json(Path(args.out), payload)
    return 0


# ----------------------------------------------------------------------------
# spectra tables
# ----------------------------------------------------------------------------


def cmd_spectra(args: argparse.Namespace) -> int:
    bounds = ControlBounds()
    grid = args.grid or 601
    cap = args.cap if args.cap is not None else 1.0e6
    models = {k: _SPECTRUM_CLASSES[k]() for k in _SPECTRUM_KINDS}
    lines = ["f_GHz," + ",".join(_SPECTRUM_KINDS)]
    fs = np.linspace(bounds.f_min_ghz, bounds.f_max_ghz, grid)
    for f in fs:
        vals = ",".join(repr(eval_rate(models[k], float(f), cap)) for k in _SPECTRUM_KINDS)
        lines.append(f"{float(f)!r},{vals}")
    text = "\n".join(lines) + "\n"
    if args.out:
        Path(args.out).write_text(text, encoding="utf-8")
        print(f"wrote {args.out}")
    else:
        sys.stdout.write(text)
    return 0


# ----------------------------------------------------------------------------
# entry point
# ----------------------------------------------------------------------------


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="qreset",
        description="Time-optimal reset protocols for frequency-tunable qubits",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    run = sub.add_parser("run", help="run one scenario")
    run.add_argument("--config", help="scenario JSON path")
    run.add_argument("--scenario", help=f"builtin name, one of {BUILTIN_SCENARIO_NAMES}")
    run.add_argument("--out", default="out", help="output directory")
    run.add_argument("--grid", type=int, help="override scan grid points")
    run.add_argument("--cap", type=float, help="override rate cap (1/us)")
    run.add_argument("--format", choices=("json", "csv"), default="json")
    run.set_defaults(func=cmd_run)

    fig = sub.add_parser("figure", help="emit plot-ready CSV data")
    fig.add_argument("which", choices=("fig2", "fig3a", "fig3b", "fig4"))
    fig.add_argument("--config-dir", help="directory with lz/prot/mix/jqf.json overrides")
    fig.add_argument("--out", default="figures", help="output directory")
    fig.set_defaults(func=cmd_figure)

    sweep = sub.add_parser("sweep", help="sweep one scenario field")
    sweep.add_argument("axis", help="field=start:stop:n")
    sweep.add_argument("--config", help="scenario JSON path")
    sweep.add_argument("--scenario", help="builtin scenario name")
    sweep.add_argument("--out", default="out", help="output directory")
    sweep.set_defaults(func=cmd_sweep)

    cal = sub.add_parser(
        "calibrate-temperature", help="fit the environment temperature"
    )
    cal.add_argument(
        "--targets",
        default=",".join(repr(PAPER_W_EX_NORM_TARGETS[k]) for k in _SPECTRUM_KINDS),
        help="four W_ex/(kT ln2) targets: lz,prot,mix,jqf",
    )
    cal.add_argument("--t-lo", type=float, default=0.005, help="scan floor (K)")
    cal.add_argument("--t-hi", type=float, default=0.020, help="scan ceiling (K)")
    cal.add_argument("--n-scan", type=int, default=64, help="scan points")
    cal.add_argument("--out", help="optional JSON result path")
    cal.set_defaults(func=cmd_calibrate)

    spec = sub.add_parser("spectra", help="print rate tables for the builtin spectra")
    spec.add_argument("--grid", type=int, help="table rows (default 601)")
    spec.add_argument("--cap", type=float, help="rate cap (1/us)")
    spec.add_argument("--out", help="optional output CSV path")
    spec.set_defaults(func=cmd_spectra)

    return parser


def main(argv: Sequence[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except ConfigError as exc:
        print(f"configuration error: {exc}", file=sys.stderr)
        return 1
    except (AchievabilityError, IntegrationLimitError, IntegrationError) as exc:
        print(f"numerical failure: {exc}", file=sys.stderr)
        return 2
    except SpectrumError as exc:
        print(f"configuration error: {exc}", file=sys.stderr)
        return 1


def console_main() -> None:
    raise SystemExit(main())


if __name__ == "__main__":
    console_main()
