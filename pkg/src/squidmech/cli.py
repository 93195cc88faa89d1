"""Command-line front end.

Reads a JSON run configuration (strictly validated, every omitted key
filled from documented defaults and echoed into provenance), dispatches one
of the scenario commands, and writes a reproducible artifact set into the
output directory:

    report.json            full report with provenance
    data.csv               the report rows as a flat table
    config.resolved.json   the configuration actually used, defaults applied

Exit codes: 0 success, 2 configuration/validation error, 3 constraint
violation (``validate --strict`` only), 4 numerical non-convergence.

Configuration units are laboratory units: frequencies in Hz, lengths in
meters, masses in kg, fields in tesla, temperatures in kelvin and flux in
units of the flux quantum.  The Hz to rad/s conversion happens at this
boundary only.
"""

from __future__ import annotations

import argparse
import csv
import dataclasses
import json
import math
import sys
from pathlib import Path

import numpy as np

from . import __version__
from . import device as dev
from . import experiments as exp
from . import lindblad
from .constants import TWO_PI, angular_to_hz, hz_to_angular
from .fock import HilbertDims, expectation, mode_destroy, mode_number

COMMANDS = ("fom", "validate", "sweep", "wavenumber", "evolve", "steady",
            "wigner", "blockade", "sideband", "dce", "harmonics")

EXIT_OK = 0
EXIT_CONFIG = 2
EXIT_CONSTRAINT = 3
EXIT_NONCONVERGENCE = 4


class ConfigError(ValueError):
    """Malformed or invalid run configuration."""


# Keys given as null in the defaults are computed at parse time.
_DEVICE_DEFAULTS = {
    "squid": {
        "critical_current": 100e-9,
        "junction_capacitance": 10e-15,
        "loop_self_inductance": 10e-12,
        "junction_asymmetry": 0.0,
    },
    "cavity": {
        "inductance_per_length": 2.0e-7,
        "capacitance_per_length": None,  # calibrated from the zero-bias mode
        "length": 5e-3,
        "bare_frequency_at_zero_bias": 10e9,  # Hz
        "quality_factor": 5e4,
    },
    "mechanical": {
        "mass": 1e-16,
        "frequency": 10e6,  # Hz
        "oscillator_length": 10e-6,
        "geometric_factor": 2.0 / math.pi,
        "quality_factor": 1e4,
    },
    "bias": {
        "dc_flux_fraction": 0.35,
        "modulation_amplitude_fraction": 0.0,
        "modulation_frequency": None,  # Hz; twice the renormalized cavity frequency
        "external_field": 0.040,
        "pump_amplitude": 0.0,  # Hz
        "pump_frequency": 0.0,  # Hz
        "temperature": 0.010,
    },
    "material_critical_field": 0.198,
}

_SIMULATION_DEFAULTS = {
    "dims": [10, 8],
    "rtol": 1e-8,
    "atol": 1e-10,
    "top_population_threshold": 1e-4,
    "cavity_ladder": [8, 16, 24, 32, 48, 64, 80, 96],
    "ladder_tolerance": 1e-8,
}

_SCALED_MODEL_DEFAULTS = {
    "alpha_over_kappa": 0.25,
    "delta_over_kappa": 0.0,
    "g0_over_kappa": 0.0,
    "omega_m_over_kappa": 130.0,
    "gamma_m_over_kappa": 0.013,
    "pump_over_kappa": 0.0,
    "mech_thermal_occupation": 0.0,
}

_SCENARIO_DEFAULTS = {
    "fom": {},
    "validate": {"photon_number": 1.0, "cavity_current_estimate": None},
    "sweep": {
        "parameter_path": "bias.dc_flux_fraction",
        "values": [0.0, 0.05, 0.10, 0.15, 0.20, 0.25, 0.30, 0.35, 0.40, 0.45],
        "outputs": ["g0", "alpha", "chi", "kappa", "renormalized_cavity_frequency",
                    "nonlinearity_parameter"],
    },
    "wavenumber": {"modulation_cosines": [-1.0, 0.0, 1.0]},
    "evolve": {**_SCALED_MODEL_DEFAULTS, "horizon": 10.0, "samples": 101},
    "steady": dict(_SCALED_MODEL_DEFAULTS),
    "wigner": {**_SCALED_MODEL_DEFAULTS, "subsystem": 0, "extent": 4.0, "points": 41},
    "blockade": {
        "g0_over_kappa_values": [0.0, 4.0, 8.0, 13.0],
        "g0_over_omega_m": 0.1,
        "pump_over_kappa": 0.05,
        "mech_quality_factor": 1e4,
    },
    "sideband": {
        "detuning_choice": "both_half",
        "alpha_over_kappa": 0.3,
        "g0_over_kappa": 4.0,
        "omega_m_over_kappa": 40.0,
        "mech_quality_factor": 1e4,
        "mech_thermal_occupation": 0.5,
        "dims": [8, 14],
        "horizon": 10.0,
        "samples": 41,
    },
    "dce": {"alpha_over_kappa": 0.25, "delta_over_kappa": 0.0, "dim": 16,
            "horizon": 10.0, "samples": 101},
    "harmonics": {"n_max": 13},
}


def _merge_defaults(defaults: dict, given: dict, path: str, applied: list[str]) -> dict:
    unknown = sorted(set(given) - set(defaults))
    if unknown:
        raise ConfigError(f"unknown key(s) {unknown} under '{path}'")
    out = {}
    for key, default_value in defaults.items():
        where = f"{path}.{key}" if path else key
        if key in given:
            value = given[key]
            if isinstance(default_value, dict) and isinstance(value, dict):
                out[key] = _merge_defaults(default_value, value, where, applied)
            elif isinstance(default_value, dict):
                raise ConfigError(f"'{where}' must be an object")
            else:
                out[key] = value
        else:
            if isinstance(default_value, dict):
                out[key] = _merge_defaults(default_value, {}, where, applied)
            else:
                out[key] = default_value
                applied.append(f"{where} = {_fmt(default_value)} (default)")
    return out


def _fmt(value) -> str:
    if isinstance(value, float):
        return repr(value)
    return json.dumps(value)


@dataclasses.dataclass
class RunConfig:
    """Parsed and validated run configuration."""

    device: dev.DeviceParameters
    simulation: dict
    scenario: dict
    resolved: dict
    defaults_applied: list[str]


def _build_device(block: dict, applied: list[str]) -> tuple[dev.DeviceParameters, dict]:
    resolved = json.loads(json.dumps(block))  # deep copy, JSON-typed
    try:
        squid = dev.SquidParameters(
            critical_current=float(block["squid"]["critical_current"]),
            junction_capacitance=float(block["squid"]["junction_capacitance"]),
            loop_self_inductance=float(block["squid"]["loop_self_inductance"]),
            junction_asymmetry=float(block["squid"]["junction_asymmetry"]),
        )
        bare = hz_to_angular(float(block["cavity"]["bare_frequency_at_zero_bias"]))
        c_per_len = block["cavity"]["capacitance_per_length"]
        if c_per_len is None:
            c_per_len = dev.calibrated_capacitance_per_length(
                float(block["cavity"]["inductance_per_length"]),
                float(block["cavity"]["length"]), squid, bare)
            applied.append(
                f"device.cavity.capacitance_per_length = {c_per_len!r} "
                "(calibrated so the mode equation matches the zero-bias frequency)")
            resolved["cavity"]["capacitance_per_length"] = c_per_len
        cavity = dev.CavityParameters(
            inductance_per_length=float(block["cavity"]["inductance_per_length"]),
            capacitance_per_length=float(c_per_len),
            length=float(block["cavity"]["length"]),
            bare_frequency_at_zero_bias=bare,
            quality_factor=float(block["cavity"]["quality_factor"]),
        )
        mechanical = dev.MechanicalParameters(
            mass=float(block["mechanical"]["mass"]),
            frequency=hz_to_angular(float(block["mechanical"]["frequency"])),
            oscillator_length=float(block["mechanical"]["oscillator_length"]),
            geometric_factor=float(block["mechanical"]["geometric_factor"]),
            quality_factor=float(block["mechanical"]["quality_factor"]),
        )
        mod_freq_hz = block["bias"]["modulation_frequency"]
        if mod_freq_hz is None:
            dc = float(block["bias"]["dc_flux_fraction"])
            if abs(dc) >= 0.5 - dev.FLUX_POLE_MARGIN:
                raise dev.FluxBiasError(
                    f"dc_flux_fraction must satisfy |x| < 1/2, got {dc!r}")
            mod_freq_hz = 2.0 * float(block["cavity"]["bare_frequency_at_zero_bias"]) \
                * math.cos(math.pi * dc)
            applied.append(
                f"device.bias.modulation_frequency = {mod_freq_hz!r} Hz "
                "(twice the renormalized cavity frequency)")
            resolved["bias"]["modulation_frequency"] = mod_freq_hz
        bias = dev.BiasParameters(
            dc_flux_fraction=float(block["bias"]["dc_flux_fraction"]),
            modulation_amplitude_fraction=float(block["bias"]["modulation_amplitude_fraction"]),
            modulation_frequency=hz_to_angular(float(mod_freq_hz)),
            external_field=float(block["bias"]["external_field"]),
            pump_amplitude=hz_to_angular(float(block["bias"]["pump_amplitude"])),
            pump_frequency=hz_to_angular(float(block["bias"]["pump_frequency"])),
            temperature=float(block["bias"]["temperature"]),
        )
        device = dev.DeviceParameters(
            squid=squid, cavity=cavity, mechanical=mechanical, bias=bias,
            material_critical_field=float(block["material_critical_field"]),
        )
    except (ValueError, TypeError, KeyError) as exc:
        raise ConfigError(f"device configuration invalid: {exc}") from exc
    return device, resolved


def parse_config(text: str) -> RunConfig:
    """Parse, validate, and resolve a JSON run configuration.

    Unknown keys are rejected with their path; every default applied is
    recorded.  Hz to rad/s conversion for all frequency fields happens
    here and nowhere else.
    """
    try:
        raw = json.loads(text)
    except json.JSONDecodeError as exc:
        raise ConfigError(
            f"configuration is not valid JSON: {exc.msg} "
            f"(line {exc.lineno}, column {exc.colno})") from exc
    if not isinstance(raw, dict):
        raise ConfigError("configuration root must be a JSON object")
    unknown = sorted(set(raw) - {"device", "simulation", "scenario"})
    if unknown:
        raise ConfigError(f"unknown top-level key(s) {unknown}")

    applied: list[str] = []
    device_block = _merge_defaults(_DEVICE_DEFAULTS, raw.get("device", {}),
                                   "device", applied)
    simulation = _merge_defaults(_SIMULATION_DEFAULTS, raw.get("simulation", {}),
                                 "simulation", applied)
    device, resolved_device = _build_device(device_block, applied)
    scenario = raw.get("scenario", {})
    if not isinstance(scenario, dict):
        raise ConfigError("'scenario' must be an object")
    resolved = {"device": resolved_device, "simulation": simulation,
                "scenario": scenario}
    return RunConfig(device=device, simulation=simulation, scenario=scenario,
                     resolved=resolved, defaults_applied=applied)


def _scenario_for(command: str, config: RunConfig) -> dict:
    defaults = _SCENARIO_DEFAULTS[command]
    applied: list[str] = []
    merged = _merge_defaults(defaults, config.scenario, "scenario", applied)
    config.defaults_applied.extend(applied)
    config.resolved["scenario"] = merged
    return merged


def _scaled_rates(scenario: dict) -> exp.ScaledRates:
    return exp.ScaledRates(
        g0=float(scenario["g0_over_kappa"]),
        omega_m=float(scenario["omega_m_over_kappa"]),
        gamma_m=float(scenario["gamma_m_over_kappa"]),
        alpha=float(scenario["alpha_over_kappa"]),
        delta=float(scenario["delta_over_kappa"]),
        pump=float(scenario["pump_over_kappa"]),
        mech_thermal_occupation=float(scenario["mech_thermal_occupation"]),
    )


# ---------------------------------------------------------------------------
# command implementations, each returning (Report, summary lines, exit code)
# ---------------------------------------------------------------------------

def _run_fom(config: RunConfig, scenario: dict, strict: bool):
    report = exp.reproduce_table1(config.device)
    row = report.rows[0]
    summary = [
        f"g0/kappa            = {row['g0_over_kappa']:.4g}",
        f"g0/omega_m          = {row['g0_over_omega_m']:.4g}",
        f"g0^2/(kappa omega_m) = {row['nonlinearity']:.4g}",
        f"chi/2pi             = {row['chi_over_2pi_hz']:.4g} Hz",
        f"omega_c^dc/2pi      = {report.provenance['table_scaling_frequency'] / TWO_PI:.4g} Hz"
        " (table scaling)",
        f"mode-equation value = {report.provenance['mode_equation_frequency'] / TWO_PI:.4g} Hz"
        " (discrepancy reported)",
    ]
    return report, summary, EXIT_OK


def _run_validate(config: RunConfig, scenario: dict, strict: bool):
    estimate = scenario["cavity_current_estimate"]
    constraint = dev.validate_regime(
        config.device,
        cavity_current_estimate=None if estimate is None else float(estimate),
        photon_number=float(scenario["photon_number"]))
    rows = [
        {"ratio": "current", "value": constraint.current_ratio,
         "verdict": constraint.verdicts["current"]},
        {"ratio": "inductance", "value": constraint.inductance_ratio,
         "verdict": constraint.verdicts["inductance"]},
        {"ratio": "flux_kick", "value": constraint.flux_kick_ratio,
         "verdict": constraint.verdicts["flux_kick"]},
        {"ratio": "field", "value": constraint.field_ratio,
         "verdict": constraint.verdicts["field"]},
    ]
    inputs = {"device": exp.device_as_dict(config.device),
              "photon_number": scenario["photon_number"],
              "cavity_current_estimate": estimate}
    report = exp.make_report("validate", inputs, ("ratio", "value", "verdict"), rows,
                              {"thresholds": {
                                  "small_parameter_ok_below": dev.RATIO_OK_BELOW,
                                  "small_parameter_violation_above": dev.RATIO_VIOLATION_ABOVE,
                                  "field_warning_above": dev.FIELD_WARNING_ABOVE},
                               "worst": constraint.worst})
    summary = [f"{r['ratio']:<12} {r['value']:.4g}  [{r['verdict']}]" for r in rows]
    summary.append(f"overall: {constraint.worst}")
    code = EXIT_OK
    if strict and constraint.worst == dev.VERDICT_VIOLATION:
        code = EXIT_CONSTRAINT
    return report, summary, code


def _run_sweep(config: RunConfig, scenario: dict, strict: bool):
    spec = exp.SweepSpec(parameter_path=str(scenario["parameter_path"]),
                         values=tuple(scenario["values"]),
                         outputs=tuple(scenario["outputs"]))
    report = exp.sweep(config.device, spec)
    errors = sum(1 for r in report.rows if r["error"])
    summary = [f"swept {spec.parameter_path} over {len(spec.values)} points "
               f"({errors} failed)"]
    return report, summary, EXIT_OK


def _run_wavenumber(config: RunConfig, scenario: dict, strict: bool):
    rows = []
    for cosine in scenario["modulation_cosines"]:
        details = dev.wavenumber_report(config.device, float(cosine))
        rows.append({"modulation_cosine": float(cosine), **details})
    inputs = {"device": exp.device_as_dict(config.device),
              "modulation_cosines": list(scenario["modulation_cosines"])}
    report = exp.make_report(
        "wavenumber", inputs,
        ("modulation_cosine", "r", "half_argument", "wavenumber", "residual",
         "sqrt_r", "small_argument_error", "small_argument_valid"),
        rows, {"solver": "bracketed bisection with Newton polish"})
    summary = [f"cos={r['modulation_cosine']:+.1f}: k0 = {r['wavenumber']:.6g} 1/m, "
               f"residual {r['residual']:.1e}" for r in rows]
    return report, summary, EXIT_OK


def _evolved_series_report(scenario: dict, dims, rtol, atol, threshold):
    rates = _scaled_rates(scenario)
    model = exp.scaled_model(rates, dims)
    initial = exp.vacuum_times_thermal(HilbertDims.of(dims),
                                        rates.mech_thermal_occupation)
    times = np.linspace(0.0, float(scenario["horizon"]), int(scenario["samples"]))
    a = mode_destroy(dims, 0)
    result = lindblad.evolve(model, initial, times,
                             observables={"cavity_number": a.dag() @ a,
                                          "cavity_pair": a @ a,
                                          "mech_number": mode_number(dims, 1)},
                             rtol=rtol, atol=atol,
                             top_population_threshold=threshold)
    return rates, result, times


def _run_evolve(config: RunConfig, scenario: dict, strict: bool):
    dims = HilbertDims.of(config.simulation["dims"])
    rates, result, times = _evolved_series_report(
        scenario, dims, float(config.simulation["rtol"]),
        float(config.simulation["atol"]),
        float(config.simulation["top_population_threshold"]))
    rows = [{"time": float(t),
             "cavity_number": float(result.observables["cavity_number"][k].real),
             "mech_number": float(result.observables["mech_number"][k].real),
             "pair_amplitude": float(abs(result.observables["cavity_pair"][k]))}
            for k, t in enumerate(times)]
    inputs = {"rates": rates.as_dict(), "dims": list(dims),
              "horizon": scenario["horizon"], "samples": scenario["samples"]}
    provenance = {
        "scaling": "kappa = 1; times in 1/kappa",
        "truncation": {"dims": list(result.truncation_report.dims),
                       "top_level_population": list(result.truncation_report.top_level_population),
                       "flagged": result.truncation_report.flagged},
    }
    report = exp.make_report("evolve", inputs,
                              ("time", "cavity_number", "mech_number", "pair_amplitude"),
                              rows, provenance)
    summary = [f"terminal cavity number {rows[-1]['cavity_number']:.6g}, "
               f"mechanics {rows[-1]['mech_number']:.6g}"]
    return report, summary, EXIT_OK


def _run_steady(config: RunConfig, scenario: dict, strict: bool):
    dims = HilbertDims.of(config.simulation["dims"])
    rates = _scaled_rates(scenario)
    model = exp.scaled_model(rates, dims)
    state = lindblad.steady_state(
        model, top_population_threshold=float(config.simulation["top_population_threshold"]))
    a = mode_destroy(dims, 0)
    cavity_number = float(np.real(expectation(a.dag() @ a, state)))
    row = {
        "cavity_number": cavity_number,
        "mech_number": float(np.real(expectation(mode_number(dims, 1), state))),
        "pair_amplitude": float(abs(expectation(a @ a, state))),
    }
    try:
        row["cavity_g2"] = lindblad.g2_zero(state, 0)
    except lindblad.AbsentPhotonsError:
        row["cavity_g2"] = None
    try:
        row["mech_fano"] = lindblad.fano(state, 1)
    except lindblad.AbsentPhotonsError:
        row["mech_fano"] = None
    inputs = {"rates": rates.as_dict(), "dims": list(dims)}
    provenance = {"scaling": "kappa = 1",
                  "top_level_population": [state.top_level_population(s)
                                           for s in range(len(dims))]}
    report = exp.make_report("steady", inputs,
                              ("cavity_number", "mech_number", "pair_amplitude",
                               "cavity_g2", "mech_fano"),
                              [row], provenance)
    summary = [f"{k} = {v}" for k, v in row.items()]
    return report, summary, EXIT_OK


def _run_wigner(config: RunConfig, scenario: dict, strict: bool):
    dims = HilbertDims.of(config.simulation["dims"])
    rates = _scaled_rates(scenario)
    model = exp.scaled_model(rates, dims)
    state = lindblad.steady_state(
        model, top_population_threshold=float(config.simulation["top_population_threshold"]))
    extent = float(scenario["extent"])
    points = int(scenario["points"])
    grid = np.linspace(-extent, extent, points)
    result = lindblad.wigner(state, int(scenario["subsystem"]), grid, grid)
    rows = [{"x": float(x), "p": float(p), "w": float(result.values[i, j])}
            for i, x in enumerate(grid) for j, p in enumerate(grid)]
    inputs = {"rates": rates.as_dict(), "dims": list(dims),
              "subsystem": scenario["subsystem"], "extent": extent, "points": points}
    provenance = {"convention": "x = (a + a^dag)/sqrt(2); integral of W over dx dp = 1",
                  "grid_integral": result.integral(),
                  "coverage_warning": result.coverage_warning}
    report = exp.make_report("wigner", inputs, ("x", "p", "w"), rows, provenance)
    summary = [f"grid integral = {result.integral():.6f}",
               f"min W = {result.values.min():.6g}, max W = {result.values.max():.6g}"]
    if result.coverage_warning:
        summary.append(f"warning: {result.coverage_warning}")
    return report, summary, EXIT_OK


def _run_blockade(config: RunConfig, scenario: dict, strict: bool):
    dims = HilbertDims.of(config.simulation["dims"])
    report = exp.blockade_scan(
        g0_over_kappa_values=tuple(float(v) for v in scenario["g0_over_kappa_values"]),
        g0_over_omega_m=float(scenario["g0_over_omega_m"]),
        pump_over_kappa=float(scenario["pump_over_kappa"]),
        dims=dims,
        mech_quality_factor=float(scenario["mech_quality_factor"]))
    summary = [f"g0/kappa={r['g0_over_kappa']:>6}: g2(0)={r['g2']}"
               for r in report.rows]
    return report, summary, EXIT_OK


def _run_sideband(config: RunConfig, scenario: dict, strict: bool):
    report = exp.sideband_demo(
        detuning_choice=str(scenario["detuning_choice"]),
        alpha_over_kappa=float(scenario["alpha_over_kappa"]),
        g0_over_kappa=float(scenario["g0_over_kappa"]),
        omega_m_over_kappa=float(scenario["omega_m_over_kappa"]),
        mech_quality_factor=float(scenario["mech_quality_factor"]),
        mech_thermal_occupation=float(scenario["mech_thermal_occupation"]),
        dims=tuple(int(d) for d in scenario["dims"]),
        horizon=float(scenario["horizon"]),
        samples=int(scenario["samples"]))
    terminal = {}
    for row in report.rows:
        terminal[row["detuning"]] = row["mech_number"]
    summary = [f"terminal mech number at {k}: {v:.6g}" for k, v in terminal.items()]
    return report, summary, EXIT_OK


def _run_dce(config: RunConfig, scenario: dict, strict: bool):
    report = exp.dce_photon_generation(
        alpha_over_kappa=float(scenario["alpha_over_kappa"]),
        delta_over_kappa=float(scenario["delta_over_kappa"]),
        dim=int(scenario["dim"]),
        horizon=float(scenario["horizon"]),
        samples=int(scenario["samples"]))
    last = report.rows[-1]
    summary = [f"terminal photon number {last['cavity_number']:.8g} "
               f"(oracle {last['oracle_number']:.8g})"]
    return report, summary, EXIT_OK


def _run_harmonics(config: RunConfig, scenario: dict, strict: bool):
    report = exp.harmonic_census(config.device, n_max=int(scenario["n_max"]))
    summary = [
        f"harmonics above the cavity linewidth: "
        f"{report.provenance['qualifying_count_above_kappa']}",
        f"harmonics above the mechanical linewidth: "
        f"{report.provenance['qualifying_count_above_gamma_m']}",
    ]
    return report, summary, EXIT_OK


_RUNNERS = {
    "fom": _run_fom,
    "validate": _run_validate,
    "sweep": _run_sweep,
    "wavenumber": _run_wavenumber,
    "evolve": _run_evolve,
    "steady": _run_steady,
    "wigner": _run_wigner,
    "blockade": _run_blockade,
    "sideband": _run_sideband,
    "dce": _run_dce,
    "harmonics": _run_harmonics,
}


# ---------------------------------------------------------------------------
# artifact serialization
# ---------------------------------------------------------------------------

def _json_text(obj) -> str:
    return json.dumps(obj, sort_keys=True, indent=2, ensure_ascii=True) + "\n"


def _csv_cell(value) -> str:
    if value is None:
        return ""
    if isinstance(value, bool):
        return "true" if value else "false"
    if isinstance(value, float):
        return repr(value)
    return str(value)


def write_artifacts(out_dir: Path, command: str, report: exp.Report,
                    config: RunConfig) -> None:
    out_dir.mkdir(parents=True, exist_ok=True)
    payload = {
        "command": command,
        "package_version": __version__,
        "defaults_applied": config.defaults_applied,
        "report": report.to_dict(),
    }
    (out_dir / "report.json").write_text(_json_text(payload), newline="\n")
    (out_dir / "config.resolved.json").write_text(
        _json_text({"config": config.resolved,
                    "defaults_applied": config.defaults_applied}), newline="\n")
    with (out_dir / "data.csv").open("w", newline="") as handle:
        writer = csv.writer(handle, lineterminator="\n")
        writer.writerow(report.columns)
        for row in report.rows:
            writer.writerow([_csv_cell(row.get(col)) for col in report.columns])


def dispatch(command: str, config: RunConfig, out_dir: Path,
             strict: bool = False) -> int:
    """Run one command and write its artifact set; returns the exit code."""
    if command not in _RUNNERS:
        print(f"unknown command {command!r}; choose from {COMMANDS}", file=sys.stderr)
        return EXIT_CONFIG
    try:
        scenario = _scenario_for(command, config)
        report, summary, code = _RUNNERS[command](config, scenario, strict)
    except (lindblad.AboveThresholdError, lindblad.StiffIntegrationError,
            lindblad.DegenerateSteadyStateError, lindblad.TruncationLadderError) as exc:
        print(f"numerical non-convergence: {exc}", file=sys.stderr)
        return EXIT_NONCONVERGENCE
    except (ConfigError, dev.FluxBiasError, dev.WavenumberDomainError,
            ValueError, KeyError, TypeError) as exc:
        print(f"configuration error: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    write_artifacts(out_dir, command, report, config)
    print(f"[{command}] {report.scenario}  ({len(report.rows)} rows)")
    for line in summary:
        print(f"  {line}")
    print(f"  artifacts: {out_dir}/report.json, data.csv, config.resolved.json")
    return code


def _parse_dims_flag(text: str) -> list[int]:
    try:
        dims = [int(part) for part in text.split(",")]
    except ValueError as exc:
        raise ConfigError(f"--dims expects comma-separated integers, got {text!r}") from exc
    if len(dims) < 1 or any(d < 2 for d in dims):
        raise ConfigError(f"--dims entries must be >= 2, got {text!r}")
    return dims


def main(argv: list[str] | None = None) -> int:
    parser = argparse.ArgumentParser(
        prog="squidmech",
        description="Flux-modulated dc-SQUID optomechanical cavity toolkit")
    parser.add_argument("command", choices=COMMANDS,
                        help="scenario to run")
    parser.add_argument("--config", type=Path, default=None,
                        help="JSON run configuration (defaults used when omitted)")
    parser.add_argument("--out", type=Path, default=None,
                        help="output directory (default: runs/<command>)")
    parser.add_argument("--strict", action="store_true",
                        help="validate: exit 3 when any constraint is violated")
    parser.add_argument("--dims", type=str, default=None,
                        help="override truncation dims, e.g. '12,10'")
    parser.add_argument("--seed", type=int, default=None,
                        help="reserved; all numerics are deterministic")
    args = parser.parse_args(argv)

    try:
        text = args.config.read_text() if args.config is not None else "{}"
    except OSError as exc:
        print(f"cannot read config: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    try:
        config = parse_config(text)
        if args.dims is not None:
            dims = _parse_dims_flag(args.dims)
            config.simulation["dims"] = dims
            config.resolved["simulation"]["dims"] = dims
            if "dims" in config.scenario:
                config.scenario["dims"] = dims
    except ConfigError as exc:
        print(f"configuration error: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    out_dir = args.out if args.out is not None else Path("runs") / args.command
    return dispatch(args.command, config, out_dir, strict=args.strict)


if __name__ == "__main__":
    raise SystemExit(main())
