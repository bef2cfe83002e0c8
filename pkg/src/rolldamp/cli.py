"""Command-line front end: synthesize, simulate, compare, wavegen.

All commands read one JSON config (defaults mirror the benchmark ship), write
their artifacts into --out, and capture the config there verbatim so a run
can be reproduced from its output directory alone.

Exit codes: 0 success, 2 config error, 3 synthesis failure, 4 unstable or
diverging closed loop.
"""

from __future__ import annotations

import argparse
import json
import sys
from dataclasses import asdict
from pathlib import Path
from typing import Optional, Tuple

import numpy as np

from .baselines import BaselineDesignError, design_lqr, notch_controller
from .evaluate import (
    analytic_cost,
    closed_loop_system,
    compare,
    controller_from_json,
    controller_to_json,
    reports_to_csv,
    simulated_cost,
)
from .lti import DivergenceError, is_stable, simulate
from .ouc import CostWeights, SynthesisError, controller_to_json as ouc_to_json, synthesize
from .vessel import AssemblyError, assemble_plant, benchmark_autopilot, benchmark_vessel, \
    load_model, realize_plant
from .waves import (
    DisturbanceSpec,
    polyharmonic_signal,
    sample_irregular_sea,
    shaping_filter_spectrum,
    single_sine_spec,
)


class ConfigError(ValueError):
    """Bad or inconsistent run configuration."""


DEFAULT_CONFIG = {
    "model": None,
    "weights": {"alpha": 2.0, "beta": 1.0, "gamma1": 10.0, "gamma2": 2.0},
    "frequencies": [1.15],
    "mu": 1.7,
    "T": 600.0,
    "T0": 100.0,
    "h": 0.01,
    "seed": 0,
    "disturbance": None,
    "disturbance_file": None,
    "lqr_weights": [100.0, 1.0, 0.1, 0.01],
    "notch": {"omega": 1.15, "gain": -10.0, "zeta": 0.1, "drive": 0},
    "wave": {"K_w": 0.5, "omega0": 1.15, "zeta0": 0.1, "count": 1000, "trace": False},
}


def load_config(path: Optional[str]) -> Tuple[dict, str]:
    """Merged config plus the exact text to capture alongside the outputs."""
    if path is None:
        cfg = json.loads(json.dumps(DEFAULT_CONFIG))
        return cfg, json.dumps(cfg, indent=2, sort_keys=True) + "\n"
    try:
        raw = Path(path).read_text()
    except OSError as exc:
        raise ConfigError(f"cannot read config {path}: {exc}") from exc
    try:
        user = json.loads(raw)
    except json.JSONDecodeError as exc:
        raise ConfigError(f"config {path} is not valid JSON: {exc}") from exc
    if not isinstance(user, dict):
        raise ConfigError("config must be a JSON object")
    cfg = json.loads(json.dumps(DEFAULT_CONFIG))
    for key, value in user.items():
        if key not in cfg:
            raise ConfigError(f"unknown config key {key!r}")
        if isinstance(cfg[key], dict) and isinstance(value, dict):
            for sub, subval in value.items():
                if sub not in cfg[key]:
                    raise ConfigError(f"unknown config key {key}.{sub}")
                cfg[key][sub] = subval
        else:
            cfg[key] = value
    _validate_config(cfg)
    return cfg, raw


def _validate_config(cfg: dict) -> None:
    freqs = cfg["frequencies"]
    if not isinstance(freqs, list) or not freqs:
        raise ConfigError("frequencies must be a nonempty list")
    try:
        freqs = [float(w) for w in freqs]
    except (TypeError, ValueError) as exc:
        raise ConfigError(f"bad frequencies: {exc}") from exc
    if any(not np.isfinite(w) or w < 0.0 for w in freqs):
        raise ConfigError("frequencies must be finite and nonnegative")
    if any(b <= a for a, b in zip(freqs, freqs[1:])):
        raise ConfigError("frequencies must be strictly increasing")
    for key in ("mu", "T", "T0", "h"):
        try:
            cfg[key] = float(cfg[key])
        except (TypeError, ValueError) as exc:
            raise ConfigError(f"bad {key}: {exc}") from exc
    if not (cfg["mu"] > 0.0 and np.isfinite(cfg["mu"])):
        raise ConfigError("mu must be positive")
    if not (cfg["h"] > 0.0 and np.isfinite(cfg["h"])):
        raise ConfigError("h must be positive")
    if not (0.0 <= cfg["T0"] < cfg["T"] and np.isfinite(cfg["T"])):
        raise ConfigError("need 0 <= T0 < T")
    if not isinstance(cfg["seed"], int):
        raise ConfigError("seed must be an integer")
    lqr = cfg["lqr_weights"]
    if not isinstance(lqr, list) or len(lqr) != 4:
        raise ConfigError("lqr_weights must be a list of four positive numbers")
    try:
        lqr = [float(q) for q in lqr]
    except (TypeError, ValueError) as exc:
        raise ConfigError(f"bad lqr_weights: {exc}") from exc
    if any(not np.isfinite(q) or q <= 0.0 for q in lqr):
        raise ConfigError("lqr_weights must be a list of four positive numbers")


def _build_plant(cfg: dict):
    if cfg["model"] is None:
        vessel, autopilot = benchmark_vessel(), benchmark_autopilot()
    else:
        try:
            vessel, autopilot = load_model(cfg["model"])
        except (OSError, ValueError, KeyError) as exc:
            raise ConfigError(f"cannot load model {cfg['model']}: {exc}") from exc
    return assemble_plant(vessel, autopilot)


def _build_weights(cfg: dict) -> CostWeights:
    try:
        return CostWeights(**{k: float(v) for k, v in cfg["weights"].items()})
    except (TypeError, ValueError) as exc:
        raise ConfigError(f"bad weights: {exc}") from exc


def _build_disturbance(cfg: dict) -> DisturbanceSpec:
    if cfg["disturbance"] is not None and cfg["disturbance_file"] is not None:
        raise ConfigError("give either disturbance or disturbance_file, not both")
    try:
        if cfg["disturbance"] is not None:
            return DisturbanceSpec.from_json(json.dumps(cfg["disturbance"]))
        if cfg["disturbance_file"] is not None:
            return DisturbanceSpec.from_json(Path(cfg["disturbance_file"]).read_text())
    except (OSError, ValueError, KeyError) as exc:
        raise ConfigError(f"bad disturbance: {exc}") from exc
    w = float(cfg["frequencies"][0]) if cfg["frequencies"] else 1.15
    return single_sine_spec(w, a_phi=2.0, phi_phi=0.3, a_psi=1.0, phi_psi=-0.2)


def _prepare_out(out: str, raw_config: str) -> Path:
    out_dir = Path(out)
    out_dir.mkdir(parents=True, exist_ok=True)
    (out_dir / "config.json").write_text(raw_config)
    return out_dir


def cmd_synthesize(cfg: dict, raw: str, out: str) -> int:
    plant = _build_plant(cfg)
    weights = _build_weights(cfg)
    ctrl = synthesize(plant, weights, [float(w) for w in cfg["frequencies"]],
                      mu=float(cfg["mu"]))
    out_dir = _prepare_out(out, raw)
    path = out_dir / "controller.json"
    path.write_text(ouc_to_json(ctrl))
    cert = ctrl.certificate
    print(f"wrote {path}")
    print(f"certificate: {cert.status} (stability margin {cert.stability_margin:.6f}, "
          f"worst interpolation residual "
          f"{max(r for _, r in cert.interpolation_residuals):.3e})")
    return 0 if cert.status == "OPTIMAL" else 3


def cmd_simulate(cfg: dict, raw: str, out: str,
                 controller_path: Optional[str]) -> int:
    plant = _build_plant(cfg)
    weights = _build_weights(cfg)
    spec = _build_disturbance(cfg)
    plant_ss = realize_plant(plant)
    if controller_path is None:
        ctrl = synthesize(plant, weights, [float(w) for w in cfg["frequencies"]],
                          mu=float(cfg["mu"]))
        label = "ouc"
    else:
        try:
            text = Path(controller_path).read_text()
            ctrl = controller_from_json(text)
            label = json.loads(text).get("kind", "controller")
        except (OSError, ValueError, KeyError) as exc:
            raise ConfigError(f"cannot load controller: {exc}") from exc

    try:
        cl = closed_loop_system(plant, ctrl, plant_ss)
    except BaselineDesignError as exc:
        print(f"closed loop unstable: {exc}", file=sys.stderr)
        return 4
    stable, margin = is_stable(cl)
    if not stable:
        print(f"closed loop unstable (margin {margin:.3e})", file=sys.stderr)
        return 4

    T, T0, h = float(cfg["T"]), float(cfg["T0"]), float(cfg["h"])
    try:
        trace = simulate(cl, polyharmonic_signal(spec), T=T, h=h, n_y=2)
        sim_report = simulated_cost(plant, ctrl, weights, spec, T, T0, h,
                                    label, plant_ss)
    except DivergenceError as exc:
        print(f"simulation diverged: {exc}", file=sys.stderr)
        return 4
    ana_report = analytic_cost(plant, ctrl, weights, spec, label, plant_ss)

    out_dir = _prepare_out(out, raw)
    trace_path = out_dir / "trace.csv"
    with open(trace_path, "w") as f:
        f.write("t, e_phi, e_psi, u1, u2, d_phi, d_psi\n")
        for k in range(trace.t.size):
            f.write(", ".join(repr(float(v)) for v in (
                trace.t[k], trace.y[k, 0], trace.y[k, 1], trace.u[k, 0],
                trace.u[k, 1], trace.d[k, 1], trace.d[k, 2])) + "\n")
    cost_path = out_dir / "cost.json"
    cost_path.write_text(json.dumps({
        "simulated": asdict(sim_report), "analytic": asdict(ana_report),
        "T": T, "T0": T0, "h": h}, indent=2, sort_keys=True) + "\n")
    print(f"wrote {trace_path}")
    print(f"wrote {cost_path}")
    print(f"J_simulated = {sim_report.J_total:.6f}, J_analytic = "
          f"{ana_report.J_total:.6f}")
    return 0


def cmd_compare(cfg: dict, raw: str, out: str) -> int:
    plant = _build_plant(cfg)
    weights = _build_weights(cfg)
    spec = _build_disturbance(cfg)
    plant_ss = realize_plant(plant)
    ctrl = synthesize(plant, weights, [float(w) for w in cfg["frequencies"]],
                      mu=float(cfg["mu"]))
    if ctrl.certificate.status != "OPTIMAL":
        print("synthesis certificate FAILED; not comparing", file=sys.stderr)
        return 3
    try:
        lqr = design_lqr(plant_ss, tuple(float(q) for q in cfg["lqr_weights"]))
    except (BaselineDesignError, ValueError) as exc:
        raise ConfigError(f"LQR design failed: {exc}") from exc
    n = cfg["notch"]
    try:
        notch = notch_controller(omega=float(n["omega"]), gain=float(n["gain"]),
                                 zeta=float(n["zeta"]), drive=int(n["drive"]))
    except (BaselineDesignError, ValueError) as exc:
        raise ConfigError(f"notch design failed: {exc}") from exc

    controllers = {"ouc": ctrl, "lqr": lqr, "notch": notch}
    T, T0, h = float(cfg["T"]), float(cfg["T0"]), float(cfg["h"])
    reports = compare(plant, controllers, weights, spec, "analytic",
                      plant_ss=plant_ss)
    reports += compare(plant, controllers, weights, spec, "simulated",
                       T=T, T0=T0, h=h, plant_ss=plant_ss)

    out_dir = _prepare_out(out, raw)
    csv_path = out_dir / "comparison.csv"
    csv_path.write_text(reports_to_csv(reports))
    ctrl_path = out_dir / "controller.json"
    ctrl_path.write_text(controller_to_json(ctrl))
    print(f"wrote {csv_path}")
    for rep in reports:
        print(f"  {rep.method:9s} {rep.controller:6s} J = {rep.J_total:.6f}")
    return 0


def cmd_wavegen(cfg: dict, raw: str, out: str) -> int:
    w = cfg["wave"]
    try:
        table = shaping_filter_spectrum(float(w["K_w"]), float(w["omega0"]),
                                        float(w["zeta0"]))
        spec = sample_irregular_sea(table, int(w["count"]), int(cfg["seed"]))
    except ValueError as exc:
        raise ConfigError(f"bad wave parameters: {exc}") from exc

    out_dir = _prepare_out(out, raw)
    spec_path = out_dir / "wave_spec.json"
    spec_path.write_text(spec.to_json())
    table.to_csv(out_dir / "spectrum.csv")
    ms = spec.mean_square()
    energy = table.total_energy()
    summary = {
        "table_energy": energy,
        "mean_square": {"psi_bar": ms[0], "d_phi": ms[1], "d_psi": ms[2]},
        "relative_error": {
            "d_phi": abs(ms[1] - energy) / energy,
            "d_psi": abs(ms[2] - energy) / energy,
        },
        "components": int(spec.n_frequencies),
        "seed": int(cfg["seed"]),
    }
    (out_dir / "wave_summary.json").write_text(
        json.dumps(summary, indent=2, sort_keys=True) + "\n")
    if w["trace"]:
        T, h = float(cfg["T"]), float(cfg["h"])
        t = np.arange(int(round(T / h)) + 1) * h
        vals = (spec.amplitudes @ np.exp(1j * np.outer(spec.frequencies, t))).real
        with open(out_dir / "wave_trace.csv", "w") as f:
            f.write("t, d_phi, d_psi\n")
            for k in range(t.size):
                f.write(f"{float(t[k])!r}, {float(vals[1, k])!r}, "
                        f"{float(vals[2, k])!r}\n")
    print(f"wrote {spec_path}")
    print(f"components = {summary['components']}, table energy = {energy:.6f}, "
          f"realized d_phi mean square = {ms[1]:.6f}")
    return 0


def main(argv=None) -> int:
    parser = argparse.ArgumentParser(
        prog="rolldamp",
        description="Universal roll-damping controller synthesis and evaluation.")
    sub = parser.add_subparsers(dest="command", required=True)
    for name, helptext in [
        ("synthesize", "build and certify the universal controller"),
        ("simulate", "run the closed loop against a disturbance"),
        ("compare", "cost comparison against LQR and notch baselines"),
        ("wavegen", "sample an irregular-sea disturbance from the wave spectrum"),
    ]:
        p = sub.add_parser(name, help=helptext)
        p.add_argument("--config", default=None, help="JSON config path")
        p.add_argument("--out", required=True, help="output directory")
        p.add_argument("--seed", type=int, default=None, help="override config seed")
        if name == "simulate":
            p.add_argument("--controller", default=None,
                           help="controller JSON (default: synthesize from config)")

    args = parser.parse_args(argv)
    try:
        cfg, raw = load_config(args.config)
        if args.seed is not None:
            cfg["seed"] = args.seed
        if args.command == "synthesize":
            return cmd_synthesize(cfg, raw, args.out)
        if args.command == "simulate":
            return cmd_simulate(cfg, raw, args.out, args.controller)
        if args.command == "compare":
            return cmd_compare(cfg, raw, args.out)
        return cmd_wavegen(cfg, raw, args.out)
    except ConfigError as exc:
        print(f"config error: {exc}", file=sys.stderr)
        return 2
    except (AssemblyError, SynthesisError) as exc:
        print(f"synthesis failed: {exc}", file=sys.stderr)
        return 3


if __name__ == "__main__":
    sys.exit(main())
