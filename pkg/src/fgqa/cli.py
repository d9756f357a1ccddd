"""Command-line front end: device datasheets, sweeps, annealing runs, decoherence.

Four subcommands, all driven by a JSON config (see README for the
schemas) and all deterministic for a fixed config and seed:

    fgqa derive   --config cfg.json [--out table.csv]
    fgqa sweep    --config cfg.json --out sweep.csv [--threads N]
    fgqa anneal   --config cfg.json [--out prefix] [--seed S]
    fgqa decohere --config cfg.json [--out pt.csv]

Every CSV starts with a commented header recording the subcommand, the
SHA-256 of the canonical config, and the column names, so outputs are
reproducible byte for byte.  Exit codes: 0 success, 2 configuration
error, 3 physics/numerics precondition failure.
"""

from __future__ import annotations

import argparse
import csv
import hashlib
import io
import json
import sys
from concurrent.futures import ThreadPoolExecutor

import numpy as np

from . import annealing, charging, decoherence
from .cells import BiasSet, CellGeometry, MaterialStack, build_network, cell_from_coupling_ratio
from .constants import CONST, convert
from .tunneling import BarrierCollapseError, TunnelBarrier, classify, tunnel_amplitude

__all__ = ["main", "ConfigError", "parse_config", "emit_config"]

EXIT_OK = 0
EXIT_CONFIG = 2
EXIT_PHYSICS = 3

SCHEMA_VERSION = 1


class ConfigError(Exception):
    """A configuration file failed validation."""


# ---------------------------------------------------------------- config

def parse_config(text: str) -> dict:
    try:
        cfg = json.loads(text)
    except json.JSONDecodeError as exc:
        raise ConfigError(f"config is not valid JSON: {exc}") from exc
    if not isinstance(cfg, dict):
        raise ConfigError("config must be a JSON object")
    return cfg


def emit_config(cfg: dict) -> str:
    """Canonical serialisation; parse_config(emit_config(c)) == c."""
    return json.dumps(cfg, sort_keys=True, separators=(",", ":"))


def config_hash(cfg: dict) -> str:
    return hashlib.sha256(emit_config(cfg).encode()).hexdigest()


def _load(path: str) -> dict:
    try:
        with open(path, "r", encoding="utf-8") as fh:
            cfg = parse_config(fh.read())
    except OSError as exc:
        raise ConfigError(f"cannot read config {path!r}: {exc}") from exc
    version = cfg.get("schema_version")
    if version != SCHEMA_VERSION:
        raise ConfigError(f"schema_version must be {SCHEMA_VERSION}, got {version!r}")
    return cfg


def _check_keys(obj: dict, allowed: set[str], where: str) -> None:
    unknown = sorted(set(obj) - allowed)
    if unknown:
        raise ConfigError(f"unknown key(s) in {where}: {', '.join(unknown)}")


def _number(obj: dict, key: str, where: str, default=None, required=False,
            positive=False):
    if key not in obj:
        if required:
            raise ConfigError(f"missing required key {key!r} in {where}")
        return default
    v = obj[key]
    if not isinstance(v, (int, float)) or isinstance(v, bool):
        raise ConfigError(f"{where}.{key} must be a number, got {v!r}")
    if positive and v <= 0:
        raise ConfigError(f"{where}.{key} must be positive, got {v}")
    return float(v)


def _material(cfg: dict, where: str = "material") -> MaterialStack:
    obj = cfg.get("material", {})
    if not isinstance(obj, dict):
        raise ConfigError(f"{where} must be an object")
    _check_keys(obj, {"eps_ox_f_per_nm", "eps_gate_f_per_nm", "barrier_ev",
                      "m_ox", "m_si", "doping_cm3"}, where)
    defaults = MaterialStack()
    try:
        return MaterialStack(
            eps_ox=_number(obj, "eps_ox_f_per_nm", where, defaults.eps_ox, positive=True),
            eps_gate=_number(obj, "eps_gate_f_per_nm", where, None),
            barrier_ev=_number(obj, "barrier_ev", where, defaults.barrier_ev, positive=True),
            m_ox=_number(obj, "m_ox", where, defaults.m_ox, positive=True),
            m_si=_number(obj, "m_si", where, defaults.m_si, positive=True),
            doping_cm3=_number(obj, "doping_cm3", where, defaults.doping_cm3, positive=True),
        )
    except ValueError as exc:
        raise ConfigError(f"invalid {where}: {exc}") from exc


def _geometry(obj: dict, mat: MaterialStack, where: str = "geometry") -> CellGeometry:
    if not isinstance(obj, dict):
        raise ConfigError(f"{where} must be an object")
    _check_keys(obj, {"length_nm", "width_nm", "height_nm", "tunnel_oxide_nm",
                      "gate_oxide_nm", "coupling_ratio", "gap_nm"}, where)
    length = _number(obj, "length_nm", where, required=True, positive=True)
    height = _number(obj, "height_nm", where, required=True, positive=True)
    d_ox = _number(obj, "tunnel_oxide_nm", where, required=True, positive=True)
    width = _number(obj, "width_nm", where, None, positive=True)
    gap = _number(obj, "gap_nm", where, None, positive=True)
    has_cr = "coupling_ratio" in obj
    has_dg = "gate_oxide_nm" in obj
    if has_cr == has_dg:
        raise ConfigError(f"{where} needs exactly one of coupling_ratio or gate_oxide_nm")
    try:
        if has_cr:
            cr = _number(obj, "coupling_ratio", where, required=True)
            return cell_from_coupling_ratio(length, height, d_ox, cr,
                                            width=width, gap=gap, mat=mat)
        d_gate = _number(obj, "gate_oxide_nm", where, required=True, positive=True)
        return CellGeometry(length=length, width=length if width is None else width,
                            height=height, d_ox=d_ox, d_gate=d_gate, gap=gap)
    except ValueError as exc:
        raise ConfigError(f"invalid {where}: {exc}") from exc


def _environment(cfg: dict, where: str = "environment") -> decoherence.PhononEnvironment:
    obj = cfg.get("environment", {})
    if not isinstance(obj, dict):
        raise ConfigError(f"{where} must be an object")
    _check_keys(obj, {"gamma_ev", "sound_speed_m_s", "density_kg_m3",
                      "debye_temperature_k", "alpha"}, where)
    d = decoherence.PhononEnvironment()
    try:
        return decoherence.PhononEnvironment(
            coupling_ev=_number(obj, "gamma_ev", where, d.coupling_ev, positive=True),
            sound_speed=_number(obj, "sound_speed_m_s", where, d.sound_speed, positive=True),
            density=_number(obj, "density_kg_m3", where, d.density, positive=True),
            debye_temperature=_number(obj, "debye_temperature_k", where,
                                      d.debye_temperature, positive=True),
            ohmic_alpha=_number(obj, "alpha", where, d.ohmic_alpha),
        )
    except ValueError as exc:
        raise ConfigError(f"invalid {where}: {exc}") from exc


# ---------------------------------------------------------------- output

def _fmt(x) -> str:
    if isinstance(x, (float, np.floating)):
        return repr(float(x))
    return str(x)


def _write_csv(path: str | None, command: str, cfg: dict, columns: list[str],
               rows: list[tuple]) -> None:
    buf = io.StringIO()
    buf.write(f"# fgqa {command}\n")
    buf.write(f"# config sha256: {config_hash(cfg)}\n")
    buf.write(f"# columns: {','.join(columns)}\n")
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(columns)
    for row in rows:
        writer.writerow([_fmt(x) for x in row])
    text = buf.getvalue()
    if path is None:
        sys.stdout.write(text)
    else:
        try:
            with open(path, "w", encoding="utf-8", newline="") as fh:
                fh.write(text)
        except OSError as exc:
            raise ConfigError(f"cannot write output {path!r}: {exc}") from exc


# ---------------------------------------------------------------- derive

def _derive_row(length: float, cfg: dict, mat: MaterialStack):
    height = _number(cfg, "fg_height_nm", "config", required=True, positive=True)
    d_ox = _number(cfg, "tunnel_oxide_nm", "config", required=True, positive=True)
    cr = _number(cfg, "coupling_ratio", "config", required=True)
    v_cg = _number(cfg, "v_cg", "config", 0.0)
    threshold = _number(cfg, "normally_on_threshold_hz", "config", 1e3, positive=True)
    geom = cell_from_coupling_ratio(length, height, d_ox, cr, mat=mat)
    net = build_network(geom, mat, 3)
    params = charging.ising_parameters(
        charging.reduce_network(net, BiasSet.uniform(3)), 0.0)
    barrier = TunnelBarrier.from_stack(geom, mat)
    amplitude = tunnel_amplitude(geom, barrier, v_cg)
    device = classify(geom, barrier, threshold)
    env = _environment(cfg)
    exponent = decoherence.renormalization_exponent(env)
    delta_k = cfg.get("coherence_delta_kelvin")
    delta_hz = amplitude if delta_k is None else convert(float(delta_k), "K", "Hz")
    t_coh = decoherence.coherence_time(delta_hz, env.alpha) if delta_hz > 0 else float("inf")
    return (length, convert(params.j[0], "eV", "K"), convert(params.u_h, "eV", "K"),
            params.u_w, amplitude, device.value, exponent, t_coh)


def cmd_derive(cfg: dict, out: str | None, threads: int) -> int:
    _check_keys(cfg, {"schema_version", "lengths_nm", "tunnel_oxide_nm", "fg_height_nm",
                      "coupling_ratio", "material", "v_cg", "normally_on_threshold_hz",
                      "environment", "coherence_delta_kelvin"}, "config")
    lengths = cfg.get("lengths_nm", [])
    if not isinstance(lengths, list) or any(
            not isinstance(v, (int, float)) or isinstance(v, bool) or v <= 0
            for v in lengths):
        raise ConfigError("lengths_nm must be a list of positive numbers")
    mat = _material(cfg)
    rows = [_derive_row(float(length), cfg, mat) for length in lengths]
    _write_csv(out, "derive", cfg, ["L_nm", "J_K", "U_h_K", "U_w_eV", "tunnel_Hz",
                                    "device_class", "renorm_exponent", "t_coh_s"], rows)
    return EXIT_OK


# ---------------------------------------------------------------- sweep

_SWEEP_PARAMS = ("L", "d_ox", "Z_FG", "V_CG", "V_CG1-parabola")


def _sweep_grid(cfg: dict) -> np.ndarray:
    rng = cfg.get("range")
    if not isinstance(rng, dict):
        raise ConfigError("missing required object 'range'")
    _check_keys(rng, {"min", "max", "points"}, "range")
    lo = _number(rng, "min", "range", required=True)
    hi = _number(rng, "max", "range", required=True)
    pts = rng.get("points")
    if not isinstance(pts, int) or isinstance(pts, bool) or pts < 2:
        raise ConfigError("range.points must be an integer >= 2")
    if not lo < hi:
        raise ConfigError(f"range.min must be below range.max, got [{lo}, {hi}]")
    return np.linspace(lo, hi, pts)


def _geometry_cfg(cfg: dict) -> dict:
    geo = cfg.get("geometry")
    if not isinstance(geo, dict):
        raise ConfigError("missing required object 'geometry'")
    return geo


def _sweep_point(parameter: str, value: float, geo_cfg: dict, mat: MaterialStack,
                 v_cg: float):
    geo = dict(geo_cfg)
    if parameter == "L":
        geo["length_nm"] = value
        geo.pop("width_nm", None)      # width tracks L in a size sweep
        geo.pop("gap_nm", None)
    elif parameter == "d_ox":
        geo["tunnel_oxide_nm"] = value
    elif parameter == "Z_FG":
        geo["height_nm"] = value
    geom = _geometry(geo, mat)
    net = build_network(geom, mat, 3)
    params = charging.ising_parameters(
        charging.reduce_network(net, BiasSet.uniform(3)), 0.0)
    barrier = TunnelBarrier.from_stack(geom, mat)
    bias_v = value if parameter == "V_CG" else v_cg
    amplitude = tunnel_amplitude(geom, barrier, bias_v)
    if parameter == "V_CG":
        return (value, amplitude)
    return (value, convert(params.j[0], "eV", "K"), convert(params.u_h, "eV", "K"),
            params.u_w, amplitude)


def cmd_sweep(cfg: dict, out: str | None, threads: int) -> int:
    _check_keys(cfg, {"schema_version", "parameter", "range", "geometry", "material",
                      "v_cg", "n_values", "cell", "v_gate2", "v_sub", "tie_third"},
                "config")
    parameter = cfg.get("parameter")
    if parameter not in _SWEEP_PARAMS:
        raise ConfigError(f"parameter must be one of {_SWEEP_PARAMS}, got {parameter!r}")
    grid = _sweep_grid(cfg)
    mat = _material(cfg)
    geo_cfg = _geometry_cfg(cfg)

    if parameter == "V_CG1-parabola":
        geom = _geometry(geo_cfg, mat)
        net = build_network(geom, mat, 3)
        n_values = cfg.get("n_values", [-2, -1, 0, 1, 2])
        if (not isinstance(n_values, list) or not n_values
                or any(not isinstance(v, int) or isinstance(v, bool) for v in n_values)):
            raise ConfigError("n_values must be a non-empty list of integers")
        cell = cfg.get("cell", 1)
        if cell not in (1, 2, 3):
            raise ConfigError("cell must be 1, 2 or 3")
        v_grid, curves = charging.parabola_family(
            net, grid, n_values, cell=cell - 1,
            v_gate2=_number(cfg, "v_gate2", "config", 0.0),
            v_sub=_number(cfg, "v_sub", "config", 0.0),
            tie_third=bool(cfg.get("tie_third", True)))
        rows = [(v, n, curves[n][k]) for k, v in enumerate(v_grid) for n in n_values]
        _write_csv(out, "sweep", cfg, ["V_CG1_V", "n", "U_eV"], rows)
        return EXIT_OK

    v_cg = _number(cfg, "v_cg", "config", 0.0)
    work = [(parameter, float(v), geo_cfg, mat, v_cg) for v in grid]
    if threads > 1:
        with ThreadPoolExecutor(max_workers=threads) as pool:
            rows = list(pool.map(lambda args: _sweep_point(*args), work))
    else:
        rows = [_sweep_point(*args) for args in work]
    name = {"L": "L_nm", "d_ox": "d_ox_nm", "Z_FG": "z_fg_nm", "V_CG": "v_cg_V"}[parameter]
    if parameter == "V_CG":
        columns = [name, "tunnel_Hz"]
    else:
        columns = [name, "J_K", "U_h_K", "U_w_eV", "tunnel_Hz"]
    _write_csv(out, "sweep", cfg, columns, rows)
    return EXIT_OK


# ---------------------------------------------------------------- anneal

def _build_problem(cfg: dict) -> annealing.IsingModel:
    prob = cfg.get("problem")
    if not isinstance(prob, dict):
        raise ConfigError("missing required object 'problem'")
    kind = prob.get("kind")
    try:
        if kind == "chain":
            _check_keys(prob, {"kind", "h", "j"}, "problem")
            return annealing.chain_model(prob.get("h", []), prob.get("j", []))
        if kind == "grid":
            _check_keys(prob, {"kind", "rows", "cols", "h", "j"}, "problem")
            return annealing.grid_model(int(prob["rows"]), int(prob["cols"]),
                                        prob.get("h", 0.0), float(prob["j"]))
        if kind == "maxcut":
            _check_keys(prob, {"kind", "edges", "n_sites"}, "problem")
            edges = prob.get("edges")
            if not isinstance(edges, list) or not edges:
                raise ConfigError("problem.edges must be a non-empty list")
            return annealing.maxcut_to_ising(edges, prob.get("n_sites"))
        if kind == "fg_grid":
            _check_keys(prob, {"kind", "rows", "cols", "geometry", "material",
                               "v_cg", "n_g"}, "problem")
            mat = _material(prob, "problem.material")
            geom = _geometry(prob.get("geometry"), mat, "problem.geometry")
            return annealing.fg_grid_model(
                geom, mat, BiasSet.uniform(3), int(prob["rows"]), int(prob["cols"]),
                n_g=_number(prob, "n_g", "problem", 0.0),
                v_cg=_number(prob, "v_cg", "problem", 0.0))
    except (KeyError, TypeError) as exc:
        raise ConfigError(f"invalid problem block: {exc}") from exc
    raise ConfigError(f"problem.kind must be chain, grid, maxcut or fg_grid, got {kind!r}")


def _build_schedule(cfg: dict, model: annealing.IsingModel) -> annealing.Schedule:
    sched = cfg.get("schedule", {})
    if not isinstance(sched, dict):
        raise ConfigError("schedule must be an object")
    _check_keys(sched, {"delta0_ev", "profile", "t_total", "steps", "floor_ratio",
                        "time_unit"}, "schedule")
    delta0 = _number(sched, "delta0_ev", "schedule", model.delta0)
    if delta0 is None:
        raise ConfigError("schedule.delta0_ev is required for this problem kind")
    steps = sched.get("steps", 2000)
    if not isinstance(steps, int) or isinstance(steps, bool) or steps < 1:
        raise ConfigError("schedule.steps must be a positive integer")
    try:
        return annealing.Schedule(
            delta0=delta0,
            t_total=_number(sched, "t_total", "schedule", 200.0, positive=True),
            steps=steps,
            profile=sched.get("profile", "linear"),
            floor_ratio=_number(sched, "floor_ratio", "schedule", 1e-6, positive=True),
            time_unit=sched.get("time_unit", "natural"))
    except ValueError as exc:
        raise ConfigError(f"invalid schedule: {exc}") from exc


def cmd_anneal(cfg: dict, out: str | None, seed: int, threads: int) -> int:
    _check_keys(cfg, {"schema_version", "problem", "schedule", "shots"}, "config")
    model = _build_problem(cfg)
    schedule = _build_schedule(cfg, model)
    shots = cfg.get("shots", 4096)
    if not isinstance(shots, int) or isinstance(shots, bool) or shots < 1:
        raise ConfigError("shots must be a positive integer")

    record_every = max(1, schedule.steps // 200)
    result = annealing.evolve(model, schedule, record_every=record_every)
    histogram = annealing.measure(result.psi, shots, seed)

    diag = annealing.diagonal_energies(model)
    hist_rows = []
    for state, count in sorted(histogram.items(), key=lambda kv: (-kv[1], kv[0])):
        idx = int(state[::-1], 2)
        hist_rows.append((state, count, count / shots, float(diag[idx])))
    trace_rows = list(zip(result.times, result.deltas, result.energies))

    if out is not None:
        _write_csv(f"{out}_histogram.csv", "anneal", cfg,
                   ["state", "count", "frequency", "energy_eV"], hist_rows)
        _write_csv(f"{out}_trace.csv", "anneal", cfg,
                   ["t", "delta_eV", "energy_eV"], trace_rows)

    best_state, best_count = max(histogram.items(), key=lambda kv: (kv[1], kv[0]))
    best_energy = float(diag[int(best_state[::-1], 2)])
    print(f"sites: {model.n_sites}  topology: {model.topology}")
    print(f"most frequent state: {best_state}  ({best_count}/{shots} shots, "
          f"energy {best_energy!r} eV)")
    if model.n_sites <= annealing.MAX_BRUTE_FORCE_SITES:
        ground = annealing.brute_force_ground_state(model)
        in_ground = sum(histogram.get(s, 0) for s in ground.states)
        print(f"exact ground energy: {ground.energy!r} eV over {len(ground.states)} "
              f"state(s); ground-state shot frequency: {in_ground / shots:.4f}")
    if not np.any(model.h) and model.couplings:
        total = sum(w for (_, _, w) in model.couplings)
        cut = annealing.cut_value(model, best_state)
        print(f"cut value of most frequent state: {cut!r} (total edge weight {total!r})")
    return EXIT_OK


# ---------------------------------------------------------------- decohere

def cmd_decohere(cfg: dict, out: str | None) -> int:
    _check_keys(cfg, {"schema_version", "environment", "delta_kelvin", "time_points",
                      "max_time_factor"}, "config")
    env = _environment(cfg)
    deltas_k = cfg.get("delta_kelvin", [10.0, 100.0])
    if not isinstance(deltas_k, list) or not deltas_k or any(
            not isinstance(v, (int, float)) or isinstance(v, bool) or v <= 0
            for v in deltas_k):
        raise ConfigError("delta_kelvin must be a non-empty list of positive numbers")
    points = cfg.get("time_points", 200)
    if not isinstance(points, int) or isinstance(points, bool) or points < 2:
        raise ConfigError("time_points must be an integer >= 2")
    factor = _number(cfg, "max_time_factor", "config", 3.0, positive=True)

    exponent = decoherence.renormalization_exponent(env)
    print(f"renormalization exponent: {exponent!r}")
    print(f"ohmic alpha: {env.alpha!r}")
    rows = []
    for dk in deltas_k:
        delta_hz = convert(float(dk), "K", "Hz")
        t_coh = decoherence.coherence_time(delta_hz, env.alpha)
        rate = decoherence.superohmic_rate(delta_hz, env)
        print(f"delta = {float(dk)!r} K = {delta_hz!r} Hz: "
              f"t_coh = {t_coh!r} s, superohmic rate at bare delta = {rate!r} 1/s, "
              f"dressed delta = {decoherence.renormalized_tunneling(delta_hz, env)!r} Hz")
        for t in np.linspace(0.0, factor * t_coh, points):
            pc = decoherence.p_coherent(t, delta_hz, env.alpha)
            pi = decoherence.p_incoherent(t, delta_hz, env.alpha)
            rows.append((float(dk), t, pc, pi, pc + pi))
    if out is not None:
        _write_csv(out, "decohere", cfg,
                   ["delta_K", "t_s", "p_coh", "p_inc", "p_total"], rows)
    return EXIT_OK


# ---------------------------------------------------------------- entry

def _parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="fgqa",
                                     description="floating-gate quantum-annealer toolkit")
    sub = parser.add_subparsers(dest="command", required=True)
    for name, help_text in (("derive", "device datasheet, one row per cell size"),
                            ("sweep", "parameter sweep to CSV"),
                            ("anneal", "state-vector annealing run"),
                            ("decohere", "phonon decoherence report")):
        p = sub.add_parser(name, help=help_text)
        p.add_argument("--config", required=True, help="JSON config path")
        p.add_argument("--out", default=None, help="output CSV path (anneal: prefix)")
        p.add_argument("--seed", type=int, default=0, help="measurement seed")
        p.add_argument("--threads", type=int, default=1, help="sweep worker threads")
    return parser


def main(argv=None) -> int:
    args = _parser().parse_args(argv)
    try:
        cfg = _load(args.config)
        if args.command == "derive":
            return cmd_derive(cfg, args.out, args.threads)
        if args.command == "sweep":
            return cmd_sweep(cfg, args.out, args.threads)
        if args.command == "anneal":
            return cmd_anneal(cfg, args.out, args.seed, args.threads)
        return cmd_decohere(cfg, args.out)
    except ConfigError as exc:
        print(f"config error: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    except (BarrierCollapseError, ValueError) as exc:
        print(f"physics error: {exc}", file=sys.stderr)
        return EXIT_PHYSICS


if __name__ == "__main__":
    sys.exit(main())
