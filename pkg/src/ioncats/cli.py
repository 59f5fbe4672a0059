"""Command-line front end: simulate, validate, sweep, wigner.

Exit codes: 0 success, 1 validation-suite failure, 2 config/usage error,
3 Fock-truncation error.
"""

from __future__ import annotations

import argparse
import json
import math
import sys
from concurrent.futures import ProcessPoolExecutor
from pathlib import Path

import numpy as np

from . import engine, motional, validation
from .errors import ConfigError, IonCatsError, TruncationError

EXIT_OK = 0
EXIT_FAIL = 1
EXIT_CONFIG = 2
EXIT_TRUNCATION = 3

_SIM_KEYS = {
    "protocol": str,
    "N": int,
    "alpha_target": (list, int, float),
    "n_max": int,
    "rabi": (int, float),
    "eta": (int, float),
    "lam": (int, float),
    "detuning": (int, float),
    "grid": dict,
    "out_dir": str,
    "seed": int,
    "format": str,
    "shots": int,
}
_GRID_KEYS = {"x_range": list, "p_range": list, "points": int, "target": str}
_REQUIRED = ("protocol", "N", "alpha_target")


def _check_keys(doc: dict, allowed: dict, context: str) -> None:
    unknown = set(doc) - set(allowed)
    if unknown:
        raise ConfigError(f"unknown {context} keys: {sorted(unknown)}")
    for key, val in doc.items():
        types = allowed[key]
        if not isinstance(val, types):
            raise ConfigError(f"{context} key {key!r} has wrong type {type(val).__name__}")


def _parse_alpha(raw) -> complex:
    if isinstance(raw, (int, float)):
        return complex(raw)
    if isinstance(raw, list) and len(raw) == 2 and all(isinstance(v, (int, float)) for v in raw):
        return complex(raw[0], raw[1])
    raise ConfigError("alpha_target must be a number or an [re, im] pair")


def load_config(path) -> dict:
    try:
        with open(path) as fh:
            doc = json.load(fh)
    except OSError as exc:
        raise ConfigError(f"cannot read config: {exc}") from exc
    except json.JSONDecodeError as exc:
        raise ConfigError(f"config is not valid JSON: {exc}") from exc
    if not isinstance(doc, dict):
        raise ConfigError("config root must be a JSON object")
    return doc


def validate_sim_config(doc: dict) -> dict:
    _check_keys(doc, _SIM_KEYS, "config")
    for key in _REQUIRED:
        if key not in doc:
            raise ConfigError(f"missing required config key {key!r}")
    cfg = dict(doc)
    cfg["alpha_target"] = _parse_alpha(doc["alpha_target"])
    if cfg["protocol"] not in engine.PROTOCOLS:
        raise ConfigError(f"protocol must be one of {engine.PROTOCOLS}")
    if cfg["N"] < 1:
        raise ConfigError("N must be >= 1")
    if abs(cfg["alpha_target"]) == 0:
        raise ConfigError("alpha_target must be nonzero")
    if cfg.get("format", "json") not in ("json", "csv"):
        raise ConfigError("format must be 'json' or 'csv'")
    if "grid" in cfg:
        _check_keys(cfg["grid"], _GRID_KEYS, "grid")
        grid = cfg["grid"]
        for rng_key in ("x_range", "p_range"):
            rng = grid.get(rng_key, [-8.0, 8.0])
            if len(rng) != 2 or rng[0] >= rng[1]:
                raise ConfigError(f"grid {rng_key} must be [lo, hi] with lo < hi")
        if grid.get("points", 201) < 2:
            raise ConfigError("grid points must be >= 2")
        if grid.get("target", "all_excited") not in engine.TARGETS:
            raise ConfigError(f"grid target must be one of {engine.TARGETS}")
    return cfg


def _complex_pairs(arr: np.ndarray) -> list:
    flat = np.asarray(arr).ravel()
    return [[float(v.real), float(v.imag)] for v in flat]


def _pulse_dict(p: engine.PulseSpec) -> dict:
    d = {"kind": p.kind}
    for name in ("k", "rabi", "eta", "duration", "phase", "detuning", "lam", "theta", "target"):
        v = getattr(p, name)
        if v is not None:
            d[name] = v
    if p.kind == "resonant_bichromatic":
        d["rabi_time_product"] = p.rabi * p.duration
    return d


def result_document(res: engine.ProtocolResult, seed=None, counts=None) -> dict:
    doc = {
        "protocol": res.name,
        "N": res.N,
        "alpha": [res.alpha.real, res.alpha.imag],
        "options": res.options,
        "state_norm": res.final.norm,
        "n_max": res.final.space.n_max,
        "final_amplitudes": _complex_pairs(res.final.amplitudes),
        "trace": [_pulse_dict(p) for p in res.trace],
        "probabilities": {t: res.conditionals[t][1] for t in engine.TARGETS},
        "conditionals": {},
    }
    for target in engine.TARGETS:
        state, prob = res.conditionals[target]
        doc["conditionals"][target] = {
            "probability": prob,
            "amplitudes": None if state is None else _complex_pairs(state.amplitudes),
        }
    if seed is not None:
        doc["seed"] = seed
    if counts is not None:
        doc["sample_counts"] = counts
    return doc


def _write_json(doc: dict, path: Path) -> None:
    path.write_text(json.dumps(doc, sort_keys=True, indent=1) + "\n")


def _grid_axes(state, grid_cfg: dict) -> tuple[np.ndarray, np.ndarray]:
    bx, bp = motional.suggest_bounds(state)
    # keep the default grid inside the radius where the truncated evaluation
    # is reliable (explicit ranges are still allowed to exceed it and fail)
    r_ok = math.sqrt(2) * (math.sqrt(state.space.n_max) + 4.0)
    corner = math.hypot(bx, bp)
    if corner > r_ok:
        bx *= r_ok / corner
        bp *= r_ok / corner
    xr = grid_cfg.get("x_range", [-bx, bx])
    pr = grid_cfg.get("p_range", [-bp, bp])
    points = grid_cfg.get("points", 201)
    return np.linspace(xr[0], xr[1], points), np.linspace(pr[0], pr[1], points)


def _wigner_from_result(res: engine.ProtocolResult, grid_cfg: dict) -> motional.WignerGrid:
    target = grid_cfg.get("target", "all_excited")
    state = res.conditional_state(target)
    xs, ps = _grid_axes(state, grid_cfg)
    meta = {
        "N": res.N,
        "alpha_magnitude": f"{abs(res.alpha):.15g}",
        "protocol": res.name,
        "target": target,
    }
    return motional.wigner(state, xs, ps, meta=meta)


def cmd_simulate(args) -> int:
    cfg = validate_sim_config(load_config(args.config))
    out_dir = Path(args.out or cfg.get("out_dir", "."))
    out_dir.mkdir(parents=True, exist_ok=True)
    kwargs = {}
    for key in ("rabi", "eta", "lam", "detuning", "n_max"):
        if key in cfg:
            kwargs[key] = cfg[key]
    res = engine.run_protocol(cfg["protocol"], cfg["N"], cfg["alpha_target"], **kwargs)
    seed = args.seed if args.seed is not None else cfg.get("seed")
    counts = None
    if cfg.get("shots"):
        counts = engine.sample_outcomes(res, cfg["shots"], seed or 0)
    doc = result_document(res, seed=seed, counts=counts)
    _write_json(doc, out_dir / "result.json")
    if "grid" in cfg:
        grid = _wigner_from_result(res, cfg["grid"])
        grid.to_csv(out_dir / f"wigner_{cfg['grid'].get('target', 'all_excited')}.csv")
    return EXIT_OK


def cmd_validate(args) -> int:
    Ns = (1, 2) if args.quick else (1, 2, 3, 4)
    rows = validation.oracle_equivalence_rows(Ns=Ns, seed=args.seed or 20260823)
    worst = min(r["fidelity"] for r in rows)
    print(f"{'N':>3} {'k':>3} {'trial':>6} {'fidelity':>18} {'status':>8}")
    ok = True
    for r in rows:
        passed = r["fidelity"] >= validation.FIDELITY_THRESHOLD
        ok = ok and passed
        print(f"{r['N']:>3} {r['k']:>3} {r['trial']:>6} {r['fidelity']:>18.12f} "
              f"{'pass' if passed else 'FAIL':>8}")
    print(f"worst fidelity: {worst:.12f}")
    return EXIT_OK if ok else EXIT_FAIL


_SWEEP_KEYS = dict(_SIM_KEYS, sweep=dict)


def _sweep_point(payload: dict) -> dict:
    cfg = dict(payload["base"])
    axis, value = payload["axis"], payload["value"]
    if axis in ("N",):
        cfg["N"] = int(value)
    elif axis == "alpha":
        cfg["alpha_target"] = complex(value)
    if axis in ("N", "alpha"):
        kwargs = {k: cfg[k] for k in ("rabi", "eta", "lam", "detuning", "n_max") if k in cfg}
        res = engine.run_protocol(cfg["protocol"], cfg["N"], cfg["alpha_target"], **kwargs)
        return {
            "axis": axis,
            "value": value,
            "p_all_excited": res.probability("all_excited"),
            "p_all_ground": res.probability("all_ground"),
        }
    if axis == "eta":
        fid = validation.dispersive_fidelity(eta=float(value))
        return {"axis": axis, "value": value, "dispersive_fidelity": fid}
    if axis == "delta":
        fid = validation.dispersive_fidelity(eta=cfg.get("eta", 0.1), detuning=float(value))
        return {"axis": axis, "value": value, "dispersive_fidelity": fid}
    raise ConfigError(f"unknown sweep axis {axis!r}")


def cmd_sweep(args) -> int:
    doc = load_config(args.config)
    _check_keys(doc, _SWEEP_KEYS, "config")
    sweep = doc.get("sweep")
    if not isinstance(sweep, dict) or "axis" not in sweep:
        raise ConfigError("sweep config needs a 'sweep' object with an 'axis'")
    unknown = set(sweep) - {"axis", "values"}
    if unknown:
        raise ConfigError(f"unknown sweep keys: {sorted(unknown)}")
    axis = sweep["axis"]
    if axis not in ("N", "alpha", "eta", "delta"):
        raise ConfigError("sweep axis must be one of N, alpha, eta, delta")
    values = sweep.get("values", [])
    if not values:
        raise ConfigError("sweep values must be a non-empty list")
    base = {k: v for k, v in doc.items() if k != "sweep"}
    if axis in ("N", "alpha"):
        base = validate_sim_config(
            dict(base, N=base.get("N", 1), alpha_target=base.get("alpha_target", 1.0))
        )
    payloads = [{"base": base, "axis": axis, "value": v} for v in values]
    if args.jobs and args.jobs > 1:
        with ProcessPoolExecutor(max_workers=args.jobs) as pool:
            rows = list(pool.map(_sweep_point, payloads))
    else:
        rows = [_sweep_point(p) for p in payloads]
    out_dir = Path(args.out or doc.get("out_dir", "."))
    out_dir.mkdir(parents=True, exist_ok=True)
    cols = sorted({k for r in rows for k in r} - {"axis"})
    lines = [",".join(["axis"] + cols)]
    for r in rows:
        lines.append(",".join([str(r["axis"])] + [f"{r.get(c, '')}" for c in cols]))
    (out_dir / "sweep.csv").write_text("\n".join(lines) + "\n")
    print("\n".join(lines))
    return EXIT_OK


def cmd_wigner(args) -> int:
    doc = json.loads(Path(args.state_file).read_text())
    target = args.target
    cond = doc.get("conditionals", {}).get(target)
    if not cond or cond.get("amplitudes") is None:
        raise ConfigError(f"state file has no conditional amplitudes for {target!r}")
    amps = np.array([complex(re, im) for re, im in cond["amplitudes"]])
    space = motional.FockSpace(len(amps) - 1)
    state = motional.MotionalState(amplitudes=amps, space=space)
    grid_cfg = {}
    if args.config:
        grid_cfg = load_config(args.config)
        _check_keys(grid_cfg, _GRID_KEYS, "grid")
    xs, ps = _grid_axes(state, grid_cfg)
    meta = {"N": doc.get("N"), "alpha_magnitude": abs(complex(*doc.get("alpha", [0, 0]))),
            "protocol": doc.get("protocol"), "target": target}
    grid = motional.wigner(state, xs, ps, meta=meta)
    out = Path(args.out or "wigner.csv")
    if out.is_dir():
        out = out / f"wigner_{target}.csv"
    if args.format == "json":
        out.write_text(grid.to_json() + "\n")
    else:
        grid.to_csv(out)
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="ioncats", description=__doc__)
    sub = parser.add_subparsers(dest="command", required=True)

    p_sim = sub.add_parser("simulate", help="run a protocol from a JSON config")
    p_sim.add_argument("--config", required=True)
    p_sim.add_argument("--out", default=None, help="output directory (overrides config)")
    p_sim.add_argument("--seed", type=int, default=None)

    p_val = sub.add_parser("validate", help="engine-vs-oracle equivalence table")
    p_val.add_argument("--quick", action="store_true", help="N <= 2 subset")
    p_val.add_argument("--seed", type=int, default=None)

    p_swp = sub.add_parser("sweep", help="sweep a parameter axis, write CSV")
    p_swp.add_argument("--config", required=True)
    p_swp.add_argument("--out", default=None)
    p_swp.add_argument("--jobs", type=int, default=1)

    p_wig = sub.add_parser("wigner", help="Wigner grid from a saved result file")
    p_wig.add_argument("state_file")
    p_wig.add_argument("--target", default="all_excited", choices=engine.TARGETS)
    p_wig.add_argument("--config", default=None, help="optional grid config JSON")
    p_wig.add_argument("--out", default=None)
    p_wig.add_argument("--format", default="csv", choices=("csv", "json"))
    return parser


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    handler = {
        "simulate": cmd_simulate,
        "validate": cmd_validate,
        "sweep": cmd_sweep,
        "wigner": cmd_wigner,
    }[args.command]
    try:
        return handler(args)
    except TruncationError as exc:
        print(f"truncation error: {exc}", file=sys.stderr)
        return EXIT_TRUNCATION
    except (ConfigError, IonCatsError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_CONFIG


if __name__ == "__main__":
    sys.exit(main())
