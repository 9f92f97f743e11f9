"""Command-line sweeps and optimization runs with reproducible outputs.

Four subcommands: rate-sweep (closed form vs Monte-Carlo over SNR and
surface sizes), ee-sweep (efficiency vs N_s per transmit power), ee-surface
(efficiency over an (N_s, N_r) box) and optimize (single instance report).
Every run echoes its fully resolved configuration, seed and package version
into <out>/manifest.json; rerunning from a manifest reproduces the output
files byte for byte, whatever --threads is.
"""

from __future__ import annotations

import argparse
import concurrent.futures
import csv
import json
import sys
from pathlib import Path

import numpy as np

from . import __version__
from .channel import (VarianceProfile, import_variance_csv,
                      isotropic_variances, uniform_variances)
from .geometry import WavenumberLattice, build_lattice
from .link import (LN2, LinkConfig, closed_form_rate, export_rate_csv,
                   monte_carlo_rate, snr_to_pu)
from .energy import PowerModel
from .optimizer import (NumericalError, build_problem, ee_objective,
                        optimize, optimize_ns, to_report)

EXIT_OK = 0
EXIT_CONFIG = 2
EXIT_NUMERICAL = 3


class ConfigError(ValueError):
    """Bad or inconsistent run configuration."""


# ---------------------------------------------------------------------------
# config plumbing

_POWER_KEYS = {"P_d", "L_d", "P_v", "Q", "P_f", "zeta"}

_COMMON_KEYS = {
    "scenario", "K", "sigma2_w", "profile", "normalize_profile", "nats",
    "seed", "out_dir", "power",
}
_ALLOWED = {
    "rate-sweep": _COMMON_KEYS | {"L", "L_s", "L_r", "N", "snr_db", "trials",
                                  "methods"},
    "ee-sweep": _COMMON_KEYS | {"L_s", "L_r", "p_u", "N_r", "N_s_sweep"},
    "ee-surface": _COMMON_KEYS | {"L_s", "L_r", "p_u", "N_s_sweep", "N_r_sweep"},
    "optimize": _COMMON_KEYS | {"L_s", "L_r", "p_u"},
}


def _load_config(path: str) -> dict:
    try:
        with open(path) as fh:
            raw = json.load(fh)
    except OSError as exc:
        raise ConfigError("cannot read config %s: %s" % (path, exc)) from exc
    except json.JSONDecodeError as exc:
        raise ConfigError("%s:%d:%d: %s" % (path, exc.lineno, exc.colno, exc.msg)) from exc
    if not isinstance(raw, dict):
        raise ConfigError("%s: top level must be an object" % path)
    # a manifest doubles as a config: unwrap its echoed configuration
    if "config" in raw and isinstance(raw["config"], dict):
        raw = raw["config"]
    return raw


def _check_keys(cfg: dict, command: str) -> None:
    allowed = _ALLOWED[command]
    for key in cfg:
        if key not in allowed:
            raise ConfigError("unknown key %r for %s (allowed: %s)"
                              % (key, command, ", ".join(sorted(allowed))))
    if "power" in cfg:
        if not isinstance(cfg["power"], dict):
            raise ConfigError("power: must be an object")
        for key in cfg["power"]:
            if key not in _POWER_KEYS:
                raise ConfigError("power.%s: unknown constant" % key)


def _num(cfg: dict, key: str, default, positive=True):
    val = cfg.get(key, default)
    if val is None:
        return None
    if not isinstance(val, (int, float)) or isinstance(val, bool):
        raise ConfigError("%s: expected a number, got %r" % (key, val))
    if positive and not val > 0:
        raise ConfigError("%s: must be positive" % key)
    return float(val)


def _int(cfg: dict, key: str, default, minimum=1):
    val = cfg.get(key, default)
    if not isinstance(val, int) or isinstance(val, bool):
        raise ConfigError("%s: expected an integer, got %r" % (key, val))
    if val < minimum:
        raise ConfigError("%s: must be >= %d" % (key, minimum))
    return val


def _resolve_profile(cfg: dict, lattice_s: WavenumberLattice,
                     lattice_r: WavenumberLattice, K: int) -> VarianceProfile:
    sel = cfg.get("profile", "isotropic")
    normalize = cfg.get("normalize_profile", True)
    if not isinstance(normalize, bool):
        raise ConfigError("normalize_profile: expected true/false")
    if sel == "isotropic":
        return isotropic_variances(lattice_s, lattice_r, K, normalize=normalize)
    if sel == "uniform":
        return uniform_variances(len(lattice_s), len(lattice_r), K)
    if isinstance(sel, dict) and set(sel) == {"csv"}:
        try:
            prof = import_variance_csv(sel["csv"], lattice_s, lattice_r)
        except (OSError, ValueError) as exc:
            raise ConfigError("profile.csv: %s" % exc) from exc
        if prof.K != K:
            raise ConfigError("profile.csv: has %d users, config says %d"
                              % (prof.K, K))
        return prof
    raise ConfigError("profile: expected 'isotropic', 'uniform' or {\"csv\": path}")


def _power_model(cfg: dict, K: int, p_u: float) -> PowerModel:
    kw = dict(cfg.get("power", {}))
    for key, val in kw.items():
        if not isinstance(val, (int, float)) or isinstance(val, bool):
            raise ConfigError("power.%s: expected a number" % key)
    try:
        return PowerModel(K=K, p_u=p_u, **kw)
    except ValueError as exc:
        raise ConfigError("power: %s" % exc) from exc


def _sweep_values(cfg: dict, key: str, dof: int) -> list[int]:
    """Integer sweep: {"start","stop","step"} (inclusive), values, or default."""
    spec = cfg.get(key)
    if spec is None:
        return list(range(dof, dof + 401, 5))
    if isinstance(spec, list):
        vals = [dof if v == "dof" else v for v in spec]
        if not vals or not all(isinstance(v, int) and not isinstance(v, bool)
                               and v >= 1 for v in vals):
            raise ConfigError("%s: expected positive integers or 'dof'" % key)
        return vals
    if isinstance(spec, dict) and set(spec) <= {"start", "stop", "step"}:
        start = spec.get("start", "dof")
        start = dof if start == "dof" else start
        stop = spec.get("stop", start + 400)
        step = spec.get("step", 1)
        if not all(isinstance(v, int) and not isinstance(v, bool)
                   for v in (start, stop, step)):
            raise ConfigError("%s: start/stop/step must be integers" % key)
        if start < 1 or stop < start or step < 1:
            raise ConfigError("%s: need 1 <= start <= stop and step >= 1" % key)
        return list(range(start, stop + 1, step))
    raise ConfigError("%s: expected a list or {start, stop, step}" % key)


def _ensure_out(out_dir: str) -> Path:
    path = Path(out_dir)
    path.mkdir(parents=True, exist_ok=True)
    return path


def _write_manifest(out: Path, command: str, cfg: dict) -> None:
    doc = {"command": command, "version": __version__,
           "seed": cfg.get("seed", 0), "config": cfg}
    with open(out / "manifest.json", "w") as fh:
        json.dump(doc, fh, indent=2, sort_keys=True)
        fh.write("\n")


def _fmt(x) -> str:
    return repr(float(x))


# ---------------------------------------------------------------------------
# subcommand runners


def run_rate_sweep(cfg: dict, out_dir: str, threads: int) -> None:
    """Closed-form and Monte-Carlo sum rates over (surface, N, SNR)."""
    _check_keys(cfg, "rate-sweep")
    K = _int(cfg, "K", 3)
    sigma2_w = _num(cfg, "sigma2_w", 1.0)
    trials = _int(cfg, "trials", 1000, minimum=2)
    seed = _int(cfg, "seed", 0, minimum=0)
    nats = bool(cfg.get("nats", False))
    methods = cfg.get("methods", ["th", "mc"])
    if (not isinstance(methods, list) or not methods
            or any(m not in ("th", "mc") for m in methods)):
        raise ConfigError("methods: subset of ['th', 'mc']")

    if "L" in cfg:
        if "L_s" in cfg or "L_r" in cfg:
            raise ConfigError("give either L or L_s/L_r, not both")
        Ls = cfg["L"] if isinstance(cfg["L"], list) else [cfg["L"]]
        pairs = [(l, l) for l in Ls]
    else:
        ls = cfg.get("L_s", 1.0)
        lr = cfg.get("L_r", ls)
        ls = ls if isinstance(ls, list) else [ls]
        lr = lr if isinstance(lr, list) else [lr]
        if len(ls) != len(lr):
            raise ConfigError("L_s and L_r lists must have equal length")
        pairs = list(zip(ls, lr))
    for l_s, l_r in pairs:
        if not isinstance(l_s, (int, float)) or not isinstance(l_r, (int, float)) \
                or l_s <= 0 or l_r <= 0:
            raise ConfigError("surface sides must be positive numbers")

    n_spec = cfg.get("N", ["dof"])
    if not isinstance(n_spec, list):
        n_spec = [n_spec]
    for v in n_spec:
        if v != "dof" and (not isinstance(v, int) or isinstance(v, bool) or v < 1):
            raise ConfigError("N: entries must be positive integers or 'dof'")

    snrs = cfg.get("snr_db", [0.0])
    if not isinstance(snrs, list):
        snrs = [snrs]
    if not snrs or not all(isinstance(s, (int, float)) and not isinstance(s, bool)
                           for s in snrs):
        raise ConfigError("snr_db: expected a list of numbers")

    # build the work list in a fixed order; the row order and every seed
    # depend only on this enumeration, never on scheduling
    points = []
    for l_s, l_r in pairs:
        lat_s = build_lattice(l_s, l_s)
        lat_r = build_lattice(l_r, l_r)
        profile = _resolve_profile(cfg, lat_s, lat_r, K)
        for nv in n_spec:
            N_s = len(lat_s) if nv == "dof" else nv
            N_r = len(lat_r) if nv == "dof" else nv
            for snr in snrs:
                for method in methods:
                    points.append((l_s, l_r, N_s, N_r, float(snr), method, profile))

    def compute(idx: int):
        l_s, l_r, N_s, N_r, snr, method, profile = points[idx]
        link = LinkConfig(p_u=snr_to_pu(snr, sigma2_w), K=K, sigma2_w=sigma2_w,
                          trials=trials, nats=nats)
        if method == "th":
            res = closed_form_rate(profile, link, N_s, N_r)
        else:
            res = monte_carlo_rate(profile, link, N_s, N_r, seed=[seed, idx])
        return {"snr_db": snr, "L_s": l_s, "L_r": l_r, "N_s": N_s, "N_r": N_r,
                "K": K, "method": method, "sum_rate": res.sum_rate}

    if threads > 1:
        with concurrent.futures.ThreadPoolExecutor(max_workers=threads) as ex:
            rows = list(ex.map(compute, range(len(points))))
    else:
        rows = [compute(i) for i in range(len(points))]

    out = _ensure_out(out_dir)
    export_rate_csv(out / "rates.csv", rows)
    _write_manifest(out, "rate-sweep", cfg)


def _scenario_problem(cfg: dict, p_u: float):
    """Shared setup for the efficiency commands: lattices, profile, problem."""
    K = _int(cfg, "K", 3)
    sigma2_w = _num(cfg, "sigma2_w", 1.0)
    l_s = _num(cfg, "L_s", 5.0)
    l_r = _num(cfg, "L_r", 1.0)
    lat_s = build_lattice(l_s, l_s)
    lat_r = build_lattice(l_r, l_r)
    profile = _resolve_profile(cfg, lat_s, lat_r, K)
    link = LinkConfig(p_u=p_u, K=K, sigma2_w=sigma2_w,
                      nats=bool(cfg.get("nats", False)))
    model = _power_model(cfg, K, p_u)
    try:
        prob = build_problem(profile, link, model, len(lat_s), len(lat_r))
    except ValueError as exc:
        raise ConfigError(str(exc)) from exc
    return prob, link


def _unit_scale(cfg: dict) -> float:
    """ee_objective works in nats; published values default to bits."""
    return 1.0 if cfg.get("nats", False) else 1.0 / LN2


def run_ee_sweep(cfg: dict, out_dir: str, threads: int) -> None:
    """Efficiency vs N_s, one curve per transmit power, N_r frozen."""
    _check_keys(cfg, "ee-sweep")
    pus = cfg.get("p_u", [0.001, 0.01, 1.0])
    if not isinstance(pus, list):
        pus = [pus]
    if not pus or not all(isinstance(p, (int, float)) and not isinstance(p, bool)
                          and p > 0 for p in pus):
        raise ConfigError("p_u: expected positive numbers")
    scale = _unit_scale(cfg)

    out = _ensure_out(out_dir)
    with open(out / "ee_sweep.csv", "w", newline="") as fh:
        w = csv.writer(fh, lineterminator="\n")
        w.writerow(["p_u", "N_s", "ee", "is_opt"])
        for p_u in pus:
            prob, _ = _scenario_problem(cfg, float(p_u))
            nr_sel = cfg.get("N_r", "opt")
            if nr_sel == "opt":
                n_r_fixed = optimize(prob).N_r_opt
            elif isinstance(nr_sel, int) and not isinstance(nr_sel, bool) \
                    and nr_sel >= prob.n_r:
                n_r_fixed = nr_sel
            else:
                raise ConfigError("N_r: expected 'opt' or an integer >= n_r")
            ns_values = _sweep_values(cfg, "N_s_sweep", prob.n_s)
            ee = ee_objective(prob, np.asarray(ns_values, dtype=float),
                              float(n_r_fixed)) * scale
            for n_s, val in zip(ns_values, ee):
                w.writerow([_fmt(p_u), n_s, _fmt(val), 0])
            # analytic optimum marker on the same (frozen N_r) curve
            try:
                ns_opt, ee_opt = optimize_ns(prob, n_r_fixed)
            except NumericalError:
                continue  # monotone curve (e.g. P_1 = 0): no marker
            w.writerow([_fmt(p_u), ns_opt, _fmt(ee_opt * scale), 1])
    _write_manifest(out, "ee-sweep", cfg)


def run_ee_surface(cfg: dict, out_dir: str, threads: int) -> None:
    """Efficiency over an inclusive (N_s, N_r) box plus argmax summary rows."""
    _check_keys(cfg, "ee-surface")
    p_u = _num(cfg, "p_u", 0.001)
    prob, _ = _scenario_problem(cfg, p_u)
    scale = _unit_scale(cfg)
    ns_values = _sweep_values(cfg, "N_s_sweep", prob.n_s)
    nr_values = _sweep_values(cfg, "N_r_sweep", prob.n_r)
    ns_arr = np.asarray(ns_values, dtype=float)
    nr_arr = np.asarray(nr_values, dtype=float)
    ee = ee_objective(prob, ns_arr[:, None], nr_arr[None, :]) * scale

    out = _ensure_out(out_dir)
    with open(out / "ee_surface.csv", "w", newline="") as fh:
        w = csv.writer(fh, lineterminator="\n")
        w.writerow(["kind", "N_s", "N_r", "ee"])
        for i, n_s in enumerate(ns_values):
            for j, n_r in enumerate(nr_values):
                w.writerow(["grid", n_s, n_r, _fmt(ee[i, j])])
        gi, gj = np.unravel_index(int(np.argmax(ee)), ee.shape)
        w.writerow(["grid_argmax", ns_values[gi], nr_values[gj], _fmt(ee[gi, gj])])
        opt = optimize(prob)
        w.writerow(["analytic_opt", opt.N_s_opt, opt.N_r_opt,
                    _fmt(opt.ee_value * scale)])
    _write_manifest(out, "ee-surface", cfg)


def run_optimize(cfg: dict, out_dir: str, threads: int) -> None:
    """Single-instance optimization; JSON report on stdout."""
    _check_keys(cfg, "optimize")
    p_u = _num(cfg, "p_u", 0.001)
    prob, _ = _scenario_problem(cfg, p_u)
    result = optimize(prob)
    report = to_report(prob, result)
    report["ee"] *= _unit_scale(cfg)
    report["config"] = cfg
    text = json.dumps(report, indent=2, sort_keys=True)
    print(text)
    out = _ensure_out(out_dir)
    with open(out / "optimum.json", "w") as fh:
        fh.write(text)
        fh.write("\n")
    _write_manifest(out, "optimize", cfg)


# ---------------------------------------------------------------------------

_RUNNERS = {
    "rate-sweep": run_rate_sweep,
    "ee-sweep": run_ee_sweep,
    "ee-surface": run_ee_surface,
    "optimize": run_optimize,
}


def _build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="hmimo",
        description="Rate and energy-efficiency studies for dense planar arrays",
    )
    sub = parser.add_subparsers(dest="command", required=True)
    for name, runner in _RUNNERS.items():
        p = sub.add_parser(name, help=runner.__doc__.splitlines()[0])
        p.add_argument("--config", required=True, help="JSON run configuration")
        p.add_argument("--out", required=True, help="output directory")
        p.add_argument("--seed", type=int, default=None,
                       help="override the config seed")
        p.add_argument("--threads", type=int, default=1,
                       help="worker threads for Monte-Carlo points")
    return parser


def main(argv=None) -> int:
    args = _build_parser().parse_args(argv)
    try:
        cfg = _load_config(args.config)
        if args.seed is not None:
            if args.seed < 0:
                raise ConfigError("--seed must be nonnegative")
            cfg["seed"] = args.seed
        if args.threads < 1:
            raise ConfigError("--threads must be at least 1")
        cfg["out_dir"] = str(args.out)
        _RUNNERS[args.command](cfg, args.out, args.threads)
    except ConfigError as exc:
        print("config error: %s" % exc, file=sys.stderr)
        return EXIT_CONFIG
    except NumericalError as exc:
        print("numerical failure: %s" % exc, file=sys.stderr)
        return EXIT_NUMERICAL
    return EXIT_OK


if __name__ == "__main__":
    raise SystemExit(main())
