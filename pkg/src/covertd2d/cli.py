"""Command-line front end.

    covertd2d validate     analytic vs Monte Carlo on rho and tau grids
    covertd2d lower-stage  detection-error curve and the adversary's tau*
    covertd2d equilibrium  Stackelberg equilibrium for one scheme
    covertd2d sweep        equilibria (or other tasks) along one parameter

Every CSV starts with a ``#`` comment carrying the tool version, a hash of
the configuration and the seed. With ``--out`` a ``<out>.meta.json`` sidecar
records the full configuration and arguments. Exit codes: 0 success,
2 invalid input or failed validation, 3 infeasible game, 4 numerical
nonconvergence.
"""

from __future__ import annotations

import argparse
import csv
import hashlib
import io
import json
import math
import sys
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from pathlib import Path

import numpy as np

from . import __version__
from .analytics import (DetectionModel, QuadratureError, ph_prob_ps, ph_prob_ts,
                        sinr_prob_ps, sinr_prob_ts)
from .core import (ConfigError, NetworkConfig, Scheme, Strategy, check, dbm_to_mw,
                   load_config, mw_to_dbm, parse_config_text)
from .game import BracketError, best_response_tau, constraints, network_utility, solve_equilibrium
from .montecarlo import Kind, SimWindow, estimate, simulate
from .solvers import GaSpec, InfeasibleProblemError, MaxIterationsError

EXIT_OK, EXIT_INVALID, EXIT_INFEASIBLE, EXIT_NONCONVERGENCE = 0, 2, 3, 4

LINK_KINDS = {
    Kind.SINR_PS: (Scheme.PS, sinr_prob_ps),
    Kind.PH_PS: (Scheme.PS, ph_prob_ps),
    Kind.SINR_TS: (Scheme.TS, sinr_prob_ts),
    Kind.PH_TS: (Scheme.TS, ph_prob_ts),
}
VALIDATE_KINDS = [k.value for k in (*LINK_KINDS, Kind.FA, Kind.MD)]


# ---------------------------------------------------------------------------
# output

def config_hash(config: NetworkConfig) -> str:
    blob = json.dumps(config.as_dict(), sort_keys=True).encode()
    return hashlib.sha256(blob).hexdigest()[:16]


def _fmt(v):
    if isinstance(v, (bool, np.bool_)):
        return "true" if v else "false"
    if isinstance(v, (float, np.floating)):
        return repr(float(v))
    return str(v)


def render_csv(columns, rows, config, seed, command) -> str:
    buf = io.StringIO()
    buf.write(f"# covertd2d {__version__} command={command} config_sha256={config_hash(config)} seed={seed}\n")
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(columns)
    for row in rows:
        w.writerow([_fmt(v) for v in row])
    return buf.getvalue()


def emit(text, args, config, extra=None):
    if args.out is None:
        sys.stdout.write(text)
        return
    out = Path(args.out)
    out.write_text(text)
    meta = {
        "tool": "covertd2d",
        "version": __version__,
        "command": args.command,
        "config_sha256": config_hash(config),
        "config": config.as_dict(),
        "arguments": {k: v for k, v in sorted(vars(args).items()) if k != "func"},
    }
    if extra:
        meta.update(extra)
    Path(str(out) + ".meta.json").write_text(json.dumps(meta, indent=2, sort_keys=True, default=str) + "\n")


def _config(args) -> NetworkConfig:
    return load_config(args.config) if args.config else check(NetworkConfig())


def _power(args, config):
    if args.p_s_dbm is not None:
        return dbm_to_mw(args.p_s_dbm)
    return args.p_s if args.p_s is not None else 10.0


# ---------------------------------------------------------------------------
# commands

def validation_rows(config, p_s, kinds, trials, seed, n_rho=10, n_tau=20):
    """Analytic vs Monte Carlo rows: (kind, parameter, value, analytic, mc, ci, tol, ok)."""
    window = SimWindow(trials=trials, seed=seed)
    batch = simulate(config, window, p_ref=p_s)
    rows = []
    rhos = np.linspace(0.1, 1.0, n_rho)
    for kind in kinds:
        kind = Kind(kind)
        if kind in LINK_KINDS:
            scheme, fn = LINK_KINDS[kind]
            for rho in rhos:
                st = Strategy(scheme, p_s, float(rho))
                rows.append(_check(kind, "rho", float(rho), fn(st, config), estimate(kind, st, config, window, batch)))
    det = [Kind(k) for k in kinds if Kind(k) in (Kind.FA, Kind.MD)]
    if det:
        model = DetectionModel(p_s, config)
        tau_star = best_response_tau(p_s, config).tau_star
        for tau in np.linspace(config.noise_adv + 0.1 * tau_star, 4.0 * tau_star, n_tau):
            tau = float(tau)
            for kind in det:
                value = model.fa(tau) if kind is Kind.FA else model.md(tau)
                rows.append(_check(kind, "tau", tau, value, estimate(kind, (p_s, tau), config, window, batch)))
    return rows


def _check(kind, pname, pvalue, analytic, est):
    tol = max(0.02, 3.0 * est.ci_halfwidth)
    return (kind.value, pname, pvalue, analytic, est.value, est.ci_halfwidth, tol, abs(analytic - est.value) <= tol)


def cmd_validate(args):
    config = _config(args)
    if args.trials < 1:
        raise ConfigError("trials must be >= 1")
    kinds = args.kinds.split(",") if args.kinds else VALIDATE_KINDS
    p_s = _power(args, config)
    rows = validation_rows(config, p_s, kinds, args.trials, args.seed, args.grid, args.tau_grid)
    cols = ["kind", "parameter", "value", "analytic", "monte_carlo", "ci_halfwidth", "tolerance", "within_tolerance"]
    emit(render_csv(cols, rows, config, args.seed, "validate"), args, config)
    failed = sum(not r[-1] for r in rows)
    print(f"{len(rows) - failed}/{len(rows)} points within tolerance", file=sys.stderr)
    return EXIT_OK if failed == 0 else EXIT_INVALID


def cmd_lower_stage(args):
    config = _config(args)
    p_s = _power(args, config)
    sol = best_response_tau(p_s, config)
    lo = args.tau_min if args.tau_min is not None else config.noise_adv * (1.0 + 1e-9)
    if lo <= config.noise_adv:
        raise ConfigError(f"tau grid must start above the adversary noise N_a={config.noise_adv!r} mW")
    hi = args.tau_max if args.tau_max is not None else sol.interval[1]
    if not hi > lo:
        raise ConfigError("tau grid needs tau_max > tau_min")
    model = DetectionModel(p_s, config)
    taus = np.linspace(lo, hi, args.grid)
    rows = [("grid", float(t), model.error(float(t))) for t in taus]
    i = int(np.argmin([r[2] for r in rows]))
    rows.append(("grid_argmin", rows[i][1], rows[i][2]))
    rows.append(("optimum", sol.tau_star, sol.error_star))
    emit(render_csv(["row", "tau_mw", "detection_error"], rows, config, args.seed, "lower-stage"), args, config,
         {"p_s_mw": p_s, "degenerate": sol.degenerate})
    return EXIT_OK


def _ga_spec(args):
    return GaSpec(population=args.population, generations=args.generations, seed=args.seed)


EQUILIBRIUM_COLUMNS = ["scheme", "status", "p_s_mw", "p_s_dbm", "rho", "utility", "sinr_prob",
                       "ph_prob", "tau_star_mw", "error_star", "slack_power", "slack_covert"]


def equilibrium_row(scheme, config, ga_spec):
    try:
        r = solve_equilibrium(scheme, config, ga_spec)
    except InfeasibleProblemError as exc:
        d = exc.diagnostics
        slacks = list(d.get("slacks", [])) + [math.nan, math.nan]
        p = d.get("p_s", math.nan)
        return (scheme.value, "infeasible", p, mw_to_dbm(p) if p == p else math.nan, d.get("rho", math.nan),
                math.nan, math.nan, math.nan, math.nan, math.nan, slacks[0], slacks[1])
    st = r.strategy
    return (scheme.value, "ok", st.p_s, mw_to_dbm(st.p_s), st.rho, r.utility, r.sinr, r.ph,
            r.lower.tau_star, r.lower.error_star, r.slack_power, r.slack_covert)


def utility_surface(scheme, config, n):
    rows = []
    for p in np.geomspace(config.ps_min, config.ps_max, n):
        for rho in np.linspace(config.rho_min, 1.0, n):
            st = Strategy(scheme, float(p), float(rho))
            sp, sc = constraints(st, config)
            rows.append((float(p), float(rho), network_utility(st, config), sp, sc, sp >= 0 and sc >= 0))
    return rows


def cmd_equilibrium(args):
    config = _config(args)
    scheme = Scheme(args.scheme)
    row = equilibrium_row(scheme, config, _ga_spec(args))
    emit(render_csv(EQUILIBRIUM_COLUMNS, [row], config, args.seed, "equilibrium"), args, config)
    if args.surface:
        if args.grid < 2:
            raise ConfigError("--grid must be >= 2 for a utility surface")
        rows = utility_surface(scheme, config, args.grid)
        cols = ["p_s_mw", "rho", "utility", "slack_power", "slack_covert", "feasible"]
        Path(args.surface).write_text(render_csv(cols, rows, config, args.seed, "equilibrium-surface"))
    if row[1] == "infeasible":
        print(f"infeasible: least-violating strategy p_s={row[2]:.4g} mW rho={row[4]:.4g}, "
              f"slacks power={row[10]:.4g} covert={row[11]:.4g}", file=sys.stderr)
        return EXIT_INFEASIBLE
    return EXIT_OK


# ---------------------------------------------------------------------------
# sweeps

_TASKS = ("equilibrium", "lowerstage", "validate")
_STRATEGY_FIELDS = ("p_s", "rho")


@dataclass
class SweepSpec:
    swept_field: str
    values: list
    task: str = "equilibrium"
    schemes: list = field(default_factory=lambda: [Scheme.PS, Scheme.TS])
    output_path: str | None = None
    config: NetworkConfig = field(default_factory=NetworkConfig)
    p_s: float = 10.0
    rho: float = 0.5
    population: int = 60
    generations: int = 120
    trials: int = 20_000


def parse_sweep_spec(text: str, base_dir: Path = Path(".")) -> SweepSpec:
    """Sweep file: ``sweep``/``values``/``task`` keys, optional ``schemes``,
    ``output``, ``config`` (path), ``p_s``, ``rho``, ``population``,
    ``generations``, ``trials``; any other key overrides a config field."""
    keys, overrides = {}, []
    for line in text.splitlines():
        body = line.split("#", 1)[0].strip()
        if not body:
            continue
        if "=" not in body:
            raise ConfigError(f"sweep spec: expected 'key = value', got {line!r}")
        k, v = (s.strip() for s in body.split("=", 1))
        if k in ("sweep", "values", "task", "schemes", "output", "config", "p_s", "rho",
                 "population", "generations", "trials"):
            keys[k] = v
        else:
            overrides.append(f"{k} = {v}")
    if "sweep" not in keys:
        raise ConfigError("sweep spec needs a 'sweep' key naming the swept field")
    base = load_config(base_dir / keys["config"]) if "config" in keys else NetworkConfig()
    config = parse_config_text("\n".join(overrides), base)
    name = keys["sweep"]
    if name not in config.as_dict() and name not in _STRATEGY_FIELDS:
        raise ConfigError(f"unknown sweep field {name!r}")
    values = [v.strip() for v in keys.get("values", "").split(",") if v.strip()]
    if not values:
        raise ConfigError("sweep values list is empty")
    values = [int(v) if name == "m_antennas" else float(v) for v in values]
    task = keys.get("task", "equilibrium").lower().replace("-", "").replace("_", "")
    if task not in _TASKS:
        raise ConfigError(f"unknown sweep task {keys.get('task')!r}; choose from {', '.join(_TASKS)}")
    schemes = [Scheme(s.strip().upper()) for s in keys.get("schemes", "PS,TS").split(",") if s.strip()]
    spec = SweepSpec(name, values, task, schemes, keys.get("output"), config)
    for k, cast in (("p_s", float), ("rho", float), ("population", int), ("generations", int),
                    ("trials", int)):
        if k in keys:
            setattr(spec, k, cast(keys[k]))
    return spec


def _sweep_point(spec: SweepSpec, index: int, value, seed: int):
    config, p_s, rho = spec.config, spec.p_s, spec.rho
    if spec.swept_field == "p_s":
        p_s = value
    elif spec.swept_field == "rho":
        rho = value
    else:
        config = check(config.replace(**{spec.swept_field: value}))
    point_seed = seed + index
    rows = []
    if spec.task == "equilibrium":
        ga = GaSpec(population=spec.population, generations=spec.generations, seed=point_seed)
        for scheme in spec.schemes:
            rows.append((index, value) + equilibrium_row(scheme, config, ga))
    elif spec.task == "lowerstage":
        sol = best_response_tau(p_s, config)
        rows.append((index, value, p_s, sol.tau_star, sol.error_star, sol.degenerate))
    else:
        kinds = [k.value for k, (sch, _) in LINK_KINDS.items() if sch in spec.schemes]
        for r in _validation_at(config, p_s, rho, kinds, spec.trials, point_seed):
            rows.append((index, value) + r)
    return rows


def _validation_at(config, p_s, rho, kinds, trials, seed):
    window = SimWindow(trials=trials, seed=seed)
    batch = simulate(config, window, p_ref=p_s)
    for k in kinds:
        kind = Kind(k)
        scheme, fn = LINK_KINDS[kind]
        st = Strategy(scheme, p_s, rho)
        yield _check(kind, "rho", rho, fn(st, config), estimate(kind, st, config, window, batch))


def cmd_sweep(args):
    path = Path(args.spec)
    spec = parse_sweep_spec(path.read_text(), path.parent)
    if args.generations is not None:
        spec.generations = args.generations
    if args.population is not None:
        spec.population = args.population
    if args.out is None and spec.output_path:
        args.out = str(path.parent / spec.output_path)

    def job(i):
        return _sweep_point(spec, i, spec.values[i], args.seed)

    with ThreadPoolExecutor(max(1, args.workers)) as pool:
        results = list(pool.map(job, range(len(spec.values))))
    rows = [r for part in results for r in part]
    head = ["index", spec.swept_field]
    if spec.task == "equilibrium":
        cols = head + EQUILIBRIUM_COLUMNS
    elif spec.task == "lowerstage":
        cols = head + ["p_s_mw", "tau_star_mw", "error_star", "degenerate"]
    else:
        cols = head + ["kind", "parameter", "value", "analytic", "monte_carlo", "ci_halfwidth", "tolerance", "within_tolerance"]
    emit(render_csv(cols, rows, spec.config, args.seed, "sweep"), args, spec.config,
         {"sweep": {"field": spec.swept_field, "values": spec.values, "task": spec.task,
                    "schemes": [s.value for s in spec.schemes]}})
    if spec.task == "validate" and not all(r[-1] for r in rows):
        return EXIT_INVALID
    return EXIT_OK


# ---------------------------------------------------------------------------

def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="covertd2d", description=__doc__.split("\n\n")[0])
    p.add_argument("--version", action="version", version=f"covertd2d {__version__}")
    sub = p.add_subparsers(dest="command", required=True)

    def common(sp):
        sp.add_argument("--config", help="flat key = value config file (defaults otherwise)")
        sp.add_argument("--seed", type=int, default=0)
        sp.add_argument("--out", help="CSV output path (stdout if omitted)")

    def power(sp):
        g = sp.add_mutually_exclusive_group()
        g.add_argument("--p-s", type=float, help="SWIPT transmit power in mW (default 10)")
        g.add_argument("--p-s-dbm", type=float, help="SWIPT transmit power in dBm")

    def kinds(text):
        names = [k.strip() for k in text.split(",") if k.strip()]
        bad = [k for k in names if k not in VALIDATE_KINDS]
        if bad or not names:
            raise argparse.ArgumentTypeError(
                f"unknown kind(s) {', '.join(bad) or '(none)'}; valid kinds: {', '.join(VALIDATE_KINDS)}")
        return ",".join(names)

    v = sub.add_parser("validate", help="compare analytic probabilities with Monte Carlo")
    common(v)
    power(v)
    v.add_argument("--kinds", type=kinds, help=f"comma list from {', '.join(VALIDATE_KINDS)}")
    v.add_argument("--trials", type=int, default=100_000)
    v.add_argument("--grid", type=int, default=10, help="points on the rho grid")
    v.add_argument("--tau-grid", type=int, default=20, help="points on the tau grid")
    v.set_defaults(func=cmd_validate)

    ls = sub.add_parser("lower-stage", help="detection error versus threshold, and tau*")
    common(ls)
    power(ls)
    ls.add_argument("--grid", type=int, default=200, help="points on the tau grid")
    ls.add_argument("--tau-min", type=float)
    ls.add_argument("--tau-max", type=float)
    ls.set_defaults(func=cmd_lower_stage)

    eq = sub.add_parser("equilibrium", help="solve the game for one scheme")
    common(eq)
    eq.add_argument("--scheme", choices=["PS", "TS"], default="PS")
    eq.add_argument("--population", type=int, default=60)
    eq.add_argument("--generations", type=int, default=120)
    eq.add_argument("--surface", help="also write the utility surface CSV here")
    eq.add_argument("--grid", type=int, default=40, help="surface resolution per axis")
    eq.set_defaults(func=cmd_equilibrium)

    sw = sub.add_parser("sweep", help="run a task along one parameter")
    common(sw)
    sw.add_argument("spec", help="sweep spec file")
    sw.add_argument("--population", type=int)
    sw.add_argument("--generations", type=int)
    sw.add_argument("--workers", type=int, default=1)
    sw.set_defaults(func=cmd_sweep)
    return p


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except ConfigError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INVALID
    except (ValueError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INVALID
    except (QuadratureError, MaxIterationsError, BracketError) as exc:
        print(f"numerical failure: {exc}", file=sys.stderr)
        return EXIT_NONCONVERGENCE


if __name__ == "__main__":
    sys.exit(main())
