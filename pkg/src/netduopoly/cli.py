"""Command-line entry point: ``netduopoly <subcommand> [scenario flags]``.

Exit codes: 0 success, 1 validation or parse error, 2 self-check failure.
"""
from __future__ import annotations

import argparse
import csv
import io
import json
import sys
import warnings
from dataclasses import dataclass
from pathlib import Path

import numpy as np

from . import allocation as al
from .analysis import PARAM_FIELDS, monotonicity, sweep
from .centrality import balanced_centrality, centrality, star_centralities, sum_identity
from .dynamics import build_operator, check_bounds, trajectory
from .errors import ModelError, ParseError, SelfCheckError, ValidationError
from .graph import Network, balanced_ring, k_star, read_graph, star
from .params import EXAMPLE1, ModelParams

GRAPH_KEYS = ("graph", "star", "balanced", "kstar")
PARAM_KEYS = {"alpha": "alpha", "delta": "delta", "qa": "q_a", "qb": "q_b", "cs": "c_s", "cq": "c_q",
              "budget-a": "K_a", "budget-b": "K_b"}
SCENARIO_KEYS = set(GRAPH_KEYS) | set(PARAM_KEYS) | {"y0", "normalize"}
SELF_CHECK_TOL = 1e-9


def fmt(x) -> str:
    return format(float(x), ".12g")


def rnd(x):
    """Round floats (recursively) to 12 significant digits for stable output."""
    if isinstance(x, dict):
        return {k: rnd(v) for k, v in x.items()}
    if isinstance(x, (list, tuple)):
        return [rnd(v) for v in x]
    if isinstance(x, (float, np.floating)):
        return float(fmt(x))
    if isinstance(x, np.integer):
        return int(x)
    return x


@dataclass
class Scenario:
    net: Network
    params: ModelParams
    y0: np.ndarray
    graph_source: str


def _graph_from(key, value, normalize=False) -> Network:
    try:
        if key == "graph":
            return read_graph(value, normalize=normalize)
        if key == "star":
            return star(int(value))
        ints = [int(v) for v in value]
        if len(ints) != 2:
            raise ParseError(f"--{key} takes two integers, got {value!r}")
        return balanced_ring(*ints) if key == "balanced" else k_star(*ints)
    except (TypeError, ValueError) as exc:
        if isinstance(exc, ModelError):
            raise
        raise ParseError(f"--{key}: {exc}") from None


def read_y0(path, n: int) -> np.ndarray:
    values = []
    for lineno, raw in enumerate(Path(path).read_text().splitlines(), start=1):
        s = raw.split("#", 1)[0].strip()
        try:
            values.extend(float(t) for t in s.replace(",", " ").split())
        except ValueError as exc:
            raise ParseError(f"{path}:{lineno}: {exc}") from None
    if len(values) != n:
        raise ParseError(f"{path}: expected {n} initial values, found {len(values)}")
    return check_y0(np.array(values))


def check_y0(y0):
    if np.any(np.abs(y0) > 0.5) or not np.all(np.isfinite(y0)):
        raise ValidationError("initial state must satisfy |y0_i| <= 1/2")
    return y0


def load_scenario_file(path) -> dict:
    try:
        data = json.loads(Path(path).read_text())
    except json.JSONDecodeError as exc:
        raise ParseError(f"{path}:{exc.lineno}: {exc.msg}") from None
    except OSError as exc:
        raise ParseError(f"{path}: {exc}") from None
    if not isinstance(data, dict):
        raise ParseError(f"{path}: scenario must be a JSON object")
    out = {}
    for key, value in data.items():
        norm = key.lstrip("-").replace("_", "-")
        if norm not in SCENARIO_KEYS:
            raise ParseError(f"{path}: unknown scenario key {key!r}")
        out[norm] = value
    present = [k for k in GRAPH_KEYS if k in out]
    if len(present) > 1:
        raise ParseError(f"{path}: more than one graph source ({', '.join(present)})")
    return out


def parse_scenario(args) -> Scenario:
    """Merge a scenario file (if any) with command-line flags; flags win."""
    merged = load_scenario_file(args.scenario) if getattr(args, "scenario", None) else {}
    cli_graph = [k for k in GRAPH_KEYS if getattr(args, k, None) is not None]
    if len(cli_graph) > 1:
        raise ParseError(f"give one graph source, got {', '.join('--' + k for k in cli_graph)}")
    if cli_graph:
        for k in GRAPH_KEYS:
            merged.pop(k, None)
        merged[cli_graph[0]] = getattr(args, cli_graph[0])
    for flag in list(PARAM_KEYS) + ["y0"]:
        value = getattr(args, flag.replace("-", "_"), None)
        if value is not None:
            merged[flag] = value
    if getattr(args, "normalize", False):
        merged["normalize"] = True

    source = [k for k in GRAPH_KEYS if k in merged]
    if not source:
        raise ParseError("no graph source: pass --graph, --star, --balanced or --kstar")
    key = source[0]
    net = _graph_from(key, merged[key], bool(merged.get("normalize", False)))

    kwargs = {}
    for flag, name in PARAM_KEYS.items():
        if flag in merged:
            try:
                kwargs[name] = float(merged[flag])
            except (TypeError, ValueError):
                raise ParseError(f"--{flag}: not a number: {merged[flag]!r}") from None
    params = ModelParams(**kwargs)

    y0_src = merged.get("y0", "zeros")
    y0 = np.zeros(net.n) if y0_src == "zeros" else read_y0(y0_src, net.n)
    return Scenario(net, params, y0, key)


# ---- reports -----------------------------------------------------------------

def allocation_dict(alloc: al.Allocation) -> dict:
    return {
        "seeds": [{"agent": i + 1, "seed": alloc.seeds[i]} for i in alloc.seeded_agents()],
        "seed_amount": alloc.seed_amount,
        "dq": alloc.dq,
        "spend_seeding": alloc.spend_seeding,
        "spend_quality": alloc.spend_quality,
        "budget": alloc.budget,
    }


def capacity_dict(rep: al.SeedingCapacityReport) -> dict:
    return {"capacity": rep.capacity, "seeded_agents": [i + 1 for i in rep.seeded_agents],
            "threshold": rep.threshold}


def allocation_report(sc: Scenario, equilibrium: bool = False) -> dict:
    net, p = sc.net, sc.params
    v = centrality(net, p)
    v_a, v_b = al.thresholds(p, net.n)
    if equilibrium:
        a, b = al.nash_equilibrium(net, p, sc.y0, v)
    else:
        a = al.optimal_allocation(net, p, sc.y0, "a", v)
        b = al.optimal_allocation(net, p, sc.y0, "b", v)
    report = {
        "n": net.n,
        "thresholds": {"a": v_a, "b": v_b},
        "lambda": al.quality_leverage(p, net.n),
        "allocation": {"a": allocation_dict(a), "b": allocation_dict(b)},
        "capacities": {f: capacity_dict(al.seeding_capacity(net, p, sc.y0, f, v))["capacity"] for f in "ab"},
        "regime": {f: al.classify_regime(p, net.n, f) for f in "ab"},
    }
    if equilibrium:
        du_a, du_b = al.marginal_utility(p, net.n, a.seeds, b.seeds, a.dq, b.dq, v)
        report["marginal_utility"] = {"a": du_a, "b": du_b}
        with warnings.catch_warnings(record=True) as caught:
            warnings.simplefilter("always")
            report["post_seeding_state"] = list(al.post_seeding_state(sc.y0, a, b))
        report["warnings"] = [str(w.message) for w in caught]
        for msg in report["warnings"]:
            print(f"warning: {msg}", file=sys.stderr)
    return report


def capacity_report(sc: Scenario) -> dict:
    v = centrality(sc.net, sc.params)
    report = {"n": sc.net.n, "firms": {}, "regime": {}}
    for f in "ab":
        report["firms"][f] = capacity_dict(al.seeding_capacity(sc.net, sc.params, sc.y0, f, v))
        report["regime"][f] = al.classify_regime(sc.params, sc.net.n, f)
        try:
            report["firms"][f]["max_seed_count"] = al.max_seed_count(sc.params, sc.net.n, f)
        except ModelError:
            report["firms"][f]["max_seed_count"] = sc.net.n
    return report


def run_example1(params: ModelParams = EXAMPLE1, n: int = 15) -> dict:
    """Recompute the 15-agent worked example and compare every quantity to its golden value.

    Raises SelfCheckError naming the first quantity off by more than 1e-9.
    """
    v_a, v_b = al.thresholds(params, n)
    k = al.max_seed_count(params, n)
    zeros = np.zeros(n)
    ring, hub, kst = balanced_ring(n, 2), star(n), k_star(n, k)
    v_ring = centrality(ring, params)
    v_star = centrality(hub, params)
    got = {
        "v_c_a": v_a,
        "v_c_b": v_b,
        "lambda": al.quality_leverage(params, n),
        "k": k,
        "v_bar": v_ring.v_bar,
        "v_bar_formula": balanced_centrality(params),
        "v_h": v_star.v_max,
        "v_h_formula": star_centralities(n, params)[0],
        "capacity_balanced": al.seeding_capacity(ring, params, zeros, "a", v_ring).capacity,
        "capacity_star": al.seeding_capacity(hub, params, zeros, "a", v_star).capacity,
        "capacity_3star": al.seeding_capacity(kst, params, zeros, "a").capacity,
    }
    expected = {
        "v_c_a": 2.5, "v_c_b": 2.5, "lambda": 5.0, "k": 3,
        "v_bar": 4 / 3, "v_bar_formula": 4 / 3, "v_h": 4.8, "v_h_formula": 4.8,
        "capacity_balanced": 0.0, "capacity_star": 0.5, "capacity_3star": 1.5,
    }
    for name, want in expected.items():
        if not abs(got[name] - want) <= SELF_CHECK_TOL:
            raise SelfCheckError(name, want, got[name])
    return {"n": n, "values": got, "expected": expected, "tolerance": SELF_CHECK_TOL, "ok": True}


# ---- output ------------------------------------------------------------------

def _write(text: str, out) -> None:
    if out in (None, "-"):
        sys.stdout.write(text)
    else:
        Path(out).write_text(text)


def _json(obj) -> str:
    return json.dumps(rnd(obj), indent=2, sort_keys=True) + "\n"


def _csv(header, rows, trailer=()) -> str:
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(header)
    for row in rows:
        w.writerow([fmt(x) if isinstance(x, (float, np.floating)) else x for x in row])
    for line in trailer:
        buf.write(line + "\n")
    return buf.getvalue()


def cmd_simulate(args) -> str:
    sc = parse_scenario(args)
    states = trajectory(build_operator(sc.net, sc.params), sc.y0, args.horizon)
    n = sc.net.n
    if args.format == "json":
        return _json([{"t": s.t, "y": list(s.y), "x_sum_a": s.x_a.sum(), "x_sum_b": s.x_b.sum()} for s in states])
    header = ["t"] + [f"y_{i + 1}" for i in range(n)] + ["x_sum_a", "x_sum_b"]
    rows = [[s.t, *map(float, s.y), float(s.x_a.sum()), float(s.x_b.sum())] for s in states]
    return _csv(header, rows)


def cmd_centrality(args) -> str:
    sc = parse_scenario(args)
    prof = centrality(sc.net, sc.params)
    summary = {"v_bar": prof.v_bar, "v_max": prof.v_max, "sum": prof.total,
               "sum_identity": sum_identity(sc.net.n, sc.params)}
    if args.format == "json":
        return _json({"v": list(prof.v), **summary})
    trailer = ["# summary " + " ".join(f"{k}={fmt(v)}" for k, v in summary.items())]
    return _csv(["agent", "v"], [[i + 1, float(x)] for i, x in enumerate(prof.v)], trailer)


def _alloc_csv(report) -> str:
    rows = []
    for f in "ab":
        a = report["allocation"][f]
        for s in a["seeds"]:
            rows.append([f, s["agent"], float(s["seed"])])
    trailer = []
    for f in "ab":
        a = report["allocation"][f]
        trailer.append(f"# firm={f} threshold={fmt(report['thresholds'][f])} dq={fmt(a['dq'])} "
                       f"spend_seeding={fmt(a['spend_seeding'])} spend_quality={fmt(a['spend_quality'])} "
                       f"capacity={fmt(report['capacities'][f])} regime={report['regime'][f]}")
    trailer.append(f"# lambda={fmt(report['lambda'])}")
    return _csv(["firm", "agent", "seed"], rows, trailer)


def cmd_allocate(args) -> str:
    report = allocation_report(parse_scenario(args))
    return _json(report) if args.format != "csv" else _alloc_csv(report)


def cmd_equilibrium(args) -> str:
    report = allocation_report(parse_scenario(args), equilibrium=True)
    return _json(report) if args.format != "csv" else _alloc_csv(report)


def cmd_capacity(args) -> str:
    report = capacity_report(parse_scenario(args))
    if args.format != "csv":
        return _json(report)
    rows = [[f, fmt(r["capacity"]), fmt(r["threshold"]), r["max_seed_count"], report["regime"][f],
             " ".join(str(i) for i in r["seeded_agents"])] for f, r in report["firms"].items()]
    return _csv(["firm", "capacity", "threshold", "max_seed_count", "regime", "seeded_agents"], rows)


def cmd_sweep(args) -> str:
    sc = parse_scenario(args)
    try:
        grid = [float(g) for g in args.grid.split(",") if g.strip()]
    except ValueError as exc:
        raise ParseError(f"--grid: {exc}") from None
    res = sweep(sc.net, sc.params, sc.y0, args.param, grid, firm=args.firm, budget=args.budget, jobs=args.jobs)
    if args.format == "json":
        return _json({"parameter": res.parameter, "grid": res.grid, "seed_amount": res.seed_amount,
                      "seed_spend": res.seeding_budget, "dq": res.dq,
                      "verdict": monotonicity(res.measure())})
    rows = zip(res.grid, res.seed_amount, res.seeding_budget, res.dq, res.running_verdicts())
    return _csv(["param_value", "seed_amount", "seed_spend", "dq", "verdict_running"], rows)


def cmd_example1(args) -> str:
    params = EXAMPLE1
    for item in args.override or ():
        key, _, value = item.partition("=")
        field = PARAM_FIELDS.get(key, key)
        try:
            params = params.with_(**{field: float(value)})
        except TypeError:
            raise ParseError(f"--override: unknown parameter {key!r}") from None
    report = run_example1(params)
    if args.format == "csv":
        return _csv(["quantity", "value", "expected"],
                    [[k, float(v), float(report["expected"][k])] for k, v in report["values"].items()])
    return _json(report)


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise ParseError(message)


def _add_scenario_flags(p):
    p.add_argument("--scenario", help="JSON scenario file; flags override its values")
    p.add_argument("--graph", help="graph file (first line n, then n rows of weights)")
    p.add_argument("--star", type=int, metavar="N")
    p.add_argument("--balanced", type=int, nargs=2, metavar=("N", "D"))
    p.add_argument("--kstar", type=int, nargs=2, metavar=("N", "K"))
    p.add_argument("--normalize", action="store_true", help="rescale graph-file rows to sum to 1")
    p.add_argument("--alpha", type=float)
    p.add_argument("--delta", type=float)
    p.add_argument("--qa", type=float)
    p.add_argument("--qb", type=float)
    p.add_argument("--cs", type=float)
    p.add_argument("--cq", type=float)
    p.add_argument("--budget-a", type=float)
    p.add_argument("--budget-b", type=float)
    p.add_argument("--y0", help="initial centered consumption file, or 'zeros'")


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="netduopoly", description=__doc__.splitlines()[0])
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)

    def add(name, func, default_format, help_):
        p = sub.add_parser(name, help=help_)
        p.add_argument("--out", help="output path (default stdout)")
        p.add_argument("--format", choices=("csv", "json"), default=default_format)
        p.set_defaults(func=func)
        return p

    p = add("simulate", cmd_simulate, "csv", "run the best-response dynamics")
    _add_scenario_flags(p)
    p.add_argument("--horizon", type=int, default=50, metavar="T")

    p = add("centrality", cmd_centrality, "csv", "discounted centrality of every agent")
    _add_scenario_flags(p)

    for name, func, help_ in (("allocate", cmd_allocate, "optimal budget split per firm"),
                              ("equilibrium", cmd_equilibrium, "Nash equilibrium of the two firms"),
                              ("capacity", cmd_capacity, "seeding capacity and regime")):
        _add_scenario_flags(add(name, func, "json", help_))

    p = add("sweep", cmd_sweep, "csv", "comparative statics over one parameter")
    _add_scenario_flags(p)
    p.add_argument("--param", required=True, choices=sorted(PARAM_FIELDS))
    p.add_argument("--grid", required=True, help="comma-separated increasing values")
    p.add_argument("--firm", choices=("a", "b"), default="a")
    p.add_argument("--budget", type=float, help="fixed budget (default: enough to seed every agent)")
    p.add_argument("--jobs", type=int, default=1)

    p = add("example1", cmd_example1, "json", "reproduce the 15-agent worked example")
    p.add_argument("--override", action="append", help=argparse.SUPPRESS)
    return parser


def main(argv=None) -> int:
    try:
        args = build_parser().parse_args(argv)
        text = args.func(args)
        _write(text, args.out)
    except SelfCheckError as exc:
        print(f"self-check failed: {exc}", file=sys.stderr)
        return 2
    except (ModelError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1
    return 0


if __name__ == "__main__":
    sys.exit(main())
