"""Command line entry point: ``twouniv <verb> ...``.

Exit status is 0 when the requested work ran to completion, whatever the
embedding outcomes were; 1 on I/O errors and 2 on invalid configuration.
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import sys
from dataclasses import fields
from pathlib import Path

import yaml

from .counting import certify_pseudorandom, reports_to_csv
from .graph import format_edge_list, read_edge_list, write_edge_list
from .harness import (
    HOSTS,
    P_UNITS,
    TARGETS,
    SweepConfig,
    TrialConfig,
    aggregates_csv,
    build_host,
    records_csv,
    sweep,
    write_sweep,
)
from .instances import (
    SMALL_N_OVERRIDES,
    ParamSet,
    build_f_graph,
    enumerate_specs,
    format_spec,
    parse_spec,
    random_spec,
    sample_gnp,
)
from .oracle import oracle_embed, verify_embedding
from .pipeline import embed_full
from .rng import derive_seed


def load_config(path: str | Path) -> dict:
    """Sweep settings from a YAML or JSON file (JSON is valid YAML)."""
    data = yaml.safe_load(Path(path).read_text())
    if data is None:
        return {}
    if not isinstance(data, dict):
        raise ValueError(f"{path}: expected a mapping at the top level")
    return data


def _overrides(args) -> dict:
    out = dict(SMALL_N_OVERRIDES) if getattr(args, "small_n", False) else {}
    for item in getattr(args, "set", None) or []:
        key, _, val = item.partition("=")
        if not key or not _:
            raise ValueError(f"--set expects key=value, got {item!r}")
        out[key] = yaml.safe_load(val)
    known = {f.name for f in fields(ParamSet)}
    bad = set(out) - known
    if bad:
        raise ValueError(f"unknown parameter overrides {sorted(bad)}")
    return out


def _trial_from_args(args) -> TrialConfig:
    return TrialConfig(
        n=args.n, p=args.p, alpha=args.alpha, ell=args.ell, seed=args.seed, host=args.host,
        spec=args.spec, host_file=args.host_file, overrides=_overrides(args),
    ).validate()


def _target(args, cfg: TrialConfig):
    if args.spec is not None:
        spec = parse_spec(args.spec)
    else:
        spec = random_spec(cfg.n, cfg.ell, derive_seed(cfg.seed, 3))
    if spec.n != cfg.n:
        raise ValueError(f"spec {format_spec(spec)} has {spec.n} vertices, expected {cfg.n}")
    return spec


# ---------------------------------------------------------------------------
# verbs


def cmd_gen(args) -> int:
    cfg = _trial_from_args(args)
    g, g_alpha = build_host(cfg)
    spec = _target(args, cfg)
    f = build_f_graph(spec)
    if args.out_dir:
        out = Path(args.out_dir)
        out.mkdir(parents=True, exist_ok=True)
        write_edge_list(g, out / "g.txt")
        write_edge_list(g_alpha, out / "g_alpha.txt")
        write_edge_list(f, out / "target.txt")
        (out / "spec.txt").write_text(format_spec(spec) + "\n")
        print(f"wrote {out}/g.txt g_alpha.txt target.txt spec.txt")
    else:
        print(f"# spec {format_spec(spec)}")
        print("# G")
        sys.stdout.write(format_edge_list(g))
        print("# G_alpha")
        sys.stdout.write(format_edge_list(g_alpha))
    return 0


def cmd_certify(args) -> int:
    if args.graph:
        g = read_edge_list(args.graph)
        n = g.n
    else:
        n = args.n
        g = None
    p = args.p if args.p_unit == "abs" else args.p * _unit(args.p_unit, n, args.ell)
    if g is None:
        g = sample_gnp(n, p, derive_seed(args.seed, 0))
    params = ParamSet.practical(n, 0.1, ell=args.ell, p=p, ell0=args.ell0)
    reports = certify_pseudorandom(g, params, args.samples, derive_seed(args.seed, 1), cap=args.cap,
                                   size_policy=args.size_policy)
    text = reports_to_csv(reports)
    _emit(text, args.out)
    failed = sum(not r.passed for r in reports)
    print(f"# {len(reports)} reports, {failed} failed", file=sys.stderr)
    return 0


def cmd_embed(args) -> int:
    cfg = _trial_from_args(args)
    if args.g and args.g_alpha:
        g, g_alpha = read_edge_list(args.g), read_edge_list(args.g_alpha)
    else:
        g, g_alpha = build_host(cfg)
    f = read_edge_list(args.target) if args.target else build_f_graph(_target(args, cfg))
    params = ParamSet.practical(f.n, cfg.alpha, ell=cfg.ell, p=cfg.p, **cfg.overrides)
    res = embed_full(f, g, g_alpha, params, seed=cfg.seed)
    if res.success:
        ok, problems = verify_embedding(f, g.union(g_alpha), res.embedding, require_spanning=True)
        payload = {"outcome": res.outcome, "retries": res.retries, "verified": ok, "problems": problems,
                   "embedding": {str(k): v for k, v in sorted(res.embedding.items())}}
        _emit(json.dumps(payload, indent=1) + "\n", args.out)
    else:
        _emit(res.failure.to_record() + "\n", args.out)
    return 0


def cmd_oracle(args) -> int:
    cfg = _trial_from_args(args)
    g, g_alpha = build_host(cfg)
    h = g.union(g_alpha)
    specs = enumerate_specs(cfg.n, cfg.ell) if args.all_specs else [_target(args, cfg)]
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(["spec", "verdict", "nodes"])
    for spec in specs:
        r = oracle_embed(build_f_graph(spec), h, require_spanning=True, node_budget=args.budget)
        writer.writerow([format_spec(spec), r.verdict, r.nodes])
    _emit(buf.getvalue(), args.out)
    return 0


def cmd_enumerate(args) -> int:
    specs = enumerate_specs(args.n, args.ell)
    _emit("".join(format_spec(s) + "\n" for s in specs), args.out)
    return 0


def cmd_sweep(args) -> int:
    data = load_config(args.config) if args.config else {}
    for name in ("n", "p", "alpha", "ell"):
        val = getattr(args, name)
        if val is not None:
            data[name] = val
    for name in ("p_unit", "trials", "base_seed", "host", "host_file", "target", "spec", "workers"):
        val = getattr(args, name)
        if val is not None:
            data[name] = val
    extra = _overrides(args)
    if extra:
        data["overrides"] = {**data.get("overrides", {}), **extra}
    cfg = SweepConfig.from_dict(data).validate()
    records, aggs = sweep(cfg)
    if args.out:
        rows, agg = write_sweep(records, aggs, args.out)
        print(f"wrote {rows} and {agg}", file=sys.stderr)
    else:
        sys.stdout.write(records_csv(records))
        sys.stdout.write("\n")
        sys.stdout.write(aggregates_csv(aggs))
    return 0


# ---------------------------------------------------------------------------
# parser


def _unit(unit: str, n: int, ell: int) -> float:
    from .harness import p_unit_value

    return p_unit_value(unit, n, ell)


def _emit(text: str, out: str | None) -> None:
    if out:
        Path(out).parent.mkdir(parents=True, exist_ok=True)
        Path(out).write_text(text)
    else:
        sys.stdout.write(text)


def _trial_flags(p: argparse.ArgumentParser) -> None:
    p.add_argument("--n", type=int, default=60)
    p.add_argument("--p", type=float, default=0.5, help="edge probability of the random part")
    p.add_argument("--alpha", type=float, default=0.3)
    p.add_argument("--ell", type=int, default=3)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--host", choices=HOSTS, default="bipartite")
    p.add_argument("--host-file", help="edge list for G_alpha when --host file")
    p.add_argument("--spec", help='target cycle type such as "C3,C5;P1"; random when omitted')
    _param_flags(p)


def _param_flags(p: argparse.ArgumentParser) -> None:
    p.add_argument("--small-n", action="store_true", help="use the small-n parameter preset")
    p.add_argument("--set", action="append", metavar="KEY=VALUE", help="override a pipeline parameter")


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="twouniv", description=__doc__.splitlines()[0])
    sub = ap.add_subparsers(dest="verb", required=True)

    p = sub.add_parser("gen", help="sample a host and target")
    _trial_flags(p)
    p.add_argument("--out-dir")
    p.set_defaults(func=cmd_gen)

    p = sub.add_parser("certify", help="sampled counting certificate for G(n, p)")
    p.add_argument("--n", type=int, default=500)
    p.add_argument("--p", type=float, default=10.0)
    p.add_argument("--p-unit", choices=P_UNITS, default="n^-2/3")
    p.add_argument("--ell", type=int, default=3)
    p.add_argument("--ell0", type=int, default=20)
    p.add_argument("--samples", type=int, default=100)
    p.add_argument("--cap", type=int, default=8, help="cycle lengths below this are sampled")
    p.add_argument("--size-policy", choices=("uniform", "minimum"), default="uniform")
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--graph", help="certify this edge list instead of sampling")
    p.add_argument("--out")
    p.set_defaults(func=cmd_certify)

    p = sub.add_parser("embed", help="run the embedding pipeline once")
    _trial_flags(p)
    p.add_argument("--g", help="edge list of the random part")
    p.add_argument("--g-alpha", help="edge list of the dense part")
    p.add_argument("--target", help="edge list of the target graph")
    p.add_argument("--out")
    p.set_defaults(func=cmd_embed)

    p = sub.add_parser("oracle", help="exact containment check by backtracking")
    _trial_flags(p)
    p.add_argument("--all-specs", action="store_true")
    p.add_argument("--budget", type=int, default=2_000_000)
    p.add_argument("--out")
    p.set_defaults(func=cmd_oracle)

    p = sub.add_parser("sweep", help="grid of seeded trials to CSV")
    p.add_argument("--config", help="YAML or JSON file with sweep settings")
    p.add_argument("--n", type=int, nargs="+")
    p.add_argument("--p", type=float, nargs="+", help="p grid in units of --p-unit")
    p.add_argument("--p-unit", choices=P_UNITS)
    p.add_argument("--alpha", type=float, nargs="+")
    p.add_argument("--ell", type=int, nargs="+")
    p.add_argument("--trials", type=int)
    p.add_argument("--base-seed", type=int)
    p.add_argument("--host", choices=HOSTS)
    p.add_argument("--host-file")
    p.add_argument("--target", choices=TARGETS)
    p.add_argument("--spec")
    p.add_argument("--workers", type=int)
    _param_flags(p)
    p.add_argument("--out", help="trial CSV path; aggregates go to <stem>.agg.csv")
    p.set_defaults(func=cmd_sweep)

    p = sub.add_parser("enumerate", help="list maximal cycle types on n vertices")
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--ell", type=int, default=3)
    p.add_argument("--out")
    p.set_defaults(func=cmd_enumerate)
    return ap


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except (ValueError, TypeError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except OSError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
