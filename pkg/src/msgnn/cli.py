"""Command-line front end: ``msgnn <command> [flags]``.

Every command that writes outputs also writes ``lock.json`` next to them with
the resolved settings and library versions.  Settings can come from a
``key = value`` file passed with ``--config``; explicit flags win.

Exit codes: 0 success, 2 configuration error, 3 data error, 4 numerical failure.
"""
from __future__ import annotations

import argparse
import csv
import json
import platform
import sys
from importlib import metadata
from pathlib import Path

import numpy as np

from .graph import GraphError, SignedDiGraph, load_binary, read_edge_csv, write_edge_csv, write_node_map
from .maglap import PHASES, NoDirectionError, dump_csv, hermitian_adjacency, laplacian_normalized, laplacian_unnormalized

EXIT_OK, EXIT_CONFIG, EXIT_DATA, EXIT_NUMERIC = 0, 2, 3, 4


class ConfigError(ValueError):
    pass


class DataError(ValueError):
    pass


# helpers -------------------------------------------------------------------

def read_config_file(path) -> dict[str, str]:
    """Parse ``key = value`` lines; ``#`` starts a comment, keys may use dashes."""
    out = {}
    try:
        lines = Path(path).read_text(encoding="utf-8").splitlines()
    except OSError as exc:
        raise ConfigError(f"cannot read config file: {exc}") from None
    for num, line in enumerate(lines, 1):
        line = line.split("#", 1)[0].strip()
        if not line:
            continue
        if "=" not in line:
            raise ConfigError(f"{path}:{num}: expected key = value")
        key, value = (t.strip() for t in line.split("=", 1))
        out[key.replace("-", "_")] = value.strip("\"'")
    return out


def _versions() -> dict[str, str]:
    out = {"python": platform.python_version()}
    for name in ("artifact", "numpy", "scipy", "numba"):
        try:
            out[name] = metadata.version(name)
        except metadata.PackageNotFoundError:
            out[name] = "unknown"
    return out


def write_lock(out_dir: Path, command: str, settings: dict) -> None:
    clean = {k: v for k, v in settings.items() if k not in ("func", "config")}
    lock = {"command": command, "settings": clean, "versions": _versions()}
    (out_dir / "lock.json").write_text(json.dumps(lock, indent=2, sort_keys=True, default=str) + "\n", encoding="utf-8")


def _out_dir(path) -> Path:
    d = Path(path)
    d.mkdir(parents=True, exist_ok=True)
    return d


def load_graph(path) -> tuple[SignedDiGraph, list | None]:
    p = Path(path)
    if not p.exists():
        raise DataError(f"no such graph file: {p}")
    if p.suffix == ".msg1":
        return load_binary(p), None
    return read_edge_csv(p)


def _meta(name: str, gamma: float) -> np.ndarray:
    from .synthgen import meta_f1, meta_f2

    try:
        return {"f1": meta_f1, "f2": meta_f2}[name.lower()](gamma)
    except KeyError:
        raise ConfigError(f"unknown meta-graph {name!r}; use f1 or f2") from None


def _features(text: str):
    from .tasks import FeatureSpec

    try:
        return FeatureSpec.parse(text)
    except (KeyError, ValueError):
        raise ConfigError(f"bad feature tuple {text!r}; use e.g. T,T or F,T'") from None


def _seed_list(text: str) -> list[int]:
    try:
        if "-" in text and "," not in text:
            lo, hi = text.split("-")
            return list(range(int(lo), int(hi) + 1))
        return [int(t) for t in text.split(",") if t.strip()]
    except ValueError:
        raise ConfigError(f"bad seed list {text!r}") from None


def _write_labels(labels, path) -> None:
    with open(path, "w", newline="", encoding="utf-8") as fh:
        out = csv.writer(fh)
        out.writerow(["node", "label"])
        for i, c in enumerate(np.asarray(labels).tolist()):
            out.writerow([i, c])


# commands ------------------------------------------------------------------

def cmd_generate(args) -> int:
    from .synthgen import SdsbmParams, generate_sdsbm, generate_ssbm

    out = _out_dir(args.out)
    if args.model == "sdsbm":
        g, labels = generate_sdsbm(SdsbmParams(_meta(args.meta, args.gamma), args.n, args.p, args.rho, args.eta, args.seed))
    else:
        g, labels = generate_ssbm(args.n, args.clusters, args.p, args.rho, args.eta, args.seed)
    write_edge_csv(g, out / "edges.csv")
    _write_labels(labels, out / "labels.csv")
    write_lock(out, "generate", vars(args))
    print(f"wrote {g.num_edges} edges on {g.n} nodes to {out}")
    return EXIT_OK


def _resolve_q(args, g, task=""):
    from .experiments import resolve_q

    try:
        return resolve_q(args.q, g, task)
    except NoDirectionError as exc:
        raise DataError(str(exc)) from None
    except ValueError as exc:
        raise ConfigError(str(exc)) from None


def cmd_laplacian(args) -> int:
    g, ids = load_graph(args.graph)
    q = _resolve_q(args, g)
    build = {"normalized": laplacian_normalized, "unnormalized": laplacian_unnormalized, "hermitian": hermitian_adjacency}
    m = build[args.kind](g, q, args.phase)
    out = _out_dir(args.out)
    dump_csv(m, out / f"{args.kind}.csv")
    if ids is not None:
        write_node_map(ids, out / "nodes.csv")
    write_lock(out, "laplacian", {**vars(args), "q_value": q})
    print(f"{args.kind} matrix (q={q:.6g}, nnz={m.nnz}) written to {out}")
    return EXIT_OK


def cmd_eigs(args) -> int:
    from .spectral import eigh

    g, _ = load_graph(args.graph)
    q = _resolve_q(args, g)
    build = laplacian_normalized if args.kind == "normalized" else laplacian_unnormalized
    m = build(g, q, args.phase)
    dec = eigh(m)
    out = _out_dir(args.out)
    k = dec.eigenvalues.shape[0] if args.k is None else min(args.k, dec.eigenvalues.shape[0])
    cols = np.arange(k) if args.order == "smallest" else np.arange(len(dec.eigenvalues) - 1, len(dec.eigenvalues) - 1 - k, -1)
    with open(out / "eigenvalues.csv", "w", newline="", encoding="utf-8") as fh:
        w = csv.writer(fh)
        w.writerow(["index", "eigenvalue"])
        for i, c in enumerate(cols):
            w.writerow([i, repr(float(dec.eigenvalues[c]))])
    with open(out / "eigenvectors.csv", "w", newline="", encoding="utf-8") as fh:
        w = csv.writer(fh)
        w.writerow(["node", *(f"re{i}" for i in range(k)), *(f"im{i}" for i in range(k))])
        u = dec.eigenvectors[:, cols]
        for node in range(u.shape[0]):
            w.writerow([node, *map(repr, u[node].real.tolist()), *map(repr, u[node].imag.tolist())])
    write_lock(out, "eigs", {**vars(args), "q_value": q})
    print(f"{k} eigenpairs written to {out}; range [{dec.eigenvalues[0]:.6g}, {dec.eigenvalues[-1]:.6g}]")
    return EXIT_OK


def cmd_cluster(args) -> int:
    from .experiments import run_cluster, write_report

    main, base = run_cluster(
        _meta(args.meta, args.gamma),
        n=args.n,
        p=args.p,
        rho=args.rho,
        eta=args.eta,
        q=args.q,
        features=_features(args.features),
        networks=_seed_list(args.networks),
        splits=_seed_list(args.splits),
        hidden=args.hidden,
        max_epochs=args.max_epochs,
        patience=args.patience,
        baseline=not args.no_baseline,
        phase=args.phase,
    )
    out = _out_dir(args.out)
    summaries = [main] + ([base] if base is not None else [])
    write_report(summaries, out / "report.json", out / "report.csv")
    write_lock(out, "cluster", vars(args))
    for s in summaries:
        print(f"{s.task:17s} ARI {s.mean:.4f} ± {s.std:.4f} (standard error, {s.n_runs} runs)")
    return EXIT_OK


def _link_graph(args):
    if args.graph:
        g, ids = load_graph(args.graph)
        return g, ids, args.dataset or Path(args.graph).stem
    from .synthgen import SdsbmParams, generate_sdsbm

    g, _ = generate_sdsbm(SdsbmParams(_meta(args.meta, args.gamma), args.n, args.p, args.rho, args.eta, args.graph_seed))
    return g, None, args.dataset or f"sdsbm-{args.meta}"


def _run_link_tasks(g, dataset, args, out: Path) -> list:
    from .experiments import Q_SWEEP, run_link, write_report
    from .tasks import SplitError

    feats = _features(args.features)
    seeds = _seed_list(args.seeds)
    summaries = []
    for task in args.task:
        try:
            if args.q_sweep:
                q_modes = [f"{m}q0" for m in Q_SWEEP]
            else:
                q_modes = [args.q]
            for qm in q_modes:
                _resolve_q(argparse.Namespace(q=qm), g, task)
                summaries.append(run_link(g, task, dataset, q=qm, features=feats, seeds=seeds, hidden=args.hidden, epochs=args.epochs, none_size=args.none_size, phase=args.phase))
        except SplitError as exc:
            raise DataError(str(exc)) from None
    write_report(summaries, out / "report.json", out / "report.csv")
    for s in summaries:
        print(f"{s.dataset:14s} {s.task:3s} q={s.q:14s} {s.feature_spec:7s} {s.table_cell()}  ({s.n_runs} splits, {s.wall_seconds:.1f}s)")
    return summaries


def cmd_link(args) -> int:
    g, ids, dataset = _link_graph(args)
    out = _out_dir(args.out)
    if ids is not None:
        write_node_map(ids, out / "nodes.csv")
    _run_link_tasks(g, dataset, args, out)
    write_lock(out, "link", vars(args))
    return EXIT_OK


def cmd_fill(args) -> int:
    from .fill import lead_lag_matrix, read_returns_csv, sparsify_top

    try:
        panel, stocks, _ = read_returns_csv(args.returns)
    except OSError as exc:
        raise DataError(str(exc)) from None
    except ValueError as exc:
        raise DataError(str(exc)) from None
    out = _out_dir(args.out)
    mat = lead_lag_matrix(panel, orientation=args.orientation)
    g = sparsify_top(mat, args.frac)
    write_edge_csv(g, out / "edges.csv")
    write_node_map(stocks, out / "nodes.csv")
    if args.dump_matrix:
        np.savetxt(out / "leadlag.csv", mat, delimiter=",", fmt="%.17g")
    print(f"lead-lag graph: {g.n} stocks, {g.num_edges} edges")
    if args.task:
        _run_link_tasks(g, args.dataset or Path(args.returns).stem, args, out)
    write_lock(out, "fill", vars(args))
    return EXIT_OK


def cmd_check(args) -> int:
    from .checks import SUITES

    names = args.suite or list(SUITES)
    failed = 0
    for name in names:
        res = SUITES[name](seed=args.seed)
        failed += not res["ok"]
        detail = ", ".join(f"{k}={v:.3g}" if isinstance(v, float) else f"{k}={v}" for k, v in res.items() if k not in ("name", "ok"))
        print(f"{'PASS' if res['ok'] else 'FAIL'} {name}: {detail}")
    return EXIT_NUMERIC if failed else EXIT_OK


# parser --------------------------------------------------------------------

def _add_synthetic(p, required_n: bool = True) -> None:
    p.add_argument("--meta", default="f1", help="meta-graph: f1 (3 blocks) or f2 (4 blocks)")
    p.add_argument("--gamma", type=float, default=0.0, help="directional noise level in [0, 0.5]")
    p.add_argument("--n", type=int, required=required_n, default=None if required_n else 1000)
    p.add_argument("--p", type=float, default=0.1, help="edge probability scale")
    p.add_argument("--rho", type=float, default=1.5, help="largest/smallest block size ratio")
    p.add_argument("--eta", type=float, default=0.0, help="sign flip probability")


def _add_phase(p) -> None:
    p.add_argument("--phase", choices=list(PHASES), default="magnitude", help="edge asymmetry from |A| (default) or from signed A")


def _add_link_opts(p) -> None:
    p.add_argument("--task", nargs="+", type=str.upper, choices=["SP", "DP", "3C", "4C", "5C"], default=["SP"])
    p.add_argument("--q", default="auto", help="zero, q0, auto, a multiple like 0.4q0, or a number")
    p.add_argument("--q-sweep", action="store_true", help="run q = {0, 0.2, ..., 1.0} x q0")
    p.add_argument("--features", default="T,T", help="(signed, weighted) tuple, e.g. T,T or F,T'")
    p.add_argument("--seeds", default="0-4", help="split seeds, e.g. 0-4 or 1,3,5")
    p.add_argument("--epochs", type=int, default=300)
    p.add_argument("--hidden", type=int, default=16)
    p.add_argument("--none-size", choices=["sum", "mean"], default="sum", help="size of the no-edge class")
    p.add_argument("--dataset", default=None, help="name used in reports")
    _add_phase(p)


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="msgnn", description="Magnetic signed Laplacian toolkit and MSGNN experiments.")
    parser.add_argument("--config", default=None, help="key = value settings file")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("generate", help="sample a synthetic signed graph")
    p.add_argument("model", choices=["sdsbm", "ssbm"])
    _add_synthetic(p)
    p.add_argument("--clusters", type=int, default=3, help="block count (ssbm)")
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--out", default="out/generate")
    p.set_defaults(func=cmd_generate)

    for name, func, helptext in (("laplacian", cmd_laplacian, "dump a Laplacian as i,j,re,im"), ("eigs", cmd_eigs, "dense eigendecomposition")):
        p = sub.add_parser(name, help=helptext)
        p.add_argument("--graph", required=True, help="edge-list CSV or .msg1 file")
        p.add_argument("--q", default="q0", help="zero, q0, a multiple like 0.4q0, or a number")
        kinds = ["normalized", "unnormalized", "hermitian"] if name == "laplacian" else ["normalized", "unnormalized"]
        p.add_argument("--kind", choices=kinds, default="normalized")
        _add_phase(p)
        if name == "eigs":
            p.add_argument("--k", type=int, default=None, help="number of eigenpairs to write")
            p.add_argument("--order", choices=["largest", "smallest"], default="smallest")
        p.add_argument("--out", default=f"out/{name}")
        p.set_defaults(func=func)

    p = sub.add_parser("cluster", help="semi-supervised SDSBM clustering")
    _add_synthetic(p, required_n=False)
    p.add_argument("--q", type=float, default=0.25)
    p.add_argument("--features", default="T,T")
    p.add_argument("--networks", default="0-4", help="network seeds")
    p.add_argument("--splits", default="0-1", help="node split seeds")
    p.add_argument("--hidden", type=int, default=16)
    p.add_argument("--max-epochs", type=int, default=1000)
    p.add_argument("--patience", type=int, default=200)
    p.add_argument("--no-baseline", action="store_true", help="skip spectral k-means")
    _add_phase(p)
    p.add_argument("--out", default="out/cluster")
    p.set_defaults(func=cmd_cluster)

    p = sub.add_parser("link", help="link sign/direction prediction")
    p.add_argument("--graph", default=None, help="edge-list CSV; omit to sample an SDSBM")
    _add_synthetic(p, required_n=False)
    p.add_argument("--graph-seed", type=int, default=0)
    _add_link_opts(p)
    p.add_argument("--out", default="out/link")
    p.set_defaults(func=cmd_link)

    p = sub.add_parser("fill", help="lead-lag graph from a returns CSV")
    p.add_argument("--returns", required=True, help="CSV: date column then one column per stock")
    p.add_argument("--frac", type=float, default=0.2, help="fraction of off-diagonal entries kept")
    p.add_argument("--orientation", choices=["semantic", "literal"], default="semantic")
    p.add_argument("--dump-matrix", action="store_true")
    _add_link_opts(p)
    p.set_defaults(task=[])
    p.add_argument("--out", default="out/fill")
    p.set_defaults(func=cmd_fill)

    p = sub.add_parser("check", help="run built-in numerical self-checks")
    p.add_argument("--suite", nargs="*", choices=["spectrum", "reduction", "gradient"])
    p.add_argument("--seed", type=int, default=0)
    p.set_defaults(func=cmd_check)
    return parser


def _apply_config(parser, argv) -> argparse.Namespace:
    args = parser.parse_args(argv)
    if not args.config:
        return args
    settings = read_config_file(args.config)
    sub = parser._subparsers._group_actions[0].choices[args.command]
    known = {a.dest: a for a in sub._actions}
    for key, raw in settings.items():
        if key not in known or key in ("help", "func"):
            raise ConfigError(f"unknown setting {key!r} for {args.command}")
        action = known[key]
        if isinstance(action, argparse._StoreTrueAction):
            value = raw.lower() in ("1", "true", "yes", "on")
        elif action.nargs in ("+", "*"):
            value = [action.type(v) if action.type else v for v in raw.replace(",", " ").split()]
        else:
            try:
                value = action.type(raw) if action.type else raw
            except ValueError:
                raise ConfigError(f"bad value for {key}: {raw!r}") from None
        sub.set_defaults(**{key: value})
        action.required = False
    # explicit flags override file settings
    return parser.parse_args(argv)


def main(argv=None) -> int:
    from .spectral import DimensionTooLargeError, NonConvergenceError
    from .tasks import SplitError

    parser = build_parser()
    try:
        args = _apply_config(parser, argv)
        return args.func(args)
    except ConfigError as exc:
        print(f"config error: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    except (DataError, GraphError, SplitError, NoDirectionError, FileNotFoundError) as exc:
        print(f"data error: {exc}", file=sys.stderr)
        return EXIT_DATA
    except (NonConvergenceError, DimensionTooLargeError, FloatingPointError, np.linalg.LinAlgError) as exc:
        print(f"numerical failure: {exc}", file=sys.stderr)
        return EXIT_NUMERIC
    except ValueError as exc:
        # parameter validation in the library
        print(f"config error: {exc}", file=sys.stderr)
        return EXIT_CONFIG


if __name__ == "__main__":
    sys.exit(main())
