"""Command-line driver: ad hoc bounds, exact distances, reproducible
experiments, certificate reports, and family generation."""

import argparse
import sys
import time
from concurrent.futures import ThreadPoolExecutor
from pathlib import Path

import numpy as np

from . import certify, families, io, relax
from .errors import (BadParams, EmptyDataset, GedlbError, InfeasibleMix,
                     NoConvergence, NotUniform, NumericalBreakdown,
                     ParseError, SolverFailure, TooLarge)
from .graphs import adjacency, apply_edits, exact_ged, exact_ged_ext, \
    random_edits
from .spectra import eig_sym, eigenspaces

EXIT_OK = 0
EXIT_PARSE = 2
EXIT_SOLVER = 3
EXIT_BUDGET = 4

EXPERIMENTS = {
    "t9": (lambda: families.triangular(9), (4, 200, 4), 0.5, ("SH",)),
    "gq24": (families.gq24, (2, 100, 2), 0.5, ("SH",)),
    "e30": (lambda: families.extremal_e(30), (5, 45, 5), 0.2,
            ("SH", "IS", "MC")),
    "windmill47": (lambda: families.windmill(4, 7), (10, 200, 5), 0.8,
                   ("SH", "IS", "MC")),
}

FAMILY_BUILDERS = {
    "johnson": (families.johnson, 2),
    "kneser": (families.kneser, 2),
    "hamming": (families.hamming, 2),
    "triangular": (families.triangular, 1),
    "windmill": (families.windmill, 2),
    "extremal": (families.extremal_e, 1),
    "gq24": (families.gq24, 0),
}


def _read_graph(path):
    path = Path(path)
    text = path.read_text()
    if path.suffix.lower() == ".ct":
        return io.read_ct(text)
    return io.read_edgelist(text)


def _resolve_graph(ref):
    """A file path, or "family:<name>:<comma params>"."""
    if str(ref).startswith("family:"):
        parts = str(ref).split(":")
        name = parts[1] if len(parts) > 1 else ""
        if name not in FAMILY_BUILDERS:
            raise BadParams(f"unknown family {name!r}")
        builder, arity = FAMILY_BUILDERS[name]
        params = [int(p) for p in parts[2].split(",")] if len(parts) > 2 \
            and parts[2] else []
        if len(params) != arity:
            raise BadParams(f"family {name} takes {arity} parameters")
        return builder(*params)
    return _read_graph(ref)


def _parse_kinds(text):
    kinds = tuple(k.strip().upper() for k in text.split(",") if k.strip())
    if not kinds:
        raise BadParams("empty set list")
    return kinds


def _parse_grid(text, default):
    if not text:
        start, stop, step = default
    else:
        parts = text.split(":")
        if len(parts) != 3:
            raise BadParams(f"grid {text!r} is not start:stop:step")
        start, stop, step = (int(p) for p in parts)
    if step <= 0 or start <= 0 or stop < start:
        raise BadParams(f"bad grid {start}:{stop}:{step}")
    return list(range(start, stop + 1, step))


def _write_out(args, records, fields=None):
    if getattr(args, "out", None):
        fmt = getattr(args, "format", "json") or "json"
        Path(args.out).write_text(io.emit_results(records, fmt, fields))


def cmd_bound(args):
    g1 = _read_graph(args.g1)
    g2 = _read_graph(args.g2)
    kinds = _parse_kinds(args.sets)
    t0 = time.perf_counter()
    if args.ext:
        result = relax.lower_bound_ext(g1, g2, kinds,
                                       cost_per_edit=args.cost, tol=args.tol)
        directed = ()
    else:
        fwd = relax.lower_bound(g1, g2, kinds, tol=args.tol)
        rev = relax.lower_bound(g2, g1, kinds, tol=args.tol)
        rev.direction = relax.Direction.G2_TO_G1
        best = fwd if fwd.lower_bound >= rev.lower_bound else rev
        result = relax.BoundResult(best.lower_bound, best.E_hat, best.X_hat,
                                   best.status, relax.Direction.MAX_OF_BOTH,
                                   achieving=best.direction)
        directed = (fwd, rev)
    elapsed = time.perf_counter() - t0
    records = []
    for r in (result,) + tuple(directed):
        records.append({
            "direction": r.direction.value,
            "lower_bound": r.lower_bound,
            "status": r.status.value,
            "sets": "+".join(kinds),
            "seconds": elapsed,
        })
    print(f"lower bound: {result.lower_bound:.6g}  "
          f"(sets {'+'.join(kinds)}, {elapsed:.2f}s)")
    for r in directed:
        print(f"  {r.direction.value}: {r.lower_bound:.6g} [{r.status.value}]")
    _write_out(args, records)
    return EXIT_OK


def cmd_exact(args):
    g1 = _read_graph(args.g1)
    g2 = _read_graph(args.g2)
    value = exact_ged_ext(g1, g2) if args.ext else exact_ged(g1, g2)
    print(f"exact edit distance: {value}")
    _write_out(args, [{"exact": value, "ext": bool(args.ext)}])
    return EXIT_OK


def _trial_bound(g, lam, a1, kind, edits, frac, seed_tuple, tol):
    edit = random_edits(g, edits, frac, seed=seed_tuple)
    g2 = apply_edits(g, edit)
    if kind == "SH":
        res = relax.sh_admm(adjacency(g2), lam, tol=tol)
    else:
        # Long sweeps hit the occasional slow solver tail; a generous
        # budget lets those trials finish at the requested tolerance.
        res = relax.bound_with_set(adjacency(g2), a1[kind], tol=tol,
                                   max_iter=300000)
    ok = relax.success_check(res.E_hat, edit.e_star(g.n))
    return res.lower_bound, ok


def _run_family_experiment(args):
    builder, default_grid, frac, default_kinds = EXPERIMENTS[args.name]
    g = builder()
    grid = _parse_grid(args.edit_grid, default_grid)
    kinds = _parse_kinds(args.sets) if args.sets else default_kinds
    lam, _ = eig_sym(adjacency(g))
    levels = {k: relax.prepared_set(g, k) for k in kinds if k != "SH"}
    tasks = [(edits, kind, trial) for edits in grid for kind in kinds
             for trial in range(args.trials)]

    def run(task):
        edits, kind, trial = task
        return task, _trial_bound(g, lam, levels, kind, edits, frac,
                                  (args.seed, edits, trial), args.tol)

    results = {}
    if args.workers > 1:
        with ThreadPoolExecutor(max_workers=args.workers) as pool:
            for task, out in pool.map(run, tasks):
                results[task] = out
    else:
        for task in tasks:
            results[task] = run(task)[1]

    config = {
        "experiment": args.name,
        "seed": args.seed,
        "grid": f"{grid[0]}:{grid[-1]}:{grid[1] - grid[0] if len(grid) > 1 else 1}",
        "trials": args.trials,
        "add_fraction": frac,
        "tol": args.tol,
    }
    records = []
    for edits in grid:
        for kind in kinds:
            vals = [results[(edits, kind, t)] for t in range(args.trials)]
            bounds = [v[0] for v in vals]
            rate = float(np.mean([v[1] for v in vals]))
            rec = {
                "edits": edits,
                "set": kind,
                "success_rate": rate,
                "mean_bound": float(np.mean(bounds)),
                "mean_ratio": float(np.mean(bounds)) / edits,
            }
            rec.update(config)
            records.append(rec)
            print(f"{args.name} edits={edits:4d} set={kind:2s} "
                  f"success={rate:.2f} ratio={rec['mean_ratio']:.3f}")
    _write_out(args, records)
    return EXIT_OK


def _run_dataset_experiment(args):
    if not args.dataset_dir:
        raise BadParams("dataset experiment requires --dataset-dir")
    ds = io.load_dataset(args.dataset_dir, args.pattern)
    names = [name for name, _ in ds.graphs]
    all_pairs = [(i, j) for i in range(len(names)) for j in range(i + 1,
                                                                  len(names))]
    if args.pairs and args.pairs < len(all_pairs):
        rng = np.random.default_rng(args.seed)
        idx = rng.choice(len(all_pairs), size=args.pairs, replace=False)
        pairs = [all_pairs[k] for k in sorted(idx)]
    else:
        pairs = all_pairs
    configs = [("SH",), ("IS",), ("MC",), ("SH", "IS", "MC")]
    if args.sets:
        configs = [_parse_kinds(args.sets)]
    records = []
    for kinds in configs:
        bounds = []
        for i, j in pairs:
            r = relax.lower_bound_ext(ds.graphs[i][1], ds.graphs[j][1], kinds,
                                      cost_per_edit=args.cost, tol=args.tol)
            bounds.append(r.lower_bound)
        rec = {
            "set": "+".join(kinds),
            "pairs": len(pairs),
            "mean_bound": float(np.mean(bounds)),
            "cost_per_edit": args.cost,
            "seed": args.seed,
            "dataset": str(args.dataset_dir),
            "graphs": ds.count,
            "tol": args.tol,
        }
        records.append(rec)
        print(f"dataset set={rec['set']:8s} pairs={rec['pairs']} "
              f"mean bound={rec['mean_bound']:.3f}")
    _write_out(args, records)
    return EXIT_OK


def cmd_experiment(args):
    if args.name == "dataset":
        return _run_dataset_experiment(args)
    if args.name not in EXPERIMENTS:
        raise BadParams(f"unknown experiment {args.name!r}")
    return _run_family_experiment(args)


def _read_edits(path, g):
    adds, deletes = [], []
    for lineno, raw in enumerate(Path(path).read_text().splitlines(), 1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        parts = line.split()
        if len(parts) != 3 or parts[0] not in ("add", "del"):
            raise ParseError(f"expected 'add i j' or 'del i j', got {raw!r}",
                             lineno)
        i, j = int(parts[1]), int(parts[2])
        (adds if parts[0] == "add" else deletes).append((i, j))
    from .graphs import EditSet
    return EditSet(adds=tuple(adds), deletes=tuple(deletes))


def cmd_certify(args):
    g = _resolve_graph(args.graph)
    es = eigenspaces(adjacency(g))
    c1s = [float(v) for v in args.c1.split(",")]
    epss = [float(v) for v in args.eps.split(",")]
    edit = _read_edits(args.edits, g) if args.edits else None
    records = []
    for c1 in c1s:
        for eps in epss:
            params = certify.default_params(es, c1=c1, eps=eps)
            if args.alpha:
                alpha = tuple(float(v) for v in args.alpha.split(","))
                params = certify.CertificateParams(alpha, params.gamma)
            d = args.d
            xo = certify.xi_upper(params.alpha, d, es)
            xl = certify.xi_lower(params.alpha, d, es, probes=args.probes,
                                  seed=args.seed)
            rh = certify.rho(params.gamma, es)
            ok, margins = certify.check_theorem(g, d, params)
            rec = {
                "c1": c1, "eps": eps, "d": d,
                "rho": rh, "xi_lower": xl, "xi_upper": xo,
                "corollary_bound": certify.corollary_bound(es),
                "theorem_passed": ok,
                "norm_margin": margins["norm_margin"],
                "gap_margin": margins["gap_margin"],
            }
            line = (f"c1={c1:g} eps={eps:g}: rho={rh:.4f} "
                    f"xi=[{xl:.4f},{xo:.4f}] theorem={'pass' if ok else 'fail'}")
            if edit is not None:
                report = certify.check_sufficient(g, edit, params)
                rec.update({f"cond_{k}": v
                            for k, v in report.condition_flags.items()})
                rec["certified"] = report.all_passed
                g2 = apply_edits(g, edit)
                lam, _ = eig_sym(adjacency(g))
                res = relax.sh_admm(adjacency(g2), lam)
                rec["recovered"] = relax.success_check(res.E_hat,
                                                       edit.e_star(g.n))
                line += (f" certified={report.all_passed}"
                         f" recovered={rec['recovered']}")
            records.append(rec)
            print(line)
    _write_out(args, records)
    return EXIT_OK


def cmd_family(args):
    name = args.name
    if name not in FAMILY_BUILDERS:
        raise BadParams(f"unknown family {name!r}")
    builder, arity = FAMILY_BUILDERS[name]
    params = [int(p) for p in args.params.split(",")] if args.params else []
    if len(params) != arity:
        raise BadParams(f"family {name} takes {arity} parameters")
    g = builder(*params)
    es = eigenspaces(adjacency(g))
    spectrum = ", ".join(f"{v:.4g}^{m}" for v, m in
                         zip(es.distinct_values, es.multiplicities))
    srg = families.check_srg(g)
    print(f"{name}: n={g.n} edges={len(g.edges)}")
    print(f"spectrum: {spectrum}")
    print(f"srg: {srg if srg else 'not strongly regular'}")
    if args.out:
        Path(args.out).write_text(io.write_edgelist(g))
    return EXIT_OK


def _build_parser():
    parser = argparse.ArgumentParser(
        prog="gedlb",
        description="Lower bounds on graph edit distance via convex "
                    "relaxation over invariant sets.")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("bound", help="lower-bound a pair of graph files")
    p.add_argument("--g1", required=True)
    p.add_argument("--g2", required=True)
    p.add_argument("--sets", default="sh")
    p.add_argument("--ext", action="store_true")
    p.add_argument("--cost", type=float, default=1.0)
    p.add_argument("--tol", type=float, default=1e-6)
    p.add_argument("--out")
    p.add_argument("--format", choices=("json", "csv"), default="json")
    p.set_defaults(func=cmd_bound)

    p = sub.add_parser("exact", help="exact edit distance (small graphs)")
    p.add_argument("--g1", required=True)
    p.add_argument("--g2", required=True)
    p.add_argument("--ext", action="store_true")
    p.add_argument("--out")
    p.add_argument("--format", choices=("json", "csv"), default="json")
    p.set_defaults(func=cmd_exact)

    p = sub.add_parser("experiment", help="reproducible experiment grids")
    p.add_argument("--name", required=True,
                   choices=tuple(EXPERIMENTS) + ("dataset",))
    p.add_argument("--trials", type=int, default=50)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--edit-grid", default="")
    p.add_argument("--sets", default="")
    p.add_argument("--tol", type=float, default=1e-6)
    p.add_argument("--workers", type=int, default=1)
    p.add_argument("--dataset-dir", default="")
    p.add_argument("--pattern", default="*.ct")
    p.add_argument("--pairs", type=int, default=0)
    p.add_argument("--cost", type=float, default=3.0)
    p.add_argument("--out")
    p.add_argument("--format", choices=("json", "csv"), default="json")
    p.set_defaults(func=cmd_experiment)

    p = sub.add_parser("certify", help="tightness certificates and margins")
    p.add_argument("--graph", required=True,
                   help="edge-list/.ct file or family:<name>:<params>")
    p.add_argument("--d", type=int, default=1)
    p.add_argument("--edits", default="")
    p.add_argument("--c1", default="0.5")
    p.add_argument("--eps", default="0.01")
    p.add_argument("--alpha", default="")
    p.add_argument("--probes", type=int, default=8)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--out")
    p.add_argument("--format", choices=("json", "csv"), default="json")
    p.set_defaults(func=cmd_certify)

    p = sub.add_parser("family", help="generate a named graph family member")
    p.add_argument("--name", required=True)
    p.add_argument("--params", default="")
    p.add_argument("--out")
    p.set_defaults(func=cmd_family)
    return parser


def main(argv=None):
    parser = _build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except TooLarge as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_BUDGET
    except (SolverFailure, NoConvergence, NumericalBreakdown) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_SOLVER
    except (ParseError, BadParams, InfeasibleMix, EmptyDataset, NotUniform,
            OSError, ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_PARSE
    except GedlbError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_PARSE


if __name__ == "__main__":
    sys.exit(main())
