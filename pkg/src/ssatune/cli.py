"""Command-line front end: ``ssatune {params,solve,bench,search,gen}``.

Data goes to ``--out`` (or stdout when no path is given); progress and
diagnostics go to stderr.
"""
from __future__ import annotations

import argparse
import csv
import io
import json
import sys
import time
from pathlib import Path

from . import __version__, kernels
from .annealers import SaConfig, derive_seed, run_sa, run_ssa
from .benchio import (
    _atomic_write,
    audit_meta,
    bench,
    gen_complete_pm1,
    read_gset,
    write_gset,
    write_report,
)
from .errors import ConfigurationError, SsaTuneError
from .hyperparams import C_I0MAX, C_I0MIN, C_NOISE, determine_params, local_energy_stats, table_row
from .ising import maxcut_to_ising
from .search import SearchSpace, random_search

DEFAULT_SEED = 0


def _add_instance(p):
    g = p.add_argument_group("instance")
    g.add_argument("--input", metavar="PATH", help="Gset-format instance file")
    g.add_argument("--gen-complete", metavar="N", type=int,
                   help="use a generated complete +/-1 graph on N nodes instead of --input")
    g.add_argument("--minus-frac", metavar="F", type=float, default=0.5,
                   help="fraction of -1 weights for --gen-complete (default: 0.5)")


def _add_common(p, trials=True):
    p.add_argument("--cycles", type=int, default=1000, help="annealing cycles (default: 1000)")
    if trials:
        p.add_argument("--trials", type=int, default=100, help="independent trials (default: 100)")
    p.add_argument("--seed", type=int, default=DEFAULT_SEED,
                   help=f"master seed; trial k uses (seed, k) (default: {DEFAULT_SEED})")
    p.add_argument("--out", metavar="PATH", help="output file (.json or .csv); stdout if omitted")
    p.add_argument("--threads", type=int, default=1, help="worker threads for trials (default: 1)")
    c = p.add_argument_group("hyperparameter constants")
    c.add_argument("--c-noise", type=float, default=C_NOISE, help=f"n_rnd = c * mean(s) (default: {C_NOISE})")
    c.add_argument("--c-i0min", type=float, default=C_I0MIN,
                   help=f"I0min = c * max(s) + min|mu| (default: {C_I0MIN})")
    c.add_argument("--c-i0max", type=float, default=C_I0MAX,
                   help=f"I0max = c * max(s) + min|mu| (default: {C_I0MAX})")
    c.add_argument("--alpha", type=float, default=0.0, help="accumulator resolution (default: 0)")


def build_parser():
    parser = argparse.ArgumentParser(prog="ssatune", description=__doc__.splitlines()[0])
    parser.add_argument("--version", action="version", version=f"ssatune {__version__}")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("params", help="print closed-form SSA/SSAU hyperparameters")
    _add_instance(p)
    _add_common(p, trials=False)

    for name, helptext in (("solve", "single anneal; prints final cut and energy"),
                           ("bench", "repeated anneals; writes mean/std/best report")):
        p = sub.add_parser(name, help=helptext)
        _add_instance(p)
        p.add_argument("--algo", choices=["sa", "ssa", "ssau"], default="ssa",
                       help="annealer (default: ssa)")
        _add_common(p, trials=(name == "bench"))
        p.add_argument("--trace", metavar="PATH", help="per-cycle CSV trace of trial 0")

    p = sub.add_parser("search", help="random hyperparameter search baseline")
    _add_instance(p)
    _add_common(p)
    p.add_argument("--eval-runs", type=int, default=1, help="anneals per candidate (default: 1)")
    p.add_argument("--range", nargs=2, type=float, default=(0.0, 1000.0), metavar=("LO", "HI"),
                   help="sampling range for n_rnd, I0min and I0max (default: 0 1000)")

    p = sub.add_parser("gen", help="write a generated complete +/-1 instance in Gset format")
    p.add_argument("--gen-complete", metavar="N", type=int, required=True)
    p.add_argument("--minus-frac", metavar="F", type=float, default=0.5)
    p.add_argument("--seed", type=int, default=DEFAULT_SEED)
    p.add_argument("--out", metavar="PATH", required=True)
    return parser


def load_instance(args):
    if args.input and args.gen_complete:
        raise ConfigurationError("give either --input or --gen-complete, not both")
    if args.input:
        return read_gset(args.input)
    if args.gen_complete:
        return gen_complete_pm1(args.gen_complete, args.minus_frac, args.seed)
    raise ConfigurationError("an instance is required: --input PATH or --gen-complete N")


def _constants(args):
    return {"c_noise": args.c_noise, "c_i0min": args.c_i0min, "c_i0max": args.c_i0max}


def _flags(args):
    return {k: v for k, v in vars(args).items() if k != "func"}


def _emit(text, out):
    if out:
        _atomic_write(out, text)
    else:
        sys.stdout.write(text)


def cmd_params(args):
    graph = load_instance(args)
    model = maxcut_to_ising(graph)
    stats = local_energy_stats(model)
    kw = dict(alpha=args.alpha, **_constants(args))
    ssa = determine_params(stats, args.cycles, "ssa", **kw)
    ssau = determine_params(stats, args.cycles, "ssau", **kw)
    row = table_row(stats, ssa, ssau)
    if args.out:
        doc = {"graph": graph.name, "n": graph.n, "m": graph.m, **row,
               "meta": audit_meta(flags=_flags(args), seed=args.seed, constants=_constants(args))}
        _atomic_write(args.out, json.dumps(doc, indent=2) + "\n")
    print(f"{'graph':<12} {'|mu_i|':>18} {'s_i':>16} {'n_rnd':>7} {'I0min':>7} {'I0max':>7} "
          f"{'beta':>9} {'n_rnd_i':>16}")
    print(f"{graph.name:<12} [{row['abs_mu_min']:.2f}, {row['abs_mu_max']:.2f}]".ljust(31)
          + f" [{row['s_min']:.2f}, {row['s_max']:.2f}]".rjust(17)
          + f" {row['n_rnd']:7.2f} {row['I0min']:7.2f} {row['I0max']:7.2f} {row['beta']:9.5f}"
          + f" [{row['n_rnd_i_min']:.2f}, {row['n_rnd_i_max']:.2f}]".rjust(17))
    return 0


def _write_trace(path, result):
    tr = result.trace
    temp_key = "I0" if "I0" in tr else "T"
    buf = io.StringIO()
    wr = csv.writer(buf, lineterminator="\n")
    wr.writerow(["t", temp_key, "energy"])
    for t, x, e in zip(tr["t"], tr[temp_key], tr["energy"]):
        wr.writerow([int(t), format(float(x), ".17g"), format(float(e), ".17g")])
    _atomic_write(path, buf.getvalue())


def _trace_run(args, graph):
    model = maxcut_to_ising(graph)
    seed = derive_seed(args.seed, 0)
    if args.algo == "sa":
        return run_sa(model, SaConfig(cycles=args.cycles), seed, record_trace=True, graph=graph)
    params = determine_params(local_energy_stats(model), args.cycles, args.algo,
                              args.alpha, **_constants(args))
    return run_ssa(model, params, seed, record_trace=True, graph=graph)


def _report_format(path):
    return "csv" if path and Path(path).suffix.lower() == ".csv" else "json"


def cmd_bench(args, trials=None):
    graph = load_instance(args)
    trials = trials if trials is not None else args.trials
    t0 = time.perf_counter()
    report = bench(graph, args.algo, trials, args.cycles, args.seed, args.threads, args.alpha,
                   _constants(args), meta={"flags": _flags(args), "backend": kernels.BACKEND})
    print(f"{graph.name}: {args.algo} x{trials} mean={report.mean_cut:.2f} "
          f"std={report.std_cut:.2f} best={report.best_cut:.0f} "
          f"({time.perf_counter() - t0:.2f}s)", file=sys.stderr)
    if args.out:
        write_report(report, _report_format(args.out), args.out)
    elif args.command == "bench":
        sys.stdout.write(json.dumps(report.to_dict(), indent=2) + "\n")
    if args.trace:
        _write_trace(args.trace, _trace_run(args, graph))
    return report


def cmd_solve(args):
    report = cmd_bench(args, trials=1)
    graph = load_instance(args)
    cut = report.cuts[0]
    # cut = (W_total - H) / 2 for the J = -w mapping
    energy = graph.total_weight - 2.0 * cut
    print(f"cut {cut:.17g}")
    print(f"energy {energy:.17g}")
    return 0


def cmd_search(args):
    graph = load_instance(args)
    model = maxcut_to_ising(graph)
    lo, hi = args.range
    space = SearchSpace((lo, hi), (lo, hi), (lo, hi), args.trials)

    best = [float("-inf")]

    def progress(k, rec):
        best[0] = max(best[0], rec.mean_cut)
        if (k + 1) % max(1, args.trials // 10) == 0:
            print(f"search {k + 1}/{args.trials} best so far {best[0]:.1f}", file=sys.stderr)

    report = random_search(model, graph, space, args.cycles, args.eval_runs, args.seed,
                           progress=progress)
    t0 = time.perf_counter()
    clt = determine_params(local_energy_stats(model), args.cycles, "ssa", args.alpha,
                           **_constants(args))
    clt_time = time.perf_counter() - t0
    report.meta = audit_meta(flags=_flags(args), seed=args.seed, constants=_constants(args),
                             clt_params=clt.as_dict(), clt_time_s=clt_time, graph=graph.name)
    b = report.best
    print(f"best trial {b.trial}: n_rnd={b.n_rnd:.3f} I0min={b.I0min:.3f} I0max={b.I0max:.3f} "
          f"mean_cut={b.mean_cut:.2f} ({report.elapsed_s:.2f}s; closed form {clt_time * 1e6:.0f}us)",
          file=sys.stderr)
    _emit(json.dumps(report.to_dict(), indent=2) + "\n", args.out)
    return 0


def cmd_gen(args):
    graph = gen_complete_pm1(args.gen_complete, args.minus_frac, args.seed)
    write_gset(graph, args.out)
    print(f"wrote {graph.name}: n={graph.n} m={graph.m} -> {args.out}", file=sys.stderr)
    return 0


COMMANDS = {"params": cmd_params, "solve": cmd_solve, "bench": cmd_bench,
            "search": cmd_search, "gen": cmd_gen}


def main(argv=None):
    args = build_parser().parse_args(argv)
    try:
        result = COMMANDS[args.command](args)
    except (SsaTuneError, OSError) as exc:
        print(f"ssatune {args.command}: error: {exc}", file=sys.stderr)
        return 2
    return 0 if result is None or not isinstance(result, int) else result


if __name__ == "__main__":
    sys.exit(main())
