"""Time the compiled and pure-Python annealing kernels on complete +/-1 graphs.

Each backend anneals the same instance with the same seeds; the script checks
the final spin states agree and reports the best-of-``--repeat`` wall time.

    python benchmarks/bench_kernels.py --sizes 200 800 2000 --cycles 1000
"""
import argparse
import time

import numpy as np

from ssatune import kernels
from ssatune.annealers import SaConfig, run_sa, run_ssa
from ssatune.benchio import gen_complete_pm1
from ssatune.hyperparams import params_for_model
from ssatune.ising import maxcut_to_ising


def time_run(fn, repeat):
    best, result = np.inf, None
    for _ in range(repeat):
        t0 = time.perf_counter()
        result = fn()
        best = min(best, time.perf_counter() - t0)
    return best, result


def main(argv=None):
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--sizes", type=int, nargs="+", default=[200, 800, 2000])
    ap.add_argument("--cycles", type=int, default=1000)
    ap.add_argument("--repeat", type=int, default=3)
    ap.add_argument("--seed", type=int, default=0)
    args = ap.parse_args(argv)

    backends = ["python"] + (["cython"] if kernels.compiled is not None else [])
    if len(backends) == 1:
        print("compiled kernels not built; timing the python backend only")
    print(f"{'algo':<5} {'n':>6} {'nnz':>10} " + " ".join(f"{b + ' s':>10}" for b in backends)
          + f" {'speedup':>8} {'same':>5}")
    for n in args.sizes:
        model = maxcut_to_ising(gen_complete_pm1(n, 0.5, args.seed))
        params = params_for_model(model, args.cycles)
        jobs = {
            "ssa": lambda b: run_ssa(model, params, seed=args.seed, backend=b),
            "sa": lambda b: run_sa(model, SaConfig(cycles=args.cycles), seed=args.seed, backend=b),
        }
        for algo, job in jobs.items():
            times, states = [], []
            for b in backends:
                t, res = time_run(lambda: job(b), args.repeat)
                times.append(t)
                states.append(res.final_sigma)
            speedup = times[0] / times[-1]
            same = all(np.array_equal(states[0], s) for s in states)
            print(f"{algo:<5} {n:>6} {model.nnz:>10} " + " ".join(f"{t:>10.4f}" for t in times)
                  + f" {speedup:>7.1f}x {str(same):>5}")


if __name__ == "__main__":
    main()
