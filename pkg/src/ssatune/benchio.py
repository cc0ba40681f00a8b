"""Benchmark instances, trial statistics and report persistence.

Gset text format: the first non-blank line is ``<n> <m>``; each of the next
``m`` non-blank lines is ``<u> <v> <w>`` with 1-based node indices. Lines
starting with ``%`` or ``#`` are ignored.
"""
from __future__ import annotations

import csv
import io
import json
import math
import os
import tempfile
import time
from dataclasses import asdict, dataclass, field
from pathlib import Path

import numpy as np

from . import __version__
from .annealers import SA, SaConfig, derive_seed, make_rng, run_trials
from .errors import ConfigurationError, GsetParseError, MalformedInputError
from .hyperparams import C_I0MAX, C_I0MIN, C_NOISE, params_for_model
from .ising import WeightedGraph, maxcut_to_ising

CSV_FIELDS = ["graph", "algo", "trials", "cycles", "mean_cut", "std_cut", "best_cut", "elapsed_s"]
STD_KIND = "population"


def parse_gset(text, name="graph", path=None):
    lines = [
        (no, line.split())
        for no, line in enumerate(text.splitlines(), start=1)
        if line.strip() and not line.lstrip().startswith(("%", "#"))
    ]
    if not lines:
        raise GsetParseError("empty instance: expected a '<n> <m>' header", path=path)

    def ints(no, toks, count, what):
        if len(toks) != count:
            raise GsetParseError(f"{what} line needs {count} tokens, got {len(toks)}", no, path)
        try:
            return [int(t) for t in toks]
        except ValueError:
            raise GsetParseError(f"non-integer token in {what} line: {' '.join(toks)}", no, path) from None

    hno, htoks = lines[0]
    n, m = ints(hno, htoks, 2, "header")
    if n < 1 or m < 0:
        raise GsetParseError(f"invalid header: n={n}, m={m}", hno, path)
    body = lines[1:]
    if len(body) != m:
        raise GsetParseError(f"header declares {m} edges but file has {len(body)} edge lines",
                             body[-1][0] if body else hno, path)
    u = np.empty(m, dtype=np.int64)
    v = np.empty(m, dtype=np.int64)
    w = np.empty(m, dtype=np.float64)
    seen = {}
    for k, (no, toks) in enumerate(body):
        a, b, c = ints(no, toks, 3, "edge")
        for x in (a, b):
            if not 1 <= x <= n:
                raise GsetParseError(f"node index {x} outside [1, {n}]", no, path)
        if a == b:
            raise GsetParseError(f"self-loop on node {a}", no, path)
        key = (min(a, b), max(a, b))
        if key in seen:
            raise GsetParseError(f"duplicate edge ({a}, {b}), first seen on line {seen[key]}", no, path)
        seen[key] = no
        u[k], v[k], w[k] = a - 1, b - 1, c
    return WeightedGraph(n, u, v, w, name=name)


def read_gset(path):
    path = Path(path)
    return parse_gset(path.read_text(), name=path.stem, path=str(path))


def format_gset(graph):
    buf = io.StringIO()
    buf.write(f"{graph.n} {graph.m}\n")
    for a, b, c in graph.edges():
        wc = int(c) if float(c).is_integer() else repr(c)
        buf.write(f"{a + 1} {b + 1} {wc}\n")
    return buf.getvalue()


def write_gset(graph, path):
    if not np.all(graph.w == np.rint(graph.w)):
        raise MalformedInputError("Gset format only carries integer weights")
    _atomic_write(path, format_gset(graph))


def gen_complete_pm1(n, minus_fraction=0.5, seed=0):
    """Complete graph with exactly ``round(minus_fraction * m)`` weights of -1."""
    if n < 2:
        raise ConfigurationError(f"n must be >= 2, got {n}")
    if not 0.0 <= minus_fraction <= 1.0:
        raise ConfigurationError(f"minus_fraction must lie in [0, 1], got {minus_fraction}")
    u, v = np.triu_indices(n, k=1)
    m = len(u)
    n_minus = int(round(minus_fraction * m))
    w = np.ones(m)
    w[:n_minus] = -1.0
    make_rng(seed).shuffle(w)
    return WeightedGraph(n, u, v, w, name=f"K{n}_pm1_s{seed}")


def gen_random_graph(n, p, weights=(1.0,), seed=0):
    """Erdos-Renyi graph; each present edge gets a weight drawn from ``weights``."""
    rng = make_rng(seed)
    u, v = np.triu_indices(n, k=1)
    keep = rng.random(len(u)) < p
    u, v = u[keep], v[keep]
    w = rng.choice(np.asarray(weights, dtype=np.float64), size=len(u))
    return WeightedGraph(n, u, v, w, name=f"rnd{n}_p{p}_s{seed}")


def gen_toroidal_pm1(rows, cols, seed=0):
    """2-D torus with random +/-1 weights (the shape of G11/G34/G48)."""
    rng = make_rng(seed)
    idx = np.arange(rows * cols).reshape(rows, cols)
    right = np.stack([idx.ravel(), np.roll(idx, -1, axis=1).ravel()])
    down = np.stack([idx.ravel(), np.roll(idx, -1, axis=0).ravel()])
    uv = np.concatenate([right, down], axis=1)
    w = rng.choice(np.array([-1.0, 1.0]), size=uv.shape[1])
    return WeightedGraph(rows * cols, uv[0], uv[1], w, name=f"torus{rows}x{cols}_s{seed}")


def trial_stats(cuts):
    """Mean, population standard deviation and maximum of per-trial cut values."""
    arr = np.asarray(cuts, dtype=np.float64)
    if arr.size == 0:
        raise ConfigurationError("trial_stats needs at least one value")
    return float(arr.mean()), float(arr.std()), float(arr.max())


@dataclass
class TrialReport:
    graph: str
    algo: str
    trials: int
    cycles: int
    cuts: list
    seeds: list
    elapsed_s: float
    mean_cut: float = field(init=False)
    std_cut: float = field(init=False)
    best_cut: float = field(init=False)
    std_kind: str = STD_KIND
    meta: dict = field(default_factory=dict)

    def __post_init__(self):
        self.cuts = [float(c) for c in self.cuts]
        self.seeds = [list(s) if isinstance(s, (tuple, list)) else s for s in self.seeds]
        self.mean_cut, self.std_cut, self.best_cut = trial_stats(self.cuts)

    def to_dict(self):
        return asdict(self)

    @classmethod
    def from_dict(cls, d):
        d = dict(d)
        stored = {k: d.pop(k) for k in ("mean_cut", "std_cut", "best_cut") if k in d}
        rep = cls(**d)
        for k, val in stored.items():
            if getattr(rep, k) != val:
                raise MalformedInputError(f"report field {k}={val} disagrees with per-trial cuts")
        return rep


def _fmt(x):
    return format(x, ".17g") if isinstance(x, float) else str(x)


def _atomic_write(path, text):
    path = Path(path)
    if path.parent and not path.parent.exists():
        path.parent.mkdir(parents=True, exist_ok=True)
    fd, tmp = tempfile.mkstemp(dir=path.parent, prefix=f".{path.name}.", suffix=".tmp")
    try:
        with os.fdopen(fd, "w", newline="") as fh:
            fh.write(text)
        os.replace(tmp, path)
    except BaseException:
        if os.path.exists(tmp):
            os.unlink(tmp)
        raise


def report_csv(report):
    buf = io.StringIO()
    buf.write("# " + json.dumps({"meta": report.meta, "std_kind": report.std_kind}, sort_keys=True) + "\n")
    wr = csv.writer(buf, lineterminator="\n")
    wr.writerow(CSV_FIELDS)
    wr.writerow([_fmt(getattr(report, k)) for k in CSV_FIELDS])
    return buf.getvalue()


def trials_csv(report):
    buf = io.StringIO()
    wr = csv.writer(buf, lineterminator="\n")
    wr.writerow(["trial", "seed", "cut"])
    for k, (s, c) in enumerate(zip(report.seeds, report.cuts)):
        wr.writerow([k, " ".join(str(x) for x in np.atleast_1d(s)), _fmt(c)])
    return buf.getvalue()


def write_report(report, fmt, destination, per_trial=True):
    """Write ``report`` as ``'json'`` or ``'csv'``.

    CSV output is one header row plus one data row, preceded by a ``#`` line
    holding the metadata; per-trial cuts go to ``<stem>.trials.csv``.
    """
    fmt = fmt.lower()
    destination = Path(destination)
    if fmt == "json":
        _atomic_write(destination, json.dumps(report.to_dict(), indent=2) + "\n")
    elif fmt == "csv":
        _atomic_write(destination, report_csv(report))
        if per_trial:
            _atomic_write(destination.with_suffix(".trials.csv"), trials_csv(report))
    else:
        raise ConfigurationError(f"unknown report format {fmt!r}")


def read_report(path):
    path = Path(path)
    if path.suffix == ".json":
        return TrialReport.from_dict(json.loads(path.read_text()))
    raise ConfigurationError("only JSON reports can be read back")


def read_csv_rows(path):
    with open(path, newline="") as fh:
        return list(csv.reader(line for line in fh if not line.startswith("#")))


def audit_meta(**extra):
    meta = {
        "tool": "ssatune",
        "version": __version__,
        "constants": {"c_noise": C_NOISE, "c_i0min": C_I0MIN, "c_i0max": C_I0MAX},
        "std_kind": STD_KIND,
    }
    meta.update(extra)
    return meta


def bench(graph, algo="ssa", trials=100, cycles=1000, seed=0, threads=1, alpha=0.0,
          constants=None, sa_config=None, backend=None, meta=None):
    """Run ``trials`` anneals of ``algo`` on ``graph`` and return a :class:`TrialReport`."""
    constants = dict(constants or {})
    algo = algo.lower()
    model = maxcut_to_ising(graph)
    t0 = time.perf_counter()
    params = config = None
    if algo == SA:
        config = sa_config or SaConfig(cycles=cycles)
    else:
        params = params_for_model(model, cycles, algo, alpha, **constants)
    results = run_trials(model, algo, trials, seed, params=params, config=config,
                         graph=graph, threads=threads, backend=backend)
    elapsed = time.perf_counter() - t0
    full_meta = audit_meta(seed=seed, alpha=alpha, threads=threads)
    full_meta["constants"].update(constants)
    if params is not None:
        p = params.as_dict()
        if params.mode != "ssa":
            p["n_rnd"] = {"min": float(np.min(params.n_rnd)), "max": float(np.max(params.n_rnd)),
                          "mean": float(np.mean(params.n_rnd))}
        full_meta["params"] = p
    if config is not None:
        full_meta["sa_config"] = asdict(config)
    full_meta.update(meta or {})
    return TrialReport(
        graph=graph.name,
        algo=algo,
        trials=trials,
        cycles=cycles,
        cuts=[r.cut for r in results],
        seeds=[list(derive_seed(seed, k)) for k in range(trials)],
        elapsed_s=elapsed,
        meta=full_meta,
    )


def normalized(value, reference):
    if reference == 0 or not math.isfinite(reference):
        raise ConfigurationError("reference must be a finite nonzero value")
    return value / reference
