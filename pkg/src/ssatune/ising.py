"""Ising problem representation, MAX-CUT mapping, and energy/cut evaluation.

Conventions
-----------
Spins are int8 arrays with entries in {-1, +1}. Couplings live in a symmetric,
zero-diagonal CSR matrix so both the annealing kernels and the local-energy
statistics can walk rows. The Hamiltonian is

    H(sigma) = -sum_i h_i sigma_i - sum_{i<j} J_ij sigma_i sigma_j

and MAX-CUT is mapped with J = -w, h = 0, so the minimum energy is the
maximum cut: cut = (W_total - H) / 2.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from functools import cached_property

import numpy as np
import scipy.sparse as sp

from .errors import DimensionError, MalformedInputError


@dataclass(frozen=True, eq=False)
class WeightedGraph:
    """Undirected weighted graph with 0-based node indices.

    Edges are kept as three parallel arrays so million-edge instances
    (K2000 has 1,999,000 edges) stay cheap to build and to map.
    """

    n: int
    u: np.ndarray
    v: np.ndarray
    w: np.ndarray
    name: str = field(default="graph", compare=False)

    def __post_init__(self):
        object.__setattr__(self, "u", np.ascontiguousarray(self.u, dtype=np.int64))
        object.__setattr__(self, "v", np.ascontiguousarray(self.v, dtype=np.int64))
        object.__setattr__(self, "w", np.ascontiguousarray(self.w, dtype=np.float64))
        if not (len(self.u) == len(self.v) == len(self.w)):
            raise DimensionError("edge arrays u, v, w must have equal length")
        if int(self.n) < 1:
            raise MalformedInputError(f"node count must be positive, got {self.n}")
        self.validate()

    @classmethod
    def from_edges(cls, n, edges, name="graph"):
        edges = list(edges)
        if edges:
            u, v, w = zip(*edges)
        else:
            u, v, w = (), (), ()
        return cls(int(n), np.array(u), np.array(v), np.array(w), name=name)

    @property
    def m(self):
        return len(self.w)

    @property
    def total_weight(self):
        return float(self.w.sum())

    def edges(self):
        """Iterate ``(u, v, w)`` tuples."""
        for a, b, c in zip(self.u.tolist(), self.v.tolist(), self.w.tolist()):
            yield a, b, c

    def validate(self):
        n = self.n
        if self.m == 0:
            return
        bad = (self.u < 0) | (self.u >= n) | (self.v < 0) | (self.v >= n)
        if bad.any():
            k = int(np.flatnonzero(bad)[0])
            raise MalformedInputError(
                f"edge ({self.u[k]}, {self.v[k]}) has an endpoint outside [0, {n})"
            )
        loops = self.u == self.v
        if loops.any():
            k = int(np.flatnonzero(loops)[0])
            raise MalformedInputError(f"self-loop on node {self.u[k]} ({self.u[k]}, {self.v[k]})")
        lo = np.minimum(self.u, self.v)
        hi = np.maximum(self.u, self.v)
        key = lo * n + hi
        order = np.argsort(key, kind="stable")
        dup = np.flatnonzero(key[order][1:] == key[order][:-1])
        if dup.size:
            k = int(order[dup[0] + 1])
            raise MalformedInputError(f"duplicate edge ({lo[k]}, {hi[k]})")


class IsingModel:
    """Biases ``h`` and a symmetric zero-diagonal coupling matrix ``J`` (CSR).

    Instances are treated as immutable; the arrays are flagged read-only.
    """

    def __init__(self, h, J, check=True):
        h = np.array(h, dtype=np.float64)
        J = sp.csr_matrix(J, dtype=np.float64, copy=True)
        if J.ndim != 2 or J.shape[0] != J.shape[1]:
            raise DimensionError(f"J must be square, got shape {J.shape}")
        if h.shape != (J.shape[0],):
            raise DimensionError(f"h has length {h.shape}, expected {J.shape[0]}")
        J.eliminate_zeros()
        J.sum_duplicates()
        J.sort_indices()
        J.indptr = J.indptr.astype(np.int64)
        J.indices = J.indices.astype(np.int64)
        if check:
            if J.diagonal().any():
                i = int(np.flatnonzero(J.diagonal())[0])
                raise MalformedInputError(f"J has a nonzero diagonal entry at ({i}, {i})")
            asym = J - J.T
            asym.eliminate_zeros()
            if asym.nnz:
                coo = asym.tocoo()
                raise MalformedInputError(
                    f"J is not symmetric at ({coo.row[0]}, {coo.col[0]})"
                )
        for arr in (h, J.data, J.indices, J.indptr):
            arr.setflags(write=False)
        self.h = h
        self.J = J

    @classmethod
    def from_dense(cls, J, h=None):
        J = np.asarray(J, dtype=np.float64)
        if h is None:
            h = np.zeros(J.shape[0])
        return cls(h, sp.csr_matrix(J))

    @property
    def n(self):
        return self.J.shape[0]

    @property
    def nnz(self):
        return self.J.nnz

    @cached_property
    def integral(self):
        """True when every coupling and bias is an integer.

        Field sums are then exact in float64 regardless of summation order,
        which lets the compiled kernel update fields incrementally.
        """
        vals = np.concatenate([self.J.data, self.h])
        if not np.all(np.isfinite(vals)) or not np.all(vals == np.rint(vals)):
            return False
        row_abs = np.asarray(abs(self.J).sum(axis=1)).ravel()
        bound = np.max(np.abs(self.h) + row_abs) if self.n else 0
        return bool(bound < 2.0**52)

    def row(self, i):
        """Return ``(columns, values)`` of the nonzero couplings of spin ``i``."""
        lo, hi = self.J.indptr[i], self.J.indptr[i + 1]
        return self.J.indices[lo:hi], self.J.data[lo:hi]

    def to_dense(self):
        return self.J.toarray()

    def negated(self):
        return IsingModel(-self.h, -self.J, check=False)

    def __repr__(self):
        return f"IsingModel(n={self.n}, nnz={self.nnz})"


def as_spins(sigma, n):
    """Validate and convert a spin vector to an int8 array."""
    s = np.asarray(sigma)
    if s.shape != (n,):
        raise DimensionError(f"spin vector has shape {s.shape}, expected ({n},)")
    if not np.all((s == 1) | (s == -1)):
        raise MalformedInputError("spin entries must be exactly -1 or +1")
    return s.astype(np.int8, copy=False)


def _check_index(model, i):
    if not 0 <= i < model.n:
        raise IndexError(f"spin index {i} out of range [0, {model.n})")


def maxcut_to_ising(graph):
    """Map a MAX-CUT instance to an Ising model with ``J_ij = -w_ij`` and ``h = 0``."""
    graph.validate()
    n = graph.n
    rows = np.concatenate([graph.u, graph.v])
    cols = np.concatenate([graph.v, graph.u])
    vals = -np.concatenate([graph.w, graph.w])
    J = sp.csr_matrix((vals, (rows, cols)), shape=(n, n))
    return IsingModel(np.zeros(n), J, check=False)


def local_fields(model, sigma):
    """Vector of ``h_i + sum_j J_ij sigma_j`` for every spin."""
    s = as_spins(sigma, model.n).astype(np.float64)
    return model.h + model.J @ s


def energy(model, sigma):
    s = as_spins(sigma, model.n).astype(np.float64)
    return float(-(model.h @ s) - 0.5 * (s @ (model.J @ s)))


def local_field(model, sigma, i):
    s = as_spins(sigma, model.n)
    _check_index(model, i)
    cols, vals = model.row(i)
    return float(model.h[i] + vals @ s[cols].astype(np.float64))


def local_energy(model, sigma, i):
    """Energy contribution of spin ``i``: ``-h_i s_i - sum_j J_ij s_j s_i``."""
    s = as_spins(sigma, model.n)
    return -float(s[i]) * local_field(model, s, i)


def flip_delta(model, sigma, i):
    """``energy(sigma with spin i flipped) - energy(sigma)``."""
    s = as_spins(sigma, model.n)
    return 2.0 * float(s[i]) * local_field(model, s, i)


def cut_value(graph, sigma):
    s = as_spins(sigma, graph.n)
    crossing = s[graph.u] != s[graph.v]
    return float(graph.w[crossing].sum())
