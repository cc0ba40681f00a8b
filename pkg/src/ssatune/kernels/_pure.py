"""numpy/scipy implementation of the annealing loops.

Used when the compiled extension is unavailable or ``SSATUNE_PURE=1`` is set.
Per-spin arithmetic follows the compiled kernel operation by operation.
"""
import math

import numpy as np
import scipy.sparse as sp


def unpack_noise(words, n):
    """Map one cycle of packed noise words to a ``{-1, +1}`` float vector."""
    bits = np.unpackbits(np.ascontiguousarray(words, dtype="<u8").view(np.uint8), bitorder="little")
    return bits[:n].astype(np.float64) * 2.0 - 1.0


def ssa_run(indptr, indices, data, h, nu, Is, sigma, noise, I0, beta, alpha, cycles,
            energy_trace=None, i0_trace=None, incremental=False):
    # incremental updates are a compiled-kernel optimisation; results are identical
    n = len(h)
    J = sp.csr_matrix((data, indices, indptr), shape=(n, n))
    I0_last = I0
    for t in range(cycles):
        f = h + J @ sigma.astype(np.float64)
        I = f + nu * unpack_noise(noise[t], n)
        s = Is + I
        Is[:] = np.where(s >= I0, I0 - alpha, np.where(s < -I0, -I0, s))
        sigma[:] = np.where(Is >= 0.0, 1, -1)
        if energy_trace is not None:
            sf = sigma.astype(np.float64)
            energy_trace[t] = -0.5 * float(np.sum(sf * ((h + J @ sf) + h)))
        if i0_trace is not None:
            i0_trace[t] = I0
        I0_last = I0
        if t < cycles - 1:
            I0 = I0 / beta
    return I0_last


def sa_run(indptr, indices, data, h, sigma, spins, uniforms, T, dIT, energy0,
           energy_trace=None, temp_trace=None, accept_trace=None):
    E = energy0
    accepted = 0
    for t in range(len(spins)):
        i = int(spins[t])
        lo, hi = indptr[i], indptr[i + 1]
        acc = 0.0
        for k in range(lo, hi):
            acc = acc + data[k] * float(sigma[indices[k]])
        dE = 2.0 * float(sigma[i]) * (h[i] + acc)
        took = dE <= 0.0 or uniforms[t] < math.exp(-dE / T)
        if took:
            sigma[i] = -sigma[i]
            E = E + dE
            accepted += 1
        if accept_trace is not None:
            accept_trace[t] = took
        if energy_trace is not None:
            energy_trace[t] = E
        if temp_trace is not None:
            temp_trace[t] = T
        T = 1.0 / (1.0 / T + dIT)
    return E, accepted
