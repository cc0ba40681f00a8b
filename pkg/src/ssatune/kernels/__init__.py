"""Annealing kernels: compiled extension with a numpy fallback.

The backend is chosen once at import. Set ``SSATUNE_PURE=1`` to force the
fallback; ``BACKEND`` reports which one is active.
"""
import os

from . import _pure

pure = _pure
compiled = None

if os.environ.get("SSATUNE_PURE", "") not in ("1", "true", "yes"):
    try:
        from . import _ext as compiled
    except ImportError:  # extension not built
        compiled = None

if compiled is not None:
    ssa_run = compiled.ssa_run
    sa_run = compiled.sa_run
    BACKEND = "cython"
else:
    ssa_run = _pure.ssa_run
    sa_run = _pure.sa_run
    BACKEND = "python"


def get_backend(name=None):
    """Return the kernel module for ``name`` ('cython', 'python' or None for active)."""
    if name is None:
        return compiled if compiled is not None else _pure
    if name == "python":
        return _pure
    if name == "cython":
        if compiled is None:
            raise ImportError("compiled kernels are not available; build with `pip install -e .`")
        return compiled
    raise ValueError(f"unknown kernel backend {name!r}")
