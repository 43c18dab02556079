"""Kernel backend selection.

CONFRANK_BACKEND picks the implementation: "numba" or "numpy".  Unset,
the JIT backend is used when importable and the numpy one otherwise.
Read once at import; tests that need to switch spawn a fresh process.
"""

import os

_ENV_VAR = "CONFRANK_BACKEND"


def _load():
    choice = os.environ.get(_ENV_VAR, "").strip().lower()
    if choice not in ("", "numba", "numpy"):
        raise ValueError(
            f"{_ENV_VAR} must be 'numba' or 'numpy', got {choice!r}"
        )
    if choice == "numpy":
        from . import _numpy
        return _numpy, "numpy"
    try:
        from . import _numba
        return _numba, "numba"
    except ImportError:
        if choice == "numba":
            raise
        from . import _numpy
        return _numpy, "numpy"


_kernels, _name = _load()


def kernels():
    return _kernels


def backend_name() -> str:
    return _name
