"""Kernel backend selection: numba-jitted loops or pure numpy.

The hot derivative kernels in :mod:`oscint.kernels` exist in two equivalent
lanes.  The environment variable ``OSCINT_NUMBA`` picks the lane at import
time:

* ``1``/``on``    force the numba lane (raises if numba is missing),
* ``0``/``off``   force the pure-numpy lane,
* unset/``auto``  numba when importable, numpy otherwise.

``OSCINT_THREADS`` caps the number of worker threads used by the experiment
harness (default ``1``, i.e. serial).
"""

import os

try:
    import numba  # noqa: F401

    HAS_NUMBA = True
except ImportError:  # pragma: no cover - exercised only without numba
    HAS_NUMBA = False

_FLAG = os.environ.get("OSCINT_NUMBA", "auto").strip().lower()

if _FLAG in ("1", "on", "true", "numba"):
    if not HAS_NUMBA:
        raise ImportError("OSCINT_NUMBA requests numba but numba is not importable")
    _ACTIVE = "numba"
elif _FLAG in ("0", "off", "false", "numpy"):
    _ACTIVE = "numpy"
else:
    _ACTIVE = "numba" if HAS_NUMBA else "numpy"


def active_backend() -> str:
    """Name of the kernel lane in use: ``"numba"`` or ``"numpy"``."""
    return _ACTIVE


def set_backend(name: str) -> None:
    """Switch kernel lanes explicitly (tests and benchmarks)."""
    global _ACTIVE
    if name not in ("numba", "numpy"):
        raise ValueError(f"unknown backend {name!r}")
    if name == "numba" and not HAS_NUMBA:
        raise ValueError("numba backend requested but numba is not importable")
    _ACTIVE = name


def thread_count() -> int:
    raw = os.environ.get("OSCINT_THREADS", "1")
    try:
        return max(1, int(raw))
    except ValueError:
        return 1
