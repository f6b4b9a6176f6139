"""Backend selection for the hot loops.

The compiled extension ``cfbi._kernels`` is used when it was built; otherwise
(or when ``CFBI_PURE_PYTHON=1`` is set) the numpy fallback runs. Both give
bit-identical results, so the choice only affects speed.
"""

import os

from . import _kernels_py

ACCEPTED = _kernels_py.ACCEPTED
DEGENERATE = _kernels_py.DEGENERATE
OUT_OF_RANGE = _kernels_py.OUT_OF_RANGE


def _load(pure=None):
    if pure is None:
        pure = os.environ.get("CFBI_PURE_PYTHON", "") not in ("", "0")
    if not pure:
        try:
            from . import _kernels
            return _kernels, "cython"
        except ImportError:
            pass
    return _kernels_py, "python"


_impl, BACKEND = _load()


def use_backend(name):
    """Switch backend at runtime (``"cython"``, ``"python"`` or ``"auto"``); returns the active name."""
    global _impl, BACKEND
    if name not in ("cython", "python", "auto"):
        raise ValueError(f"unknown backend {name!r}")
    if name == "auto":
        _impl, BACKEND = _load()
        return BACKEND
    impl, got = _load(pure=(name == "python"))
    if got != name:
        raise ImportError("compiled kernels are not built")
    _impl, BACKEND = impl, got
    return BACKEND


def compiled_available():
    try:
        from . import _kernels  # noqa: F401
    except ImportError:
        return False
    return True


def triplet_votes(pts, i, j, k, lo, hi, bin_size, shape, eps):
    return _impl.triplet_votes(pts, i, j, k, lo, hi, float(bin_size), shape, float(eps))


def merge_candidates(xc, yc, r, tol):
    return _impl.merge_candidates(xc, yc, r, float(tol))


def count_inliers(pts, xc, yc, r, tol):
    return _impl.count_inliers(pts, xc, yc, r, float(tol))
