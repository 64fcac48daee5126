"""Kernel backend selection.

The compiled extension (Cython) is preferred; the pure-Python twin is the
fallback. DYNHULL_KERNELS=pure|compiled forces a choice, and `compiled`
turns a missing extension into a hard error instead of a silent fallback.
"""

import os
import warnings

from . import pure

_FORCED = os.environ.get("DYNHULL_KERNELS")
if _FORCED not in (None, "", "pure", "compiled"):
    raise ValueError(
        f"DYNHULL_KERNELS={_FORCED!r}: expected 'pure' or 'compiled'"
    )

if _FORCED == "pure":
    impl = pure
else:
    try:
        from . import _speedups as impl
    except ImportError:
        if _FORCED == "compiled":
            raise
        warnings.warn(
            "dynhull compiled kernels unavailable; using the pure-Python "
            "backend (slower, identical results)",
            RuntimeWarning,
            stacklevel=2,
        )
        impl = pure

LEFT = pure.LEFT
RIGHT = pure.RIGHT


def backend(name=None):
    """Resolve a backend by name: None/'default', 'pure', or 'compiled'."""
    if name in (None, "default"):
        return impl
    if name == "pure":
        return pure
    if name == "compiled":
        from . import _speedups

        return _speedups
    raise ValueError(f"unknown kernel backend {name!r}")
