"""Kernel backend selection.

The compiled :mod:`polyfiber._ckernels` is used when it was built; otherwise,
or when ``POLYFIBER_PURE_PYTHON=1`` is set, the pure-Python versions in
:mod:`polyfiber._pykernels` are used.  Both expose the same functions and
status codes.
"""

import os

from polyfiber import _pykernels
from polyfiber._pykernels import DIVERGED, FAILED, MAX_STEPS, NEAR_END, SUCCESS

BACKEND = "python"
_impl = _pykernels

if os.environ.get("POLYFIBER_PURE_PYTHON", "") not in ("1", "true", "yes"):
    try:
        from polyfiber import _ckernels as _impl

        BACKEND = "cython"
    except ImportError:
        _impl = _pykernels

zero_sum_masks = _impl.zero_sum_masks
track_path = _impl.track_path

# the extended-precision tier always runs the generic Python tracker
track_path_generic = _pykernels.track_path

STATUS_NAMES = {
    SUCCESS: "success",
    NEAR_END: "near-end",
    FAILED: "failed",
    DIVERGED: "diverged",
    MAX_STEPS: "max-steps",
}

__all__ = [
    "BACKEND",
    "zero_sum_masks",
    "track_path",
    "track_path_generic",
    "STATUS_NAMES",
    "SUCCESS",
    "NEAR_END",
    "FAILED",
    "DIVERGED",
    "MAX_STEPS",
]
