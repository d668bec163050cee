"""Kernel selection: compiled extension when available, numpy twin otherwise.

Set AUPOLY_PURE=1 to force the pure kernel (used by the benchmark and the
kernel-equivalence tests).
"""

import os

from . import _fallback

if os.environ.get("AUPOLY_PURE") == "1":
    active = _fallback
else:
    try:
        from . import _speedups as active  # type: ignore[attr-defined]
    except ImportError:
        active = _fallback

fill_represented = active.fill_represented
fill_represented_bigint = _fallback.fill_represented_bigint
KERNEL_NAME = active.KERNEL_NAME
