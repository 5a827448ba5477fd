"""Kernel lane selection: compiled extension if available, numpy fallback.

The environment variable HARDYLAB_KERNELS forces a lane: "c"/"compiled"
requires the extension (ImportError if missing), "py"/"python" forces the
fallback.  Both lanes share semantics; the compensated sums are
bit-identical, the vectorized arc kernel agrees to ~1e-15.
"""

from __future__ import annotations

import os

_choice = os.environ.get("HARDYLAB_KERNELS", "").lower()

if _choice in ("py", "python"):
    from . import _kernels_py as _impl
elif _choice in ("c", "compiled"):
    from . import _kernels as _impl  # type: ignore[attr-defined]
else:
    try:
        from . import _kernels as _impl  # type: ignore[attr-defined]
    except ImportError:
        from . import _kernels_py as _impl

BACKEND = _impl.BACKEND
kahan_segment_sums = _impl.kahan_segment_sums
arc_intersection_lengths = _impl.arc_intersection_lengths
weighted_box_counts = _impl.weighted_box_counts


def both_lanes():
    """(name, module) pairs of every importable lane, compiled first."""
    lanes = []
    try:
        from . import _kernels as _c  # type: ignore[attr-defined]

        lanes.append(("compiled", _c))
    except ImportError:
        pass
    from . import _kernels_py as _py

    lanes.append(("python", _py))
    return lanes
