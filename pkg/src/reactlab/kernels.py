"""Kernel backend selection: compiled extension if available, numpy otherwise.

Set REACTLAB_PURE_PYTHON=1 to force the fallback (used by the benchmark
and the backend-equivalence tests).
"""

import os

from . import _kernels_py

if os.environ.get("REACTLAB_PURE_PYTHON"):
    _impl = _kernels_py
else:
    try:
        from . import _kernels as _impl
    except ImportError:
        _impl = _kernels_py

BACKEND = _impl.BACKEND
chemo_div_1d = _impl.chemo_div_1d
chemo_div_2d = _impl.chemo_div_2d
reaction_terms = _impl.reaction_terms
