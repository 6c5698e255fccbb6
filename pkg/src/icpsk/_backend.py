"""Pick the compiled kernels when available, the numpy fallback otherwise.

Set ``ICPSK_BACKEND=python`` to force the fallback.
"""

from __future__ import annotations

import os

from . import _fallback

NAME = "python"
kernels = _fallback

if os.environ.get("ICPSK_BACKEND", "").lower() not in ("python", "numpy", "fallback"):
    try:
        from . import _kernels as _compiled
    except ImportError:
        pass
    else:
        kernels = _compiled
        NAME = "cython"

min_gaps = kernels.min_gaps
count_errors = kernels.count_errors
trial_draws = kernels.trial_draws
