"""Entitlement-only approximation bound calculus.

The heavy per-vector evaluation lives in a compiled kernel
(``_speedups``, Cython) with a pure-Python twin (``_pykernel``) used when
the extension is unavailable or when ``CHOREKNIFE_PURE_PYTHON=1`` is set.
Both implement identical semantics; ``kernel.IMPL`` names the active one.
"""

import os

from . import _pykernel

if os.environ.get("CHOREKNIFE_PURE_PYTHON"):
    kernel = _pykernel
    kernel_name = "python"
else:
    try:
        from . import _speedups as kernel  # type: ignore[no-redef]

        kernel_name = "compiled"
    except ImportError:
        kernel = _pykernel
        kernel_name = "python"

from .calculus import (  # noqa: E402
    BaseCase,
    BoundResult,
    Grouping,
    Red1,
    Red2,
    SearchConfig,
    base_f,
    best_bound,
    evaluate_derivation,
    format_derivation,
    heatmap_grid,
    logn_baseline,
    red1_bound,
    red2_bound,
    simplex_max,
    theorem3_constant,
    theorem4_constant,
)

__all__ = [
    "kernel",
    "kernel_name",
    "BaseCase",
    "BoundResult",
    "Grouping",
    "Red1",
    "Red2",
    "SearchConfig",
    "base_f",
    "best_bound",
    "evaluate_derivation",
    "format_derivation",
    "heatmap_grid",
    "logn_baseline",
    "red1_bound",
    "red2_bound",
    "simplex_max",
    "theorem3_constant",
    "theorem4_constant",
]
