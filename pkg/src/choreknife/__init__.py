"""Weighted maximin-share chore division.

Exact WMMS/MMS oracles, the layered moving knife solver with runtime safety
verification, and the entitlement-only bound calculus with its simplex
search experiments.
"""

__version__ = "0.1.0"

from .model import (
    Assignment,
    Entitlements,
    Instance,
    RatioReport,
    load_instance,
    make_instance,
    scale_costs,
    validate_instance,
)
from .oracle import (
    WmmsProfile,
    enumerate_assignments,
    mms,
    ratio_report,
    wmms,
    wmms_profile,
)
from .reductions import map_back, normalize, round_entitlements, to_sorted
from .knife import lemma3_bound_check, lemma4_check, run_layered, solve

__all__ = [
    "__version__",
    "Assignment",
    "Entitlements",
    "Instance",
    "RatioReport",
    "WmmsProfile",
    "enumerate_assignments",
    "lemma3_bound_check",
    "lemma4_check",
    "load_instance",
    "make_instance",
    "map_back",
    "mms",
    "normalize",
    "ratio_report",
    "round_entitlements",
    "run_layered",
    "scale_costs",
    "solve",
    "to_sorted",
    "validate_instance",
    "wmms",
    "wmms_profile",
]
