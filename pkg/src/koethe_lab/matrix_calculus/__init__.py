"""Tri-state decisions for matrix relations, with numeric probes on grids."""

from .conditions import (ClassificationReport, MAX_OFFSET, MAX_P, MAX_SLOPE, TEMPLATES, VERDICT_KEYS,
                         classify, compose_witnesses, dominated_by, equivalent, has_continuous_norm_row,
                         has_DN, is_algebra, is_nuclear, is_sqrt_closed, self_equivalent,
                         verify_domination_witness)
from .probe import (ContinuousNormProbe, DNProbe, DominationCell, NuclearityProbe, check_tabulated,
                    consistency_check, probe_classification, probe_continuous_norm, probe_DN,
                    probe_domination, probe_nuclearity, trend_slope)
from .kernels import Combo, MergeError, bounded_above, spec_combo, summable

__all__ = [
    "ClassificationReport", "Combo", "ContinuousNormProbe", "DNProbe", "DominationCell", "MAX_OFFSET",
    "MAX_P", "MAX_SLOPE", "MergeError", "NuclearityProbe", "TEMPLATES", "VERDICT_KEYS", "bounded_above",
    "check_tabulated", "classify", "compose_witnesses", "consistency_check", "dominated_by", "equivalent",
    "has_DN", "has_continuous_norm_row", "is_algebra", "is_nuclear", "is_sqrt_closed",
    "probe_classification", "probe_continuous_norm", "probe_DN", "probe_domination", "probe_nuclearity",
    "self_equivalent", "spec_combo", "summable", "trend_slope", "verify_domination_witness",
]
