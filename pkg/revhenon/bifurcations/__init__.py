from .closed_forms import (
    Hm1muFixedPoints,
    T2muFixedPoints,
    curve_F,
    curve_PF,
    curve_label,
    curves_table,
    henon_fixed_points,
    hm1mu_fixed_points,
    hm1mu_period2_orbit,
    symmetric_period3_closed_form,
    symmetric_period6_closed_form,
    symmetric_period6_y,
    t2mu_fixed_points,
    t2mu_symmetric_fixed_points,
    trace_of_M,
    trace_polynomial,
    trace_polynomial_factored,
)
from .continuation import Branch, BranchSample, JumpedBranch, continue_branch
from .events import BifurcationEvent, EventKind, detect_events, minus_indicator, plus_indicator

__all__ = [
    "Hm1muFixedPoints",
    "T2muFixedPoints",
    "curve_F",
    "curve_PF",
    "curve_label",
    "curves_table",
    "henon_fixed_points",
    "hm1mu_fixed_points",
    "hm1mu_period2_orbit",
    "symmetric_period3_closed_form",
    "symmetric_period6_closed_form",
    "symmetric_period6_y",
    "t2mu_fixed_points",
    "t2mu_symmetric_fixed_points",
    "trace_of_M",
    "trace_polynomial",
    "trace_polynomial_factored",
    "Branch",
    "BranchSample",
    "JumpedBranch",
    "continue_branch",
    "BifurcationEvent",
    "EventKind",
    "detect_events",
    "minus_indicator",
    "plus_indicator",
]
