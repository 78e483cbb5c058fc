"""Discretized manifolds of mappings on the circle and the group Diff(S^1)."""

from .diffeo import (
    CircleDiffeo,
    VectorFieldS1,
    compose_diffeo,
    flow_exp,
    invert_diffeo,
    lie_bracket,
    sup_distance,
    usual_bracket,
)
from .maps import (
    DiscretizedMap,
    SectionAlongMap,
    chart_change,
    chart_forward,
    chart_inverse,
    compose_maps,
    evaluate,
    immersion_openness_probe,
    is_immersion,
    max_distance,
)
from .targets import EPS_INJ, Target, distance, target_exp, target_log, wrap_angle
from .trig import GridS1, TrigInterpolant, interpolate, spectral_derivative

__all__ = [
    "CircleDiffeo",
    "DiscretizedMap",
    "EPS_INJ",
    "GridS1",
    "SectionAlongMap",
    "Target",
    "TrigInterpolant",
    "VectorFieldS1",
    "chart_change",
    "chart_forward",
    "chart_inverse",
    "compose_diffeo",
    "compose_maps",
    "distance",
    "evaluate",
    "flow_exp",
    "immersion_openness_probe",
    "interpolate",
    "invert_diffeo",
    "is_immersion",
    "lie_bracket",
    "max_distance",
    "spectral_derivative",
    "sup_distance",
    "target_exp",
    "target_log",
    "usual_bracket",
    "wrap_angle",
]
