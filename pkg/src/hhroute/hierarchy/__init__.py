from .build import HighwayHierarchy, LevelInfo, build_hierarchy
from .kernels import LIFT_DIRECT, LIFT_SLACK, LIFT_SLACK_FORWARD
from .levels import (
    PASSIVE_DIRECTED,
    PASSIVE_FORWARD,
    NO_CONTRACTION,
    Contraction,
    ContractionPolicy,
    CoreView,
    Neighbourhoods,
    PartialTree,
    build_partial_spt,
    compute_neighbourhoods,
    contract_level,
    lift_arcs_direct,
    lift_arcs_slack,
    lift_arcs_slack_forward,
    lift_level,
    passive_operands,
    select_bypassable,
)

__all__ = [
    "ContractionPolicy", "CoreView", "HighwayHierarchy", "LevelInfo", "Neighbourhoods", "PartialTree",
    "PASSIVE_DIRECTED", "PASSIVE_FORWARD", "LIFT_DIRECT", "LIFT_SLACK", "LIFT_SLACK_FORWARD",
    "build_hierarchy", "build_partial_spt", "compute_neighbourhoods", "contract_level",
    "lift_arcs_direct", "lift_arcs_slack", "lift_arcs_slack_forward", "lift_level",
    "NO_CONTRACTION", "Contraction", "passive_operands", "select_bypassable",
]
