"""Kempe-swap reconfiguration of list colorings on small graphs."""

from .coloring import Coloring, KempeMove, ListAssignment, apply_swap, is_proper_L_coloring, kempe_chain
from .constructive import (
    build_example1_cycle,
    build_gallai_plus_edge,
    lift_over_subgraph,
    lift_over_vertex,
    swappable_order_transform,
    versatile_extension,
)
from .errors import (
    CapacityError,
    Graph6Error,
    InvalidSwapError,
    InvariantViolation,
    KempeLabError,
    MoveUndefinedError,
    NotSwappableError,
    WitnessInvalidError,
)
from .graph import Graph, encode_graph6, parse_graph6
from .reconfig import (
    SwappabilityReport,
    SwapSequence,
    enumerate_L_colorings,
    is_L_swappable,
    kempe_equivalent,
)
from .structure import (
    StructureWitness,
    block_decomposition,
    brute_force_degree_choosable,
    find_good_cycle,
    find_induced_K4_plus,
    find_induced_theta,
    find_induced_W4,
    is_gallai_tree,
)

__version__ = "0.1.0"
