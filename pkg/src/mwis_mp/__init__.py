"""Message passing for maximum-weight independent set.

Min-sum max-product, barrier dual coordinate descent with coloring
recovery, computation-tree oracles, exact LP/IP oracles, and the
reduction of discrete MAP estimation to MWIS.
"""

from .graph import (Bipartition, GraphError, WeightedGraph, bipartition,
                    is_independent, subset_weight, validate)
from .maxprod import (Estimate, MaxProductTrace, StructureViolation,
                      check_fixed_point_structure, estimate, run, sweep)
from .comptree import (ComputationTree, Membership, TreeTooLarge, build,
                       oracle_estimate, oracle_estimates)
from .oracles import (InstanceTooLarge, brute_force_mwis, check_complementary_slackness,
                      dual_feasible, lp_optimum)
from .descent import BarrierParams, DescentResult, run_descent
from .recovery import AlgoResult, Color, algo_mwis, est_recover
from .map_reduction import (MapProblem, NotLiftable, ReductionError, brute_force_map,
                            build_reduction, lift, map_via_mwis)
from .io import FormatError, parse_graph, read_graph

__all__ = [
    "AlgoResult", "BarrierParams", "Bipartition", "Color", "ComputationTree",
    "DescentResult", "Estimate", "FormatError", "GraphError", "InstanceTooLarge",
    "MapProblem", "MaxProductTrace", "Membership", "NotLiftable", "ReductionError",
    "StructureViolation", "TreeTooLarge", "WeightedGraph", "algo_mwis", "bipartition",
    "brute_force_map", "brute_force_mwis", "build", "build_reduction",
    "check_complementary_slackness", "check_fixed_point_structure", "dual_feasible",
    "est_recover", "estimate", "is_independent", "lift", "lp_optimum", "map_via_mwis",
    "oracle_estimate", "oracle_estimates", "parse_graph", "read_graph", "run",
    "run_descent", "subset_weight", "sweep", "validate",
]
