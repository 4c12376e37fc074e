"""Vertex-elimination orders on directed acyclic graphs.

Eliminating an internal vertex connects each predecessor to each successor
and costs the product of its in- and out-degree.  The package searches for
orders of small total cost and for vertex subsets whose elimination leaves
few edges, with heuristics, exact searches, lower bounds and ILP export.
"""

from .bounds import BoundsReport, CutMode, min_vertex_cut, mu_star, report
from .dag import (
    Dag,
    EliminationTrace,
    Role,
    eliminate_sequence,
    eliminate_set,
    eliminate_vertex,
    markowitz,
)
from .errors import ElimError
from .exact import ExactResult, Status, bnb_ove, brute_force_ove, exact_mec
from .experiment import RunConfig, run_experiment
from .formats import GraphFormat, parse_graph, write_dot, write_edgelist
from .generators import Family, FamilySpec, evolution, gap_instance, middleout_hard, tightness_family
from .heuristics import HEURISTICS, GreedyRule, ensemble, greedy_eliminate, middle_out, run_heuristic, topological_mode
from .ilp import IlpModel, Variant, build_mec_ilp, build_ove_ilp, read_solution, write_lp
from .preprocess import ReductionLog, reduce
from .stochastic import McmcParams, SaParams, mcmc_edge_min, simulated_annealing

__all__ = [
    "BoundsReport", "CutMode", "Dag", "ElimError", "EliminationTrace", "ExactResult",
    "Family", "FamilySpec", "GraphFormat", "GreedyRule", "HEURISTICS", "IlpModel",
    "McmcParams", "ReductionLog", "Role", "RunConfig", "SaParams", "Status", "Variant",
    "bnb_ove", "brute_force_ove", "build_mec_ilp", "build_ove_ilp", "eliminate_sequence",
    "eliminate_set", "eliminate_vertex", "ensemble", "evolution", "exact_mec", "gap_instance",
    "greedy_eliminate", "markowitz", "mcmc_edge_min", "middle_out", "middleout_hard",
    "min_vertex_cut", "mu_star", "parse_graph", "read_solution", "reduce", "report",
    "run_experiment", "run_heuristic", "simulated_annealing", "tightness_family",
    "topological_mode", "write_dot", "write_edgelist", "write_lp",
]
