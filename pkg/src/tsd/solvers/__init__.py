"""Exact solution methods for turn minimization."""

from .branchbound import bb_solve
from .brute import solve_brute_force
from .cutting_plane import find_triangle_violations, solve_cutting_plane
from .dp import solve_dp
from .facade import METHODS, solve
from .ilp import (Assignment, Constraint, ILPModel, assignment_from_sequence,
                  build_ilp_naive, build_ilp_tw, export_lp,
                  order_from_assignment, transitivity_constraint)
from .result import SolveResult

__all__ = [
    "Assignment",
    "Constraint",
    "ILPModel",
    "METHODS",
    "SolveResult",
    "assignment_from_sequence",
    "bb_solve",
    "build_ilp_naive",
    "build_ilp_tw",
    "export_lp",
    "find_triangle_violations",
    "order_from_assignment",
    "solve",
    "solve_brute_force",
    "solve_cutting_plane",
    "solve_dp",
    "transitivity_constraint",
]
