"""Dimer face polynomials of plane bipartite graphs, their cluster F-polynomial
interpretation, Alexander polynomials of links through Kauffman states, and
Plucker coordinates of plabic graphs as products of cluster variables."""

from .laurent import LaurentPoly
from .quiver import Quiver
from .graph_core import PlaneBipartiteGraph, dual_quiver, find_reduction_sequence
from .dimer import dimer_face_polynomial, enumerate_matchings, partition_function
from .cluster import f_and_g, verify_main_theorem
from .link import alexander_from_dimer, parse_pd
from .reports import Report

__version__ = "0.1.0"

__all__ = ["LaurentPoly", "Quiver", "PlaneBipartiteGraph", "dual_quiver", "find_reduction_sequence",
           "dimer_face_polynomial", "enumerate_matchings", "partition_function", "f_and_g",
           "verify_main_theorem", "alexander_from_dimer", "parse_pd", "Report"]
