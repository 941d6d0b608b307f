"""Selberg integrals, multiple zeta values, and the calculus connecting them."""

from .braid import BraidFamily, LinearMatrix, build_tower, ind_step, pure_braid_defects, spectrum
from .graphs import GraphSum, IndexTuple, OrderedRootedGraph, principal_product, residue_expand, wedge, wedge_chain
from .mzv import HRElement, MZVCombo, MZVIndex, mzv_eval, shuffle_regularize, stuffle_indices
from .ncalg import NCSeries, grouplike_defect, series_exp, series_log, series_mul, shuffle_words
from .selberg import ExponentAssignment, QuadratureResult, integrate_graph, integrate_sum, taylor_coefficients
from .transport import (
    ConnectionPair,
    TransportResult,
    associator_numeric,
    associator_series,
    associator_symbolic,
    projection_identity_check,
    regularized_limit,
    rho_apply,
    transport_ode,
)

__version__ = "0.1.0"

__all__ = [
    "BraidFamily",
    "ConnectionPair",
    "ExponentAssignment",
    "GraphSum",
    "HRElement",
    "IndexTuple",
    "LinearMatrix",
    "MZVCombo",
    "MZVIndex",
    "NCSeries",
    "OrderedRootedGraph",
    "QuadratureResult",
    "TransportResult",
    "associator_numeric",
    "associator_series",
    "associator_symbolic",
    "build_tower",
    "grouplike_defect",
    "ind_step",
    "integrate_graph",
    "integrate_sum",
    "mzv_eval",
    "principal_product",
    "projection_identity_check",
    "pure_braid_defects",
    "regularized_limit",
    "residue_expand",
    "rho_apply",
    "series_exp",
    "series_log",
    "series_mul",
    "shuffle_regularize",
    "shuffle_words",
    "spectrum",
    "stuffle_indices",
    "taylor_coefficients",
    "transport_ode",
    "wedge",
    "wedge_chain",
]
