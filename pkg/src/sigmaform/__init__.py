"""Finite permutation groups, sigma-partitions, formations and sigma-local
formations, with verdict-based checks over a finite universe of small groups."""
from .catalog import build_group, group_label
from .classes import (All, Context, Empty, GeneratedClosure, Gpi, Identity, Intersection, Product, SigmaLocal,
                      SigmaNilpotent, SigmaSoluble, default_context, member)
from .dsl import format_class_expr, parse_class, parse_class_expr, parse_sigma_function
from .errors import (IndeterminateError, InputError, PreconditionError, ResourceError, SigmaFormError)
from .permcore import PermGroup, Permutation, Subgroup
from .sigmakit import SIGMA1, SigmaPartition, parse_sigma
from .sigmalocal import TableFunction, generated_member, lf_member, smallest_definition
from .universe import Universe, standard_universe
from .verdict import Verdict

__version__ = "0.1.0"

__all__ = [
    "All", "Context", "Empty", "GeneratedClosure", "Gpi", "Identity", "Intersection", "Product", "SigmaLocal",
    "SigmaNilpotent", "SigmaSoluble", "default_context", "member", "build_group", "group_label",
    "format_class_expr", "parse_class", "parse_class_expr", "parse_sigma_function", "IndeterminateError",
    "InputError", "PreconditionError", "ResourceError", "SigmaFormError", "PermGroup", "Permutation", "Subgroup",
    "SIGMA1", "SigmaPartition", "parse_sigma", "TableFunction", "generated_member", "lf_member",
    "smallest_definition", "Universe", "standard_universe", "Verdict",
]
