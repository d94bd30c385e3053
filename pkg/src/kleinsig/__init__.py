"""Invariants of totally oriented Klein graphs and the unknotting bounds they give."""

from .bounds import chain_report, gordian_lower_bound, theta_unknotting_bound
from .diagram import Color, ColoredDiagram, DiagramError, parse, serialize
from .foam import cobordism_ledger, parse_script
from .invariants import KleinInvariants, compute, orientation_sweep
from .orientation import TotalOrientation, parse_orientation

__all__ = ["Color", "ColoredDiagram", "DiagramError", "KleinInvariants", "TotalOrientation",
           "chain_report", "cobordism_ledger", "compute", "gordian_lower_bound",
           "orientation_sweep", "parse", "parse_orientation", "parse_script", "serialize",
           "theta_unknotting_bound"]
__version__ = "0.1.0"
