"""Graded roots, Heegaard Floer homology of Brieskorn spheres, and knot-surgery obstructions."""

from hfsurgery.delta import DeltaSequence, ReducedForm, TauFunction
from hfsurgery.graded_root import FUModule, GradedRoot

__all__ = ["DeltaSequence", "ReducedForm", "TauFunction", "FUModule", "GradedRoot"]

__version__ = "0.1.0"
