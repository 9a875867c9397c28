"""Finite-model workbench for modules with fusion and implication over
bounded distributive lattices."""
from .errors import FidlError
from .fidl import FidlModule, mod2, modal_bool4, trivial_module, validate_module
from .frames import FiFrame, canonical_frame, complex_module, pt_frame, validate_frame
from .order import FiniteLattice, Poset, validate_lattice

__all__ = [
    "FidlError",
    "FidlModule",
    "FiFrame",
    "FiniteLattice",
    "Poset",
    "canonical_frame",
    "complex_module",
    "mod2",
    "modal_bool4",
    "pt_frame",
    "trivial_module",
    "validate_frame",
    "validate_lattice",
    "validate_module",
]
