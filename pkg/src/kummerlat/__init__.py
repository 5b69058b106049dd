"""Exact lattice and stability-condition computations for Kummer surfaces."""

__version__ = "0.1.0"

from .lattice import IntegerLattice, Sublattice, discriminant_form, glue  # noqa: E402,F401
from .kummer import build_mukai_model  # noqa: E402,F401
