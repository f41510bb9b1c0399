"""Exact computation in higher-order Fourier analysis over finite abelian groups."""

__version__ = "0.1.0"

from .errors import BudgetError, GowersLabError, InvariantViolation, PreconditionError
from .groups import (Character, GroupElement, GroupSpec, SylowDecomposition, character_pairing,
                     element_add, residue_lift, sylow_decompose)
from .rational import UnitRational
from .tables import FunctionTable
from .fourier import fourier_transform, inverse_fourier_transform
