"""Verification-grade tools for the linear couple stress model.

Exact polynomial fields, the curvature measures built from either the
rotation gradient or the curl of the strain, their moment and force
stresses, both traction families, a desk-scale Galerkin solver, and the
penalty relaxations that approach the constrained model.
"""

from .energies import Material, MODEL_REGISTRY, evaluate_model
from .polyfield import Poly3
from .stresses import StressState, assemble as assemble_stresses
from .micromorphic import MicromorphicParams

__version__ = "0.1.0"

__all__ = [
    "Material",
    "MODEL_REGISTRY",
    "MicromorphicParams",
    "Poly3",
    "StressState",
    "assemble_stresses",
    "evaluate_model",
    "__version__",
]
