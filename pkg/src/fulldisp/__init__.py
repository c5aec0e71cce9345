"""Full-dispersion shallow-water models on the periodic line.

Spectral building blocks, the water-waves reference (strip Laplace solve and
Dirichlet-to-Neumann map), the full-dispersion Green-Naghdi and
Whitham-Boussinesq systems, their invariants, an RK4 integrator, and a
verification harness.
"""
from .errors import (
    BlowUpError,
    ConfigError,
    DomainError,
    FulldispError,
    InvertibilityError,
    MultiplierError,
    NonConvergenceError,
    SnapshotError,
)
from .multipliers import Params, SymbolKind, eval_F0, eval_F1, eval_F2, eval_F3, eval_sqrtF3
from .spectral import Grid1D

__version__ = "0.1.0"
