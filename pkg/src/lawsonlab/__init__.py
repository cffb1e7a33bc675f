"""Lawson and exponential Euler integrators for stiff semilinear problems.

Submodules
----------
rk_tableau   exact explicit Runge--Kutta tableaus
trees        rooted trees and exact order-condition certification
integrators  Lawson / exponential Euler time steppers
spectral     Fourier spectral Schrodinger problems on the periodic interval
diagnostics  commutator regularity diagnostics
harness      convergence and regularity experiments, CSV output, CLI
"""
from .errors import (
    CapabilityMissing, ConfigError, DegenerateInput, DimensionMismatch, InvariantError,
    LawsonLabError, LimitExceeded, NonFiniteState, ParseError,
    ReferenceNotConverged, UnknownTableau,
)
from .rk_tableau import RKTableau, builtin_tableau, load_tableau, parse_tableau, render_tableau
from .trees import RootedTree, check_order, enumerate_trees, symmetry

__version__ = "0.1.0"
