"""Rumin complexes of stratified Lie algebras and a discrete calculus of Rumin currents."""
from .lie_core import (
    AlgebraInputError,
    GroupPoint,
    StratifiedLieAlgebra,
    abelian,
    bch_multiply,
    catalog,
    dilate,
    engel,
    heisenberg,
    homogeneous_dimension,
    left_invariant_frame,
    load_algebra,
    validate_algebra,
)
from .lp import LinearProgram, LpError, LpSolution, duality_gap, solve_lp
from .opalg import EnvelopingAlgebra, EnvelopingElement, OperatorMatrix, op_compose, pbw_normalize
from .rumin import RuminComplex, build_rumin_complex, rumin_pairing, verify_complex

__version__ = "0.1.0"
