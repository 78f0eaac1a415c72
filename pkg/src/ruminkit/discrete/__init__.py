"""Grids, discretized Rumin differentials, currents and their norms."""
from .analysis import cc_distance, heisenberg_boundary_correction, holder_seminorm, sobolev_norm
from .currents import DiscreteCurrent, DiscreteForm
from .grid import Grid, GridError
from .homotopy import DiscreteHomotopy, HomotopyError, discrete_homotopy
from .norms import (
    MarginError,
    boundary,
    diffuse_current,
    flat_norm,
    flat_norm_dual,
    flat_norm_primal,
    mass,
    normal_mass,
)
from .operators import DiscreteOperator, dc_squared_sup, discretize_dc
from .probe import ProbeConfig, ProbeReport, compactness_probe
