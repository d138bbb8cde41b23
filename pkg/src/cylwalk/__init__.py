"""Alternate quantum walk on the cylinder ``Z x Z/Q``."""

from .core import (
    CoinAngles,
    InvalidArgumentError,
    InvalidDensityMatrixError,
    WalkError,
    coin_matrix,
    hadamard_coin,
    von_neumann_entropy,
)
from .lattice import (
    BlochInitialState,
    LatticeState,
    WindowOverflowError,
    evolve,
    localized_state,
    marginal_probability,
    probability,
    step,
)
from .spectral import (
    band_census,
    dispersion,
    eigensystem,
    group_velocity,
    momentum_evolve,
    quasi_momenta,
    spectral_power,
    walk_matrix,
)
from .entanglement import (
    asymptotic_entries,
    asymptotic_rho,
    asymptotic_rho_infinite,
    entropy_series,
    reduced_density_matrix,
)
from .continuum import continuum_convergence, dirac_cone_error, dirac_reference_propagator

__version__ = "0.1.0"
