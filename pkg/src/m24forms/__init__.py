"""Exact and numerical computations for the modular objects attached to M24."""

from .group import (
    CharacterTable,
    ConjClassRecord,
    DataError,
    GroupData,
    QuadraticValue,
    class_size,
    decompose,
    fixed_points,
    load_group_data,
    power_class,
)
from .series import ExactSeries, WindowError, binomial_factor_pow
from .classical import eta, eta_product, eta_quotient, jacobi_generators, t_tilde, theta
from .mock import MockForm, appell_mu, kn_decomposition, mock_H, mock_Hg, n4_character
from .jacobi import (
    JacobiGenus,
    disc_coeff,
    equivariant_hecke,
    hecke,
    khat_decomposition,
    symmetric_product,
    zg_via_characters,
    zg_via_generators,
)
from .siegel import SiegelProduct, borcherds_product, double_zero_limit

__version__ = "0.1.0"
