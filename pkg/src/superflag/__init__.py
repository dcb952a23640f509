"""Exact computations with vector fields on flag supermanifolds."""

from .fields import (SuperDerivation, eigenvalue, field_bracket, fundamental_field, is_projectable,
                     project, pushforward)
from .flag_atlas import Atlas, Chart, ChartIndex, FlagType, get_atlas, parse_flag, standard_chart, transition
from .global_solver import (LiftResult, SolveReport, is_global, lift_query, mu_image_rank, mu_kernel,
                            solve_global_fields, solve_global_functions)
from .lie_superalgebra import AbstractSuperAlgebra, E, GlElement, gl_basis, gl_bracket, h4_basis
from .superpoly import RationalSuperFunction, SuperPolynomial, VarTable
from .supermatrix import SuperMatrix, mat_inverse, mat_mul
from .weights import Weight, bwb_sections, is_dominant, psi_weights, weight_of, weyl_dim

__version__ = "0.1.0"
