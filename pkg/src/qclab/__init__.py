"""Numerical laboratory for Neumann spectra of planar divergence-form
elliptic operators under quasiconformal change of variables.

Core objects: analytic quasiconformal map families with exact dilatation
algebra (``maps``), P1 finite elements on structured disc meshes
(``mesh``/``assembly``), generalized eigensolvers (``eig``), disc-weight
functionals and stability constants (``functionals``), and a scenario runner
(``scenarios``/``cli``).
"""

from . import errors
from .assembly import (
    assemble_mass,
    assemble_stiffness,
    isometry_check,
    nodal_values,
    rayleigh_quotient,
    sobolev_seminorm,
    weighted_mean,
)
from .eig import Spectrum, dense_generalized_eigs, factorize, generalized_eigs
from .functionals import (
    StabilityReport,
    b_q2_disc,
    beta_regularity,
    bound_main,
    bound_thm_two_ww,
    bound_two_weight,
    d_s_distance,
    lemma51_check,
    pair_regularity,
    phi_beta,
    poincare_upper,
    q_of_beta,
    s_of_beta,
    sqrt_jacobian_l2,
)
from .kernels import backend as kernel_backend
from .maps import (
    EllipticMatrixField,
    QCMap,
    Weight,
    beltrami_from_matrix,
    compose_maps,
    ellipticity_of,
    identity_field,
    identity_map,
    invert_map,
    make_affine_stretch,
    make_mobius,
    make_radial_power,
    matrix_field_of_map,
    matrix_from_beltrami,
    weight_of_map,
)
from .mesh import TriMesh, build_disc_mesh, dump_mesh, pushforward_mesh
from .quadrature import QuadratureResult, polar_quadrature
from .scenarios import Report, Scenario, emit_report, parse_config, run_scenario

__version__ = "0.1.0"
