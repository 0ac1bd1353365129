"""P1 finite element assembly of weighted stiffness and mass matrices.

The stiffness form is integral of <A grad u, grad v> with the matrix field
sampled at triangle centroids; the mass form is integral of h u v with the
weight sampled at the three edge midpoints (exact for constant weights).
Both return scipy CSR matrices; element loops run in the kernel backend.
"""

from __future__ import annotations

import numpy as np
import scipy.sparse as sp

from . import kernels
from .errors import (
    DegenerateTriangle,
    NonpositiveWeight,
    NonUnitDeterminant,
    ZeroMassVector,
)
from .maps import identity_field, invert_map, matrix_field_of_map
from .mesh import AREA_FLOOR, build_disc_mesh, pushforward_mesh

DET_TOL = 1e-10


def _check_areas(mesh):
    if np.any(mesh.signed_areas() <= AREA_FLOOR):
        raise DegenerateTriangle("mesh contains a degenerate triangle")


def assemble_stiffness(mesh, field):
    """Stiffness matrix of the field; row sums vanish (Neumann kernel)."""
    _check_areas(mesh)
    a11, a12, a22 = (np.asarray(a, dtype=float) for a in field(mesh.centroids_complex()))
    det = a11 * a22 - a12 * a12
    if np.any(np.abs(det - 1.0) > DET_TOL):
        raise NonUnitDeterminant("matrix field determinant differs from 1 at a centroid")
    amat = np.ascontiguousarray(np.column_stack([a11, a12, a22]))
    rows, cols, vals = kernels.stiffness_triplets(mesh.vertices, mesh.triangles, amat)
    return sp.coo_matrix((vals, (rows, cols)), shape=(mesh.nv, mesh.nv)).tocsr()


def assemble_mass(mesh, weight=None):
    """Weighted mass matrix; ``weight=None`` means the unit weight."""
    _check_areas(mesh)
    if weight is None:
        hmid = np.ones((mesh.nt, 3))
    else:
        hmid = np.asarray(weight(mesh.edge_midpoints_complex()), dtype=float)
        if np.any(hmid <= 0.0) or not np.all(np.isfinite(hmid)):
            raise NonpositiveWeight("weight must be positive and finite at quadrature points")
    hmid = np.ascontiguousarray(hmid)
    rows, cols, vals = kernels.mass_triplets(mesh.vertices, mesh.triangles, hmid)
    return sp.coo_matrix((vals, (rows, cols)), shape=(mesh.nv, mesh.nv)).tocsr()


def nodal_values(mesh, f):
    """Nodal vector of a scalar field given as a callable on complex points
    or as an array of per-vertex values."""
    if callable(f):
        vals = np.asarray(f(mesh.points_complex), dtype=float)
    else:
        vals = np.asarray(f, dtype=float)
    if vals.shape != (mesh.nv,):
        raise ValueError(f"expected {mesh.nv} nodal values, got shape {vals.shape}")
    return vals


def weighted_mean(mesh, weight, f):
    """Discrete weighted mean (1/m_h) integral of f h via the mass matrix."""
    m = assemble_mass(mesh, weight)
    ones = np.ones(mesh.nv)
    total = float(ones @ (m @ ones))
    if total <= 0.0:
        raise NonpositiveWeight("weighted mesh mass is not positive")
    return float(ones @ (m @ nodal_values(mesh, f))) / total


def _energy(k, x):
    """Quadratic form with rounding-level values clamped to an exact zero.

    A constant vector accumulates O(n eps) noise through the Neumann kernel;
    anything below that floor is indistinguishable from zero.
    """
    e = float(x @ (k @ x))
    floor = 1e-13 * float(x @ x) * float(k.diagonal().max(initial=0.0))
    return 0.0 if e <= floor else e


def sobolev_seminorm(mesh, f, field=None):
    """Energy seminorm sqrt(x^T K x) of a scalar field."""
    if field is None:
        field = identity_field()
    k = assemble_stiffness(mesh, field)
    x = nodal_values(mesh, f)
    return float(np.sqrt(_energy(k, x)))


def rayleigh_quotient(k, m, x):
    """x^T K x / x^T M x with the 0/0 -> 0 convention."""
    x = np.asarray(x, dtype=float)
    num = float(x @ (k @ x))
    den = float(x @ (m @ x))
    if den <= 0.0:
        if num <= 0.0:
            return 0.0
        raise ZeroMassVector("vanishing mass against a positive energy")
    return num / den


def isometry_check(f, phi, n_r=32, n_theta=128):
    """Compare the energy of f o phi on the source domain against the energy
    of f on the disc; the continuum quantities are equal.

    Returns (lhs, rhs, rel_err).  The same nodal vector serves both sides
    because source mesh vertices are the preimages of the disc vertices.
    """
    disc = build_disc_mesh(n_r, n_theta)
    x = nodal_values(disc, f)
    k_disc = assemble_stiffness(disc, identity_field())
    rhs = float(np.sqrt(_energy(k_disc, x)))
    omega = pushforward_mesh(disc, invert_map(phi))
    k_omega = assemble_stiffness(omega, matrix_field_of_map(phi))
    lhs = float(np.sqrt(_energy(k_omega, x)))
    rel = abs(lhs - rhs) / rhs if rhs > 0.0 else 0.0
    return lhs, rhs, rel
