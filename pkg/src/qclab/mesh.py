"""Structured triangulations of the unit disc and of mapped domains."""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .errors import DegenerateTriangle, InvalidParameter

AREA_FLOOR = 1e-14


@dataclass(frozen=True)
class TriMesh:
    """Triangle mesh with positively oriented elements.

    vertices: (nv, 2) float64; triangles: (nt, 3) int64 vertex indices;
    boundary: (nv,) bool flags; mesh_size_h: longest edge.
    """

    vertices: np.ndarray
    triangles: np.ndarray
    boundary: np.ndarray
    mesh_size_h: float = field(default=0.0)

    def __post_init__(self):
        for arr in (self.vertices, self.triangles, self.boundary):
            arr.setflags(write=False)

    @property
    def nv(self):
        return self.vertices.shape[0]

    @property
    def nt(self):
        return self.triangles.shape[0]

    @property
    def points_complex(self):
        return self.vertices[:, 0] + 1j * self.vertices[:, 1]

    def signed_areas(self):
        p = self.vertices[self.triangles]
        return 0.5 * (
            (p[:, 1, 0] - p[:, 0, 0]) * (p[:, 2, 1] - p[:, 0, 1])
            - (p[:, 2, 0] - p[:, 0, 0]) * (p[:, 1, 1] - p[:, 0, 1])
        )

    def centroids_complex(self):
        p = self.points_complex[self.triangles]
        return p.mean(axis=1)

    def edge_midpoints_complex(self):
        """(nt, 3) midpoints; column k is the midpoint opposite local vertex k."""
        p = self.points_complex[self.triangles]
        return 0.5 * np.stack(
            [p[:, 1] + p[:, 2], p[:, 0] + p[:, 2], p[:, 0] + p[:, 1]], axis=1
        )


def _max_edge(vertices, triangles):
    p = vertices[triangles]
    e = np.concatenate(
        [p[:, 1] - p[:, 0], p[:, 2] - p[:, 1], p[:, 0] - p[:, 2]], axis=0
    )
    return float(np.hypot(e[:, 0], e[:, 1]).max())


def _make_mesh(vertices, triangles, boundary):
    vertices = np.ascontiguousarray(vertices, dtype=np.float64)
    triangles = np.ascontiguousarray(triangles, dtype=np.int64)
    boundary = np.asarray(boundary, dtype=bool)
    mesh = TriMesh(vertices, triangles, boundary, _max_edge(vertices, triangles))
    areas = mesh.signed_areas()
    if np.any(areas <= AREA_FLOOR):
        raise DegenerateTriangle("triangle with non-positive signed area")
    return mesh


def _mesh_from_rings(radii, n_theta):
    n_r = len(radii)
    theta = 2.0 * np.pi * np.arange(n_theta) / n_theta
    ring = np.column_stack([np.cos(theta), np.sin(theta)])
    vertices = np.vstack([[0.0, 0.0]] + [r * ring for r in radii])
    tris = []
    # innermost fan
    for j in range(n_theta):
        tris.append((0, 1 + j, 1 + (j + 1) % n_theta))
    # annuli: split each quad into two CCW triangles
    for i in range(n_r - 1):
        inner = 1 + i * n_theta
        outer = inner + n_theta
        for j in range(n_theta):
            jn = (j + 1) % n_theta
            tris.append((inner + j, outer + j, outer + jn))
            tris.append((inner + j, outer + jn, inner + jn))
    boundary = np.zeros(1 + n_r * n_theta, dtype=bool)
    boundary[1 + (n_r - 1) * n_theta :] = True
    return _make_mesh(vertices, np.array(tris), boundary)


def build_disc_mesh(n_r, n_theta, inner_refine=False):
    """Structured polar mesh of the unit disc.

    Rings at radii i/n_r with n_theta sectors: 1 + n_r*n_theta vertices and
    n_theta*(2 n_r - 1) triangles, boundary vertices on the unit circle.
    ``inner_refine`` inserts one extra ring at radius 0.5/n_r; use it when a
    weight is singular at the origin so the innermost elements shrink.
    """
    if n_r < 1 or n_theta < 3:
        raise InvalidParameter("need n_r >= 1 and n_theta >= 3")
    radii = [i / n_r for i in range(1, n_r + 1)]
    if inner_refine:
        radii = [0.5 / n_r] + radii
    return _mesh_from_rings(radii, int(n_theta))


def pushforward_mesh(mesh, inv):
    """Map a disc mesh vertexwise through ``inv`` (a map defined on the disc).

    Connectivity is preserved; raises DegenerateTriangle if any image
    triangle loses orientation.
    """
    z = inv.forward(mesh.points_complex)
    vertices = np.column_stack([np.real(z), np.imag(z)])
    return _make_mesh(vertices, mesh.triangles.copy(), mesh.boundary.copy())


def dump_mesh(mesh, path):
    """Plain-text dump: 'nv nt', then 'x y flag' lines, then 'i j k' lines."""
    with open(path, "w", encoding="ascii") as f:
        f.write(f"{mesh.nv} {mesh.nt}\n")
        for (x, y), flag in zip(mesh.vertices, mesh.boundary):
            f.write(f"{x:.17g} {y:.17g} {int(flag)}\n")
        for i, j, k in mesh.triangles:
            f.write(f"{i} {j} {k}\n")
