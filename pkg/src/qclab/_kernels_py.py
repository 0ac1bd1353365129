"""Pure-numpy fallback for the element assembly kernels.

Mirrors the arithmetic of ``_kernels_cy`` operation for operation so that the
two backends produce bitwise-identical triplets.
"""

import numpy as np


def _geometry(xy, tris):
    p = xy[tris]  # (nt, 3, 2)
    x = p[..., 0]
    y = p[..., 1]
    # b[i] = y[j] - y[k], c[i] = x[k] - x[j] with (j, k) following i cyclically
    b = np.stack([y[:, 1] - y[:, 2], y[:, 2] - y[:, 0], y[:, 0] - y[:, 1]], axis=1)
    c = np.stack([x[:, 2] - x[:, 1], x[:, 0] - x[:, 2], x[:, 1] - x[:, 0]], axis=1)
    area = 0.5 * (
        (x[:, 1] - x[:, 0]) * (y[:, 2] - y[:, 0]) - (x[:, 2] - x[:, 0]) * (y[:, 1] - y[:, 0])
    )
    return b, c, area


def stiffness_triplets(xy, tris, amat):
    """COO triplets of the P1 stiffness matrix for a matrix field.

    ``amat`` holds (a11, a12, a22) sampled at the triangle centroids, shape
    (nt, 3).  Nine entries are emitted per triangle in row-major local order.
    """
    nt = tris.shape[0]
    b, c, area = _geometry(xy, tris)
    a11 = amat[:, 0]
    a12 = amat[:, 1]
    a22 = amat[:, 2]
    scale = 0.25 / area
    vals = np.empty((nt, 9))
    rows = np.empty((nt, 9), dtype=np.int64)
    cols = np.empty((nt, 9), dtype=np.int64)
    for i in range(3):
        for j in range(3):
            k = 3 * i + j
            vals[:, k] = scale * (
                a11 * b[:, i] * b[:, j]
                + a12 * (b[:, i] * c[:, j] + c[:, i] * b[:, j])
                + a22 * c[:, i] * c[:, j]
            )
            rows[:, k] = tris[:, i]
            cols[:, k] = tris[:, j]
    return rows.ravel(), cols.ravel(), vals.ravel()


def mass_triplets(xy, tris, hmid):
    """COO triplets of the P1 mass matrix with midedge weight samples.

    ``hmid[:, k]`` is the weight at the midpoint of the edge opposite local
    vertex k, shape (nt, 3).  The rule integrates quadratics exactly, so a
    unit weight reproduces the exact P1 element mass (area/12) [[2,1,1],...].
    """
    nt = tris.shape[0]
    _, _, area = _geometry(xy, tris)
    scale = area / 12.0
    vals = np.empty((nt, 9))
    rows = np.empty((nt, 9), dtype=np.int64)
    cols = np.empty((nt, 9), dtype=np.int64)
    for i in range(3):
        for j in range(3):
            k = 3 * i + j
            if i == j:
                # both midpoints adjacent to vertex i
                vals[:, k] = scale * (hmid[:, (i + 1) % 3] + hmid[:, (i + 2) % 3])
            else:
                # single midpoint shared by vertices i and j
                vals[:, k] = scale * hmid[:, 3 - i - j]
            rows[:, k] = tris[:, i]
            cols[:, k] = tris[:, j]
    return rows.ravel(), cols.ravel(), vals.ravel()
