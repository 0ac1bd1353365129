"""Backend parity: the compiled and pure-python kernels must agree bitwise."""

import os
import subprocess
import sys

import numpy as np
import pytest

import qclab
from qclab import _kernels_py
from qclab import kernels

try:
    from qclab import _kernels_cy
except ImportError:
    _kernels_cy = None

needs_ext = pytest.mark.skipif(_kernels_cy is None, reason="compiled kernels unavailable")


def _mesh_arrays(rng):
    mesh = qclab.pushforward_mesh(
        qclab.build_disc_mesh(12, 48), qclab.make_radial_power(1.3)
    )
    amat = np.ascontiguousarray(rng.uniform(0.5, 2.0, (mesh.nt, 3)))
    hmid = np.ascontiguousarray(rng.uniform(0.1, 3.0, (mesh.nt, 3)))
    return mesh, amat, hmid


@needs_ext
def test_stiffness_triplets_bitwise_equal(rng):
    mesh, amat, _ = _mesh_arrays(rng)
    r1, c1, v1 = _kernels_py.stiffness_triplets(mesh.vertices, mesh.triangles, amat)
    r2, c2, v2 = _kernels_cy.stiffness_triplets(mesh.vertices, mesh.triangles, amat)
    assert np.array_equal(r1, r2)
    assert np.array_equal(c1, c2)
    assert np.array_equal(v1, v2)


@needs_ext
def test_mass_triplets_bitwise_equal(rng):
    mesh, _, hmid = _mesh_arrays(rng)
    r1, c1, v1 = _kernels_py.mass_triplets(mesh.vertices, mesh.triangles, hmid)
    r2, c2, v2 = _kernels_cy.mass_triplets(mesh.vertices, mesh.triangles, hmid)
    assert np.array_equal(r1, r2)
    assert np.array_equal(c1, c2)
    assert np.array_equal(v1, v2)


def test_repeat_call_deterministic(rng):
    mesh, amat, _ = _mesh_arrays(rng)
    _, _, v1 = kernels.stiffness_triplets(mesh.vertices, mesh.triangles, amat)
    _, _, v2 = kernels.stiffness_triplets(mesh.vertices, mesh.triangles, amat)
    assert np.array_equal(v1, v2)


def test_env_var_forces_python_backend():
    env = dict(os.environ, QCLAB_PURE_PYTHON="1")
    out = subprocess.run(
        [sys.executable, "-c", "import qclab; print(qclab.kernel_backend())"],
        capture_output=True, text=True, env=env, check=True,
    )
    assert out.stdout.strip() == "python"


def test_backend_name_valid():
    assert kernels.backend() in ("cython", "python")
