import sys
from pathlib import Path

import numpy as np
import pytest

sys.path.insert(0, str(Path(__file__).resolve().parent))

import qclab


@pytest.fixture(scope="session")
def identity():
    return qclab.identity_map()


@pytest.fixture(scope="session")
def inv_rp15():
    """Map whose disc weight is h(z) = 1.5 |z|."""
    return qclab.invert_map(qclab.make_radial_power(1.5))


@pytest.fixture(scope="session")
def inv_rp12():
    """Map whose disc weight is h(z) = 1.2 |z|^0.4."""
    return qclab.invert_map(qclab.make_radial_power(1.2))


@pytest.fixture(scope="session")
def unit_weight(identity):
    return qclab.weight_of_map(identity)


@pytest.fixture(scope="session")
def weight_15r(inv_rp15):
    return qclab.weight_of_map(inv_rp15)


@pytest.fixture(scope="session")
def disc_8_32():
    return qclab.build_disc_mesh(8, 32)


@pytest.fixture(scope="session")
def disc_16_64():
    return qclab.build_disc_mesh(16, 64)


@pytest.fixture(scope="session")
def disc_32_128():
    return qclab.build_disc_mesh(32, 128)


@pytest.fixture(scope="session")
def disc_laplace_32(disc_32_128):
    stiff = qclab.assemble_stiffness(disc_32_128, qclab.identity_field())
    mass = qclab.assemble_mass(disc_32_128)
    return stiff, mass


@pytest.fixture(scope="session")
def disc_spectrum_32(disc_laplace_32):
    stiff, mass = disc_laplace_32
    return qclab.generalized_eigs(stiff, mass, 6, 1e-9)


@pytest.fixture(scope="session")
def rng():
    return np.random.default_rng(20240817)
