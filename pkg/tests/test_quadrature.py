import numpy as np
import pytest

import qclab
from oracles import midpoint_disc_integral


class TestPolarQuadrature:
    def test_constant_gives_area(self):
        res = qclab.polar_quadrature(lambda z: np.ones_like(z, dtype=float), 1e-12)
        assert res.converged
        assert res.value == pytest.approx(np.pi, abs=1e-12)

    def test_radial_square_root(self):
        # closed form: 2 pi int r^{1/2} r dr = 4 pi / 5
        res = qclab.polar_quadrature(lambda z: np.sqrt(np.abs(z)), 1e-8)
        assert res.converged
        assert res.value == pytest.approx(4.0 * np.pi / 5.0, abs=1e-8)

    def test_non_integrable_flags_divergent(self):
        res = qclab.polar_quadrature(lambda z: np.abs(z) ** -2.0, 1e-8)
        assert not res.converged
        assert res.divergent
        assert res.status == "divergent"

    def test_strong_divergence_exits_early(self):
        res = qclab.polar_quadrature(lambda z: np.abs(z) ** -3.0, 1e-8)
        assert res.divergent
        assert res.levels_used <= 5

    def test_angular_dependence(self):
        # int (1 + cos theta)^2 over the disc = pi + pi/2 * pi? closed form:
        # int_0^1 r dr int (1 + cos t)^2 dt = 0.5 * (2 pi + pi) = 1.5 pi
        f = lambda z: (1.0 + np.cos(np.angle(z))) ** 2
        res = qclab.polar_quadrature(f, 1e-10)
        assert res.converged
        assert res.value == pytest.approx(1.5 * np.pi, abs=1e-9)

    def test_error_estimate_honest(self):
        res = qclab.polar_quadrature(lambda z: np.abs(z) ** 2, 1e-10)
        assert res.converged
        assert abs(res.value - np.pi / 2.0) <= max(res.error_estimate, 1e-12)

    def test_matches_midpoint_oracle(self):
        f = lambda z: np.exp(-np.abs(z) ** 2) * (1.0 + 0.3 * np.cos(2.0 * np.angle(z)))
        res = qclab.polar_quadrature(f, 1e-10)
        oracle = midpoint_disc_integral(f, 1024, 2048)
        assert res.value == pytest.approx(oracle, abs=1e-6)
