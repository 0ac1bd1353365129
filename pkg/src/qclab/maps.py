"""Planar quasiconformal map families with exact inverses and dilatation data.

Points are complex numbers z = x + iy; every evaluation function accepts a
scalar or an ndarray of any shape and returns a matching result.  Coefficient
matrices are symmetric with unit determinant and are passed around as entry
triples (a11, a12, a22).

Three analytic families are provided (affine stretch, radial power, Moebius
disc automorphism) together with closure under composition and inversion.
Their inverses, differentials, Jacobians and complex dilatations are all in
closed form, so no numerical Beltrami solve enters the trusted base.
"""

from __future__ import annotations

import numpy as np

from .errors import (
    DilatationOutOfRange,
    DomainMismatch,
    InvalidParameter,
    NonIntegrableWeight,
    NonUnitDeterminant,
    NotPositiveDefinite,
)
from .quadrature import polar_quadrature

DET_TOL = 1e-10


def _maybe_item(a):
    a = np.asarray(a)
    return a.item() if a.ndim == 0 else a


# ---------------------------------------------------------------------------
# matrix <-> dilatation algebra
# ---------------------------------------------------------------------------

def beltrami_from_matrix(entries):
    """Complex dilatation of a symmetric unit-determinant matrix.

    ``entries`` is the triple (a11, a12, a22); arrays broadcast.  Returns
    mu = (a22 - a11 - 2i a12) / det(I + A), which has |mu| < 1 for every
    positive definite input.
    """
    a11, a12, a22 = (np.asarray(e, dtype=float) for e in entries)
    det = a11 * a22 - a12 * a12
    if np.any(np.abs(det - 1.0) > DET_TOL):
        raise NonUnitDeterminant("matrix determinant differs from 1 by more than 1e-10")
    den = (1.0 + a11) * (1.0 + a22) - a12 * a12
    if np.any(a11 <= 0.0) or np.any(den <= 0.0):
        raise NotPositiveDefinite("matrix is not positive definite")
    return _maybe_item((a22 - a11 - 2j * a12) / den)


def matrix_from_beltrami(mu):
    """Unit-determinant symmetric matrix whose dilatation is ``mu``."""
    mu = np.asarray(mu, dtype=complex)
    m2 = np.abs(mu) ** 2
    if np.any(m2 >= 1.0):
        raise DilatationOutOfRange("dilatation modulus must be < 1")
    den = 1.0 - m2
    a11 = np.abs(1.0 - mu) ** 2 / den
    a12 = -2.0 * mu.imag / den
    a22 = np.abs(1.0 + mu) ** 2 / den
    return (_maybe_item(a11), _maybe_item(a12), _maybe_item(a22))


def ellipticity_of(mu):
    """Distortion bound K = (1 + |mu|) / (1 - |mu|) of a dilatation value."""
    m = np.abs(np.asarray(mu))
    if np.any(m >= 1.0):
        raise DilatationOutOfRange("dilatation modulus must be < 1")
    return _maybe_item((1.0 + m) / (1.0 - m))


def _beltrami_of_differential(m):
    """Dilatation f_zbar / f_z of a real 2x2 differential (..., 2, 2)."""
    p = m[..., 0, 0]
    q = m[..., 0, 1]
    r = m[..., 1, 0]
    s = m[..., 1, 1]
    fz = 0.5 * ((p + s) + 1j * (r - q))
    fzb = 0.5 * ((p - s) + 1j * (r + q))
    return fzb / fz


def _complex_scalar_differential(c):
    """Real 2x2 differential of multiplication by the complex number(s) c."""
    c = np.asarray(c)
    out = np.empty(c.shape + (2, 2))
    out[..., 0, 0] = c.real
    out[..., 0, 1] = -c.imag
    out[..., 1, 0] = c.imag
    out[..., 1, 1] = c.real
    return out


# ---------------------------------------------------------------------------
# domains of definition
# ---------------------------------------------------------------------------

class UnitDisc:
    """The open unit disc."""

    name = "disc"

    def contains(self, z, tol=1e-9):
        return np.abs(np.asarray(z, dtype=complex)) <= 1.0 + tol

    def boundary_points(self, n):
        return np.exp(2j * np.pi * np.arange(n) / n)

    def sample_points(self, n_r=8, n_t=16):
        r = (np.arange(n_r) + 0.5) / n_r
        t = 2.0 * np.pi * np.arange(n_t) / n_t
        return (r[:, None] * np.exp(1j * t)[None, :]).ravel()

    def area(self):
        return np.pi

    def __eq__(self, other):
        return isinstance(other, UnitDisc)

    def __repr__(self):
        return "UnitDisc()"


class EllipseRegion:
    """An axis-aligned ellipse centred at the origin."""

    def __init__(self, semi_u, semi_v):
        if semi_u <= 0 or semi_v <= 0:
            raise InvalidParameter("ellipse semi-axes must be positive")
        self.semi_u = float(semi_u)
        self.semi_v = float(semi_v)

    @property
    def name(self):
        return f"ellipse({self.semi_u:g},{self.semi_v:g})"

    def contains(self, z, tol=1e-9):
        z = np.asarray(z, dtype=complex)
        return np.hypot(z.real / self.semi_u, z.imag / self.semi_v) <= 1.0 + tol

    def boundary_points(self, n):
        t = 2.0 * np.pi * np.arange(n) / n
        return self.semi_u * np.cos(t) + 1j * self.semi_v * np.sin(t)

    def sample_points(self, n_r=8, n_t=16):
        disc = UnitDisc().sample_points(n_r, n_t)
        return self.semi_u * disc.real + 1j * self.semi_v * disc.imag

    def area(self):
        return np.pi * self.semi_u * self.semi_v

    def __eq__(self, other):
        return (
            isinstance(other, EllipseRegion)
            and other.semi_u == self.semi_u
            and other.semi_v == self.semi_v
        )

    def __repr__(self):
        return f"EllipseRegion({self.semi_u!r}, {self.semi_v!r})"


# ---------------------------------------------------------------------------
# map families
# ---------------------------------------------------------------------------

class QCMap:
    """Invertible planar map with exact differential and dilatation data.

    Subclasses provide ``forward``, ``inverse``, ``differential`` (returning
    shape ``z.shape + (2, 2)``), the two Jacobian determinants and the complex
    dilatation.  Instances are immutable after construction and all evaluators
    are pure, so they may be shared freely between threads.
    """

    kind = "abstract"

    def forward(self, w):
        raise NotImplementedError

    def inverse(self, z):
        raise NotImplementedError

    def differential(self, w):
        raise NotImplementedError

    def jac_forward(self, w):
        raise NotImplementedError

    def jac_inverse(self, z):
        """Jacobian determinant of the inverse map at codomain points."""
        return 1.0 / self.jac_forward(self.inverse(z))

    def beltrami(self, w):
        raise NotImplementedError

    def beltrami_defined(self, w):
        """Mask of points where the dilatation direction is well defined."""
        return np.ones(np.shape(np.asarray(w)), dtype=bool)


class AffineStretch(QCMap):
    """Diagonal stretch (u, v) -> (a u, v / a) followed by a rotation.

    The Jacobian is identically one, the dilatation is the real constant
    (a^2 - 1) / (a^2 + 1), and the preimage of the unit disc is the ellipse
    with semi-axes (1/a, a).
    """

    kind = "affine_stretch"

    def __init__(self, a, theta=0.0):
        if not a > 0:
            raise InvalidParameter("stretch factor must be positive")
        self.a = float(a)
        self.theta = float(theta)
        self._alpha = 0.5 * (self.a + 1.0 / self.a)
        self._beta = 0.5 * (self.a - 1.0 / self.a)
        self._rot = complex(np.cos(self.theta), np.sin(self.theta))
        self.domain = EllipseRegion(1.0 / self.a, self.a)
        self.codomain = UnitDisc()
        self.qc_coefficient = max(self.a, 1.0 / self.a) ** 2

    def forward(self, w):
        w = np.asarray(w, dtype=complex)
        return _maybe_item(self._rot * (self._alpha * w + self._beta * np.conj(w)))

    def inverse(self, z):
        v = np.asarray(z, dtype=complex) * np.conj(self._rot)
        return _maybe_item(self._alpha * v - self._beta * np.conj(v))

    def differential(self, w):
        w = np.asarray(w, dtype=complex)
        c, s = np.cos(self.theta), np.sin(self.theta)
        d = np.array([[self.a * c, -s / self.a], [self.a * s, c / self.a]])
        return np.broadcast_to(d, w.shape + (2, 2)).copy()

    def jac_forward(self, w):
        return _maybe_item(np.ones(np.shape(np.asarray(w))))

    def jac_inverse(self, z):
        return _maybe_item(np.ones(np.shape(np.asarray(z))))

    def beltrami(self, w):
        mu = (self.a**2 - 1.0) / (self.a**2 + 1.0)
        return _maybe_item(np.full(np.shape(np.asarray(w)), mu, dtype=complex))


class RadialPower(QCMap):
    """Radial stretch z -> z |z|^(gamma - 1) of the unit disc onto itself."""

    kind = "radial_power"

    def __init__(self, gamma):
        if not gamma > 0:
            raise InvalidParameter("radial exponent must be positive")
        self.gamma = float(gamma)
        self.domain = UnitDisc()
        self.codomain = UnitDisc()
        g = self.gamma
        self.qc_coefficient = max(g, 1.0 / g)

    @staticmethod
    def _power(z, p):
        z = np.asarray(z, dtype=complex)
        r = np.abs(z)
        with np.errstate(divide="ignore", invalid="ignore"):
            out = z * r**p
        return np.where(r == 0.0, 0.0 + 0.0j, out)

    def forward(self, w):
        return _maybe_item(self._power(w, self.gamma - 1.0))

    def inverse(self, z):
        return _maybe_item(self._power(z, 1.0 / self.gamma - 1.0))

    def jac_forward(self, w):
        r = np.abs(np.asarray(w, dtype=complex))
        with np.errstate(divide="ignore"):
            out = self.gamma * r ** (2.0 * (self.gamma - 1.0))
        return _maybe_item(out)

    def jac_inverse(self, z):
        r = np.abs(np.asarray(z, dtype=complex))
        g = 1.0 / self.gamma
        with np.errstate(divide="ignore"):
            out = g * r ** (2.0 * (g - 1.0))
        return _maybe_item(out)

    def differential(self, w):
        # r^(g-1) (I + (g-1) rhat rhat^T): singular values g r^(g-1), r^(g-1)
        w = np.asarray(w, dtype=complex)
        r = np.abs(w)
        g = self.gamma
        with np.errstate(divide="ignore", invalid="ignore"):
            scale = r ** (g - 1.0)
            nx = np.where(r == 0.0, 0.0, w.real / r)
            ny = np.where(r == 0.0, 0.0, w.imag / r)
        out = np.empty(w.shape + (2, 2))
        out[..., 0, 0] = scale * (1.0 + (g - 1.0) * nx * nx)
        out[..., 0, 1] = scale * (g - 1.0) * nx * ny
        out[..., 1, 0] = out[..., 0, 1]
        out[..., 1, 1] = scale * (1.0 + (g - 1.0) * ny * ny)
        return out

    def beltrami(self, w):
        # e^(2 i theta) (g-1)/(g+1); at the origin the direction is undefined
        # and only the modulus is reported (see beltrami_defined)
        w = np.asarray(w, dtype=complex)
        r = np.abs(w)
        c = (self.gamma - 1.0) / (self.gamma + 1.0)
        with np.errstate(divide="ignore", invalid="ignore"):
            phase = (w / r) ** 2
        return _maybe_item(np.where(r == 0.0, abs(c) + 0.0j, c * phase))

    def beltrami_defined(self, w):
        w = np.asarray(w, dtype=complex)
        if self.gamma == 1.0:
            return np.ones(w.shape, dtype=bool)
        return np.abs(w) > 0.0


class MobiusMap(QCMap):
    """Disc automorphism z -> (z - b) / (1 - conj(b) z); conformal, K = 1."""

    kind = "mobius"

    def __init__(self, b):
        b = complex(b)
        if abs(b) >= 1.0:
            raise InvalidParameter("mobius parameter must lie inside the unit disc")
        self.b = b
        self.domain = UnitDisc()
        self.codomain = UnitDisc()
        self.qc_coefficient = 1.0

    def forward(self, w):
        w = np.asarray(w, dtype=complex)
        return _maybe_item((w - self.b) / (1.0 - np.conj(self.b) * w))

    def inverse(self, z):
        z = np.asarray(z, dtype=complex)
        return _maybe_item((z + self.b) / (1.0 + np.conj(self.b) * z))

    def _deriv(self, w):
        w = np.asarray(w, dtype=complex)
        return (1.0 - abs(self.b) ** 2) / (1.0 - np.conj(self.b) * w) ** 2

    def differential(self, w):
        return _complex_scalar_differential(self._deriv(w))

    def jac_forward(self, w):
        return _maybe_item(np.abs(self._deriv(w)) ** 2)

    def jac_inverse(self, z):
        z = np.asarray(z, dtype=complex)
        d = (1.0 - abs(self.b) ** 2) / (1.0 + np.conj(self.b) * z) ** 2
        return _maybe_item(np.abs(d) ** 2)

    def beltrami(self, w):
        return _maybe_item(np.zeros(np.shape(np.asarray(w)), dtype=complex))


class ComposedMap(QCMap):
    """second o first, with chain-rule differentials and Jacobians."""

    kind = "composition"

    def __init__(self, first, second, qc_coefficient):
        self.first = first
        self.second = second
        self.domain = first.domain
        self.codomain = second.codomain
        self.qc_coefficient = qc_coefficient

    def forward(self, w):
        return self.second.forward(self.first.forward(w))

    def inverse(self, z):
        return self.first.inverse(self.second.inverse(z))

    def differential(self, w):
        inner = np.asarray(self.first.differential(w))
        outer = np.asarray(self.second.differential(self.first.forward(w)))
        return outer @ inner

    def jac_forward(self, w):
        mid = self.first.forward(w)
        return _maybe_item(
            np.asarray(self.first.jac_forward(w)) * np.asarray(self.second.jac_forward(mid))
        )

    def jac_inverse(self, z):
        mid = self.second.inverse(z)
        return _maybe_item(
            np.asarray(self.second.jac_inverse(z)) * np.asarray(self.first.jac_inverse(mid))
        )

    def beltrami(self, w):
        return _maybe_item(_beltrami_of_differential(np.asarray(self.differential(w))))

    def beltrami_defined(self, w):
        inner = np.asarray(self.first.beltrami_defined(w))
        outer = np.asarray(self.second.beltrami_defined(self.first.forward(w)))
        return inner & outer


class InvertedMap(QCMap):
    """The inverse of another map, sharing its distortion coefficient."""

    kind = "inverse"

    def __init__(self, base):
        self.base = base
        self.domain = base.codomain
        self.codomain = base.domain
        self.qc_coefficient = base.qc_coefficient

    def forward(self, z):
        return self.base.inverse(z)

    def inverse(self, w):
        return self.base.forward(w)

    def differential(self, z):
        m = np.asarray(self.base.differential(self.base.inverse(z)))
        det = m[..., 0, 0] * m[..., 1, 1] - m[..., 0, 1] * m[..., 1, 0]
        out = np.empty_like(m)
        out[..., 0, 0] = m[..., 1, 1] / det
        out[..., 0, 1] = -m[..., 0, 1] / det
        out[..., 1, 0] = -m[..., 1, 0] / det
        out[..., 1, 1] = m[..., 0, 0] / det
        return out

    def jac_forward(self, z):
        return self.base.jac_inverse(z)

    def jac_inverse(self, w):
        return self.base.jac_forward(w)

    def beltrami(self, z):
        return _maybe_item(_beltrami_of_differential(np.asarray(self.differential(z))))

    def beltrami_defined(self, z):
        return self.base.beltrami_defined(self.base.inverse(z))


# ---------------------------------------------------------------------------
# constructors
# ---------------------------------------------------------------------------

def make_affine_stretch(a, theta=0.0):
    return AffineStretch(a, theta)


def make_radial_power(gamma):
    return RadialPower(gamma)


def make_mobius(b):
    return MobiusMap(b)


def identity_map():
    return AffineStretch(1.0, 0.0)


def _sampled_distortion(m):
    pts = m.domain.sample_points()
    mods = np.abs(np.asarray(m.beltrami(pts)))
    return ellipticity_of(float(mods.max()))


def compose_maps(first, second, n_boundary=256, tol=1e-9):
    """Compose two maps (second applied after first).

    Containment of the image of ``first`` in the domain of ``second`` is
    verified on ``n_boundary`` samples of the domain boundary; the families
    here are smooth, so the sampled check suffices at this density.
    """
    pts = first.forward(first.domain.boundary_points(n_boundary))
    if not np.all(second.domain.contains(pts, tol)):
        raise DomainMismatch(
            f"image of {first.kind} leaves the domain of {second.kind} on boundary samples"
        )
    composed = ComposedMap(first, second, 1.0)
    composed.qc_coefficient = _sampled_distortion(composed)
    return composed


def invert_map(m):
    return InvertedMap(m)


# ---------------------------------------------------------------------------
# derived objects
# ---------------------------------------------------------------------------

class Weight:
    """Positive disc weight h(z) = |J(z, phi^{-1})| for a map phi onto the disc.

    ``mass`` is the quadrature value of the weight over the disc, which equals
    the area of the source domain.  ``singular`` marks weights that blow up at
    the origin (used by mesh builders to refine the innermost ring).
    """

    def __init__(self, eval_fn, mass, source_map=None, singular=False):
        self._eval = eval_fn
        self.mass = float(mass)
        self.source_map = source_map
        self.singular = bool(singular)

    def __call__(self, z):
        return self._eval(z)


def weight_of_map(phi, tol=1e-10):
    """Disc weight generated by a map ``phi`` of some domain onto the disc."""

    def h(z):
        return np.abs(np.asarray(phi.jac_inverse(z)))

    # probe for an origin singularity; midedge quadrature never hits r=0 but
    # mesh construction refines the innermost ring for singular weights
    singular = bool(h(np.array([1e-6 + 0j])) > 100.0 * h(np.array([0.5 + 0j])))
    res = polar_quadrature(h, tol)
    if res.divergent:
        raise NonIntegrableWeight("weight mass quadrature diverged")
    return Weight(h, res.value, phi, singular)


class EllipticMatrixField:
    """Symmetric unit-determinant matrix field; evaluates to (a11, a12, a22)."""

    def __init__(self, eval_fn, ellipticity_K, domain_tag):
        self._eval = eval_fn
        self.ellipticity_K = float(ellipticity_K)
        self.domain_tag = str(domain_tag)

    def __call__(self, w):
        return self._eval(w)


def identity_field(domain_tag="disc"):
    def ev(w):
        one = np.ones(np.shape(np.asarray(w)))
        return (one, np.zeros_like(one), one)

    return EllipticMatrixField(ev, 1.0, domain_tag)


def matrix_field_of_map(m):
    """Matrix field agreed with the dilatation of ``m`` on its domain."""

    def ev(w):
        return matrix_from_beltrami(np.asarray(m.beltrami(w), dtype=complex))

    return EllipticMatrixField(ev, _sampled_distortion(m), m.domain.name)
