"""Scalar functionals of disc weights and the explicit stability constants.

Everything here reduces to adaptive disc quadrature of closed-form integrands
built from map Jacobians, plus elementary arithmetic for the constants that
enter the eigenvalue stability bounds.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .errors import InvalidParameter, ModeOutOfRange, NonIntegrableWeight
from .quadrature import QuadratureResult, polar_quadrature

__all__ = [
    "polar_quadrature",
    "QuadratureResult",
    "beta_regularity",
    "phi_beta",
    "d_s_distance",
    "sqrt_jacobian_l2",
    "lemma51_check",
    "pair_regularity",
    "b_q2_disc",
    "poincare_upper",
    "bound_two_weight",
    "bound_thm_two_ww",
    "bound_main",
    "s_of_beta",
    "q_of_beta",
    "StabilityReport",
]


def s_of_beta(beta):
    """Exponent s = 2 beta / (beta + 1); lies in (1, 2) for beta > 1."""
    return 2.0 * beta / (beta + 1.0)


def q_of_beta(beta):
    """Exponent q = (2 beta / (beta - 1))^2 of the disc Sobolev constant."""
    return (2.0 * beta / (beta - 1.0)) ** 2


def _check_beta(beta):
    if not beta > 1.0:
        raise InvalidParameter("beta must exceed 1")


def _power_result(res, p):
    """Apply value -> value**p to a quadrature result, propagating the error."""
    if res.value <= 0.0:
        return QuadratureResult(0.0, res.error_estimate, res.converged, res.levels_used, res.divergent)
    value = res.value**p
    err = abs(p) * res.value ** (p - 1.0) * res.error_estimate
    return QuadratureResult(value, err, res.converged, res.levels_used, res.divergent)


def beta_regularity(phi, beta, tol=1e-8):
    """Integral of |J(w, phi)|^(1-beta) over the source domain of ``phi``.

    Evaluated by pulling back to the disc; a divergent flag classifies the
    domain as not beta-regular.
    """
    _check_beta(beta)

    def integrand(z):
        jin = np.abs(np.asarray(phi.jac_inverse(z)))
        jfw = np.abs(np.asarray(phi.jac_forward(phi.inverse(z))))
        return jfw ** (1.0 - beta) * jin

    return polar_quadrature(integrand, tol)


def phi_beta(map1, map2, beta, tol=1e-8):
    """Mixed Jacobian-ratio functional whose finiteness marks a regular pair.

    Value is the 1/(2 beta) power of the disc integral of
    max{J1^beta / J2^(beta-1), J2^beta / J1^(beta-1)} with J_k the inverse
    Jacobians of the two maps.
    """
    _check_beta(beta)

    def integrand(z):
        j1 = np.abs(np.asarray(map1.jac_inverse(z)))
        j2 = np.abs(np.asarray(map2.jac_inverse(z)))
        return np.maximum(j1**beta / j2 ** (beta - 1.0), j2**beta / j1 ** (beta - 1.0))

    return _power_result(polar_quadrature(integrand, tol), 1.0 / (2.0 * beta))


def d_s_distance(h1, h2, s, tol=1e-8):
    """Weighted L^s distance between two disc weights.

    Computes (integral of |h1 - h2|^s min(h1, h2)^(1-s))^(1/s); symmetric in
    its weight arguments and homogeneous of degree 1/s under joint scaling.
    """
    if not 1.0 < s <= 2.0:
        raise InvalidParameter("need s in (1, 2]")

    def integrand(z):
        a = np.asarray(h1(z), dtype=float)
        b = np.asarray(h2(z), dtype=float)
        return np.abs(a - b) ** s * np.minimum(a, b) ** (1.0 - s)

    return _power_result(polar_quadrature(integrand, tol), 1.0 / s)


def sqrt_jacobian_l2(h1, h2, tol=1e-8):
    """L2 distance of the root weights: (integral (sqrt h1 - sqrt h2)^2)^(1/2)."""

    def integrand(z):
        return (np.sqrt(np.asarray(h1(z), dtype=float)) - np.sqrt(np.asarray(h2(z), dtype=float))) ** 2

    return _power_result(polar_quadrature(integrand, tol), 0.5)


def lemma51_check(map1, map2, beta, tol=1e-8):
    """Check d_s <= 2 Phi_beta ||sqrt J1 - sqrt J2|| at s = 2 beta/(beta+1).

    Returns (d_s, bound, holds).  Raises NonIntegrableWeight when any of the
    three quadratures diverges.
    """
    _check_beta(beta)
    from .maps import weight_of_map

    h1 = weight_of_map(map1)
    h2 = weight_of_map(map2)
    dres = d_s_distance(h1, h2, s_of_beta(beta), tol)
    pres = phi_beta(map1, map2, beta, tol)
    lres = sqrt_jacobian_l2(h1, h2, tol)
    for r, name in ((dres, "d_s"), (pres, "phi_beta"), (lres, "l2 distance")):
        if r.divergent:
            raise NonIntegrableWeight(f"{name} quadrature diverged")
    bound = 2.0 * pres.value * lres.value
    holds = dres.value <= bound * (1.0 + 1e-8)
    return dres.value, bound, holds


def pair_regularity(map1, map2, beta, tol=1e-8):
    """Both directions of the pair integrals: integral J2^beta J1^(1-beta)
    and integral J1^beta J2^(1-beta) over the disc; finite iff the maps form
    a regular pair (iff phi_beta is finite)."""
    _check_beta(beta)

    def make(jnum, jden):
        def integrand(z):
            a = np.abs(np.asarray(jnum.jac_inverse(z)))
            b = np.abs(np.asarray(jden.jac_inverse(z)))
            return a**beta * b ** (1.0 - beta)

        return integrand

    int12 = polar_quadrature(make(map2, map1), tol)
    int21 = polar_quadrature(make(map1, map2), tol)
    return int12, int21


def b_q2_disc(q):
    """Closed-form upper estimate of the disc Sobolev constant B_{q,2}."""
    if not q >= 2.0:
        raise InvalidParameter("need q >= 2")
    return (np.pi / 2.0) ** ((2.0 - q) / (2.0 * q)) * (q + 2.0) ** ((q + 2.0) / (2.0 * q))


def poincare_upper(beta, h1, h2, k_qc, tol=1e-8):
    """Explicit upper bound for the weighted Poincare-Sobolev constant
    B_{4 beta/(beta-1), 2}: sqrt(K) B_{q,2} max_k ||h_k||_{L2}^((beta-1)/(4 beta))."""
    _check_beta(beta)
    norms = []
    for h in (h1, h2):
        res = polar_quadrature(lambda z, h=h: np.asarray(h(z), dtype=float) ** 2, tol)
        if res.divergent or not res.converged:
            raise NonIntegrableWeight("weight is not square-integrable on the disc")
        norms.append(np.sqrt(res.value))
    exponent = (beta - 1.0) / (4.0 * beta)
    return float(np.sqrt(k_qc) * b_q2_disc(q_of_beta(beta)) * max(norms) ** exponent)


def bound_two_weight(b, c_tilde):
    """Sharp and coarse eigenvalue-variation bounds for a two-weight pair:
    (B c / (1 + B sqrt(c)), B c); the first is strictly smaller when both
    inputs are positive."""
    sharp = b * c_tilde / (1.0 + b * np.sqrt(c_tilde))
    coarse = b * c_tilde
    return float(sharp), float(coarse)


def bound_thm_two_ww(d_s, b, c_tilde):
    """Two-weight eigenvalue bound c_tilde * B^2 * d_s; with s = 2b/(b+1) the
    Sobolev exponent 2s/(s-1) equals 4b/(b-1), so the same constant B serves
    both forms."""
    return float(c_tilde * b * b * d_s)


def bound_main(spec1, spec2, n, beta, phi_b, l2dist, b):
    """Per-mode main stability bound.

    ``n`` is the 1-based mode index.  Returns (lhs, rhs, c_n) with
    c_n = max of squared nth eigenvalues, lhs the eigenvalue gap and
    rhs = 2 c_n B^2 Phi_beta ||sqrt J1 - sqrt J2||.
    """
    _check_beta(beta)
    if n < 1 or n > len(spec1) or n > len(spec2):
        raise ModeOutOfRange(f"mode {n} outside both spectra")
    mu1 = float(spec1.eigenvalues[n - 1])
    mu2 = float(spec2.eigenvalues[n - 1])
    c_n = max(mu1 * mu1, mu2 * mu2)
    lhs = abs(mu1 - mu2)
    rhs = 2.0 * c_n * b * b * phi_b * l2dist
    return lhs, rhs, c_n


@dataclass
class StabilityReport:
    """Computed functionals and per-mode bound sides for a map pair."""

    beta: float
    s: float
    q: float
    d_s: float
    phi_beta: float
    l2_root_jac: float
    b_q2: float
    poincare_B: float
    modes: list[int] = field(default_factory=list)
    mu_1: list[float] = field(default_factory=list)
    mu_2: list[float] = field(default_factory=list)
    c_n: list[float] = field(default_factory=list)
    c_tilde_n: list[float] = field(default_factory=list)
    lhs_n: list[float] = field(default_factory=list)
    disc_err_n: list[float] = field(default_factory=list)
    lhs_upper_n: list[float] = field(default_factory=list)
    rhs_sharp_n: list[float] = field(default_factory=list)
    rhs_coarse_n: list[float] = field(default_factory=list)
    rhs_main_n: list[float] = field(default_factory=list)
    pass_n: list[bool] = field(default_factory=list)

    def all_pass(self):
        return all(self.pass_n)
