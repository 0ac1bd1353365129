"""Generalized symmetric eigensolvers for the lowest Neumann eigenpairs.

The sparse path is shift-invert Lanczos with full reorthogonalization in the
M-inner product; the dense path reduces with a Cholesky factor of M and calls
the LAPACK QR eigensolver, serving as an independent oracle for small meshes.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np
import scipy.linalg as la
import scipy.sparse as sp
import scipy.sparse.linalg as spla

from .errors import BadShift, InvalidParameter, NoConvergence, NotPositiveDefinite

CLAMP = 1e-10
DENSE_LIMIT = 2000
_ZERO_MODE_FACTOR = 1e-6


@dataclass
class Spectrum:
    """Ordered eigenpairs of K x = mu M x.

    ``eigenvalues`` is nondecreasing with the Neumann zero mode first;
    ``eigenvectors`` (n, k) are M-orthonormal; ``residuals`` hold
    ||K x - mu M x|| / ||M x|| per pair; ``v_star`` is the reciprocal square
    root of the first eigenvalue above the zero-mode threshold (the sharp
    constant of the weighted Poincare inequality realized by the spectrum).
    """

    eigenvalues: np.ndarray
    eigenvectors: np.ndarray
    residuals: np.ndarray
    v_star: float | None

    def __len__(self):
        return len(self.eigenvalues)


class Factorization:
    """Direct solve handle for a symmetric sparse matrix."""

    def __init__(self, s):
        s = sp.csc_matrix(s)
        self._s = s
        try:
            self._lu = spla.splu(s)
        except RuntimeError as exc:  # exactly singular
            raise NotPositiveDefinite(str(exc)) from exc
        upiv = np.abs(self._lu.U.diagonal())
        if upiv.min() <= 1e-12 * upiv.max():
            raise NotPositiveDefinite("vanishing pivot in factorization")
        # probe curvature once: a PD matrix has x^T S x > 0
        x = np.cos(np.arange(s.shape[0], dtype=float))
        if float(x @ (s @ x)) <= 0.0:
            raise NotPositiveDefinite("matrix has non-positive curvature direction")

    def solve(self, b):
        x = self._lu.solve(b)
        r = b - self._s @ x
        # one refinement step keeps ||Sx - b|| <= 1e-10 ||b|| comfortably
        nb = np.linalg.norm(b)
        if nb > 0.0 and np.linalg.norm(r) > 1e-12 * nb:
            x = x + self._lu.solve(r)
        return x


def factorize(s):
    return Factorization(s)


def _finalize(k, m, mu, x):
    """Clamp, sort, M-orthonormalize and attach residuals / v_star."""
    order = np.argsort(mu, kind="stable")
    mu = mu[order]
    x = x[:, order]
    mu = np.where((mu < 0.0) & (mu > -CLAMP), 0.0, mu)
    gram = x.T @ (m @ x)
    chol = la.cholesky(gram, lower=True)
    x = la.solve_triangular(chol, x.T, lower=True).T
    kx = k @ x
    mx = m @ x
    res = np.linalg.norm(kx - mu * mx, axis=0) / np.linalg.norm(mx, axis=0)
    v_star = None
    if len(mu) >= 2 and mu[1] > 0.0:
        above = mu[mu > _ZERO_MODE_FACTOR * mu[1]]
        if len(above):
            v_star = float(1.0 / np.sqrt(above[0]))
    return Spectrum(mu, x, res, v_star)


class _Subspace:
    """M-orthonormal basis with cached K- and M-products and the projected
    stiffness, grown column by column with twice-repeated reorthogonalization."""

    def __init__(self, k, m, cap, rng):
        self.k = k
        self.m = m
        self.rng = rng
        n = k.shape[0]
        self.q = np.zeros((n, cap))
        self.kq = np.zeros((n, cap))
        self.mq = np.zeros((n, cap))
        self.h = np.zeros((cap, cap))
        self.count = 0

    def append(self, vec):
        """Deflate against the basis and append; falls back to fresh random
        vectors when the column is numerically dependent."""
        n = self.q.shape[0]
        if self.count >= min(self.q.shape[1], n):
            return False
        for _ in range(4):
            w = vec
            scale = float(np.sqrt(max(w @ (self.m @ w), 0.0)))
            active = self.q[:, : self.count]
            mact = self.mq[:, : self.count]
            for _ in range(2):
                w = w - active @ (mact.T @ w)
            norm = float(np.sqrt(max(w @ (self.m @ w), 0.0)))
            if norm > 1e-10 * max(scale, 1e-300):
                t = self.count
                w = w / norm
                self.q[:, t] = w
                self.kq[:, t] = self.k @ w
                self.mq[:, t] = self.m @ w
                row = self.kq[:, : t + 1].T @ w
                self.h[t, : t + 1] = row
                self.h[: t + 1, t] = row
                self.count = t + 1
                return True
            vec = self.rng.standard_normal(n)
        return False

    def extract(self, n_modes):
        t = self.count
        theta, y = la.eigh(self.h[:t, :t])
        mu = theta[:n_modes]
        x = self.q[:, :t] @ y[:, :n_modes]
        kx = self.kq[:, :t] @ y[:, :n_modes]
        mx = self.mq[:, :t] @ y[:, :n_modes]
        res = np.linalg.norm(kx - mu * mx, axis=0) / np.linalg.norm(mx, axis=0)
        return mu, x, res


def generalized_eigs(k, m, n_modes, tol=1e-8, seed=0):
    """Lowest ``n_modes`` eigenpairs of K x = mu M x (K PSD, M PD).

    Shift-invert Lanczos with shift sigma = -0.1 trace(K)/trace(M), run in
    blocks of two with full reorthogonalization so that the double Neumann
    eigenvalues of symmetric domains are resolved reliably; eigenpairs are
    extracted by Rayleigh-Ritz on the accumulated subspace and accepted when
    every requested residual is below ``tol``.  A failed factorization is
    retried once with the shift doubled before raising BadShift; the step
    budget is 50 * n_modes.
    """
    n = k.shape[0]
    if not 0 < n_modes <= n:
        raise InvalidParameter("need 0 < n_modes <= dimension")
    tr_k = float(k.diagonal().sum())
    tr_m = float(m.diagonal().sum())
    ratio = tr_k / tr_m
    if ratio <= 0.0:  # K = 0 is PSD with an all-zero spectrum; keep the shift negative
        ratio = 1.0
    sigma = -0.1 * ratio
    fact = None
    last = None
    for shift in (sigma, 2.0 * sigma):
        try:
            fact = factorize((k - shift * m).tocsc())
            sigma = shift
            break
        except NotPositiveDefinite as exc:
            last = exc
    if fact is None:
        raise BadShift("shifted matrix is not positive definite") from last

    max_steps = 50 * n_modes
    block = min(2, n)
    rng = np.random.default_rng(seed)
    space = _Subspace(k, m, min(n, block * (max_steps + 1)), rng)
    for _ in range(block):
        space.append(rng.standard_normal(n))
    for _ in range(max_steps):
        lead = space.count
        fresh = [fact.solve(space.mq[:, j]) for j in range(max(0, lead - block), lead)]
        grew = False
        for vec in fresh:
            grew = space.append(vec) or grew
        if space.count >= min(n_modes + 1, n):
            mu, x, res = space.extract(n_modes)
            if np.all(res <= tol):
                return _finalize(k, m, mu, x)
        if not grew:  # basis saturated the whole space
            break
    raise NoConvergence(f"residuals above {tol} after {max_steps} steps")


def dense_generalized_eigs(k, m):
    """Full spectrum by dense Cholesky reduction and the QR eigensolver."""
    n = k.shape[0]
    if n > DENSE_LIMIT:
        raise InvalidParameter(f"dense oracle limited to dimension {DENSE_LIMIT}")
    kd = k.toarray() if sp.issparse(k) else np.asarray(k, dtype=float)
    md = m.toarray() if sp.issparse(m) else np.asarray(m, dtype=float)
    try:
        mu, x = la.eigh(kd, md, driver="gv")
    except la.LinAlgError as exc:
        raise NotPositiveDefinite(str(exc)) from exc
    return _finalize(sp.csr_matrix(kd), sp.csr_matrix(md), mu, x)
