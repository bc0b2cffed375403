"""The Lorentz group SO(1,d) and its standard subgroups.

Matrices are plain ``(d+1, d+1)`` float ndarrays acting on Minkowski space
with the form ``J = diag(1, -1, ..., -1)``; the group is taken to be the
identity component (``det g = +1``, ``g[0,0] >= 1``), which preserves the
upper sheet of the hyperboloid.  Coordinate 1 carries the boost direction;
the unipotent directions live in coordinates 2..d.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field

import numpy as np

TOL_GROUP = 1e-9


def minkowski_form(d):
    J = -np.eye(d + 1)
    J[0, 0] = 1.0
    return J


def basepoint(d):
    """The point fixed by K: (1, 0, ..., 0) on the upper sheet."""
    xi = np.zeros(d + 1)
    xi[0] = 1.0
    return xi


def make_boost(x, d):
    """Boost by rapidity ``x`` in the (0,1) plane, identity elsewhere."""
    if d < 2:
        raise ValueError("need d >= 2")
    g = np.eye(d + 1)
    c, s = np.cosh(x), np.sinh(x)
    g[0, 0] = g[1, 1] = c
    g[0, 1] = g[1, 0] = s
    return g


def make_scale(r, d):
    """Boost written multiplicatively: make_boost(log r, d) for r > 0."""
    if r <= 0:
        raise ValueError("scale parameter must be positive")
    return make_boost(np.log(r), d)


def make_unipotent(u, d=None):
    """Upper-triangular horospherical translation by ``u`` in R^(d-1)."""
    u = np.atleast_1d(np.asarray(u, dtype=float))
    if d is None:
        d = u.size + 1
    if u.size != d - 1:
        raise ValueError("u must have d-1 components")
    q = 0.5 * float(u @ u)
    g = np.eye(d + 1)
    g[0, 0] = 1.0 + q
    g[0, 1] = -q
    g[1, 0] = q
    g[1, 1] = 1.0 - q
    g[0, 2:] = u
    g[1, 2:] = u
    g[2:, 0] = u
    g[2:, 1] = -u
    return g


def embed_rotation(k):
    """diag(1, k) for k in SO(d): the maximal compact subgroup K."""
    k = np.asarray(k, dtype=float)
    d = k.shape[0]
    g = np.eye(d + 1)
    g[1:, 1:] = k
    return g


def embed_m_rotation(k):
    """diag(1, 1, k) for k in SO(d-1): the centralizer M of the boost axis."""
    k = np.asarray(k, dtype=float)
    g = np.eye(k.shape[0] + 2)
    g[2:, 2:] = k
    return g


def lorentz_inverse(g):
    """Inverse via the form: g^-1 = J g^T J (exact for group elements)."""
    g = np.asarray(g)
    d = g.shape[0] - 1
    J = minkowski_form(d)
    return J @ g.T @ J


def group_residual(g):
    """Entrywise residual max|g^T J g - J|."""
    g = np.asarray(g, dtype=float)
    J = minkowski_form(g.shape[0] - 1)
    return float(np.max(np.abs(g.T @ J @ g - J)))


def is_lorentz(g, tol=TOL_GROUP):
    g = np.asarray(g, dtype=float)
    if g.ndim != 2 or g.shape[0] != g.shape[1] or g.shape[0] < 3:
        return False
    if group_residual(g) > tol:
        return False
    # det is exactly +-1 on the group; the tolerance only needs to separate
    # the two components, but must absorb LU roundoff on large products
    det_tol = min(0.5, max(tol, 1e3 * np.finfo(float).eps * np.abs(g).max() ** g.shape[0]))
    if abs(np.linalg.det(g) - 1.0) > det_tol:
        return False
    return g[0, 0] >= 1.0 - tol


def require_lorentz(g, tol=TOL_GROUP, what="matrix"):
    g = np.asarray(g, dtype=float)
    if not is_lorentz(g, tol):
        raise ValueError(
            f"{what} is not in the identity component of SO(1,d): "
            f"residual max|g^T J g - J| = {group_residual(g):.3e}, "
            f"det = {np.linalg.det(g):.6f}, g00 = {g[0, 0]:.6f}"
        )
    return g


@dataclass(frozen=True)
class CycleConfig:
    """Ambient dimension d and cycle dimension n, with the half-sums of
    positive roots rho = (d-1)/2 and rho0 = (n-1)/2."""

    d: int
    n: int
    rho: float = field(init=False)
    rho0: float = field(init=False)

    def __post_init__(self):
        if int(self.d) != self.d or int(self.n) != self.n:
            raise ValueError("d and n must be integers")
        if self.d < 3 or not (2 <= self.n <= self.d - 1):
            raise ValueError("need d >= 3 and 2 <= n <= d-1")
        object.__setattr__(self, "rho", (self.d - 1) / 2.0)
        object.__setattr__(self, "rho0", (self.n - 1) / 2.0)


def _block_offdiag_max(g, split):
    """Largest entry coupling coordinates [0:split) with [split:)."""
    return max(float(np.max(np.abs(g[:split, split:]))),
               float(np.max(np.abs(g[split:, :split]))))


def check_membership(g, subgroup, cfg=None, tol=TOL_GROUP):
    """Test whether ``g`` lies in one of G, K, A, N, M, G0, K0, AN0.

    Shape-based: each subgroup is characterized by which blocks of the
    matrix are free.  G0/K0/AN0 need a CycleConfig for the block split.
    """
    g = np.asarray(g, dtype=float)
    d = g.shape[0] - 1
    if subgroup == "G":
        return is_lorentz(g, tol)
    if not is_lorentz(g, tol):
        return False
    if subgroup == "K":
        e0 = np.zeros(d + 1)
        e0[0] = 1.0
        return (np.max(np.abs(g[0] - e0)) <= tol
                and np.max(np.abs(g[:, 0] - e0)) <= tol)
    if subgroup == "A":
        x = float(np.arccosh(max(g[0, 0], 1.0)))
        if g[0, 1] < 0:
            x = -x
        return float(np.max(np.abs(g - make_boost(x, d)))) <= tol
    if subgroup == "N":
        u = g[2:, 0].copy()
        return float(np.max(np.abs(g - make_unipotent(u, d)))) <= tol
    if subgroup == "M":
        if np.max(np.abs(g[:2, :2] - np.eye(2))) > tol:
            return False
        return _block_offdiag_max(g, 2) <= tol
    if subgroup in ("G0", "K0", "AN0"):
        if cfg is None:
            raise ValueError(f"{subgroup} membership needs a CycleConfig")
        if cfg.d != d:
            raise ValueError("CycleConfig dimension does not match matrix")
        split = cfg.n + 1
        if subgroup == "G0":
            return _block_offdiag_max(g, split) <= tol
        if subgroup == "K0":
            return (check_membership(g, "K", tol=tol)
                    and _block_offdiag_max(g, split) <= tol)
        # AN0: trivial K-factor and unipotent part supported in the cycle
        p = g[:, 0]
        s = 1.0 / (p[0] - p[1])
        w = p[2:] * s
        if np.max(np.abs(w[cfg.n - 1:])) > tol:
            return False
        k = make_boost(-np.log(s), d) @ make_unipotent(-w, d) @ g
        e0 = np.zeros(d + 1)
        e0[0] = 1.0
        return float(np.max(np.abs(k - np.eye(d + 1)))) <= max(tol, 1e2 * TOL_GROUP)
    raise ValueError(f"unknown subgroup {subgroup!r}")


def commutation_identities(r, u, k=None, kprime=None, tol=1e-12):
    """Check the three structural identities used throughout:

    1. a_r n_u = n_{u r} a_r
    2. diag(1,1,k) n_u = n_{u k^T} diag(1,1,k)          (k in SO(d-1))
    3. diag(1,-1,k') a_r = a_{1/r} diag(1,-1,k')        (k' in O(d-1), det -1)

    Returns a tuple of three booleans (entrywise agreement within ``tol``).
    """
    if r <= 0:
        raise ValueError("r must be positive")
    u = np.atleast_1d(np.asarray(u, dtype=float))
    d = u.size + 1
    a = make_scale(r, d)
    lhs1 = a @ make_unipotent(u, d)
    rhs1 = make_unipotent(u * r, d) @ a
    ok1 = float(np.max(np.abs(lhs1 - rhs1))) <= tol

    if k is None:
        k = np.eye(d - 1)
    k = np.asarray(k, dtype=float)
    mk = embed_m_rotation(k)
    lhs2 = mk @ make_unipotent(u, d)
    rhs2 = make_unipotent(u @ k.T, d) @ mk
    ok2 = float(np.max(np.abs(lhs2 - rhs2))) <= tol

    if kprime is None:
        kprime = k.copy()
        kprime[0] *= -1.0
    kprime = np.asarray(kprime, dtype=float)
    mkp = np.eye(d + 1)
    mkp[1, 1] = -1.0
    mkp[2:, 2:] = kprime
    lhs3 = mkp @ a
    rhs3 = make_scale(1.0 / r, d) @ mkp
    ok3 = float(np.max(np.abs(lhs3 - rhs3))) <= tol
    return ok1, ok2, ok3


def spin_cover_so13(m, tol=1e-10):
    """Image of m in SL(2,C) under the double cover onto SO0(1,3).

    The action X -> m X m* on Hermitian matrices is read in the basis
    X = [[x0+x1, x2+i x3], [x2-i x3, x0-x1]], so det X is the Minkowski
    norm and the diagonal/upper-triangular subgroups of SL(2,C) land on
    the boost axis A and the unipotent group N of our conventions.
    """
    m = np.asarray(m, dtype=complex)
    if m.shape != (2, 2):
        raise ValueError("expected a 2x2 complex matrix")
    det = m[0, 0] * m[1, 1] - m[0, 1] * m[1, 0]
    if abs(det - 1.0) > tol:
        raise ValueError(f"matrix must have det 1 (got {det})")
    basis = (
        np.eye(2, dtype=complex),
        np.array([[1, 0], [0, -1]], dtype=complex),
        np.array([[0, 1], [1, 0]], dtype=complex),
        np.array([[0, 1j], [-1j, 0]], dtype=complex),
    )
    mh = m.conj().T
    g = np.empty((4, 4))
    for j, B in enumerate(basis):
        X = m @ B @ mh
        g[0, j] = 0.5 * (X[0, 0] + X[1, 1]).real
        g[1, j] = 0.5 * (X[0, 0] - X[1, 1]).real
        g[2, j] = X[0, 1].real
        g[3, j] = X[0, 1].imag
    return require_lorentz(g, tol=1e-8, what="spin cover image")


def matrix_to_json(g):
    g = np.asarray(g, dtype=float)
    d = g.shape[0] - 1
    return {"d": d, "matrix": [float(x) for x in g.ravel()]}


def matrix_from_json(obj, tol=TOL_GROUP):
    d = int(obj["d"])
    entries = np.asarray(obj["matrix"], dtype=float)
    g = entries.reshape(d + 1, d + 1)
    return require_lorentz(g, tol=tol, what="deserialized matrix")


def random_rotation(rng, d):
    """Haar-ish SO(d) sample: QR of a Gaussian matrix, determinant fixed."""
    a = rng.standard_normal((d, d))
    q, r = np.linalg.qr(a)
    q = q * np.sign(np.diag(r))
    if np.linalg.det(q) < 0:
        q[:, 0] *= -1.0
    return q


def random_lorentz(rng, d, n_factors=6, scale=0.8):
    """Random word in boosts, unipotents and rotations (covers G = NAK)."""
    g = np.eye(d + 1)
    for _ in range(n_factors):
        kind = rng.integers(0, 3)
        if kind == 0:
            g = g @ make_boost(scale * rng.uniform(-1, 1), d)
        elif kind == 1:
            g = g @ make_unipotent(scale * rng.uniform(-1, 1, size=d - 1), d)
        else:
            g = g @ embed_rotation(random_rotation(rng, d))
    return g
