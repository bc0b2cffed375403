"""Iwasawa (NAK / ANK) and Cartan (KA+K) factorizations, hyperbolic distance.

Horospherical coordinates (u, r) in R^(d-1) x R_+ parameterize the upper
hyperboloid sheet through the point n_u a_r . xi0; the metric normalization
is fixed so that dist(a_t . o, o) = |t|.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .lorentz import (
    basepoint,
    make_boost,
    make_scale,
    make_unipotent,
    require_lorentz,
)


@dataclass(frozen=True)
class NakFactors:
    """g = n a k with n = make_unipotent(w), a = make_boost(x)."""

    w: np.ndarray
    x: float
    k: np.ndarray

    @property
    def n_mat(self):
        return make_unipotent(self.w)

    @property
    def a_mat(self):
        return make_boost(self.x, self.w.size + 1)

    @property
    def s(self):
        return float(np.exp(self.x))

    def product(self):
        return self.n_mat @ self.a_mat @ self.k


@dataclass(frozen=True)
class AnkFactors:
    """g = a n k with a = make_scale(r0), n = make_unipotent(w0)."""

    r0: float
    w0: np.ndarray
    k: np.ndarray

    def product(self):
        d = self.w0.size + 1
        return make_scale(self.r0, d) @ make_unipotent(self.w0, d) @ self.k


@dataclass(frozen=True)
class KakFactors:
    """g = k1 a_t k2 with t >= 0."""

    k1: np.ndarray
    t: float
    k2: np.ndarray

    def product(self):
        return self.k1 @ make_boost(self.t, self.k1.shape[0] - 1) @ self.k2


def nak(g, tol=1e-9):
    """NAK factors from the first column of g.

    With p = g . xi0 one has p0 - p1 = 1/s and p[2:] = w/s, which determines
    the NA part; the compact factor is whatever is left over.
    """
    g = require_lorentz(g, tol=tol)
    d = g.shape[0] - 1
    p = g[:, 0]
    s = 1.0 / (p[0] - p[1])      # p0 - p1 = sqrt(1+|p'|^2) - p1 > 0 on the sheet
    w = p[2:] * s
    x = float(np.log(s))
    k = make_boost(-x, d) @ make_unipotent(-w, d) @ g
    return NakFactors(w=w, x=x, k=k)


def ank(g, tol=1e-9):
    """ANK factors: if g = n_w a_s k then g = a_s n_{w/s} k."""
    f = nak(g, tol=tol)
    return AnkFactors(r0=f.s, w0=f.w / f.s, k=f.k)


def _complete_frame(v):
    """Deterministic Q in SO(d) with first column v (unit vector).

    Householder reflection through v - e1, with a fixed column flip to
    restore det +1; the degenerate directions +-e1 are special-cased.
    """
    d = v.size
    e1 = np.zeros(d)
    e1[0] = 1.0
    if np.linalg.norm(v - e1) < 1e-12:
        return np.eye(d)
    if np.linalg.norm(v + e1) < 1e-12:
        q = np.eye(d)
        q[0, 0] = -1.0
        q[-1, -1] = -1.0
        return q
    h = v - e1
    H = np.eye(d) - 2.0 * np.outer(h, h) / (h @ h)
    H[:, 1] *= -1.0     # restore det +1 without touching column 0
    return H


def kak(g, tol=1e-9):
    """Cartan factors g = k1 a_t k2 with t = arccosh(g00) >= 0.

    The decomposition is unique only modulo the centralizer of the boost
    axis; the frame completion makes a fixed deterministic choice.
    """
    g = require_lorentz(g, tol=tol)
    d = g.shape[0] - 1
    t = float(np.arccosh(max(g[0, 0], 1.0)))
    p = g[:, 0]
    spatial = p[1:]
    norm = float(np.linalg.norm(spatial))
    if norm < 1e-12:
        return KakFactors(k1=np.eye(d + 1), t=0.0, k2=g.copy())
    q = _complete_frame(spatial / norm)
    k1 = np.eye(d + 1)
    k1[1:, 1:] = q
    k2 = make_boost(-t, d) @ k1.T @ g
    return KakFactors(k1=k1, t=t, k2=k2)


def minkowski_pairing(p, q):
    p = np.asarray(p, dtype=float)
    q = np.asarray(q, dtype=float)
    return float(p[0] * q[0] - p[1:] @ q[1:])


def dist(p, q):
    """Hyperbolic distance: arccosh of the Minkowski pairing, clamped at 1."""
    return float(np.arccosh(max(minkowski_pairing(p, q), 1.0)))


def dist_horospherical(u, r, v, t):
    """Distance in (u, r)-coordinates: arccosh[(|u-v|^2 + r^2 + t^2)/(2rt)]."""
    u = np.atleast_1d(np.asarray(u, dtype=float))
    v = np.atleast_1d(np.asarray(v, dtype=float))
    if r <= 0 or t <= 0:
        raise ValueError("horospherical heights must be positive")
    du = u - v
    arg = (du @ du + r * r + t * t) / (2.0 * r * t)
    return float(np.arccosh(max(arg, 1.0)))


def is_hyperboloid_point(p, tol=1e-9):
    p = np.asarray(p, dtype=float)
    return p[0] > 0 and abs(p[0] ** 2 - p[1:] @ p[1:] - 1.0) <= tol


def from_horospherical(u, r):
    """Point n_u a_r . xi0 of the upper sheet."""
    u = np.atleast_1d(np.asarray(u, dtype=float))
    if r <= 0:
        raise ValueError("horospherical height must be positive")
    q = 0.5 * float(u @ u) / r
    p = np.empty(u.size + 2)
    p[0] = 0.5 * (r + 1.0 / r) + q
    p[1] = 0.5 * (r - 1.0 / r) + q
    p[2:] = u / r
    return p


def to_horospherical(p):
    """Inverse of from_horospherical: r = 1/(p0 - p1), u = p[2:] * r."""
    p = np.asarray(p, dtype=float)
    r = 1.0 / (p[0] - p[1])
    return p[2:] * r, float(r)


def random_point(rng, d, u_scale=2.0, logr_scale=1.0):
    u = u_scale * rng.uniform(-1, 1, size=d - 1)
    r = float(np.exp(logr_scale * rng.uniform(-1, 1)))
    return from_horospherical(u, r)


def apply(g, p):
    """Action of the group on points of the sheet."""
    return np.asarray(g) @ np.asarray(p)


def orbit_of_basepoint(g):
    """g . xi0, i.e. the first column of g."""
    g = np.asarray(g)
    return g[:, 0].copy()


def point_of(g):
    return orbit_of_basepoint(g)


def dist_to_basepoint(g):
    """Boost rapidity of the Cartan middle factor: cosh t = g00."""
    g = np.asarray(g, dtype=float)
    return float(np.arccosh(max(g[0, 0], 1.0)))


def xi0(d):
    return basepoint(d)
