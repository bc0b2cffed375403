"""The test function exp(-mu cosh x), K-Bessel machinery, and the spherical
transform that turns it into 2^d (pi/2mu)^((d-1)/2) K_nu(mu).

All Bessel values come from one integral representation,

    K_nu(x) = int_0^inf exp(-x cosh t) cosh(nu t) dt,      x > 0,

evaluated by adaptive Gauss-Kronrod panels on [0, T] with T chosen so the
integrand has underflowed at the cut.  Half-integer closed forms and the
classical integral identities (Gradshteyn-Ryzhik 3.471.9, 6.726.4, 6.592.12)
serve as cross-checks, each computed against direct quadrature.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np
from scipy.interpolate import CubicSpline
from scipy.special import gamma as _gamma

from .quadrature import quad_gk

MAX_REAL_ORDER = 50.0
_EXP_CUT = 770.0           # exp(-770) underflows with margin


# ---------------------------------------------------------------------------
# spectral parameters and the test function


@dataclass(frozen=True)
class SpectralParam:
    """Spectral parameter nu of a spherical representation: real in
    (-rho, rho) or purely imaginary; lam = rho^2 - nu^2 is the Laplace
    eigenvalue."""

    nu: complex
    rho: float

    def __post_init__(self):
        nu = complex(self.nu)
        real_ok = abs(nu.imag) < 1e-12 and -self.rho < nu.real < self.rho
        imag_ok = abs(nu.real) < 1e-12
        if not (real_ok or imag_ok):
            raise ValueError(
                f"nu = {nu} must be real in (-rho, rho) = (-{self.rho}, {self.rho}) "
                "or purely imaginary"
            )

    @classmethod
    def for_dim(cls, nu, d):
        return cls(nu=complex(nu), rho=(d - 1) / 2.0)

    @property
    def lam(self):
        lam = self.rho ** 2 - complex(self.nu) ** 2
        return float(lam.real)


def _nu_value(nu):
    if isinstance(nu, SpectralParam):
        return complex(nu.nu)
    return nu


def phi_mu(mu, x):
    """The radial test function exp(-mu cosh x) on distances x >= 0."""
    if mu <= 0:
        raise ValueError("mu must be positive")
    x = np.asarray(x, dtype=float)
    if np.any(x < 0):
        raise ValueError("x must be nonnegative")
    out = np.exp(-mu * np.cosh(x))
    return float(out) if out.ndim == 0 else out


@dataclass(frozen=True)
class TestFunction:
    """exp(-mu cosh x), callable on distances."""

    mu: float

    def __post_init__(self):
        if self.mu <= 0:
            raise ValueError("mu must be positive")

    def __call__(self, x):
        return phi_mu(self.mu, x)


# ---------------------------------------------------------------------------
# modified Bessel function of the second kind, arbitrary order


def _normalize_order(order):
    """K is even in its order; fold Re(order) >= 0 so cosh factors stay tame."""
    nu = complex(order)
    if abs(nu.real) > MAX_REAL_ORDER:
        raise ValueError(f"|Re(order)| must be <= {MAX_REAL_ORDER}")
    if nu.real < 0:
        nu = -nu
    return nu


def _cosh_cutoff(x, a, target=_EXP_CUT):
    """Smallest T with x*(cosh T - 1) - a*T beyond the underflow target."""
    T = float(np.arccosh(1.0 + (target + 10.0) / x))
    for _ in range(6):
        T = float(np.arccosh(1.0 + (target + 10.0 + max(a, 0.0) * T) / x))
    return T + 0.5


def _scaled_integrand(t, x, nu):
    """exp(x) * exp(-x cosh t) cosh(nu t), overflow-safe for Re(nu) >= 0."""
    a, b = nu.real, nu.imag
    expo = -x * (np.cosh(t) - 1.0) + a * t
    if b == 0.0:
        return 0.5 * np.exp(expo) * (1.0 + np.exp(-2.0 * a * t))
    return 0.5 * np.exp(expo) * (np.exp(1j * b * t) + np.exp(-2.0 * a * t - 1j * b * t))


def bessel_k_scaled(order, x, rel_tol=1e-9):
    """exp(x) * K_order(x) by adaptive quadrature; safe for large x."""
    if x <= 0:
        raise ValueError("x must be positive")
    nu = _normalize_order(order)
    T = _cosh_cutoff(x, nu.real)
    res = quad_gk(lambda t: _scaled_integrand(t, x, nu), 0.0, T,
                  rel_tol=rel_tol, abs_tol=1e-300)
    if not res.converged:
        raise RuntimeError(f"Bessel quadrature did not converge (order={order}, x={x})")
    val = res.value
    if np.iscomplexobj(np.asarray(order)) or isinstance(order, complex):
        return complex(val)
    return float(np.real(val))


def bessel_k(order, x, rel_tol=1e-9):
    """K_order(x) for real, imaginary, or general complex order.

    Returns a complex number when the order is passed as complex (its
    imaginary part measures how well reality survives for imaginary order),
    a float otherwise.
    """
    scaled = bessel_k_scaled(order, x, rel_tol=rel_tol)
    return scaled * np.exp(-x)


def log_bessel_k(order, x, rel_tol=1e-9):
    """log K_order(x) for real order (K > 0 there); stable for large x."""
    nu = complex(order)
    if abs(nu.imag) > 1e-14:
        raise ValueError("log_bessel_k is defined for real order only")
    scaled = bessel_k_scaled(float(nu.real), x, rel_tol=rel_tol)
    return float(np.log(scaled) - x)


def bessel_k_asymptotic(order, x):
    """Leading large-argument behavior sqrt(pi/2x) e^{-x} (order-free)."""
    if x <= 0:
        raise ValueError("x must be positive")
    return float(np.sqrt(np.pi / (2.0 * x)) * np.exp(-x))


def bessel_k_imag_scaled(r, x, rel_tol=1e-9):
    """exp(pi r / 2) K_{ir}(x) for r >= 0, x > 0, without cancellation.

    K_{ir}(x) is of size exp(-pi r/2), far below what the direct cosh
    representation can resolve in doubles once r is large.  Rotating that
    same representation onto the contour

        [0, Tc]  +  [Tc, Tc + i pi/2]  +  [Tc + i pi/2, +inf + i pi/2)

    makes the exp(pi r/2) factor analytic: with phase  p(t) = x sinh t - r t,

        exp(pi r/2) K_{ir}(x) = Re  int  e^{i p(t)} dt

    over that contour, every piece absolutely convergent once
    x cosh(Tc) >= 2r.  Agrees with bessel_k on the overlap where the direct
    path still converges.
    """
    if x <= 0:
        raise ValueError("x must be positive")
    if r < 0:
        raise ValueError("r must be nonnegative (K is even in its order)")
    if x >= 0.5 * np.pi * r:
        # monotone regime: the direct representation resolves K itself and
        # the exponent pi r/2 - x is nonpositive, so no overflow either way
        scaled = bessel_k_scaled(complex(0.0, r) if r else 0.0, x, rel_tol=rel_tol)
        return float(np.real(scaled) * np.exp(0.5 * np.pi * r - x))
    tc = max(float(np.arccosh(max(2.0 * r / x, 1.0))), 0.6)
    xc = x * np.cosh(tc)

    leg1 = quad_gk(lambda t: np.exp(1j * (x * np.sinh(t) - r * t)),
                   0.0, tc, rel_tol=rel_tol).value
    sh, ch = np.sinh(tc), np.cosh(tc)

    def vert(s):
        expo = r * s - x * ch * np.sin(s)
        return np.exp(expo + 1j * (x * sh * np.cos(s) - r * tc))

    leg2 = 1j * quad_gk(vert, 0.0, np.pi / 2.0, rel_tol=rel_tol).value
    u_hi = float(np.arccosh((_EXP_CUT + np.pi * r / 2.0 + 20.0) / x))

    def horiz(u):
        return np.exp(np.pi * r / 2.0 - x * np.cosh(u) - 1j * r * u)

    leg3 = quad_gk(horiz, tc, max(u_hi, tc + 1.0), rel_tol=rel_tol).value
    return float(np.real(leg1 + leg2 + leg3))


# Fixed composite Gauss-Legendre rule on a geometric panel ladder: evaluates
# K at many arguments in one shot, for use inside vectorized integrands.
_GL_NODES, _GL_WEIGHTS = np.polynomial.legendre.leggauss(15)


def bessel_k_scaled_batch(order, z):
    """exp(z) K_order(z) for an array of z > 0, one shared t-grid.

    Panels grow geometrically from a step resolving the sharpest Gaussian
    scale 1/sqrt(max z) out to the underflow cut of the smallest z, so a
    single rule serves the whole batch; accuracy is pinned against the
    adaptive evaluator in the test suite.
    """
    z = np.atleast_1d(np.asarray(z, dtype=float))
    if np.any(z <= 0):
        raise ValueError("z must be positive")
    nu = _normalize_order(order)
    T = _cosh_cutoff(float(z.min()), nu.real)
    h0 = min(0.05, 0.3 / np.sqrt(float(z.max())))
    edges = [0.0, h0]
    while edges[-1] < T:
        h0 *= 1.4
        edges.append(min(edges[-1] + h0, T))
    edges = np.asarray(edges)
    half = 0.5 * np.diff(edges)
    mid = 0.5 * (edges[1:] + edges[:-1])
    t = (mid[:, None] + half[:, None] * _GL_NODES[None, :]).ravel()
    w = (half[:, None] * _GL_WEIGHTS[None, :]).ravel()

    a, b = nu.real, nu.imag
    expo = -np.outer(z, np.cosh(t) - 1.0) + a * t[None, :]
    mag = np.exp(expo)
    if b == 0.0:
        vals = 0.5 * mag * (1.0 + np.exp(-2.0 * a * t))[None, :]
    else:
        vals = 0.5 * mag * (np.exp(1j * b * t) + np.exp(-2.0 * a * t - 1j * b * t))[None, :]
    out = vals @ w
    if not (np.iscomplexobj(np.asarray(order)) or isinstance(order, complex)):
        out = out.real
    return out


class KScaledInterpolator:
    """Cubic log-log spline of exp(z) K_nu(z) for real nu on [z_lo, z_hi].

    Built from the batch evaluator and self-audited against the adaptive
    one at off-grid points; raises if the audit misses ``check_tol``.
    """

    def __init__(self, order, z_lo, z_hi, n=500, check_tol=1e-8):
        nu = complex(order)
        if abs(nu.imag) > 1e-14:
            raise ValueError("interpolation table needs a real order")
        self.order = float(nu.real)
        if not (0 < z_lo < z_hi):
            raise ValueError("need 0 < z_lo < z_hi")
        self.z_lo, self.z_hi = float(z_lo), float(z_hi)
        logz = np.linspace(np.log(z_lo), np.log(z_hi), n)
        vals = bessel_k_scaled_batch(self.order, np.exp(logz))
        self._spline = CubicSpline(logz, np.log(vals))
        probe = np.exp(0.5 * (logz[3:40:7] + logz[4:41:7]))
        for zp in probe:
            ref = bessel_k_scaled(self.order, float(zp))
            got = float(self(zp))
            if abs(got - ref) > check_tol * abs(ref):
                raise RuntimeError("Bessel interpolation table failed its self-audit")

    def __call__(self, z):
        z = np.asarray(z, dtype=float)
        return np.exp(self._spline(np.log(z)))

    def log_k(self, z):
        """log K_nu(z), vectorized."""
        z = np.asarray(z, dtype=float)
        return self._spline(np.log(z)) - z


# ---------------------------------------------------------------------------
# Gradshteyn-Ryzhik identities, each side computed independently


def _rel_err(lhs, rhs):
    scale = max(abs(lhs), abs(rhs), 1e-300)
    return abs(lhs - rhs) / scale


def gr_identity_3_471_9(alpha, beta, order, rel_tol=1e-10):
    """int_0^inf x^(nu-1) exp(-alpha/x - beta x) dx  vs  2 (a/b)^(nu/2) K_nu(2 sqrt(ab)).

    Both sides returned together with their relative difference.
    """
    if alpha <= 0 or beta <= 0:
        raise ValueError("alpha and beta must be positive")
    nu = complex(_nu_value(order))
    # substitute x = e^y; doubly exponential decay at both ends
    y_hi = np.log((_EXP_CUT + 40.0) / beta + 1.0)
    y_lo = -np.log((_EXP_CUT + 40.0) / alpha + 1.0)
    for _ in range(4):
        y_hi = np.log((_EXP_CUT + 40.0 + abs(nu.real) * abs(y_hi)) / beta + 1.0)
        y_lo = -np.log((_EXP_CUT + 40.0 + abs(nu.real) * abs(y_lo)) / alpha + 1.0)

    def f(y):
        return np.exp(nu * y - alpha * np.exp(-y) - beta * np.exp(y))

    res = quad_gk(f, y_lo - 0.5, y_hi + 0.5, rel_tol=rel_tol)
    lhs = res.value
    rhs = 2.0 * (alpha / beta) ** (nu / 2.0) * complex(bessel_k(complex(nu), 2.0 * np.sqrt(alpha * beta)))
    return lhs, rhs, _rel_err(lhs, rhs)


def gr_identity_6_726_4(a, b, c, order, sign=+1, rel_tol=1e-10):
    """int_0^inf (x^2+b^2)^(-s nu/2) K_nu(a sqrt(x^2+b^2)) cos(cx) dx  vs

    sqrt(pi/2) a^(-s nu) b^(1/2 - s nu) (a^2+c^2)^(s nu/2 - 1/4)
                                        K_(s nu - 1/2)(b sqrt(a^2+c^2))

    where s = sign picks the upper (+1) or lower (-1) row of the identity.
    """
    if a <= 0 or b <= 0:
        raise ValueError("a and b must be positive")
    if sign not in (+1, -1):
        raise ValueError("sign must be +1 or -1")
    nu = complex(_nu_value(order))
    s = float(sign)
    # power-factor growth is at most polynomial against exp(-a x) decay
    X = (_EXP_CUT + 60.0 + (abs(nu.real) + 1.0) * 20.0) / a + b + 1.0

    def f(x):
        z = a * np.sqrt(x * x + b * b)
        kv = bessel_k_scaled_batch(complex(nu), z) * np.exp(-z)
        return (x * x + b * b) ** (-s * nu / 2.0) * kv * np.cos(c * x)

    res = quad_gk(f, 0.0, X, rel_tol=rel_tol)
    lhs = res.value
    w = b * np.sqrt(a * a + c * c)
    rhs = (np.sqrt(np.pi / 2.0) * a ** (-s * nu) * b ** (0.5 - s * nu)
           * (a * a + c * c) ** (s * nu / 2.0 - 0.25)
           * complex(bessel_k(complex(s * nu - 0.5), w)))
    return lhs, rhs, _rel_err(lhs, rhs)


def gr_identity_6_592_12(a, b, c, order=None, rel_tol=1e-10):
    """int_1^inf x^(-b/2) (x-1)^(c-1) K_z(a sqrt(x)) dx  vs  2^c Gamma(c) a^(-c) K_(b-c)(a).

    The identity couples the Bessel order to the power: it holds with
    z = -b (equivalently z = b, K being even in its order).  The order
    argument is optional and only validated against that constraint.
    """
    if a <= 0:
        raise ValueError("a must be positive")
    if c <= 0:
        raise ValueError("c must be positive")
    z_order = -float(b)
    if order is not None:
        nu = complex(_nu_value(order))
        if abs(nu.imag) > 1e-12 or min(abs(nu.real - z_order), abs(nu.real + z_order)) > 1e-9:
            raise ValueError(
                "the identity requires order = -b (up to sign); "
                f"got order={order} with b={b}"
            )
    # substitute x = 1 + tau^2 to absorb the endpoint power
    p = abs(2.0 * c - 1.0) + abs(b) + 2.0
    tau_max = (_EXP_CUT + 40.0) / a + 1.0
    for _ in range(4):
        tau_max = (_EXP_CUT + 40.0 + p * np.log1p(tau_max)) / a + 1.0

    def f(tau):
        x = 1.0 + tau * tau
        zarg = a * np.sqrt(x)
        kv = bessel_k_scaled_batch(z_order, zarg) * np.exp(-zarg)
        return 2.0 * tau ** (2.0 * c - 1.0) * x ** (-b / 2.0) * kv

    res = quad_gk(f, 0.0, tau_max, rel_tol=rel_tol)
    lhs = res.value
    rhs = 2.0 ** c * _gamma(c) * a ** (-c) * float(bessel_k(float(b - c), a))
    return float(lhs), float(rhs), _rel_err(lhs, rhs)


# ---------------------------------------------------------------------------
# the spherical transform of exp(-mu cosh x)


def selberg_transform_closed(d, mu, nu, rel_tol=1e-9):
    """Closed form 2^d (pi/2mu)^((d-1)/2) K_nu(mu)."""
    if mu <= 0:
        raise ValueError("mu must be positive")
    if d < 2 or int(d) != d:
        raise ValueError("d must be an integer >= 2")
    nu_c = _nu_value(nu)
    pref = 2.0 ** d * (np.pi / (2.0 * mu)) ** ((d - 1) / 2.0)
    return pref * bessel_k(nu_c, mu, rel_tol=rel_tol)


def selberg_transform_quadrature(d, mu, nu, rel_tol=1e-9):
    """The transform by direct numerical integration of

        int_{R^(d-1)} int_0^inf exp[-mu((|u|^2+1)/2 r + (1/2)/r)] r^(nu+rho-1) dr du

    after reducing the u-integral to its radial part.  Agreement with the
    closed form is the primary oracle pair of this module.
    """
    if mu <= 0:
        raise ValueError("mu must be positive")
    if int(d) != d or d < 2:
        raise ValueError("d must be an integer >= 2")
    if d > 6:
        raise ValueError(f"unsupported dimension d={d} (quadrature cost guard, d <= 6)")
    nu_c = complex(_nu_value(nu))
    rho = (d - 1) / 2.0
    sphere = 2.0 * np.pi ** ((d - 1) / 2.0) / _gamma((d - 1) / 2.0)

    c = abs(nu_c.real) + rho + 1.0
    X = float(np.arccosh((_EXP_CUT + 40.0) * 2.0 / mu + 1.0))
    for _ in range(4):
        X = float(np.arccosh(2.0 * (_EXP_CUT + 40.0 + c * X) / mu + 1.0))
    X += 1.0

    inner_tol = max(rel_tol * 1e-2, 1e-13)

    def radial(x):
        r = np.exp(x)
        z = 0.5 * mu * r
        rad_hi = np.sqrt((_EXP_CUT + 20.0) / z)
        res = quad_gk(lambda s: s ** (d - 2) * np.exp(-z * s * s),
                      0.0, rad_hi, rel_tol=inner_tol)
        return res.value

    def outer(x):
        r = np.exp(x)
        return radial(x) * np.exp(-0.5 * mu * (r + 1.0 / r) + (nu_c + rho) * x)

    res = quad_gk(outer, -X, X, rel_tol=rel_tol, vectorized=False)
    if not res.converged:
        raise RuntimeError("transform quadrature did not converge")
    val = sphere * res.value
    if isinstance(nu, SpectralParam) or np.iscomplexobj(np.asarray(_nu_value(nu))) \
            or isinstance(_nu_value(nu), complex):
        return complex(val)
    return float(np.real(val))
