"""Assembly-level numerics: total mass of the test function, the main-term
model integral over a compact window, the per-element error integrand J and
its decay, spectral-tail convergence under the Weyl counting law, and the
exp(mu)-rescaled limit shape.

Anything that multiplies exp(mu) against exp(-mu)-sized factors is carried
as (log magnitude, sign) so that sweeps up to mu = 60 stay in range.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np
from scipy.optimize import minimize
from scipy.special import gamma as _gamma

from .cycles import PreparedCycle
from .lorentz import check_membership, require_lorentz
from .quadrature import quad_gk
from .transform import (
    KScaledInterpolator,
    _nu_value,
    bessel_k,
    bessel_k_scaled,
    selberg_transform_quadrature,
)

_EXP_CUT = 770.0


# ---------------------------------------------------------------------------
# spectra and counting


def weyl_count(x, d, volume):
    """Leading Weyl term vol/((4 pi)^(d/2) Gamma(d/2+1)) x^d."""
    if x < 0:
        raise ValueError("x must be nonnegative")
    return volume / ((4.0 * np.pi) ** (d / 2.0) * _gamma(d / 2.0 + 1.0)) * x ** d


@dataclass(frozen=True, eq=False)
class SpectrumModel:
    """Eigenvalue frequencies r_j (lambda_j = rho^2 + r_j^2) with
    multiplicities; either measured or synthesized from the Weyl law."""

    d: int
    volume: float
    r: np.ndarray
    mult: np.ndarray
    synthetic: bool = False

    def __post_init__(self):
        r = np.asarray(self.r, dtype=float)
        m = np.asarray(self.mult)
        if np.any(np.diff(r) < 0):
            raise ValueError("frequencies must be nondecreasing")
        if np.any(m < 1):
            raise ValueError("multiplicities must be >= 1")

    @classmethod
    def synthetic_weyl(cls, d, volume, r_max):
        """r_j solving N(r_j) = j for the leading Weyl term, up to r_max."""
        c = volume / ((4.0 * np.pi) ** (d / 2.0) * _gamma(d / 2.0 + 1.0))
        j_max = int(np.floor(c * r_max ** d))
        j = np.arange(1, j_max + 1, dtype=float)
        return cls(d=d, volume=volume, r=(j / c) ** (1.0 / d),
                   mult=np.ones(j_max, dtype=int), synthetic=True)


def spectral_tail_bound(spec, mu, cutoff):
    """Tail sum_{r_j > R} r_j^d exp(-(pi/2) r_j) of the kernel-convergence
    chain (absolute constants set to 1; the bound is uniform in mu), plus
    the mass sitting between R and 2R."""
    del mu  # the Gamma/Stirling bound is uniform in the argument
    r = np.asarray(spec.r, dtype=float)
    m = np.asarray(spec.mult, dtype=float)
    terms = m * r ** spec.d * np.exp(-0.5 * np.pi * r)
    tail = float(terms[r > cutoff].sum())
    between = float(terms[(r > cutoff) & (r <= 2.0 * cutoff)].sum())
    return tail, between


# ---------------------------------------------------------------------------
# total mass of the test function over the group


def f_total_integral(d, mu, rel_tol=1e-9):
    """(closed, quadrature, rel_err) for the group integral of the test
    function: closed form 2^d (pi/2mu)^((d-1)/2) K_{(d-1)/2}(mu); the
    quadrature side is the transform integral with the character dropped,
    i.e. evaluated at nu = -rho."""
    rho = (d - 1) / 2.0
    closed = 2.0 ** d * (np.pi / (2.0 * mu)) ** rho * bessel_k(rho, mu)
    quad = selberg_transform_quadrature(d, mu, -rho, rel_tol=rel_tol)
    quad = float(np.real(quad))
    err = abs(closed - quad) / max(abs(closed), 1e-300)
    return float(closed), quad, float(err)


# ---------------------------------------------------------------------------
# main-term model over a compact coordinate window


@dataclass(frozen=True)
class BoxDomain:
    """Product window in (v, r): per-axis intervals for v in R^(n-1) and an
    r-interval bounded away from 0; stands in for a compact fundamental
    window of the cycle."""

    v_bounds: tuple
    r_bounds: tuple

    def __post_init__(self):
        r_lo, r_hi = self.r_bounds
        if not (0 < r_lo < r_hi) or not np.isfinite(r_hi):
            raise ValueError("unbounded box: need 0 < r_lo < r_hi < inf")
        for lo, hi in self.v_bounds:
            if not (np.isfinite(lo) and np.isfinite(hi) and lo < hi):
                raise ValueError("unbounded box: v intervals must be finite")

    @property
    def v_volume(self):
        return float(np.prod([hi - lo for lo, hi in self.v_bounds]))

    def i_nu(self, nu):
        """Exact window integral of r^(2 Re nu - 1) dr dv."""
        a = 2.0 * complex(_nu_value(nu)).real
        r_lo, r_hi = self.r_bounds
        if abs(a) < 1e-14:
            radial = np.log(r_hi / r_lo)
        else:
            radial = (r_hi ** a - r_lo ** a) / a
        return self.v_volume * float(radial)


def _sigma0_inner_quadrature(n, mu, nu_bar, rel_tol):
    """Direct 2D quadrature of the inner layer integral

        int_{R^(n-1) x R_+} exp[-mu/2 ((|u|^2+1)/s + s)] s^(nubar + rho0 - n) ds du

    reduced to radial u; equals 2^n (pi/2mu)^((n-1)/2) K_nubar(mu).
    """
    rho0 = (n - 1) / 2.0
    sphere = 2.0 * np.pi ** ((n - 1) / 2.0) / _gamma((n - 1) / 2.0)
    c = abs(nu_bar.real) + rho0 + n + 1.0
    Y = float(np.arccosh(2.0 * (_EXP_CUT + 40.0) / mu + 1.0))
    for _ in range(4):
        Y = float(np.arccosh(2.0 * (_EXP_CUT + 40.0 + c * Y) / mu + 1.0))
    Y += 1.0
    inner_tol = max(rel_tol * 1e-2, 1e-13)
    expo = nu_bar + rho0 - n + 1.0

    def outer(y):
        s = np.exp(y)
        z = 0.5 * mu / s
        sig_hi = np.sqrt((_EXP_CUT + 20.0) / z)
        rad = quad_gk(lambda sig: sig ** (n - 2) * np.exp(-z * sig * sig),
                      0.0, sig_hi, rel_tol=inner_tol).value
        return rad * np.exp(-0.5 * mu * (s + 1.0 / s) + expo * y)

    res = quad_gk(outer, -Y, Y, rel_tol=rel_tol, vectorized=False)
    if not res.converged:
        raise RuntimeError("main-term inner quadrature did not converge")
    return sphere * res.value


def sigma0_model(cfg, mu, nu, box, rel_tol=1e-8):
    """Main-term model integral over the window: closed form

        2^n (pi/2mu)^((n-1)/2) K_nubar(mu) * int_box r^(2 Re nu - 1) dr dv

    against direct quadrature of the layered integral.  Returns
    (closed, quadrature, rel_err).
    """
    if mu <= 0:
        raise ValueError("mu must be positive")
    n = cfg.n
    nu_c = complex(_nu_value(nu))
    nu_bar = nu_c.conjugate()
    i_nu = box.i_nu(nu_c)
    closed = (2.0 ** n * (np.pi / (2.0 * mu)) ** ((n - 1) / 2.0)
              * complex(bessel_k(nu_bar, mu)) * i_nu)

    inner = _sigma0_inner_quadrature(n, mu, nu_bar, rel_tol)
    r_lo, r_hi = box.r_bounds
    a = 2.0 * nu_c.real
    radial = quad_gk(lambda r: r ** (a - 1.0), r_lo, r_hi,
                     rel_tol=max(rel_tol * 1e-2, 1e-13)).value
    quad = inner * box.v_volume * radial

    closed_s, quad_s = complex(closed), complex(quad)
    err = abs(closed_s - quad_s) / max(abs(closed_s), 1e-300)
    if abs(nu_c.imag) < 1e-14:
        return float(closed_s.real), float(quad_s.real), float(err)
    return closed_s, quad_s, float(err)


# ---------------------------------------------------------------------------
# the per-class error integrand J and its decay


@dataclass(frozen=True)
class JGammaResult:
    log_value: float
    value: float
    delta_min: float
    degenerate: bool
    n_min: float


def _delta_scan(prep, u_range, grid=33):
    """Minimum of delta_u over the window, plus the refined minimum of N_u
    (the convergence witness); grid scans polished by Nelder-Mead."""
    axes = [np.linspace(lo, hi, grid) for lo, hi in u_range]
    mesh = np.meshgrid(*axes, indexing="ij")
    pts = np.stack([m.ravel() for m in mesh], axis=-1)
    deltas = np.empty(len(pts))
    n_vals = np.empty(len(pts))
    for i, u in enumerate(pts):
        inv = prep.invariants(u)
        deltas[i] = inv.delta
        n_vals[i] = inv.N_u
    lo_clip = [lo for lo, _ in u_range]
    hi_clip = [hi for _, hi in u_range]

    def polish(values, objective):
        i0 = int(np.argmin(values))
        res = minimize(
            lambda u: objective(np.clip(u, lo_clip, hi_clip)),
            pts[i0], method="Nelder-Mead",
            options={"xatol": 1e-10, "fatol": 1e-12, "maxiter": 400})
        return float(min(values[i0], res.fun))

    d_min = polish(deltas, lambda u: prep.invariants(u).delta)
    n_min = polish(n_vals, lambda u: prep.invariants(u).N_u)
    return max(d_min, 1.0), max(n_min, 0.0)


def j_gamma_quadrature(gamma, u_range, cfg, mu, nu, rel_tol=1e-7):
    """The reduced error-term integral

        J = 2^n (pi/2mu)^((n-1)/2) *
            int (sqrt f)^nu K_nu(mu sqrt f) s1^(nu+rho0) r^(nu+rho0-n) dr du

    over the direction window ``u_range``, computed in log scale so the
    exp(-mu sqrt(delta_min)) size survives large mu.  Real spectral
    parameter only (the integral is complex otherwise).

    Convergence needs both M(gamma) > 0 and inf_u N_u(gamma) > 0 on the
    window -- the positivity a good double-coset representative enjoys.
    Word-ball representatives of cusp-type classes violate it (N_u vanishes
    where the translated geodesic becomes asymptotic to the cycle, and the
    height factor s1 can blow up at the same spot); such inputs are
    returned with ``degenerate`` set instead of a value.
    """
    gamma = require_lorentz(gamma)
    if check_membership(gamma, "G0", cfg, tol=1e-8):
        raise ValueError("gamma lies in the cycle subgroup; excluded by precondition")
    nu_c = complex(_nu_value(nu))
    if abs(nu_c.imag) > 1e-12:
        raise ValueError("j_gamma_quadrature is defined for real spectral parameter")
    nu_r = float(nu_c.real)
    if np.isscalar(u_range[0]):
        u_range = (tuple(u_range),)
    if len(u_range) != cfg.n - 1:
        raise ValueError("u_range must give one interval per cycle direction")

    n, rho0 = cfg.n, cfg.rho0
    prep = PreparedCycle(gamma, cfg)
    inv0 = prep.invariants(np.zeros(cfg.n - 1))
    delta_min, n_min = _delta_scan(prep, u_range)
    if inv0.M < 1e-12 or n_min < 1e-8:
        return JGammaResult(log_value=np.nan, value=np.nan, delta_min=delta_min,
                            degenerate=True, n_min=n_min)
    sqrt_dmin = np.sqrt(delta_min)
    z_hi = mu * sqrt_dmin + _EXP_CUT + 120.0
    table = KScaledInterpolator(nu_r, mu * sqrt_dmin * 0.999, z_hi)

    def inner(u):
        inv = prep.invariants(np.atleast_1d(u))
        if inv.N_u < 0.25 * n_min:
            raise RuntimeError("window scan missed an N_u degeneration; "
                               "shrink the window or refine the scan")
        r_hi = ((_EXP_CUT + 60.0) / mu + 2.0 * sqrt_dmin) / np.sqrt(inv.M)
        r_lo = np.sqrt(inv.N_u) / ((_EXP_CUT + 60.0) / mu + 2.0 * sqrt_dmin)

        def logf(x):
            r = np.exp(x)
            f = inv.f(r)
            sf = np.sqrt(f)
            z = mu * sf
            s1 = inv.s1(r)
            return (nu_r * np.log(sf) + table.log_k(np.minimum(z, z_hi))
                    + mu * sqrt_dmin
                    - np.where(z > z_hi, z - z_hi, 0.0)
                    + (nu_r + rho0) * np.log(s1)
                    + (nu_r + rho0 - n + 1.0) * x)

        res = quad_gk(lambda x: np.exp(logf(x)),
                      float(np.log(r_lo)) - 2.0, float(np.log(r_hi)) + 2.0,
                      rel_tol=rel_tol * 1e-1)
        return res.value

    val = _nested_quad(inner, u_range, rel_tol)
    pref = 2.0 ** n * (np.pi / (2.0 * mu)) ** ((n - 1) / 2.0)
    log_value = float(np.log(pref) + np.log(val) - mu * sqrt_dmin)
    return JGammaResult(log_value=log_value,
                        value=float(np.exp(log_value)) if log_value > -700 else 0.0,
                        delta_min=float(delta_min), degenerate=False,
                        n_min=float(n_min))


def _nested_quad(f, ranges, rel_tol):
    """Iterated scalar quadrature over a product of intervals."""
    lo, hi = ranges[0]
    if len(ranges) == 1:
        return quad_gk(lambda u: f(float(u)), lo, hi,
                       rel_tol=rel_tol, vectorized=False).value
    return quad_gk(lambda u: _nested_quad(lambda rest: f(np.concatenate([[u], np.atleast_1d(rest)])),
                                          ranges[1:], rel_tol),
                   lo, hi, rel_tol=rel_tol, vectorized=False).value


def j_gamma_decay_check(results_by_mu, slack_degree):
    """Monotonicity of log J(mu) + mu sqrt(delta_min)/2 along increasing mu,
    up to additive slack slack_degree * log(mu ratio) absorbing the
    polynomial prefactor.  Returns (statistics, ok)."""
    mus = sorted(results_by_mu)
    stats = [results_by_mu[m].log_value + 0.5 * m * np.sqrt(results_by_mu[m].delta_min)
             for m in mus]
    ok = all(
        stats[k + 1] <= stats[k] + slack_degree * np.log(mus[k + 1] / mus[k]) + 1e-9
        for k in range(len(mus) - 1)
    )
    return stats, ok


# ---------------------------------------------------------------------------
# rescaled limit shape


@dataclass(frozen=True)
class LimitShapeRow:
    mu: float
    value_log: float
    sign: int
    envelope_log: float

    @property
    def value(self):
        return self.sign * float(np.exp(self.value_log))

    @property
    def envelope(self):
        return float(np.exp(self.envelope_log))


def rescaled_limit_shape(cfg, mu_grid, nu, box):
    """exp(mu)-rescaled main term along a mu sweep, in log-sign form.

    The period-sum normalization of the main term is
    2^{-d} (2mu/pi)^{(d-1)/2} Sigma0; multiplying by
    e^mu (pi/2mu)^{(d-n-1)/2} collapses to

        V(mu) = 2^{n-d} I_nu * sqrt(2mu/pi) e^mu K_nubar(mu)  ->  2^{n-d} I_nu,

    so the sweep plateaus at a nonzero constant.  The error envelope is the
    rescaled O(e^-mu mu^-(n+1)/2) error bound, (pi/2)^((d-n-1)/2) mu^(-d/2).
    """
    mu_grid = [float(m) for m in mu_grid]
    if any(b <= a for a, b in zip(mu_grid, mu_grid[1:])):
        raise ValueError("mu_grid must be strictly increasing")
    if mu_grid[-1] > 60.0:
        raise ValueError("mu_grid capped at 60")
    d, n = cfg.d, cfg.n
    nu_bar = complex(_nu_value(nu)).conjugate()
    i_nu = box.i_nu(nu)
    rows = []
    for mu in mu_grid:
        kscaled = bessel_k_scaled(nu_bar if abs(nu_bar.imag) > 1e-14 else nu_bar.real, mu)
        kscaled = float(np.real(kscaled))
        sign = int(np.sign(kscaled)) or 1
        value_log = ((n - d) * np.log(2.0) + np.log(abs(i_nu))
                     + 0.5 * np.log(2.0 * mu / np.pi) + np.log(abs(kscaled)))
        envelope_log = (0.5 * (d - n - 1) * np.log(np.pi / (2.0 * mu))
                        - 0.5 * (n + 1) * np.log(mu))
        rows.append(LimitShapeRow(mu=mu, value_log=float(value_log), sign=sign,
                                  envelope_log=float(envelope_log)))
    return rows


def plateau_gap(rows, mu_lo=40.0, mu_hi=60.0):
    """Relative change of the rescaled value between two sweep points."""
    by_mu = {row.mu: row for row in rows}
    a, b = by_mu[mu_lo], by_mu[mu_hi]
    ratio = a.sign * b.sign * np.exp(a.value_log - b.value_log)
    return float(abs(1.0 - ratio))


def envelope_fraction(row):
    """Error envelope as a fraction of the rescaled main term."""
    return float(np.exp(row.envelope_log - row.value_log))


def sigma0_closed_log(cfg, mu, nu, box):
    """(log |Sigma0 closed form|, sign) for large-mu work."""
    n = cfg.n
    nu_bar = complex(_nu_value(nu)).conjugate()
    kscaled = bessel_k_scaled(nu_bar if abs(nu_bar.imag) > 1e-14 else nu_bar.real, mu)
    kscaled = float(np.real(kscaled))
    i_nu = box.i_nu(nu)
    log_abs = (n * np.log(2.0) + 0.5 * (n - 1) * np.log(np.pi / (2.0 * mu))
               + np.log(abs(kscaled)) - mu + np.log(abs(i_nu)))
    sign = int(np.sign(kscaled * i_nu)) or 1
    return float(log_abs), sign
