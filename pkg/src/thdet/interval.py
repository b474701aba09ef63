"""Hankel symbols supported on a real interval [a, b] inside (0, 1).

The Hankel entries are then moments w_k = integral_a^b x^k w(x) dx rather
than circle Fourier coefficients, and the orthogonality functional pairs the
usual circle term with an interval term:

    integral_a^b P_n(x) x^{k+s} w(x) dx
      + integral P_n(z) z^{-k-r} phi(z) dz/(2 pi i z)  =  h_n delta_{nk}.

The transform u(z) = z integral_a^b t^{s-1} w(t)/(t-z) dt carries the
interval data onto the unit circle: u jumps by 2 pi i x^s w(x) across
(a, b), u~(z) = u(1/z) jumps by -2 pi i x^{-s} w(1/x) across (1/b, 1/a),
and the 4 x 4 model jump for the pair (phi, -u~) coincides entrywise with
the circle-case model jump, so one asymptotic machine serves both supports.
"""

from dataclasses import dataclass

import numpy as np
from scipy.special import roots_legendre

from .numerics import extrapolate_to_zero
from .orthopoly import MomentTable, OrthoResult, ortho_poly
from .symbols import (AnalyticSymbol, CircleGrid, FourierCoeffs,
                      ResolutionError, SymbolPair, fourier_coeffs_auto)
from .szego import CauchyField, cauchy_field_from_samples

# Bernstein-ellipse parameter below which the Chebyshev recursion is used in
# place of Gauss-Legendre.  The forward nu-recursion amplifies roundoff by
# rho^degree (only the decaying solution is wanted), so the switch must stay
# small; conversely a 128-point rule converges like rho^{-256}, still at
# machine precision at rho = 1.15.
_RHO_SWITCH = 1.15
_CUT_MARGIN = 1e-8


class CutProximityError(ValueError):
    """Raised when a cut transform is evaluated within 1e-8 of its cut."""


@dataclass(frozen=True)
class IntervalWeight:
    """A smooth Hankel weight x -> w(x) on [a, b] with 0 < a < b < 1."""

    fun: callable
    a: float
    b: float
    s: int
    order: int = 128

    def __post_init__(self):
        if not 0.0 < self.a < self.b < 1.0:
            raise ValueError(f"need 0 < a < b < 1, got a={self.a}, b={self.b}")
        if not np.all(np.isfinite(self(np.linspace(self.a, self.b, 200)))):
            raise ValueError("weight is not finite on [a, b]")

    def __call__(self, x):
        x = np.asarray(x, dtype=float)
        return np.broadcast_to(np.asarray(self.fun(x), dtype=complex), x.shape)


def _segment_rule(a, b, order):
    x, wq = roots_legendre(order)
    return 0.5 * (b - a) * x + 0.5 * (a + b), 0.5 * (b - a) * wq


def _moment_span(iw, k_lo, k_hi, tol=1e-13):
    """Moments integral x^k w(x) dx for k_lo <= k <= k_hi, doubling-checked.

    Negative exponents are fine since a > 0.
    """
    k = np.arange(k_lo, k_hi + 1)
    vals = []
    for order in (iw.order, 2 * iw.order):
        x, wq = _segment_rule(iw.a, iw.b, order)
        vals.append(x[None, :] ** k[:, None] @ (wq * iw(x)))
    gap = float(np.max(np.abs(vals[1] - vals[0])))
    if gap > tol * max(1.0, float(np.max(np.abs(vals[1])))):
        raise ResolutionError(
            f"interval moments changed by {gap:.3g} under order doubling")
    return vals[1]


def interval_moments(iw, k_max):
    """Moments w_k = integral_a^b x^k w(x) dx for k = 0..k_max."""
    return _moment_span(iw, 0, k_max)


def interval_moment_table(phi, iw, n_max, r, tail_tol=1e-13):
    """MomentTable whose Hankel side holds interval moments.

    Hankel indices s-1 .. 2 n_max + s + 1 are filled with the moments of the
    same exponent; the Toeplitz side is tabulated as in the circle case.
    """
    s = iw.s
    phi_c = fourier_coeffs_auto(phi, r - n_max - 1, r + n_max + 1,
                                tail_tol=tail_tol)
    w_c = FourierCoeffs(k_min=s - 1, k_max=2 * n_max + s + 1,
                        values=_moment_span(iw, s - 1, 2 * n_max + s + 1),
                        tail_bound=0.0)
    return MomentTable(phi=phi_c, w=w_c, r=r, s=s, n_max=n_max,
                       source="interval")


def interval_ortho(phi, iw, n, r):
    """Monic P_n for the interval pairing, via the shared matrix solver."""
    return ortho_poly(interval_moment_table(phi, iw, n, r), n)


def interval_ortho_residual(res, phi, iw, N=None):
    """Max over k = 0..n of the two-integral orthogonality defect.

    Gauss-Legendre for integral_a^b P_n(x) x^{k+s} w(x) dx plus the circle
    trapezoid of P_n(z) z^{-k-r} phi(z), minus h_n delta_{nk}.
    """
    n, r, s = res.n, res.r, res.s
    if N is None:
        N = max(2048, 1 << int(np.ceil(np.log2(4 * (2 * n + abs(r) + 2)))))
    z = CircleGrid(1.0, N).nodes
    f_phi = res.eval(z) * phi(z) * z ** (-r)
    k = np.arange(n + 1)
    defect = (f_phi[None, :] * z[None, :] ** (-k[:, None])).mean(axis=1)
    x, wq = _segment_rule(iw.a, iw.b, 2 * iw.order)
    defect = defect + x[None, :] ** (k[:, None] + s) @ (wq * iw(x) * res.eval(x))
    defect[n] -= res.h
    return float(np.max(np.abs(defect)))


def _cheb_coeffs(fun, degree):
    """Chebyshev coefficients interpolating fun on first-kind points."""
    j = np.arange(degree + 1)
    tau = np.cos(np.pi * (j + 0.5) / (degree + 1))
    f = np.broadcast_to(np.asarray(fun(tau), dtype=complex), tau.shape)
    c = np.cos(np.pi * j[:, None] * (j[None, :] + 0.5) / (degree + 1)) @ f
    c *= 2.0 / (degree + 1)
    c[0] *= 0.5
    return c


def _nu_ladder(zeta, count):
    """nu_k(zeta) = integral_{-1}^1 T_k(tau)/(tau - zeta) dtau, k < count.

    nu_0 is the principal log of (1 - zeta)/(-1 - zeta), which puts the cut
    exactly on [-1, 1]; then nu_1 = 2 + zeta nu_0 and

        nu_{k+1} = 2 I_k + 2 zeta nu_k - nu_{k-1},

    with I_k = integral T_k = 0 (k odd) or 2/(1 - k^2) (k even).
    """
    nu = np.empty((count,) + zeta.shape, dtype=complex)
    nu[0] = np.log((1.0 - zeta) / (-1.0 - zeta))
    if count > 1:
        nu[1] = 2.0 + zeta * nu[0]
    for k in range(1, count - 1):
        ik = 0.0 if k % 2 else 2.0 / (1.0 - k * k)
        nu[k + 1] = 2.0 * ik + 2.0 * zeta * nu[k] - nu[k - 1]
    return nu


@dataclass(frozen=True)
class CauchySegment:
    """integral_a^b q(t)/(t - z) dt for a smooth density q on [a, b].

    Away from the cut a fixed Gauss-Legendre rule converges geometrically;
    near it (Bernstein parameter rho <= 1.15) the density is swapped for its
    Chebyshev interpolant, whose transform is the nu-recursion -- stable
    precisely there, since the recursion's growing mode is rho^k.
    """

    a: float
    b: float
    nodes: np.ndarray
    weights: np.ndarray
    values: np.ndarray
    nodes2: np.ndarray          # doubled rule, for the re-evaluation check
    weights2: np.ndarray
    values2: np.ndarray
    cheb: np.ndarray

    def distance(self, z):
        """Distance from z to the segment [a, b] on the real axis."""
        z = np.asarray(z, dtype=complex)
        off = np.maximum(self.a - z.real, z.real - self.b)
        return np.hypot(np.maximum(off, 0.0), z.imag)

    def eval(self, z):
        z = np.asarray(z, dtype=complex)
        flat = z.ravel()
        dist = self.distance(flat)
        if flat.size and dist.min() < _CUT_MARGIN:
            raise CutProximityError(
                f"z within {dist.min():.3g} of [{self.a:g}, {self.b:g}]; "
                "take eps -> 0 side limits instead")
        c = 0.5 * (self.a + self.b)
        h = 0.5 * (self.b - self.a)
        zeta = (flat - c) / h
        sq = np.sqrt(zeta - 1.0) * np.sqrt(zeta + 1.0)
        rho = np.maximum(np.abs(zeta + sq), np.abs(zeta - sq))
        out = np.empty(flat.shape, dtype=complex)
        near = rho <= _RHO_SWITCH
        if near.any():
            nu = _nu_ladder(zeta[near], len(self.cheb))
            out[near] = self.cheb @ nu
        if (~near).any():
            zf = flat[~near]
            out[~near] = ((self.weights * self.values)[None, :]
                          / (self.nodes[None, :] - zf[:, None])).sum(axis=1)
        return out.reshape(z.shape)

    def doubling_gap(self, z):
        """|rule vs doubled-rule| per point; meaningful away from the cut."""
        z = np.asarray(z, dtype=complex).ravel()
        g1 = ((self.weights * self.values)[None, :]
              / (self.nodes[None, :] - z[:, None])).sum(axis=1)
        g2 = ((self.weights2 * self.values2)[None, :]
              / (self.nodes2[None, :] - z[:, None])).sum(axis=1)
        return np.abs(g1 - g2)


def cauchy_segment(fun, a, b, order=128, degree=64):
    """Build the cut transform of the density fun on [a, b]."""
    x1, w1 = _segment_rule(a, b, order)
    x2, w2 = _segment_rule(a, b, 2 * order)
    c = 0.5 * (a + b)
    h = 0.5 * (b - a)
    return CauchySegment(
        a=a, b=b, nodes=x1, weights=w1,
        values=np.broadcast_to(np.asarray(fun(x1), dtype=complex), x1.shape),
        nodes2=x2, weights2=w2,
        values2=np.broadcast_to(np.asarray(fun(x2), dtype=complex), x2.shape),
        cheb=_cheb_coeffs(lambda t: fun(c + h * t), degree))


@dataclass(frozen=True)
class UField:
    """u(z) = z integral_a^b t^{s-1} w(t)/(t - z) dt, analytic off [a, b].

    u(0) = 0 exactly (the z prefactor); u~(z) = u(1/z) is analytic off
    [1/b, 1/a] and vanishes at infinity.
    """

    iw: IntervalWeight
    segment: CauchySegment

    def eval(self, z):
        z = np.asarray(z, dtype=complex)
        return z * self.segment.eval(z)

    def eval_reflected(self, z):
        """u~(z) = u(1/z)."""
        return self.eval(1.0 / np.asarray(z, dtype=complex))

    def doubling_residual(self, z):
        """Max re-evaluation drift |u| under quadrature-order doubling."""
        z = np.asarray(z, dtype=complex).ravel()
        return float(np.max(np.abs(z) * self.segment.doubling_gap(z)))


def u_field(iw):
    """The u-transform of an interval weight."""
    s = iw.s
    return UField(iw=iw, segment=cauchy_segment(
        lambda t: t ** (s - 1) * iw(t), iw.a, iw.b, order=iw.order))


def verify_u_jump(uf, x, epsilon_list=(1e-4, 5e-5, 2.5e-5)):
    """|u(x+ie) - u(x-ie) - 2 pi i x^s w(x)|, Richardson-extrapolated.

    The default eps list keeps the cubic extrapolation-truncation term,
    which grows like the cut distance to an endpoint cubed, below 1e-9 for
    probes down to a twentieth of the cut length from an endpoint.
    """
    eps = np.asarray(epsilon_list, dtype=float)
    x = np.asarray(x, dtype=float)
    if np.any(x <= uf.iw.a) or np.any(x >= uf.iw.b):
        raise ValueError("probe x must lie inside (a, b)")
    diffs = [uf.eval(x + 1j * e) - uf.eval(x - 1j * e) for e in eps]
    jump = extrapolate_to_zero(eps, diffs)
    return float(np.max(np.abs(jump - 2j * np.pi * x ** uf.iw.s * uf.iw(x))))


def verify_ut_jump(uf, y, epsilon_list=(1e-4, 5e-5, 2.5e-5)):
    """|u~(y+ie) - u~(y-ie) + 2 pi i y^{-s} w(1/y)|, extrapolated.

    Approaching y in (1/b, 1/a) from above sends 1/(y+ie) below the cut
    (a, b), so the reflected jump carries the opposite sign.
    """
    eps = np.asarray(epsilon_list, dtype=float)
    y = np.asarray(y, dtype=float)
    if np.any(y <= 1.0 / uf.iw.b) or np.any(y >= 1.0 / uf.iw.a):
        raise ValueError("probe y must lie inside (1/b, 1/a)")
    diffs = [uf.eval_reflected(y + 1j * e) - uf.eval_reflected(y - 1j * e)
             for e in eps]
    jump = extrapolate_to_zero(eps, diffs)
    drive = -2j * np.pi * y ** float(-uf.iw.s) * uf.iw(1.0 / y)
    return float(np.max(np.abs(jump - drive)))


def model_pair(phi, uf, N=512):
    """The circle pair (phi, -u~) and its unimodularity residual.

    The asymptotic pipeline applies to the pair when d = -u~/phi satisfies
    d(z) d(1/z) = 1 on the circle, i.e. phi(z) phi(1/z) = u~(z) u(z); the
    returned residual is the sup norm of that identity's defect relative to
    max |phi(z) phi(1/z)|.  It is a report, not an error: the caller decides
    applicability.
    """
    b = uf.iw.b
    phi_fun = phi.fun
    w_eff = AnalyticSymbol(lambda z: -uf.eval(1.0 / z),
                           r_i=1e-12, r_o=1.0 / b, label="-u~")
    d_eff = AnalyticSymbol(lambda z: -uf.eval(1.0 / z) / phi_fun(z),
                           r_i=phi.r_i, r_o=min(phi.r_o, 1.0 / b),
                           label=f"-u~/({phi.label})")
    pair = SymbolPair(phi=phi, w=w_eff, d=d_eff)
    z = CircleGrid(1.0, N).nodes
    lhs = phi(z) * phi(1.0 / z)
    resid = float(np.max(np.abs(lhs - uf.eval(1.0 / z) * uf.eval(z)))
                  / np.max(np.abs(lhs)))
    return pair, resid


def build_J_Theta(phi, uf, z):
    """4 x 4 circle jump of the interval model problem, in terms of u.

    Rows: (0,0,0,-phi), (u~/phi, 0, phi~ - u u~/phi, 0), (0, -1/phi~, 0, 0),
    (1/phi, 0, -u/phi, 0).  Algebraically this is the (phi, w) model jump
    with w = -u~ (hence w~ = -u); the two code paths are compared in tests.
    """
    z = np.asarray(z, dtype=complex)
    ph = phi(z)
    pht = phi(1.0 / z)
    u = uf.eval(z)
    ut = uf.eval(1.0 / z)
    J = np.zeros(z.shape + (4, 4), dtype=complex)
    J[..., 0, 3] = -ph
    J[..., 1, 0] = ut / ph
    J[..., 1, 2] = pht - u * ut / ph
    J[..., 2, 1] = -1.0 / pht
    J[..., 3, 0] = 1.0 / ph
    J[..., 3, 2] = -u / ph
    return J


@dataclass
class IntervalYField:
    """2 x 2 field for the interval pairing.

    First column (P_n, -P_{n-1}/h_{n-1}), entire.  Second column entries

        integral_a^b P_j(x) x^s w(x)/(x - z) dx
          + (1/2 pi i) integral xi^{r-1} phi(1/xi) P_j(1/xi)/(xi - z) dxi,

    the first term carried by a segment transform (jump 2 pi i x^s w(x) P_j
    across (a, b)), the second by circle series (jump z^{r-1} phi(1/z)
    P_j(1/z) across |z| = 1).
    """

    n: int
    r: int
    s: int
    top: OrthoResult
    bottom: OrthoResult
    seg_top: CauchySegment
    seg_bottom: CauchySegment
    circle_top: CauchyField
    circle_bottom: CauchyField
    grid: CircleGrid

    def first_column(self, z):
        z = np.asarray(z, dtype=complex)
        return np.stack([self.top.eval(z),
                         -self.bottom.eval(z) / self.bottom.h])

    def second_column(self, z, region):
        z = np.asarray(z, dtype=complex)
        f_top = self.seg_top.eval(z) + self.circle_top.eval(z, region)
        f_bot = self.seg_bottom.eval(z) + self.circle_bottom.eval(z, region)
        return np.stack([f_top, -f_bot / self.bottom.h])


def build_interval_Y(phi, iw, n, r, N=2048):
    """Assemble the interval 2 x 2 field for (P_n, P_{n-1})."""
    if n < 1:
        raise ValueError("need n >= 1 so that P_{n-1} exists")
    mt = interval_moment_table(phi, iw, n, r)
    top = ortho_poly(mt, n)
    bottom = ortho_poly(mt, n - 1)
    grid = CircleGrid(1.0, N)
    xi = grid.nodes
    s = iw.s

    def circle_part(res):
        dens = xi ** (r - 1) * phi(1.0 / xi) * res.eval_reflected(xi)
        return cauchy_field_from_samples(dens, grid)

    def segment_part(res):
        return cauchy_segment(lambda x: res.eval(x) * x ** s * iw(x),
                              iw.a, iw.b, order=iw.order)

    return IntervalYField(n=n, r=r, s=s, top=top, bottom=bottom,
                          seg_top=segment_part(top),
                          seg_bottom=segment_part(bottom),
                          circle_top=circle_part(top),
                          circle_bottom=circle_part(bottom), grid=grid)


def verify_interval_Y(yf, phi, iw, circle_eps=(1e-4, 5e-5, 2.5e-5),
                      cut_eps=(1e-4, 5e-5, 2.5e-5, 1.25e-5), n_angles=64,
                      n_probes=5):
    """Second-column jump residuals on the circle and across the cut.

    On |z| = 1:  Y+^(2) = Y-^(2) + z^{r-1} phi(1/z) Y^(1)(1/z).
    On (a, b):   Y+^(2) - Y-^(2) = 2 pi i x^s w(x) Y^(1)(x).
    Both are one-sided evaluations extrapolated to the contour; the cut list
    carries a fourth node because the truncation term there scales with the
    third derivative of P_n on [a, b], i.e. like n^3.
    """
    eps = np.asarray(circle_eps, dtype=float)
    theta = 2.0 * np.pi * (np.arange(n_angles) + 0.31) / n_angles
    z = np.exp(1j * theta)
    drive = z ** (yf.r - 1) * phi(1.0 / z) * yf.first_column(1.0 / z)
    jumps = [yf.second_column((1.0 - e) * z, "inside")
             - yf.second_column((1.0 + e) * z, "outside") - drive
             for e in eps]
    circle_resid = float(np.max(np.abs(extrapolate_to_zero(eps, jumps))))

    eps = np.asarray(cut_eps, dtype=float)
    x = iw.a + (iw.b - iw.a) * np.arange(1, n_probes + 1) / (n_probes + 1.0)
    drive = 2j * np.pi * x ** yf.s * iw(x) * yf.first_column(x)
    jumps = [yf.second_column(x + 1j * e, "inside")
             - yf.second_column(x - 1j * e, "inside") - drive
             for e in eps]
    cut_resid = float(np.max(np.abs(extrapolate_to_zero(eps, jumps))))
    return {"circle_jump": circle_resid, "cut_jump": cut_resid}
