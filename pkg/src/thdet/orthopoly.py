"""Toeplitz+Hankel determinants and the orthogonal polynomials they encode.

The n x n matrix pairs a Toeplitz part built from phi with a Hankel part
built from w, both with integer offsets:

    A_n[j, k] = phi_{j-k+r} + w_{j+k+s},     j, k = 0..n-1,

and D_n = det A_n with D_0 = 1.  When all D_n are nonzero there is a unique
monic polynomial family orthogonal under the paired functional

    integral P_n(z) z^{-k-r} phi(z) dz/(2 pi i z)
      + integral P_n(z) z^{k+s} w(1/z) dz/(2 pi i z)  =  h_n delta_{nk},

for k = 0..n, and h_n = D_{n+1}/D_n.  The 2 x 2 field assembled from
(P_n, P_{n-1}) and their paired Cauchy transforms solves a Riemann-Hilbert
problem on the unit circle; this module builds that field and checks its
jump, normalization, and the four constants read off at z = 0.
"""

import warnings
from dataclasses import dataclass, field

import numpy as np
from numpy.polynomial import polynomial as npoly

from .numerics import extrapolate_to_zero, lu_det
from .symbols import (AnalyticSymbol, CircleGrid, FourierCoeffs,
                      constant_symbol, fourier_coeffs_auto)
from .szego import CauchyField, cauchy_field_from_samples


class SingularSystemError(RuntimeError):
    """Raised when D_n vanishes (or underflows) so P_n does not exist."""


@dataclass
class MomentTable:
    """Fourier/moment data sufficient for all matrices up to size n_max."""

    phi: FourierCoeffs
    w: FourierCoeffs
    r: int
    s: int
    n_max: int
    source: str = "circle"

    def matrix(self, n):
        """The n x n matrix with entries phi_{j-k+r} + w_{j+k+s}."""
        if not 0 <= n <= self.n_max + 1:
            # coefficients for D_{n_max+1} (the h_{n_max} numerator) are
            # always tabulated alongside
            raise ValueError(f"n={n} outside tabulated range 0..{self.n_max + 1}")
        j = np.arange(n)[:, None]
        k = np.arange(n)[None, :]
        if n == 0:
            return np.zeros((0, 0), dtype=complex)
        return self.phi[j - k + self.r] + self.w[j + k + self.s]

    def rhs(self, n):
        """Right-hand side -(phi_{k-n+r} + w_{k+n+s}), k = 0..n-1."""
        k = np.arange(n)
        return -(self.phi[k - n + self.r] + self.w[k + n + self.s])

    def h_moment(self, coeffs):
        """sum_m a_m (phi_{n+r-m} + w_{n+s+m}) for monic coeffs a_0..a_n."""
        n = len(coeffs) - 1
        m = np.arange(n + 1)
        return np.sum(coeffs * (self.phi[n + self.r - m] + self.w[n + self.s + m]))


def circle_moments(pair, n_max, r, s, tail_tol=1e-13):
    """Tabulate the Fourier coefficients of phi and w needed up to n_max.

    phi is needed for indices r-n_max-1 .. r+n_max+1 (matrix, right-hand
    side and the h_n moment sum), w for s-1 .. 2 n_max + s + 1.
    """
    phi = fourier_coeffs_auto(pair.phi, r - n_max - 1, r + n_max + 1,
                              tail_tol=tail_tol)
    w = fourier_coeffs_auto(pair.w, s - 1, 2 * n_max + s + 1,
                            tail_tol=tail_tol)
    return MomentTable(phi=phi, w=w, r=r, s=s, n_max=n_max)


def th_det(mt, n, dps=None):
    """D_n = det(A_n).  D_0 = 1 by convention.

    With dps set, the determinant is recomputed from the same binary64
    moments in mpmath arithmetic at that precision (useful once n is large
    enough for cancellation to eat the double-precision result).
    """
    A = mt.matrix(n)
    if dps is not None:
        if n == 0:
            return 1.0 + 0j
        import mpmath
        with mpmath.workdps(dps):
            M = mpmath.matrix([[mpmath.mpc(x) for x in row]
                               for row in A.tolist()])
            return complex(mpmath.det(M))
    det, singular = lu_det(A)
    return 0.0 + 0j if singular else det


def det_ladder(mt, n_top, dps=None):
    """Array [D_0, ..., D_{n_top}], each from its own factorization."""
    if n_top > mt.n_max + 1:
        raise ValueError(f"n_top={n_top} beyond tabulated n_max={mt.n_max}+1")
    return np.array([th_det(mt, n, dps=dps) for n in range(n_top + 1)],
                    dtype=complex)


@dataclass
class OrthoResult:
    """Monic P_n with both h_n routes and the determinant ladder below it."""

    n: int
    r: int
    s: int
    coeffs: np.ndarray          # a_0..a_{n-1}, 1  (monic)
    h: complex                  # D_{n+1}/D_n, the authoritative value
    h_moment: complex           # moment-sum route, cross-check only
    ladder: np.ndarray          # D_0..D_{n+1}
    solve_residual: float
    cond: float
    ortho_residual: float = field(default=np.nan)

    def eval(self, z):
        return npoly.polyval(np.asarray(z, dtype=complex), self.coeffs)

    def eval_reflected(self, z):
        """P_n(1/z)."""
        return npoly.polyval(1.0 / np.asarray(z, dtype=complex), self.coeffs)


def ortho_poly(mt, n, cond_warn=1e12):
    """Solve the n x n linear system for the monic P_n and form h_n twice."""
    ladder = det_ladder(mt, n + 1)
    if abs(ladder[n]) == 0.0:
        raise SingularSystemError(f"D_{n} = 0; P_{n} does not exist")
    A = mt.matrix(n)
    if n == 0:
        coeffs = np.ones(1, dtype=complex)
        resid = 0.0
        cond = 1.0
    else:
        b = mt.rhs(n)
        try:
            sol = np.linalg.solve(A, b)
        except np.linalg.LinAlgError as exc:
            raise SingularSystemError(f"singular system for P_{n}: {exc}")
        resid = float(np.max(np.abs(A @ sol - b)))
        scale = float(np.max(np.abs(b))) or 1.0
        if resid > 1e-8 * scale:
            raise SingularSystemError(
                f"linear solve for P_{n} left residual {resid:.3g}")
        cond = float(np.abs(A).sum(axis=0).max()
                     * np.abs(np.linalg.inv(A)).sum(axis=0).max())
        if cond > cond_warn:
            warnings.warn(f"A_{n} has 1-norm condition {cond:.3g}",
                          RuntimeWarning, stacklevel=2)
        coeffs = np.concatenate([sol, [1.0 + 0j]])
    h = ladder[n + 1] / ladder[n]
    return OrthoResult(n=n, r=mt.r, s=mt.s, coeffs=coeffs, h=h,
                       h_moment=mt.h_moment(coeffs), ladder=ladder,
                       solve_residual=resid, cond=cond)


def ortho_residual(res, pair, N=None):
    """Max over k = 0..n of the trapezoid orthogonality defect.

    (1/N) sum_j P(z_j) z_j^{-k-r} phi(z_j)
      + (1/N) sum_j P(z_j) z_j^{k+s} w(1/z_j)  -  h_n delta_{nk}.
    """
    n, r, s = res.n, res.r, res.s
    if N is None:
        N = max(2048, 1 << int(np.ceil(np.log2(4 * (2 * n + abs(r) + abs(s) + 2)))))
    grid = CircleGrid(1.0, N)
    z = grid.nodes
    P = res.eval(z)
    f_phi = P * pair.phi(z) * z ** (-r)
    f_w = P * pair.w(1.0 / z) * z ** s
    k = np.arange(n + 1)
    with np.errstate(over="raise"):
        defect = (f_phi[None, :] * z[None, :] ** (-k[:, None])
                  + f_w[None, :] * z[None, :] ** (+k[:, None])).mean(axis=1)
    defect[n] -= res.h
    value = float(np.max(np.abs(defect)))
    res.ortho_residual = value
    return value


def poly_det_rep(mt, n, z):
    """P_n(z) by the (n+1) x (n+1) bordered-determinant route.

    Rows k = 0..n-1 hold phi_{k-j+r} + w_{k+j+s}, j = 0..n; the last row is
    (1, z, ..., z^n); the determinant is divided by D_n.  O(n^3) per point,
    used as an independent check on the linear-system coefficients.
    """
    Dn = th_det(mt, n)
    if abs(Dn) == 0.0:
        raise SingularSystemError(f"D_{n} = 0; P_{n} does not exist")
    k = np.arange(n)[:, None]
    j = np.arange(n + 1)[None, :]
    top = mt.phi[k - j + mt.r] + mt.w[k + j + mt.s] if n else \
        np.zeros((0, n + 1), dtype=complex)
    z = np.asarray(z, dtype=complex)
    out = np.empty(z.shape, dtype=complex)
    for idx in np.ndindex(z.shape):
        M = np.vstack([top, z[idx] ** np.arange(n + 1)])
        det, singular = lu_det(M)
        out[idx] = 0.0 if singular else det / Dn
    return out if out.shape else complex(out)


@dataclass
class YField:
    """The 2 x 2 circle field built from P_n and P_{n-1}.

    First column: (P_n, -P_{n-1}/h_{n-1}), entire.  Second column: paired
    Cauchy transforms of the densities

        G_j(xi) = xi^{s-1} w(1/xi) P_j(xi) + xi^{r-1} phi(1/xi) P_j(1/xi),

    represented by interior/exterior series so both one-sided boundary
    values are available.  The z -> infinity normalization is
    diag(z^n, z^-n) + lower order.
    """

    n: int
    r: int
    s: int
    top: OrthoResult            # P_n
    bottom: OrthoResult         # P_{n-1}
    field_top: CauchyField      # transform of G_n
    field_bottom: CauchyField   # transform of G_{n-1}
    grid: CircleGrid
    plemelj_residual: float
    exterior_defect: float

    def first_column(self, z):
        z = np.asarray(z, dtype=complex)
        return np.stack([self.top.eval(z),
                         -self.bottom.eval(z) / self.bottom.h])

    def second_column(self, z, region):
        z = np.asarray(z, dtype=complex)
        return np.stack([self.field_top.eval(z, region),
                         -self.field_bottom.eval(z, region) / self.bottom.h])

    def matrix(self, z, region):
        col1 = self.first_column(z)
        col2 = self.second_column(z, region)
        return np.stack([np.stack([col1[0], col2[0]]),
                         np.stack([col1[1], col2[1]])])

    def constants(self):
        """(C_1, C_2, C_3, C_4) = (Y_11, Y_21, Y_12, Y_22) at z = 0."""
        c1 = complex(self.top.eval(0.0))
        c2 = complex(-self.bottom.eval(0.0) / self.bottom.h)
        c3 = complex(self.field_top.at_zero)
        c4 = complex(-self.field_bottom.at_zero / self.bottom.h)
        return c1, c2, c3, c4


def _density_samples(res, pair, grid):
    xi = grid.nodes
    return (xi ** (res.s - 1) * pair.w(1.0 / xi) * res.eval(xi)
            + xi ** (res.r - 1) * pair.phi(1.0 / xi) * res.eval_reflected(xi))


def _project_exterior_decay(cf, m):
    """Zero the 1/z .. 1/z^m exterior coefficients of a Cauchy field.

    Orthogonality makes these vanish analytically; numerically they sit at
    the linear-solve noise floor, and a later z^n factor in the infinity
    normalization would amplify that noise catastrophically.  Returns the
    largest dropped magnitude (the reconstruction-level orthogonality
    defect).
    """
    m = min(m, len(cf.neg) - 1)
    if m < 1:
        return 0.0
    dropped = float(np.max(np.abs(cf.neg[1:m + 1])))
    cf.neg[1:m + 1] = 0.0
    return dropped


def build_Y(pair, mt, n, N=4096):
    """Assemble the 2 x 2 field for (P_n, P_{n-1})."""
    if n < 1:
        raise ValueError("need n >= 1 so that P_{n-1} exists")
    top = ortho_poly(mt, n)
    bottom = ortho_poly(mt, n - 1)
    grid = CircleGrid(1.0, N)
    g_top = _density_samples(top, pair, grid)
    g_bot = _density_samples(bottom, pair, grid)
    f_top = cauchy_field_from_samples(g_top, grid)
    f_bot = cauchy_field_from_samples(g_bot, grid)
    defect = max(_project_exterior_decay(f_top, n),
                 _project_exterior_decay(f_bot, n - 1))
    plem = max(f_top.plemelj_residual(g_top, grid.nodes),
               f_bot.plemelj_residual(g_bot, grid.nodes))
    return YField(n=n, r=mt.r, s=mt.s, top=top, bottom=bottom,
                  field_top=f_top, field_bottom=f_bot, grid=grid,
                  plemelj_residual=plem, exterior_defect=defect)


def verify_Y(yf, pair, epsilon_list=(1e-4, 5e-5, 2.5e-5), n_angles=64,
             z_far=1e3):
    """Jump, first-column continuity, and infinity normalization checks.

    The second-column jump on the unit circle is

        Y+^(2) = Y-^(2) + z^{s-1} w(1/z) Y^(1)(z) + z^{r-1} phi(1/z) Y^(1)(1/z),

    the first column being entire.  One-sided values are sampled at radii
    1 -+ eps and Lagrange-extrapolated to the circle.  Returns a dict of
    sup-norm residuals.
    """
    eps = np.asarray(epsilon_list, dtype=float)
    theta = 2.0 * np.pi * (np.arange(n_angles) + 0.31) / n_angles
    z = np.exp(1j * theta)
    col1 = yf.first_column(z)
    col1_refl = yf.first_column(1.0 / z)
    drive = (z ** (yf.s - 1) * pair.w(1.0 / z) * col1
             + z ** (yf.r - 1) * pair.phi(1.0 / z) * col1_refl)
    jumps, cont = [], []
    for e in eps:
        plus = yf.second_column((1.0 - e) * z, "inside")
        minus = yf.second_column((1.0 + e) * z, "outside")
        jumps.append(plus - minus - drive)
        cont.append(yf.first_column((1.0 - e) * z)
                    - yf.first_column((1.0 + e) * z))
    jump_resid = float(np.max(np.abs(extrapolate_to_zero(eps, jumps))))
    col1_resid = float(np.max(np.abs(extrapolate_to_zero(eps, cont))))
    zf = z_far * np.exp(0.4j)
    M = yf.matrix(zf, "outside")
    norm = np.array([[M[0, 0] * zf ** (-yf.n), M[0, 1] * zf ** yf.n],
                     [M[1, 0] * zf ** (-yf.n), M[1, 1] * zf ** yf.n]])
    norm_resid = float(np.max(np.abs(norm - np.eye(2))) * abs(zf))
    return {"jump": jump_resid, "first_column": col1_resid,
            "normalization_times_z": norm_resid,
            "plemelj": yf.plemelj_residual,
            "exterior_defect": yf.exterior_defect}


def build_Y_and_verify(pair, mt, n, N=4096,
                       epsilon_list=(1e-4, 5e-5, 2.5e-5), n_angles=64):
    yf = build_Y(pair, mt, n, N=N)
    return yf, verify_Y(yf, pair, epsilon_list=epsilon_list, n_angles=n_angles)


def exact_C(pair, mt, n, N=4096):
    """(C_1, C_2, C_3, C_4) for this n, straight from the assembled field."""
    return build_Y(pair, mt, n, N=N).constants()


def charpoly_identity(w_sym, lam, n, tail_tol=1e-13):
    """det(H_n[w;0] - lam I) two ways; returns (direct, via_T_plus_H).

    The direct route builds the Hankel matrix from w's Fourier coefficients
    and calls numpy's determinant; the other feeds phi = -lam (constant)
    through the Toeplitz+Hankel pipeline, whose Toeplitz part is then
    -lam I.
    """
    wc = fourier_coeffs_auto(w_sym, -1, 2 * n + 1, tail_tol=tail_tol)
    j = np.arange(n)[:, None]
    k = np.arange(n)[None, :]
    H = wc[j + k] if n else np.zeros((0, 0), dtype=complex)
    direct = complex(np.linalg.det(H - lam * np.eye(n))) if n else 1.0 + 0j
    phic = fourier_coeffs_auto(constant_symbol(-lam), -n - 1, n + 1,
                               tail_tol=tail_tol)
    mt = MomentTable(phi=phic, w=wc, r=0, s=0, n_max=n)
    via_th = th_det(mt, n)
    return direct, via_th


def rank_GXW(pair, svd_tol=1e-10):
    """Singular values of G(1) W - I_4 for the 4 x 4 jump at z = 1.

    G(1) = [[1,0,w(1),-phi(1)],[0,1,phi(1),-w(1)],[0,0,1,0],[0,0,0,1]]
    (at z = 1 the reflections coincide with the values), and W swaps rows
    1<->2 and 3<->4.  The product minus the identity has rank 2; the
    returned singular values let the caller check exactly that.
    """
    p1 = complex(pair.phi(1.0))
    w1 = complex(pair.w(1.0))
    G = np.array([[1, 0, w1, -p1],
                  [0, 1, p1, -w1],
                  [0, 0, 1, 0],
                  [0, 0, 0, 1]], dtype=complex)
    W = np.array([[0, 1, 0, 0],
                  [1, 0, 0, 0],
                  [0, 0, 0, 1],
                  [0, 0, 1, 0]], dtype=float)
    sv = np.linalg.svd(G @ W - np.eye(4), compute_uv=False)
    return sv, int(np.sum(sv > svd_tol))
