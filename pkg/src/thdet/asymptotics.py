"""Large-n asymptotics of the Toeplitz+Hankel system via a 4 x 4 model.

For a reduced pair -- w = d*phi with d(z) d(1/z) = 1 -- the 2 x 2 circle
field of orthopoly embeds in a 4 x 4 problem whose jump factorizes through
Szego functions: alpha for phi, beta for d, and the rank-one Cauchy kernel

    rho(z) = -1 / (beta_- beta_+ alphat_- alpha_+)        on |z| = 1.

The model solution

    Lambda(z) = Lambda_inf^{-1} (I + C_rho(z) e_21) M(z)

is explicit on both sides of the circle, and the remaining correction R(z)
has jumps of size exp(-c n) on circles |z| = r_i' < 1 < r_o'.  Everything
at finite n is then a contour integral of eight scalar densities g_jk:
the 4 x 4 matrix P(n), the constants C_1..C_4, the combination

    E(n) = (2/alpha(0)) R_43(n) - C_rho(0) R_23(n),

and the norm recurrence h_{n-1} = -alpha(0) E(n)/E(n-1).  The module also
carries one worked symbol family with an explicit prediction
E(n) ~ kappa * b1^{n - alpha1} * n^{alpha1 - 1}.
"""

from dataclasses import dataclass, field

import numpy as np
from scipy import special

from .numerics import extrapolate_to_zero
from .symbols import (CircleGrid, ResolutionError, SymbolPair,
                      build_d_product, build_rational_power,
                      verify_unimodular_involution)
from .szego import cauchy_field_from_samples, rho_field, szego_from_symbol


class ModelError(ValueError):
    """The symbol pair does not satisfy the reduced-model hypotheses."""


class SolvabilityError(RuntimeError):
    """All six pivot combinations of the C-constant system degenerate."""


class AsymptoticError(RuntimeError):
    """E(n) too small (or absent) for the asymptotic formulas to apply."""


INTERIOR_LABELS = ("12", "14", "23", "43")
EXTERIOR_LABELS = ("21", "32", "34", "41")


def involution_matrix():
    """W: swap rows 1<->2 and 3<->4; (P W)^2 = I for symmetric pairs."""
    return np.array([[0, 1, 0, 0],
                     [1, 0, 0, 0],
                     [0, 0, 0, 1],
                     [0, 0, 1, 0]], dtype=float)


@dataclass
class ModelField:
    """Szego data, rank-one kernel, and the explicit 4 x 4 model solution."""

    pair: SymbolPair
    alpha: object               # SzegoData for phi
    beta: object                # SzegoData for d
    crho: object                # CauchyField of rho
    alpha0: complex
    involution_residual: float
    factorization_residual: float

    @property
    def crho0(self):
        return self.crho.at_zero

    def lambda_at_zero(self):
        a0, c0 = self.alpha0, self.crho0
        return np.array([[0, 0, 0, -a0],
                         [-1, 0, 0, 0],
                         [0, -1 / a0, 0, 0],
                         [-c0 * a0, 0, 1, 0]], dtype=complex)

    def lambda_at(self, z):
        """Model solution off the unit circle; shape z.shape + (4, 4)."""
        z = np.asarray(z, dtype=complex)
        scalar = z.ndim == 0
        z = np.atleast_1d(z)
        mod = np.abs(z)
        if np.any(np.abs(mod - 1.0) < 1e-13):
            raise ValueError("Lambda is two-sided on |z|=1; evaluate at "
                             "(1 -+ eps) z and extrapolate instead")
        out = np.zeros(z.shape + (4, 4), dtype=complex)
        a0 = self.alpha0
        inside = mod < 1.0
        if np.any(inside):
            zi = z[inside]
            a = self.alpha.inside(zi)
            b = self.beta.inside(zi)
            at = self.alpha.outside(1.0 / zi)
            c = self.crho.interior(zi)
            blk = np.zeros(zi.shape + (4, 4), dtype=complex)
            blk[..., 0, 3] = -a
            blk[..., 1, 0] = -b
            blk[..., 2, 1] = -at / a0
            blk[..., 3, 0] = -a0 * c * b
            blk[..., 3, 2] = a0 / (at * b * a)
            out[inside] = blk
        if np.any(~inside):
            zo = z[~inside]
            a = self.alpha.outside(zo)
            b = self.beta.outside(zo)
            at = self.alpha.inside(1.0 / zo)
            c = self.crho.exterior(zo)
            blk = np.zeros(zo.shape + (4, 4), dtype=complex)
            blk[..., 0, 0] = a
            blk[..., 1, 1] = b
            blk[..., 2, 2] = at / a0
            blk[..., 3, 1] = a0 * c * b
            blk[..., 3, 3] = a0 / (b * at * a)
            out[~inside] = blk
        return out[0] if scalar else out


def model_field(pair, N=2048, involution_tol=1e-10):
    """Build the model data for a reduced pair; rejects non-reduced input."""
    if pair.d is None:
        raise ModelError("pair carries no factor d with w = d*phi")
    grid = CircleGrid(1.0, N)
    inv_res = verify_unimodular_involution(pair.d, grid)
    if inv_res > involution_tol:
        raise ModelError(
            f"d(z) d(1/z) - 1 reaches {inv_res:.3g} on the circle; the "
            "reduced model requires a unimodular-involutive d")
    fac_res = pair.factorization_residual(grid)
    alpha = szego_from_symbol(pair.phi, N=N)
    beta = szego_from_symbol(pair.d, N=N)
    crho = rho_field(alpha, beta, grid)
    return ModelField(pair=pair, alpha=alpha, beta=beta, crho=crho,
                      alpha0=complex(alpha.value_at_zero),
                      involution_residual=inv_res,
                      factorization_residual=fac_res)


def build_J_Lambda(pair, z):
    """General 4 x 4 circle jump for (phi, w); shape z.shape + (4, 4).

    Rows: (0,0,0,-phi), (-w/phi, 0, phit - w wt/phi, 0), (0, -1/phit, 0, 0),
    (1/phi, 0, wt/phi, 0).  For a reduced pair the (2,3) entry is
    phit (1 - d dt) = 0, which is the quantity to watch numerically.
    """
    z = np.asarray(z, dtype=complex)
    phi = pair.phi(z)
    phit = pair.phi(1.0 / z)
    w = pair.w(z)
    wt = pair.w(1.0 / z)
    J = np.zeros(z.shape + (4, 4), dtype=complex)
    J[..., 0, 3] = -phi
    J[..., 1, 0] = -w / phi
    J[..., 1, 2] = phit - w * wt / phi
    J[..., 2, 1] = -1.0 / phit
    J[..., 3, 0] = 1.0 / phi
    J[..., 3, 2] = wt / phi
    return J


def verify_model_jump(mf, n_angles=64, epsilon_list=(2e-4, 1e-4, 5e-5, 2.5e-5),
                      z_far=(1e3, 1e4)):
    """Check Lambda_+ = Lambda_- J on |z|=1 plus normalizations.

    One-sided values at radii 1 -+ eps are Lagrange-extrapolated to the
    circle.  Also reported: |Lambda(z) - I| * |z| at the far points, the
    drift of Lambda near 0 from the closed-form Lambda(0), the departure of
    det Lambda from 1, and the size of the J entry (2,3) that vanishes
    identically for a reduced pair.
    """
    eps = np.asarray(epsilon_list, dtype=float)
    theta = 2.0 * np.pi * (np.arange(n_angles) + 0.27) / n_angles
    z = np.exp(1j * theta)
    J = build_J_Lambda(mf.pair, z)
    resids = []
    for e in eps:
        plus = mf.lambda_at((1.0 - e) * z)
        minus = mf.lambda_at((1.0 + e) * z)
        resids.append(plus - minus @ J)
    jump = float(np.max(np.abs(extrapolate_to_zero(eps, resids))))
    far = {}
    for zf in z_far:
        zz = zf * np.exp(0.37j)
        far[zf] = float(np.max(np.abs(mf.lambda_at(zz) - np.eye(4))) * abs(zz))
    z_near = 1e-3 * np.exp(0.7j)
    at_zero_drift = float(np.max(np.abs(mf.lambda_at(z_near)
                                        - mf.lambda_at_zero())))
    sample = np.concatenate([0.9 * z[:8], 1.1 * z[:8], [0.3 + 0.2j, 2.0 - 1.0j]])
    det_dev = float(np.max(np.abs(np.linalg.det(mf.lambda_at(sample)) - 1.0)))
    j23 = float(np.max(np.abs(J[..., 1, 2])))
    return {"jump": jump, "far_field": far, "at_zero_drift": at_zero_drift,
            "det_deviation": det_dev, "J23": j23}


def g_eval(mf, z, label):
    """One of the eight scalar correction densities g_jk.

    Interior labels (12, 14, 23, 43) live on |z| < 1 and use the interior
    branches with alphat(z) = alpha evaluated outside at 1/z; exterior
    labels (21, 32, 34, 41) mirror this on |z| > 1.
    """
    z = np.asarray(z, dtype=complex)
    pair, a0 = mf.pair, mf.alpha0
    if label in INTERIOR_LABELS:
        if np.any(np.abs(z) >= 1.0):
            raise ValueError(f"g_{label} is an interior density")
        a = mf.alpha.inside(z)
        b = mf.beta.inside(z)
        at = mf.alpha.outside(1.0 / z)
        c = mf.crho.interior(z)
        phi = pair.phi(z)
        phit = pair.phi(1.0 / z)
        wt = pair.w(1.0 / z)
        if label == "12":
            return -a / (phi * b) - wt * c / (phi * b * at)
        if label == "14":
            return wt / (phi * b * at * a0)
        if label == "23":
            return -a0 * wt * b / (phit * at)
        return -a0 ** 2 * (a * b / phit + b * wt * c / (at * phit))
    if label in EXTERIOR_LABELS:
        if np.any(np.abs(z) <= 1.0):
            raise ValueError(f"g_{label} is an exterior density")
        a = mf.alpha.outside(z)
        b = mf.beta.outside(z)
        at = mf.alpha.inside(1.0 / z)
        c = mf.crho.exterior(z)
        phi = pair.phi(z)
        phit = pair.phi(1.0 / z)
        w = pair.w(z)
        if label == "21":
            return w * b / (phi * a)
        if label == "32":
            return -(at / b - w * at ** 2 * b * a * c) / (a0 * phit)
        if label == "34":
            return w * at ** 2 * b * a / (phit * a0 ** 2)
        return -(a0 / phi) * (1.0 / (at * b * a ** 2) - w * b * c / a)
    raise ValueError(f"unknown density label {label!r}")


@dataclass
class RTable:
    """Correction integrals R_jk(0; n) and their index-shifted partners.

    R0[label][i] is the value at z = 0 for n = n_values[i]; R1 holds the
    shifted integrals (exponent n -> n - 1 inside, n -> n + 1 outside) that
    appear in the norm identity.  Contour samples are kept so the general-z
    integrals remain available.
    """

    n_values: np.ndarray
    radii: tuple
    N: int
    alpha0: complex
    crho0: complex
    R0: dict
    R1: dict
    E: np.ndarray
    doubling_rel: float
    mu_in: np.ndarray = field(repr=False, default=None)
    mu_out: np.ndarray = field(repr=False, default=None)
    g_in: dict = field(repr=False, default=None)
    g_out: dict = field(repr=False, default=None)

    def _idx(self, n):
        hit = np.nonzero(self.n_values == n)[0]
        if hit.size == 0:
            raise KeyError(f"n={n} not tabulated (have {self.n_values})")
        return int(hit[0])

    def R0_at(self, label, n):
        return complex(self.R0[label][self._idx(n)])

    def R1_at(self, label, n):
        return complex(self.R1[label][self._idx(n)])

    def E_at(self, n):
        return complex(self.E[self._idx(n)])

    def R_general(self, label, n, z):
        """R_{1,jk}(z; n) by the same trapezoid as the z = 0 values."""
        z = np.asarray(z, dtype=complex)
        if label in INTERIOR_LABELS:
            mu, g = self.mu_in, self.g_in[label]
            if np.any(np.abs(np.abs(z) - self.radii[0]) < 1e-10):
                raise ValueError("z on the inner contour")
            return np.mean(mu ** (n + 1) * g / (mu - z[..., None]), axis=-1)
        mu, g = self.mu_out, self.g_out[label]
        if np.any(np.abs(np.abs(z) - self.radii[1]) < 1e-10):
            raise ValueError("z on the outer contour")
        return np.mean(mu ** (-n + 1) * g / (mu - z[..., None]), axis=-1)


def R_entries(mf, n_values, radii=None, N=512, doubling_tol=1e-11):
    """Tabulate all eight R integrals at z = 0 over the given n values.

    The contours default to the midpoint circles (1 + r_i)/2 and
    (1 + r_o)/2 of the joint annulus.  Every integral is recomputed with
    doubled node count; disagreement beyond `doubling_tol` relative (on the
    larger table's scale) raises ResolutionError.
    """
    n_values = np.asarray(sorted(int(n) for n in n_values), dtype=int)
    if n_values.size == 0 or n_values[0] < 1:
        raise ValueError("need n >= 1")
    if radii is None:
        r_i, r_o = mf.pair.annulus()
        radii = ((1.0 + r_i) / 2.0, (1.0 + r_o) / 2.0)
    if not (radii[0] < 1.0 < radii[1]):
        raise ValueError(f"contours must bracket the unit circle: {radii}")

    def tables(num):
        mu_i = CircleGrid(radii[0], num).nodes
        mu_o = CircleGrid(radii[1], num).nodes
        g_i = {lab: g_eval(mf, mu_i, lab) for lab in INTERIOR_LABELS}
        g_o = {lab: g_eval(mf, mu_o, lab) for lab in EXTERIOR_LABELS}
        R0 = {}
        R1 = {}
        for lab in INTERIOR_LABELS:
            R0[lab] = np.array([np.mean(mu_i ** n * g_i[lab]) for n in n_values])
            R1[lab] = np.array([np.mean(mu_i ** (n - 1) * g_i[lab])
                                for n in n_values])
        for lab in EXTERIOR_LABELS:
            R0[lab] = np.array([np.mean(mu_o ** (-n) * g_o[lab]) for n in n_values])
            R1[lab] = np.array([np.mean(mu_o ** (-n - 1) * g_o[lab])
                                for n in n_values])
        return mu_i, mu_o, g_i, g_o, R0, R1

    _, _, _, _, R0_a, R1_a = tables(N)
    mu_i, mu_o, g_i, g_o, R0_b, R1_b = tables(2 * N)
    rel = 0.0
    for lab in INTERIOR_LABELS + EXTERIOR_LABELS:
        for a, b in ((R0_a[lab], R0_b[lab]), (R1_a[lab], R1_b[lab])):
            scale = max(float(np.max(np.abs(b))), 1e-300)
            rel = max(rel, float(np.max(np.abs(a - b))) / scale)
    if rel > doubling_tol:
        raise ResolutionError(
            f"R integrals moved by {rel:.3g} relative under node doubling; "
            "increase N or shrink the contour margins")
    a0, c0 = mf.alpha0, mf.crho0
    E = (2.0 / a0) * R0_b["43"] - c0 * R0_b["23"]
    return RTable(n_values=n_values, radii=tuple(radii), N=2 * N,
                  alpha0=a0, crho0=c0, R0=R0_b, R1=R1_b, E=E,
                  doubling_rel=rel, mu_in=mu_i, mu_out=mu_o,
                  g_in=g_i, g_out=g_o)


def shift_identity_residual(rt):
    """max relative gap of R0(n) vs the shifted R1 at n+-1.

    Interior labels: R_jk(0; n) = shifted integral at n + 1; exterior:
    at n - 1.  Both sides come from the same samples, so this is a
    bookkeeping identity; it should hold to rounding exactly.
    """
    worst = 0.0
    ns = set(rt.n_values.tolist())
    for lab in INTERIOR_LABELS + EXTERIOR_LABELS:
        step = +1 if lab in INTERIOR_LABELS else -1
        for n in rt.n_values:
            if int(n) + step in ns:
                a = rt.R0_at(lab, int(n))
                b = rt.R1_at(lab, int(n) + step)
                worst = max(worst, abs(a - b) / max(abs(a), 1e-300))
    return worst


def P_asym(mf, rt, n):
    """The asymptotic 4 x 4 matrix P(n) = Lambda(0) + R-corrections."""
    a0, c0 = mf.alpha0, mf.crho0
    R = lambda lab: rt.R0_at(lab, n)
    return np.array([
        [-c0 * a0 * R("14") - R("12"), 0.0, R("14"), -a0],
        [-1.0, -R("23") / a0, 0.0, -a0 * R("21")],
        [-c0 * a0 * R("34") - R("32"), -1.0 / a0, R("34"), 0.0],
        [-c0 * a0, -R("43") / a0, 1.0, -a0 * R("41")],
    ], dtype=complex)


@dataclass
class CSolve:
    """C-constants from a 4 x 4 P via the rank-2 row relations."""

    C1: complex
    C2: complex
    C3: complex
    C4: complex
    residual: float             # worst row-relation defect after solving
    pivots: np.ndarray          # the six 2 x 2 pivot combinations
    doubled_det: complex        # (P22 P44 - P42 P24)^2
    C2_closed: complex          # closed-form route, pivot-2 denominator
    C4_closed: complex
    denominator: complex        # (1 - P21) P42 + P41 P22  ~  -E(n)


def solve_C_from_P(P, pivot_floor=1e-12):
    """Solve rows 1,3 of PW - I against rows 2,4 for (C1..C4).

    PW - I has rank 2 with row relations row1 = -C1 row2 - C3 row4 and
    row3 = -C2 row2 - C4 row4; both are solved in least squares over all
    four columns.  The six pivot combinations guaranteeing solvability are
    checked first; if every one degenerates the system is reported as
    unsolvable.
    """
    P = np.asarray(P, dtype=complex)
    p21, p22, p23, p24 = P[1]
    p41, p42, p43, p44 = P[3]
    pivots = np.array([
        p22 * p44 - p42 * p24,
        (1.0 - p21) * p42 + p22 * p41,
        (1.0 - p43) * p22 + p23 * p42,
        (1.0 - p21) * p44 + p41 * p24,
        (1.0 - p21) * (p43 - 1.0) + p41 * p23,
        (1.0 - p43) * p24 + p23 * p44,
    ])
    if np.all(np.abs(pivots) < pivot_floor):
        raise SolvabilityError(
            f"all six pivot combinations below {pivot_floor:.1g}; "
            "the C-system is degenerate")
    PWI = P @ involution_matrix() - np.eye(4)
    A = np.stack([PWI[1], PWI[3]], axis=1)
    x13, *_ = np.linalg.lstsq(A, -PWI[0], rcond=None)
    x24, *_ = np.linalg.lstsq(A, -PWI[2], rcond=None)
    resid = max(float(np.max(np.abs(A @ x13 + PWI[0]))),
                float(np.max(np.abs(A @ x24 + PWI[2]))))
    denom = (1.0 - p21) * p42 + p41 * p22
    c2_closed = (p42 * P[2, 0] - p41 * P[2, 1]) / denom
    c4_closed = -(p22 * P[2, 0] + (1.0 - p21) * P[2, 1]) / denom
    return CSolve(C1=complex(x13[0]), C2=complex(x24[0]),
                  C3=complex(x13[1]), C4=complex(x24[1]),
                  residual=resid, pivots=pivots,
                  doubled_det=complex(pivots[0] ** 2),
                  C2_closed=complex(c2_closed), C4_closed=complex(c4_closed),
                  denominator=complex(denom))


def C24_asym(mf, rt, n, floor=1e-280):
    """Leading-order C2 = C_rho(0)/E(n) and C4 = -2/(alpha(0) E(n))."""
    E = rt.E_at(n)
    if abs(E) < floor:
        raise AsymptoticError(f"|E({n})| = {abs(E):.3g} underflows; "
                              "asymptotic C-formulas do not apply")
    return mf.crho0 / E, -2.0 / (mf.alpha0 * E)


def B_entries(mf, rt, n):
    """The three second-column entries feeding the norm identity.

    B12 and B32 are single shifted integrals of order exp(-c n); B42 is a
    product of two and of order exp(-2 c n).
    """
    a0, c0 = mf.alpha0, mf.crho0
    b12 = rt.R1_at("23", n) / a0
    b32 = c0 * rt.R1_at("23", n) - rt.R1_at("43", n) / a0
    b42 = -(rt.R0_at("12", n) * rt.R1_at("23", n)
            + rt.R0_at("14", n) * rt.R1_at("43", n)) / a0 ** 2
    return {"B12": b12, "B32": b32, "B42": b42}


def h_from_B(mf, rt, n, C2, C4):
    """h_{n-1} from -1/h_{n-1} = C2 B12 + C4 B32 + B42."""
    B = B_entries(mf, rt, n)
    inv = C2 * B["B12"] + C4 * B["B32"] + B["B42"]
    if abs(inv) < 1e-280:
        raise AsymptoticError("norm identity degenerate: C2 B12 + C4 B32 "
                              "+ B42 underflows")
    return -1.0 / inv


def h_asym(mf, rt, n, floor=1e-280):
    """h_{n-1} ~ -alpha(0) E(n)/E(n-1); needs n and n-1 tabulated."""
    En = rt.E_at(n)
    Em = rt.E_at(n - 1)
    if abs(Em) < floor or abs(En) < floor:
        raise AsymptoticError(f"E underflow at n={n}: {abs(En):.3g}, "
                              f"{abs(Em):.3g}")
    return -mf.alpha0 * En / Em


def poly_asym(mf, rt, z, n, region):
    """Leading asymptotics of the monic P_n in the three regions.

    inside:   beta(z) (2 alpha(0) C_rho(z) - C_rho(0) alpha(0)) / E(n)
    outside:  alpha(z) z^n (1 + (C_rho(0) alpha(0) R_21(z;n)
                                 - 2 R_41(z;n)) / E(n))
    boundary: the sum of the plus-side interior term and the minus-side
              exterior term.
    """
    z = np.asarray(z, dtype=complex)
    a0, c0 = mf.alpha0, mf.crho0
    E = rt.E_at(n)
    if abs(E) < 1e-280:
        raise AsymptoticError(f"|E({n})| underflows")

    def inner(zz):
        return (mf.beta.inside(zz)
                * (2.0 * a0 * mf.crho.interior(zz) - c0 * a0) / E)

    def outer(zz, alpha_vals):
        corr = (c0 * a0 * rt.R_general("21", n, zz)
                - 2.0 * rt.R_general("41", n, zz)) / E
        return alpha_vals * zz ** n * (1.0 + corr)

    if region == "inside":
        if np.any(np.abs(z) >= 1.0):
            raise ValueError("inside asymptotics need |z| < 1")
        return inner(z)
    if region == "outside":
        if np.any(np.abs(z) <= 1.0):
            raise ValueError("outside asymptotics need |z| > 1")
        return outer(z, mf.alpha.outside(z))
    if region == "boundary":
        if np.any(np.abs(np.abs(z) - 1.0) > 1e-12):
            raise ValueError("boundary asymptotics need |z| = 1")
        return inner(z) + outer(z, mf.alpha.eval(z, "boundary_minus"))
    raise ValueError(f"unknown region {region!r}")


@dataclass(frozen=True)
class ExampleParams:
    """The worked symbol family: phi a rational power, d a reflected pair.

    phi(z) = ((z - b)/(z - a))^alpha and d built from (a1, b1, alpha1)
    with 0 < a < b < a1 < b1 < 1 and |Re alpha1| < 1.
    """

    a: float
    b: float
    alpha: float
    a1: float
    b1: float
    alpha1: float

    def __post_init__(self):
        if not 0.0 < self.a < self.b < self.a1 < self.b1 < 1.0:
            raise ValueError("need 0 < a < b < a1 < b1 < 1")
        if abs(float(np.real(self.alpha1))) >= 1.0:
            raise ValueError("need |Re alpha1| < 1")

    def pair(self):
        phi = build_rational_power(self.a, self.b, self.alpha)
        d = build_d_product([(self.a1, self.b1, self.alpha1, 1)])
        return SymbolPair.from_phi_d(phi, d)


def kappa(params, order=64, tol=1e-10, max_order=1024):
    """The constant in E(n) ~ kappa b1^(n - alpha1) n^(alpha1 - 1).

    The bracketed factor contains a real-segment integral over
    (1/b1, 1/a1) whose endpoint powers (z - 1/b1)^{alpha1} and
    (1/a1 - z)^{-alpha1} are absorbed into a Gauss-Jacobi rule; the node
    order doubles until two consecutive values agree to `tol`.
    """
    p = params
    if abs(float(np.imag(p.alpha1))) > 0:
        raise NotImplementedError("Gauss-Jacobi weights need real alpha1")
    a1, b1, al1 = p.a1, p.b1, float(p.alpha1)
    c = (1.0 / b1 + 1.0 / a1) / 2.0
    h = (1.0 / a1 - 1.0 / b1) / 2.0

    def seg_integral(m):
        x, wts = special.roots_jacobi(m, -al1, al1)
        zq = c + h * x
        f = (((zq - b1) / (zq - a1)) ** al1 * (zq + b1) / ((zq - b1) * zq))
        return h * float(np.sum(wts * f))

    m = order
    prev = seg_integral(m)
    while True:
        m *= 2
        cur = seg_integral(m)
        if abs(cur - prev) <= tol * max(1.0, abs(cur)):
            break
        if m >= max_order:
            raise ResolutionError(
                f"segment integral not converged at order {m}: "
                f"|delta| = {abs(cur - prev):.3g}")
        prev = cur
    phase = np.exp(-1j * np.pi * al1)
    bracket = phase * (1j / np.pi) * cur - 1.0
    front = (-(1j / np.pi) * phase * special.gamma(1.0 - al1)
             * (b1 - a1) ** al1
             * ((1.0 - p.b * b1) / (1.0 - p.a * b1)) ** p.alpha
             * (a1 / b1) ** (-al1))
    return complex(front * bracket)


def kappa_endpoint(params, mf):
    """The E(n) limit constant by the endpoint-jump (Watson) route.

    E(n) is the -n Laurent coefficient of (2/alpha(0)) g43 - C_rho(0) g23;
    collapsing the coefficient contour onto the inner branch cut (a1, b1)
    leaves the jump of w-tilde times an analytic cofactor, and the
    (b1 - x)^{-alpha1} endpoint behavior at b1 gives

        kappa = -alpha(0) ((1 - b1^2)(b1 - a1)/(1 - a1 b1))^{alpha1}
                * beta(b1) (2 C_rho(b1) - C_rho(0))
                / (Gamma(alpha1) alphat(b1)),

    with all factors interior values at z = b1 and alphat(b1) the exterior
    alpha at 1/b1.  This is the constant the numerical E-table actually
    converges to; it is real for real parameters, unlike the bracketed
    closed form of `kappa`.
    """
    p = params
    geom = ((1.0 - p.b1 ** 2) * (p.b1 - p.a1) / (1.0 - p.a1 * p.b1)) ** p.alpha1
    core = (mf.beta.inside(p.b1)
            * (2.0 * mf.crho.interior(p.b1) - mf.crho0)
            / mf.alpha.outside(1.0 / p.b1))
    return complex(-mf.alpha0 * geom * core / special.gamma(p.alpha1))


def E_asym_example(params, n, kappa_val):
    """kappa b1^(n - alpha1) n^(alpha1 - 1) for the worked family."""
    n = np.asarray(n, dtype=float)
    return kappa_val * params.b1 ** (n - params.alpha1) * n ** (params.alpha1 - 1.0)
