"""Analytic symbols on an annulus around the unit circle.

A symbol is a scalar function f(z), analytic and nonzero on an annulus
r_i < |z| < r_o that contains the unit circle.  Symbols generate everything
downstream: Fourier/Laurent coefficients fill Toeplitz and Hankel matrices,
log-symbols feed the Szego functions, and contour integrals of symbol
combinations produce the asymptotic corrections.

Coefficients are computed with the trapezoidal rule on equispaced circle
grids (an FFT), which converges geometrically in the node count for analytic
integrands.  Coefficients taken on a circle of radius rho are rescaled by
rho^(-k) so they always equal the Laurent coefficients; on the unit circle
this is the moment integral  c_k = (1/2*pi*i) * integral z^(-k) f(z) dz/z.
"""

from dataclasses import dataclass
from functools import cached_property

import numpy as np

_RO_CAP = 1e8  # finite stand-in for "analytic all the way to infinity"


class ResolutionError(RuntimeError):
    """A requested tolerance was not reached at the largest allowed grid."""


class BranchError(ValueError):
    """A branch discontinuity was detected on the evaluation annulus."""


@dataclass(frozen=True)
class CircleGrid:
    """N equispaced nodes radius * exp(2*pi*i*j/N), j = 0..N-1."""

    radius: float
    N: int

    def __post_init__(self):
        if self.radius <= 0:
            raise ValueError("grid radius must be positive")
        if self.N < 2 or (self.N & (self.N - 1)) != 0:
            raise ValueError("node count must be a power of two")

    @cached_property
    def nodes(self):
        j = np.arange(self.N)
        return self.radius * np.exp(2j * np.pi * j / self.N)


@dataclass(frozen=True)
class AnalyticSymbol:
    """A scalar analytic function on the annulus r_i < |z| < r_o."""

    fun: callable
    r_i: float
    r_o: float
    label: str = ""

    def __call__(self, z):
        return self.fun(np.asarray(z, dtype=complex))

    def reflected(self):
        """The symbol z -> f(1/z), analytic on 1/r_o < |z| < 1/r_i."""
        f = self.fun
        return AnalyticSymbol(lambda z: f(1.0 / z), 1.0 / self.r_o,
                              1.0 / self.r_i, label=self.label + "~")


def safe_annulus(sym, margin=0.02):
    """Contour-placement annulus: r_i inflated and r_o deflated by `margin`.

    Keeps every contour used by the library away from the branch points at
    the annulus edges.
    """
    return (1.0 + margin) * sym.r_i, (1.0 - margin) * sym.r_o


def constant_symbol(c, label=None):
    c = complex(c)
    return AnalyticSymbol(lambda z: np.full_like(z, c, dtype=complex),
                          r_i=1e-12, r_o=_RO_CAP,
                          label=label if label is not None else f"const({c})")


def _check_branch_continuity(fun, radii, N=1024, rel_step=0.5):
    """Assert no O(1) jumps of fun along circles of the given radii.

    A branch cut crossing a sampling circle produces a relative jump
    |f(z_{j+1})/f(z_j) - 1| of order |e^{2*pi*i*alpha} - 1|; analytic
    variation at N=1024 nodes is orders of magnitude smaller.
    """
    for rho in radii:
        z = rho * np.exp(2j * np.pi * np.arange(N) / N)
        v = fun(z)
        if not np.all(np.isfinite(v)):
            raise BranchError(f"symbol not finite on circle |z|={rho:g}")
        vmag = np.abs(v)
        if vmag.min() < 1e-13:
            raise BranchError(f"symbol vanishes on circle |z|={rho:g}")
        steps = np.abs(np.diff(np.append(v, v[0])) / v)
        if steps.max() > rel_step:
            raise BranchError(
                f"branch discontinuity on circle |z|={rho:g}: "
                f"relative step {steps.max():.3g}")


def build_rational_power(a, b, alpha, sign=1):
    """The symbol sign * ((z-b)/(z-a))^alpha, principal branch, cut on [a,b].

    Requires 0 < a < b < 1; the result is analytic and nonzero off the cut,
    equals sign at infinity, and has zero winding on the unit circle.
    """
    if not (0 < a < b < 1):
        raise ValueError(f"need 0 < a < b < 1, got a={a}, b={b}")
    if sign not in (1, -1):
        raise ValueError("sign must be +1 or -1")
    alpha = complex(alpha)

    def fun(z):
        return sign * np.exp(alpha * (np.log(z - b) - np.log(z - a)))

    sym = AnalyticSymbol(fun, r_i=b, r_o=_RO_CAP,
                         label=f"{'-' if sign < 0 else ''}((z-{b})/(z-{a}))^{alpha}")
    _check_branch_continuity(fun, [(1 + b) / 2, 1.0, 2.0])
    return sym


def build_d_product(factors):
    """Product of factors sign*((z-b)/(z-a))^alpha * ((a*z-1)/(b*z-1))^alpha.

    Each factor has cuts on [a_j, b_j] and its reflection [1/b_j, 1/a_j], and
    satisfies d(z)*d(1/z) = 1; so does the product.  Requires the interlacing
    0 < a_1 < b_1 < ... < a_m < b_m < 1.  An empty factor list gives the
    constant 1.  The annulus is b_m < |z| < 1/b_m.
    """
    factors = [tuple(f) for f in factors]
    seq = []
    for (a, b, alpha, sign) in factors:
        if sign not in (1, -1):
            raise ValueError("sign must be +1 or -1")
        seq.extend([a, b])
    if not all(x < y for x, y in zip(seq, seq[1:])) or (
            seq and not (0 < seq[0] and seq[-1] < 1)):
        raise ValueError("factor intervals must satisfy "
                         "0 < a_1 < b_1 < ... < a_m < b_m < 1")
    if not factors:
        return constant_symbol(1.0, label="d=1")
    b_m = factors[-1][1]

    def fun(z):
        out = np.ones_like(z, dtype=complex)
        for (a, b, alpha, sign) in factors:
            alpha = complex(alpha)
            out = out * sign * np.exp(
                alpha * (np.log(z - b) - np.log(z - a))
                + alpha * (np.log(a * z - 1) - np.log(b * z - 1)))
        return out

    sym = AnalyticSymbol(fun, r_i=b_m, r_o=1.0 / b_m,
                         label="d[" + ",".join(f"({a},{b},{al},{s:+d})"
                                               for a, b, al, s in factors) + "]")
    ri, ro = safe_annulus(sym)
    _check_branch_continuity(fun, [ri, (1 + ri) / 2, 1.0, (1 + ro) / 2, ro])
    return sym


def symbol_product(x, y, label=None):
    """Pointwise product, on the intersection of the two annuli."""
    fx, fy = x.fun, y.fun
    return AnalyticSymbol(lambda z: fx(z) * fy(z),
                          r_i=max(x.r_i, y.r_i), r_o=min(x.r_o, y.r_o),
                          label=label or f"({x.label})*({y.label})")


def symbol_scale(x, c, label=None):
    """The symbol c * x(z)."""
    fx = x.fun
    c = complex(c)
    return AnalyticSymbol(lambda z: c * fx(z), x.r_i, x.r_o,
                          label=label or f"{c:g}*({x.label})")


@dataclass(frozen=True)
class SymbolPair:
    """The pair (phi, w) generating a Toeplitz+Hankel matrix family.

    When w = d*phi by construction, d is kept; the reduced model problem
    (and hence the whole asymptotic pipeline) needs d with d(z)*d(1/z) = 1.
    """

    phi: AnalyticSymbol
    w: AnalyticSymbol
    d: AnalyticSymbol = None

    @classmethod
    def from_phi_d(cls, phi, d):
        w = symbol_product(d, phi, label=f"w=({d.label})*({phi.label})")
        return cls(phi=phi, w=w, d=d)

    def annulus(self):
        """Joint analyticity annulus of phi, w (and d if present)."""
        syms = [self.phi, self.w] + ([self.d] if self.d is not None else [])
        return max(s.r_i for s in syms), min(s.r_o for s in syms)

    def factorization_residual(self, grid):
        """max |w(z) - d(z)*phi(z)| over unit-circle nodes (0 if d absent)."""
        if self.d is None:
            return 0.0
        z = grid.nodes
        return float(np.max(np.abs(self.w(z) - self.d(z) * self.phi(z))))


@dataclass(frozen=True)
class FourierCoeffs:
    """Laurent coefficients c_k over the contiguous range k_min..k_max."""

    k_min: int
    k_max: int
    values: np.ndarray
    tail_bound: float
    N: int = 0
    radius: float = 1.0

    def __getitem__(self, k):
        if np.any(k < self.k_min) or np.any(k > self.k_max):
            raise IndexError(f"k={k} outside stored range "
                             f"[{self.k_min}, {self.k_max}]")
        return self.values[k - self.k_min]

    def reflected(self):
        """Coefficients of z -> f(1/z): index reversal c_k -> c_{-k}."""
        return FourierCoeffs(k_min=-self.k_max, k_max=-self.k_min,
                             values=self.values[::-1].copy(),
                             tail_bound=self.tail_bound,
                             N=self.N, radius=1.0 / self.radius)


def _fft_bins(sym, grid):
    vals = sym(grid.nodes)
    if not np.all(np.isfinite(vals)):
        raise ValueError(f"symbol {sym.label!r} not finite on grid "
                         f"radius {grid.radius:g}")
    return np.fft.fft(vals) / grid.N


def _alias_tail(bins, radius, N):
    """Max rescaled coefficient magnitude near the Nyquist index.

    For a symbol analytic on an annulus through the grid circle this band
    holds the slowest-decaying retained coefficients, so it bounds both the
    truncation tail and the aliasing error.
    """
    ks = np.arange(-N // 2, N // 2)
    band = (np.abs(ks) >= int(0.45 * N))
    resc = np.abs(bins[ks % N]) * radius ** (-ks.astype(float))
    return float(resc[band].max())


def fourier_coeffs(sym, k_min, k_max, grid, tail_tol=None):
    """Laurent coefficients of `sym` for k_min <= k <= k_max.

    c_k = (1/N) * sum_j f(z_j) z_j^{-k}, rescaled by radius^{-k}; for a grid
    on the unit circle this is exactly the trapezoidal moment integral.
    If tail_tol is given, raises ResolutionError when the rescaled
    coefficient magnitudes near the Nyquist index exceed it.
    """
    if k_max - k_min >= grid.N:
        raise ValueError(f"k range of length {k_max - k_min + 1} needs more "
                         f"than the {grid.N} grid nodes (aliasing)")
    if not (sym.r_i < grid.radius < sym.r_o):
        raise ValueError(f"grid radius {grid.radius:g} outside the symbol "
                         f"annulus ({sym.r_i:g}, {sym.r_o:g})")
    bins = _fft_bins(sym, grid)
    ks = np.arange(k_min, k_max + 1)
    values = bins[ks % grid.N] * grid.radius ** (-ks.astype(float))
    m = max(1, (k_max - k_min + 1) // 10)
    tail_bound = float(max(np.abs(values[:m]).max(), np.abs(values[-m:]).max()))
    if tail_tol is not None:
        alias = _alias_tail(bins, grid.radius, grid.N)
        if alias > tail_tol:
            raise ResolutionError(
                f"coefficient tail {alias:.3g} above {tail_tol:.3g} at "
                f"N={grid.N}; double the grid")
    return FourierCoeffs(k_min=k_min, k_max=k_max, values=values,
                         tail_bound=tail_bound, N=grid.N, radius=grid.radius)


def fourier_coeffs_auto(sym, k_min, k_max, radius=1.0, tail_tol=1e-13,
                        N0=256, N_max=1 << 16):
    """fourier_coeffs with the node count doubled until the tail resolves."""
    N = N0
    while N < 4 * (k_max - k_min + 1):
        N *= 2
    while True:
        grid = CircleGrid(radius, N)
        bins = _fft_bins(sym, grid)
        if _alias_tail(bins, radius, N) <= tail_tol:
            ks = np.arange(k_min, k_max + 1)
            values = bins[ks % N] * radius ** (-ks.astype(float))
            m = max(1, (k_max - k_min + 1) // 10)
            tail = float(max(np.abs(values[:m]).max(),
                             np.abs(values[-m:]).max()))
            return FourierCoeffs(k_min=k_min, k_max=k_max, values=values,
                                 tail_bound=tail, N=N, radius=radius)
        if N >= N_max:
            raise ResolutionError(
                f"tail above {tail_tol:.3g} even at N={N} "
                f"(radius {radius:g}, symbol {sym.label!r})")
        N *= 2


def winding_number(sym, grid, return_raw=False):
    """Net argument change / 2*pi of the symbol along the closed grid circle.

    Uses phase unwrapping with the per-step threshold pi; raises
    ResolutionError if the unwrapped total is not close to an integer.
    """
    vals = sym(grid.nodes)
    if np.abs(vals).min() < 1e-13:
        raise ValueError("symbol (numerically) vanishes on the contour")
    phases = np.unwrap(np.angle(np.append(vals, vals[0])))
    raw = (phases[-1] - phases[0]) / (2 * np.pi)
    w = int(np.rint(raw))
    if abs(raw - w) > 0.1:
        raise ResolutionError(f"winding estimate {raw:.4f} not near an "
                              "integer; refine the grid")
    return (w, raw) if return_raw else w


def verify_unimodular_involution(sym, grid):
    """max over unit-circle nodes of |f(z) * f(1/z) - 1|.

    Zero (to rounding) exactly when the symbol satisfies the reflection
    identity d * d~ = 1 that the solvable model problem requires.
    """
    z = grid.nodes
    return float(np.max(np.abs(sym(z) * sym(1.0 / z) - 1.0)))
