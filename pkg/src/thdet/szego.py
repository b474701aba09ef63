"""Szego functions and Cauchy transforms from log-symbol Laurent series.

For a symbol f with zero winding, the Szego function is

    S(z) = exp( (1/2*pi*i) * integral log f(tau) / (tau - z) dtau ),

analytic off the unit circle, with S_+ = S_- * f on the circle and S -> 1 at
infinity.  With log f(tau) = sum_k l_k tau^k the two analytic pieces are

    inside:   exp( sum_{k>=0} l_k z^k )        (|z| < 1)
    outside:  exp( -sum_{k<0} l_k z^k )        (|z| > 1)

and since the l_k decay geometrically (the symbol is analytic on an annulus),
the same truncated series also deliver the one-sided boundary values on
|z| = 1.  No principal-value quadrature is needed anywhere.

The Cauchy transform of a density given on the circle works the same way:
interior value sum_{k>=0} d_k z^k, exterior value -sum_{k<0} d_k z^k, with
Plemelj jump (interior - exterior) equal to the density.
"""

from dataclasses import dataclass

import numpy as np
from numpy.polynomial import polynomial as npoly

from .symbols import CircleGrid, FourierCoeffs, ResolutionError, winding_number

REGIONS = ("inside", "outside", "boundary_plus", "boundary_minus")


class WindingError(ValueError):
    """Szego function requested for a symbol with nonzero winding."""


def _trim(coeffs, cutoff):
    """Drop a geometrically-negligible tail (keeps at least one term)."""
    keep = np.nonzero(np.abs(coeffs) > cutoff)[0]
    n = 1 if keep.size == 0 else keep[-1] + 1
    return np.ascontiguousarray(coeffs[:n])


def _check_region(z, region):
    if region not in REGIONS:
        raise ValueError(f"unknown region {region!r}; expected one of {REGIONS}")
    az = np.abs(z)
    if region == "inside" and np.any(az >= 1):
        raise ValueError("region 'inside' needs |z| < 1")
    if region == "outside" and np.any(az <= 1):
        raise ValueError("region 'outside' needs |z| > 1")
    if region.startswith("boundary") and np.any(np.abs(az - 1) > 1e-12):
        raise ValueError("boundary regions need |z| = 1")


@dataclass(frozen=True)
class LogBoundary:
    """A continuous branch of log f on the unit-circle grid."""

    grid: CircleGrid
    samples: np.ndarray
    fourier: FourierCoeffs


def continuous_log(sym, grid, tail_tol=1e-12):
    """Unwrapped log f along the unit-circle grid, with its Fourier data.

    Requires zero winding (otherwise no continuous branch closes up) and a
    grid fine enough that the log-coefficient tail is below tail_tol.
    """
    if abs(grid.radius - 1.0) > 1e-12:
        raise ValueError("continuous_log expects a unit-circle grid")
    w = winding_number(sym, grid)
    if w != 0:
        raise WindingError(f"winding number {w} != 0; Szego function undefined")
    vals = sym(grid.nodes)
    samples = np.log(np.abs(vals)) + 1j * np.unwrap(np.angle(vals))
    N = grid.N
    bins = np.fft.fft(samples) / N
    ks = np.arange(-N // 2, N // 2)
    lf = FourierCoeffs(k_min=-N // 2, k_max=N // 2 - 1, values=bins[ks % N],
                       tail_bound=float(np.abs(bins[N // 2]).max()), N=N)
    if lf.tail_bound > tail_tol:
        raise ResolutionError(
            f"log-coefficient tail {lf.tail_bound:.3g} above {tail_tol:.3g}; "
            "double the grid")
    return LogBoundary(grid=grid, samples=samples, fourier=lf)


@dataclass(frozen=True)
class SzegoData:
    """Truncated log-Laurent representation of one Szego function."""

    log_fourier: FourierCoeffs
    pos: np.ndarray   # l_0, l_1, ...   (inside exponent)
    neg: np.ndarray   # 0, l_{-1}, l_{-2}, ...  (outside exponent, in 1/z)
    value_at_zero: complex
    value_at_infinity_exterior: complex = 1.0 + 0j

    def inside(self, z):
        return np.exp(npoly.polyval(np.asarray(z, dtype=complex), self.pos))

    def outside(self, z):
        zi = 1.0 / np.asarray(z, dtype=complex)
        return np.exp(-npoly.polyval(zi, self.neg))

    def eval(self, z, region):
        _check_region(z, region)
        if region in ("inside", "boundary_plus"):
            return self.inside(z)
        return self.outside(z)


def szego_data(lb, trim_cutoff=1e-18):
    """Szego function of the symbol behind a LogBoundary.

    Interior evaluation exp(sum_{k>=0} l_k z^k), exterior
    exp(-sum_{k<0} l_k z^k); boundary values are the same series on |z|=1.
    """
    lf = lb.fourier
    scale = max(np.abs(lf.values).max(), 1.0)
    pos = _trim(lf.values[-lf.k_min:], trim_cutoff * scale)
    neg_tail = lf.values[:-lf.k_min][::-1]          # l_{-1}, l_{-2}, ...
    neg = _trim(np.concatenate(([0.0 + 0j], neg_tail)), trim_cutoff * scale)
    return SzegoData(log_fourier=lf, pos=pos, neg=neg,
                     value_at_zero=complex(np.exp(pos[0])))


def szego_from_symbol(sym, grid=None, N=2048, N_max=1 << 16):
    """Convenience: continuous_log + szego_data on a fresh unit grid.

    Without an explicit grid, the node count is doubled (up to N_max) until
    the log-coefficient tail resolves.
    """
    if grid is not None:
        return szego_data(continuous_log(sym, grid))
    while True:
        try:
            return szego_data(continuous_log(sym, CircleGrid(1.0, N)))
        except ResolutionError:
            if N >= N_max:
                raise
            N *= 2


def eval_szego(sd, z, region):
    """Szego function value; region is one of REGIONS."""
    return sd.eval(z, region)


@dataclass(frozen=True)
class CauchyField:
    """Cauchy transform of a density sampled on the unit circle."""

    density_fourier: FourierCoeffs
    pos: np.ndarray   # d_0, d_1, ...
    neg: np.ndarray   # 0, d_{-1}, d_{-2}, ...

    @property
    def at_zero(self):
        return complex(self.pos[0])

    def interior(self, z):
        return npoly.polyval(np.asarray(z, dtype=complex), self.pos)

    def exterior(self, z):
        zi = 1.0 / np.asarray(z, dtype=complex)
        return -npoly.polyval(zi, self.neg)

    def eval(self, z, region):
        _check_region(z, region)
        if region in ("inside", "boundary_plus"):
            return self.interior(z)
        return self.exterior(z)

    def plemelj_residual(self, density_samples, nodes):
        """max |interior - exterior - density| on the given boundary nodes."""
        jump = self.interior(nodes) - self.exterior(nodes)
        return float(np.max(np.abs(jump - density_samples)))


def cauchy_field_from_samples(samples, grid, trim_cutoff=1e-18):
    """Cauchy field of a density given by samples on a unit-circle grid."""
    N = grid.N
    bins = np.fft.fft(samples) / N
    ks = np.arange(-N // 2, N // 2)
    df = FourierCoeffs(k_min=-N // 2, k_max=N // 2 - 1, values=bins[ks % N],
                       tail_bound=float(np.abs(bins[N // 2]).max()), N=N)
    scale = max(np.abs(df.values).max(), 1.0)
    pos = _trim(df.values[-df.k_min:], trim_cutoff * scale)
    neg = _trim(np.concatenate(([0.0 + 0j], df.values[:-df.k_min][::-1])),
                trim_cutoff * scale)
    return CauchyField(density_fourier=df, pos=pos, neg=neg)


def rho_field(alpha_sd, beta_sd, grid):
    """The Cauchy field of rho(z) = -1 / (beta_- beta_+ alphat_- alpha_+).

    Here alpha is the Szego function of phi, beta that of d, and
    alphat_-(z) is alpha-tilde's minus boundary value: the reflection is
    applied before the limit, so approaching |z|=1 from outside sends 1/z to
    the interior and alphat_-(z) equals the interior value of alpha at 1/z.
    """
    if abs(grid.radius - 1.0) > 1e-12:
        raise ValueError("rho_field expects a unit-circle grid")
    z = grid.nodes
    factors = (beta_sd.eval(z, "boundary_minus"),
               beta_sd.eval(z, "boundary_plus"),
               alpha_sd.inside(1.0 / z),           # alpha-tilde, minus side
               alpha_sd.eval(z, "boundary_plus"))
    prod = np.ones_like(z)
    for f in factors:
        if np.abs(f).min() < 1e-13:
            raise ZeroDivisionError("Szego factor vanishes on the circle")
        prod = prod * f
    return cauchy_field_from_samples(-1.0 / prod, grid)


def eval_cauchy(cf, z, region):
    """Cauchy-transform value; region is one of REGIONS."""
    return cf.eval(z, region)
