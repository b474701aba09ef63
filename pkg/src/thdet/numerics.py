"""Small shared numerical helpers: extrapolation and pivoted determinants."""

import warnings

import numpy as np
from scipy import linalg as sla

from .symbols import ResolutionError


def extrapolate_to_zero(eps, values, growth_factor=4.0):
    """Lagrange-extrapolate values(eps) to eps = 0.

    One value (scalar or array) per epsilon; the list must be strictly
    decreasing.  Raises ResolutionError when the magnitudes visibly grow as
    eps shrinks, i.e., the sequence is not converging to a limit.
    """
    eps = np.asarray(eps, dtype=float)
    vals = [np.asarray(v, dtype=complex) for v in values]
    if eps.ndim != 1 or len(vals) != eps.size or eps.size < 2:
        raise ValueError("need matching eps/value lists of length >= 2")
    if np.any(np.diff(eps) >= 0):
        raise ValueError("epsilon list must be strictly decreasing")
    first = float(np.max(np.abs(vals[0])))
    last = float(np.max(np.abs(vals[-1])))
    if last > growth_factor * max(first, 1e-300):
        raise ResolutionError(
            f"values grow as epsilon decreases ({first:.3g} -> {last:.3g}); "
            "extrapolation to zero is meaningless")
    out = np.zeros_like(vals[0])
    for i in range(eps.size):
        weight = 1.0
        for j in range(eps.size):
            if j != i:
                weight *= -eps[j] / (eps[i] - eps[j])
        out = out + weight * vals[i]
    return out


def lu_det(A, pivot_floor=1e-300):
    """Determinant via LU with partial pivoting; returns (det, singular).

    `singular` is set when a pivot underflows `pivot_floor`; the determinant
    is then reported as exactly 0 rather than a denormal artifact.
    """
    A = np.asarray(A, dtype=complex)
    if A.shape[0] == 0:
        return 1.0 + 0j, False
    with warnings.catch_warnings():
        warnings.simplefilter("ignore", sla.LinAlgWarning)
        lu, piv = sla.lu_factor(A)
    diag = np.diag(lu)
    if np.abs(diag).min() < pivot_floor:
        return 0.0 + 0j, True
    swaps = int(np.sum(piv != np.arange(A.shape[0])))
    return complex((-1.0) ** swaps * np.prod(diag)), False
