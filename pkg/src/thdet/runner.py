"""Configuration-driven batch driver behind the command-line interface.

Modes map one-to-one onto library capabilities: `coeffs` tabulates symbol
coefficients, `dets` determinant ladders, `ortho` orthogonal-polynomial
norms, `asym` cross-validates exact norms against the model asymptotics,
`verify-model` runs the model-problem residual suite, `interval` the
interval-weight pipeline, `example` the worked solvable family, and
`charpoly` the Hankel characteristic-polynomial identity.

Each run writes report.csv (one row per n, or per k for `coeffs`),
summary.json (effective config echo plus mode-level fits) and
invariants.json (named residuals with thresholds and pass flags).  Output
is deterministic for a fixed config and version: no clocks or RNG enter
the files, complex values are serialized as re/im pairs, and timing goes
to stderr only.

Exit codes: 0 success; 2 config validation failure (nothing written);
3 numerical-resolution failure (partial results written, rows flagged).
A singular determinant is a mathematical outcome, not a resolution
failure: the row is flagged and the exit code stays 0.
"""

import copy
import json
import os
import sys
import time

import numpy as np

from .asymptotics import (AsymptoticError, ExampleParams, E_asym_example,
                          ModelError, P_asym, R_entries, SolvabilityError,
                          involution_matrix, kappa, kappa_endpoint,
                          model_field, shift_identity_residual,
                          solve_C_from_P, verify_model_jump)
from .interval import (CutProximityError, IntervalWeight, build_J_Theta,
                       interval_moment_table, model_pair, u_field,
                       verify_u_jump, verify_ut_jump)
from .orthopoly import (SingularSystemError, charpoly_identity,
                        circle_moments, det_ladder, exact_C, ortho_poly,
                        ortho_residual, rank_GXW)
from .symbols import (BranchError, ResolutionError, SymbolPair,
                      build_d_product, build_rational_power, constant_symbol)
from . import asymptotics

MODES = ("coeffs", "dets", "ortho", "asym", "verify-model", "interval",
         "example", "charpoly")

_KNOWN_KEYS = {"mode", "pair", "phi", "w", "d_factors", "interval_weight",
               "r", "s", "n_min", "n_max", "n_step", "radius_in",
               "radius_out", "grid_N", "precision", "lambdas",
               "unimodular_threshold", "kappa_order"}

_EXAMPLE_PAIR = {"family": "example_pair", "a": 0.2, "b": 0.3, "alpha": 0.3,
         "a1": 0.5, "b1": 0.7, "alpha1": 0.4}

_SWEEP_DEFAULTS = {"example": (16, 48, 8), "asym": (8, 32, 4),
                   "verify-model": (4, 16, 4)}


def effective_config(config):
    """Config with every defaulted field filled in; the input is not touched.

    Mode-specific defaults: `asym` runs at extended precision (near n = 30
    the binary64 Fourier moments limit the exact h to ~1e-10 relative,
    hiding the asymptotic error) and every other mode at double.
    """
    cfg = copy.deepcopy(dict(config))
    mode = cfg.get("mode")
    lo, hi, st = _SWEEP_DEFAULTS.get(mode, (1, 8, 1))
    cfg.setdefault("n_min", lo)
    cfg.setdefault("n_max", hi)
    cfg.setdefault("n_step", st)
    cfg.setdefault("r", 1)
    cfg.setdefault("s", 1)
    cfg.setdefault("radius_in", None)
    cfg.setdefault("radius_out", None)
    cfg.setdefault("grid_N", 2048)
    cfg.setdefault("precision",
                   "extended" if mode == "asym" else "double")
    cfg.setdefault("unimodular_threshold", 1e-8)
    cfg.setdefault("kappa_order", 64)
    if mode == "example" and "pair" not in cfg:
        cfg["pair"] = dict(_EXAMPLE_PAIR)
    if mode == "charpoly":
        cfg.setdefault("lambdas", [0.5, 1.25])
    return cfg


def _check_circle_spec(spec, what, out):
    if not isinstance(spec, dict) or "family" not in spec:
        out.append(f"{what}: symbol spec must be a dict with a 'family' key")
        return
    fam = spec["family"]
    if fam == "constant":
        if "value" not in spec:
            out.append(f"{what}: constant symbol needs 'value'")
    elif fam == "zero":
        pass
    elif fam == "rational_power":
        a, b = spec.get("a"), spec.get("b")
        if a is None or b is None or not (0 < a < b < 1):
            out.append(f"{what}: ordering violated, need 0 < a < b < 1")
        if "alpha" not in spec:
            out.append(f"{what}: rational_power needs 'alpha'")
        if spec.get("sign", 1) not in (1, -1):
            out.append(f"{what}: sign must be +1 or -1")
    else:
        out.append(f"{what}: unknown family '{fam}'")


def validate(config):
    """All violations of the effective config; empty list means valid."""
    cfg = effective_config(config)
    out = []
    mode = cfg.get("mode")
    if mode not in MODES:
        out.append(f"mode must be one of {MODES}, got {mode!r}")
    unknown = sorted(set(cfg) - _KNOWN_KEYS)
    if unknown:
        out.append(f"unknown config keys: {unknown}")
    for key in ("r", "s", "n_min", "n_max", "n_step"):
        if not isinstance(cfg.get(key), (int, np.integer)):
            out.append(f"{key} must be an integer")
    if isinstance(cfg.get("n_step"), int) and cfg["n_step"] < 1:
        out.append("n_step must be >= 1")
    if (isinstance(cfg.get("n_min"), int) and isinstance(cfg.get("n_max"), int)
            and cfg["n_min"] > cfg["n_max"]):
        out.append("empty sweep: n_min > n_max")
    if isinstance(cfg.get("n_min"), int) and cfg["n_min"] < 0:
        out.append("n_min must be >= 0")
    if cfg["precision"] not in ("double", "extended"):
        out.append("precision must be 'double' or 'extended'")
    if cfg["radius_in"] is not None and not 0 < cfg["radius_in"] < 1:
        out.append("radius_in must lie in (0, 1)")
    if cfg["radius_out"] is not None and not cfg["radius_out"] > 1:
        out.append("radius_out must be > 1")
    if not isinstance(cfg["grid_N"], (int, np.integer)) or cfg["grid_N"] < 64:
        out.append("grid_N must be an integer >= 64")

    if "pair" in cfg:
        spec = cfg["pair"]
        if not isinstance(spec, dict) or spec.get("family") != "example_pair":
            out.append("pair: only the 'example_pair' family is recognized")
        else:
            vals = [spec.get(k) for k in ("a", "b", "a1", "b1")]
            if any(v is None for v in vals) or not all(
                    x < y for x, y in zip([0] + vals, vals + [1])):
                out.append("pair: ordering violated, need 0<a<b<a1<b1<1")
            al1 = spec.get("alpha1")
            if al1 is None or abs(float(np.real(al1))) >= 1.0:
                out.append("pair: need |Re alpha1| < 1")
    if "phi" in cfg:
        _check_circle_spec(cfg["phi"], "phi", out)
    if "w" in cfg:
        _check_circle_spec(cfg["w"], "w", out)
    if "d_factors" in cfg:
        try:
            seq = [x for f in cfg["d_factors"] for x in (f[0], f[1])]
            if not all(x < y for x, y in zip([0] + seq, seq + [1])):
                out.append("d_factors: ordering violated, "
                           "need 0 < a_1 < b_1 < ... < b_m < 1")
        except (TypeError, IndexError):
            out.append("d_factors must be a list of (a, b, alpha, sign)")
    if "interval_weight" in cfg:
        spec = cfg["interval_weight"]
        if not isinstance(spec, dict):
            out.append("interval_weight must be a dict")
        else:
            if spec.get("kind", "one") not in ("one", "exp", "power"):
                out.append("interval_weight.kind must be one|exp|power")
            a, b = spec.get("a"), spec.get("b")
            if a is None or b is None or not (0 < a < b < 1):
                out.append("interval_weight: ordering violated, "
                           "need 0 < a < b < 1")

    needs_pair = {"asym", "verify-model", "example"}
    if mode in needs_pair and "pair" not in cfg and "d_factors" not in cfg:
        out.append(f"mode {mode} needs 'pair' or 'phi'+'d_factors' "
                   "(a reduced pair)")
    if mode in ("coeffs", "dets", "ortho") and ("phi" not in cfg
                                                and "pair" not in cfg):
        out.append(f"mode {mode} needs 'phi' (or 'pair')")
    if mode == "interval":
        if "phi" not in cfg:
            out.append("mode interval needs 'phi'")
        if "interval_weight" not in cfg:
            out.append("mode interval needs 'interval_weight'")
    if mode == "charpoly":
        if "w" not in cfg:
            out.append("mode charpoly needs 'w'")
        lams = cfg.get("lambdas")
        if not isinstance(lams, (list, tuple)) or not lams or not all(
                isinstance(x, (int, float)) for x in lams):
            out.append("charpoly needs a nonempty numeric 'lambdas' list")
    if mode in needs_pair and (cfg["r"], cfg["s"]) != (1, 1):
        out.append(f"mode {mode} runs the asymptotic pipeline, "
                   "which requires offsets r = s = 1")
    return out


def _circle_symbol(spec):
    fam = spec["family"]
    if fam == "constant":
        return constant_symbol(spec["value"])
    if fam == "zero":
        return constant_symbol(0.0, label="w=0")
    return build_rational_power(spec["a"], spec["b"], spec["alpha"],
                                sign=spec.get("sign", 1))


def _the_pair(cfg):
    """SymbolPair from 'pair', or 'phi' plus 'd_factors'/'w' (default w=0)."""
    if "pair" in cfg:
        p = cfg["pair"]
        return ExampleParams(a=p["a"], b=p["b"], alpha=p["alpha"], a1=p["a1"],
                             b1=p["b1"], alpha1=p["alpha1"]).pair()
    phi = _circle_symbol(cfg["phi"])
    if "d_factors" in cfg:
        d = build_d_product([tuple(f) for f in cfg["d_factors"]])
        return SymbolPair.from_phi_d(phi, d)
    if "w" in cfg:
        return SymbolPair(phi=phi, w=_circle_symbol(cfg["w"]))
    return SymbolPair(phi=phi, w=constant_symbol(0.0, label="w=0"))


def _interval_weight(cfg):
    spec = cfg["interval_weight"]
    kind = spec.get("kind", "one")
    if kind == "one":
        fun = np.ones_like
    elif kind == "exp":
        fun = np.exp
    else:
        p = float(spec.get("exponent", 1.0))
        fun = lambda x: x ** p
    return IntervalWeight(fun, spec["a"], spec["b"], s=int(cfg["s"]),
                          order=int(spec.get("order", 128)))


def _radii(cfg, pair, toward=0.5):
    """Contour radii: overrides where given, else annulus interpolants.

    `toward` is the fraction of the way from the unit circle to the
    annulus edge.  The h-ratio mode pushes the contours closer to the
    cuts (toward = 0.75): the integrand's numerical noise floor decays
    like radius^n on the contour while the target integral decays like
    edge^n, so the relative noise grows like (radius/edge)^n and shrinks
    as the contour approaches the edge.
    """
    ri, ro = pair.annulus()
    inner = cfg["radius_in"] if cfg["radius_in"] is not None \
        else 1 + toward * (ri - 1)
    outer = cfg["radius_out"] if cfg["radius_out"] is not None \
        else 1 + toward * (ro - 1)
    return float(inner), float(outer)


def _sweep(cfg):
    return list(range(cfg["n_min"], cfg["n_max"] + 1, cfg["n_step"]))


def _dps(cfg):
    return 50 if cfg["precision"] == "extended" else None


def _mp_symbol_funs(cfg):
    """mpmath mirrors of the circle symbols the config describes.

    Principal-branch logs throughout, matching the binary64 construction
    branch for branch; parameters are converted from float exactly, so
    both pipelines see the identical symbol.
    """
    import mpmath as mp

    def pow_ratio(a, b, al, sg):
        a, b, al = mp.mpf(a), mp.mpf(b), mp.mpc(complex(al))
        return lambda z: sg * mp.exp(al * (mp.log(z - b) - mp.log(z - a)))

    def d_factor(a, b, al, sg):
        a, b, al = mp.mpf(a), mp.mpf(b), mp.mpc(complex(al))
        return lambda z: sg * mp.exp(
            al * (mp.log(z - b) - mp.log(z - a))
            + al * (mp.log(a * z - 1) - mp.log(b * z - 1)))

    def from_spec(spec):
        fam = spec["family"]
        if fam == "constant":
            c = mp.mpc(complex(spec["value"]))
            return lambda z: c
        if fam == "zero":
            return lambda z: mp.mpc(0)
        return pow_ratio(spec["a"], spec["b"], spec["alpha"],
                         spec.get("sign", 1))

    if "pair" in cfg:
        p = cfg["pair"]
        phi = pow_ratio(p["a"], p["b"], p["alpha"], 1)
        d = d_factor(p["a1"], p["b1"], p["alpha1"], 1)
        return phi, (lambda z: phi(z) * d(z))
    phi = from_spec(cfg["phi"])
    if "d_factors" in cfg:
        fs = [d_factor(*tuple(f)) for f in cfg["d_factors"]]

        def w(z):
            out = phi(z)
            for f in fs:
                out = out * f(z)
            return out
        return phi, w
    if "w" in cfg:
        return phi, from_spec(cfg["w"])
    return phi, (lambda z: mp.mpc(0))


def _hp_ladder(cfg, n_top, dps=40):
    """D_0..D_{n_top} with moments and determinants both in mpmath.

    The runner's circle families are closed forms, so the absolute
    ~1e-16 sampling roundoff per Fourier coefficient that limits the
    binary64 ladder near n ~ 30 can be removed outright: sample the
    symbols at `dps` digits on a power-of-two grid whose aliasing tail
    sits far below the working precision, DFT, and run the determinants
    in mpmath.  Ratios of the returned binary64 values are then exact to
    rounding.
    """
    import mpmath as mp
    r, s = cfg["r"], cfg["s"]
    with mp.workdps(dps):
        phi_f, w_f = _mp_symbol_funs(cfg)
        N = 512
        while N < 8 * n_top:
            N *= 2
        nodes = [mp.expjpi(2 * mp.mpf(j) / N) for j in range(N)]
        conj_nodes = [mp.conj(z) for z in nodes]
        pv = [phi_f(z) for z in nodes]
        wv = [w_f(z) for z in nodes]

        def coeffs(vals, lo, hi):
            out = {}
            for k in range(lo, hi + 1):
                acc = mp.mpc(0)
                for j, v in enumerate(vals):
                    acc += v * conj_nodes[(k * j) % N]
                out[k] = acc / N
            return out

        phi_c = coeffs(pv, r - n_top, r + n_top)
        w_c = coeffs(wv, s, 2 * n_top - 2 + s) if n_top else {}
        lad = [mp.mpc(1)]
        for n in range(1, n_top + 1):
            M = mp.matrix(n, n)
            for j in range(n):
                for k in range(n):
                    M[j, k] = phi_c[j - k + r] + w_c[j + k + s]
            lad.append(mp.det(M))
        return np.array([complex(x) for x in lad])


def _exact_ladder(cfg, n_top):
    """The determinant ladder at the configured precision."""
    if cfg["precision"] == "extended":
        return _hp_ladder(cfg, n_top)
    mt = circle_moments(_the_pair(cfg), n_top, cfg["r"], cfg["s"])
    return det_ladder(mt, n_top)


def _sign_of(D):
    """Sign of a numerically real determinant; blank when genuinely complex.

    The realness cutoff 1e-6 sits far above the ladder's imaginary
    rounding noise (relative ~1e-8 by n ~ 50) and far below the O(1)
    imaginary parts of genuinely complex determinants.
    """
    D = complex(D)
    if abs(D.imag) > 1e-6 * max(abs(D), 1e-300):
        return ""
    return int(np.sign(D.real))


def _put(row, name, value):
    row[f"{name}_re"] = float(np.real(value))
    row[f"{name}_im"] = float(np.imag(value))


def _fit_line(x, y):
    A = np.vstack([np.asarray(x, float), np.ones(len(x))]).T
    sol, *_ = np.linalg.lstsq(A, np.asarray(y, float), rcond=None)
    return float(sol[0]), float(sol[1])


def _fit_decay_with_log(n, log_abs):
    """Least-squares A + B n + C log n; returns (B, A, C)."""
    n = np.asarray(n, dtype=float)
    A = np.vstack([np.ones_like(n), n, np.log(n)]).T
    sol, *_ = np.linalg.lstsq(A, np.asarray(log_abs, float), rcond=None)
    return float(sol[1]), float(sol[0]), float(sol[2])


def _invariant(value, threshold, larger_is_fail=True):
    value = float(value)
    ok = value <= threshold if larger_is_fail else value >= threshold
    return {"value": value, "threshold": float(threshold), "pass": bool(ok)}


# ---------------------------------------------------------------------------
# mode runners: each returns (header, rows, summary, invariants, failed)

def _run_coeffs(cfg):
    pair = _the_pair(cfg)
    mt = circle_moments(pair, cfg["n_max"], cfg["r"], cfg["s"])
    k_lo = min(mt.phi.k_min, mt.w.k_min)
    k_hi = max(mt.phi.k_max, mt.w.k_max)
    rows = []
    for k in range(k_lo, k_hi + 1):
        row = {"k": k}
        if mt.phi.k_min <= k <= mt.phi.k_max:
            _put(row, "phi", mt.phi[k])
        if mt.w.k_min <= k <= mt.w.k_max:
            _put(row, "w", mt.w[k])
        rows.append(row)
    header = ["k", "phi_re", "phi_im", "w_re", "w_im"]
    summary = {"phi_range": [mt.phi.k_min, mt.phi.k_max],
               "w_range": [mt.w.k_min, mt.w.k_max],
               "phi_tail_bound": float(mt.phi.tail_bound),
               "w_tail_bound": float(mt.w.tail_bound)}
    return header, rows, summary, {}, False


def _run_dets(cfg):
    lad = _exact_ladder(cfg, cfg["n_max"] + 1)
    rows = []
    for n in _sweep(cfg):
        row = {"n": n, "flag": ""}
        _put(row, "D", lad[n])
        row["sign_D"] = _sign_of(lad[n])
        if lad[n] != 0:
            _put(row, "h", lad[n + 1] / lad[n])
        else:
            row["flag"] = "singular"
        rows.append(row)
    header = ["n", "D_re", "D_im", "sign_D", "h_re", "h_im", "flag"]
    return header, rows, {}, {}, False


def _run_ortho(cfg):
    pair = _the_pair(cfg)
    mt = circle_moments(pair, cfg["n_max"], cfg["r"], cfg["s"])
    rows, failed = [], False
    for n in _sweep(cfg):
        row = {"n": n, "flag": ""}
        try:
            res = ortho_poly(mt, n)
        except SingularSystemError:
            row["flag"] = "singular"
            rows.append(row)
            continue
        _put(row, "h", res.h)
        row["moment_gap"] = abs(res.h - res.h_moment)
        row["solve_residual"] = res.solve_residual
        row["cond"] = res.cond
        row["ortho_residual"] = ortho_residual(res, pair)
        rows.append(row)
    header = ["n", "h_re", "h_im", "moment_gap", "solve_residual", "cond",
              "ortho_residual", "flag"]
    return header, rows, {}, {}, failed


def _run_asym(cfg):
    pair = _the_pair(cfg)
    mf = model_field(pair)
    lad = _exact_ladder(cfg, cfg["n_max"])
    sweep = _sweep(cfg)
    n_values = sorted({m for n in sweep for m in (n - 1, n)} - {-1})
    radii = _radii(cfg, pair, toward=0.75)
    rt = R_entries(mf, n_values, radii=radii, N=512)
    rows, failed, rels = [], False, []
    for n in sweep:
        row = {"n": n, "flag": ""}
        _put(row, "E", rt.E_at(n))
        if lad[n] == 0 or lad[n - 1] == 0:
            row["flag"] = "singular"
            rows.append(row)
            continue
        h_exact = lad[n] / lad[n - 1]
        _put(row, "h_exact", h_exact)
        try:
            h_a = asymptotics.h_asym(mf, rt, n)
        except AsymptoticError:
            row["flag"] = "E=0; skipped"
            failed = True
            rows.append(row)
            continue
        _put(row, "h_asym", h_a)
        rel = abs(h_exact / h_a - 1.0)
        row["rel_err"] = rel
        rels.append((n, rel))
        rows.append(row)
    header = ["n", "h_exact_re", "h_exact_im", "h_asym_re", "h_asym_im",
              "rel_err", "E_re", "E_im", "flag"]
    summary = {"radii": list(radii), "r0": max(radii[0], 1.0 / radii[1])}
    invariants = {}
    if len(rels) >= 2:
        ns = [n for n, _ in rels]
        slope, intercept = _fit_line(ns, np.log([r for _, r in rels]))
        summary["c1_fit"] = -slope
        summary["error_prefactor_fit"] = float(np.exp(intercept))
        diffs = np.diff([r for _, r in rels])
        invariants["h_rel_error_slope_negative"] = _invariant(
            slope, 0.0, larger_is_fail=True)
        invariants["h_rel_error_monotone"] = {
            "value": int(np.sum(diffs > 0)), "threshold": 0,
            "pass": bool(np.all(diffs <= 0))}
        invariants["h_rel_error_final"] = _invariant(rels[-1][1], 5e-2)
    return header, rows, summary, invariants, failed


def _run_verify_model(cfg):
    pair = _the_pair(cfg)
    mf = model_field(pair)
    out = verify_model_jump(mf)
    sweep = _sweep(cfg)
    radii = _radii(cfg, pair)
    rt = R_entries(mf, sorted(set(sweep) | {n - 1 for n in sweep} - {-1}),
                   radii=radii, N=512)
    W = involution_matrix()
    rows, sig3 = [], []
    for n in sweep:
        P = P_asym(mf, rt, n)
        sv = np.linalg.svd(P @ W - np.eye(4), compute_uv=False)
        sol = solve_C_from_P(P)
        row = {"n": n, "sigma3": float(sv[2]), "sigma4": float(sv[3]),
               "doubled_det": abs(sol.doubled_det), "flag": ""}
        _put(row, "E", rt.E_at(n))
        rows.append(row)
        sig3.append(float(sv[2]))
    header = ["n", "E_re", "E_im", "sigma3", "sigma4", "doubled_det", "flag"]
    gxw_sv, _ = rank_GXW(pair)
    invariants = {
        "model_jump": _invariant(out["jump"], 1e-9),
        "J23": _invariant(out["J23"], 1e-11),
        "det_deviation": _invariant(out["det_deviation"], 1e-10),
        "at_zero_drift": _invariant(out["at_zero_drift"], 1e-2),
        "far_field_times_z_bounded": _invariant(
            max(out["far_field"].values()), 1e3),
        "R_doubling": _invariant(rt.doubling_rel, 1e-11),
        "shift_identity": _invariant(shift_identity_residual(rt), 1e-12),
        "rank_GXW_sigma34": _invariant(max(gxw_sv[2], gxw_sv[3]), 1e-12),
        "P_sigma3_decreasing": {
            "value": sig3, "threshold": None,
            "pass": bool(np.all(np.diff(sig3) < 0))},
    }
    summary = {"far_field": {f"{k:g}": float(v)
                             for k, v in out["far_field"].items()},
               "radii": list(radii), "r0": max(radii[0], 1.0 / radii[1])}
    return header, rows, summary, invariants, False


def _run_interval(cfg):
    phi = _circle_symbol(cfg["phi"])
    iw = _interval_weight(cfg)
    r = cfg["r"]
    mt = interval_moment_table(phi, iw, cfg["n_max"], r)
    lad = det_ladder(mt, cfg["n_max"] + 1, dps=_dps(cfg))
    rows, failed = [], False
    for n in _sweep(cfg):
        row = {"n": n, "flag": ""}
        _put(row, "D", lad[n])
        row["sign_D"] = _sign_of(lad[n])
        if lad[n] == 0 or lad[n + 1] == 0:
            row["flag"] = "singular"
            rows.append(row)
            continue
        res = ortho_poly(mt, n)
        _put(row, "h", res.h)
        row["ladder_rel"] = abs(res.h * lad[n] - lad[n + 1]) / abs(lad[n + 1])
        rows.append(row)
    header = ["n", "D_re", "D_im", "sign_D", "h_re", "h_im", "ladder_rel",
              "flag"]

    uf = u_field(iw)
    frac = np.array([0.25, 0.5, 0.75])
    x = iw.a + (iw.b - iw.a) * frac
    y = 1.0 / iw.b + (1.0 / iw.a - 1.0 / iw.b) * frac
    u_resid = verify_u_jump(uf, x)
    ut_resid = verify_ut_jump(uf, y)
    pair_eff, unimodular = model_pair(phi, uf)
    z16 = np.exp(2j * np.pi * (np.arange(16) + 0.31) / 16)
    theta_gap = float(np.max(np.abs(
        build_J_Theta(phi, uf, z16) - asymptotics.build_J_Lambda(pair_eff, z16))))
    applicable = unimodular <= cfg["unimodular_threshold"]
    summary = {"unimodular_residual": unimodular,
               "asym_applicable": bool(applicable),
               "unimodular_threshold": cfg["unimodular_threshold"]}
    if applicable:
        try:
            mf = model_field(pair_eff)
            rt = R_entries(mf, [cfg["n_max"] - 1, cfg["n_max"]])
            summary["h_asym_at_n_max"] = asymptotics.h_asym(
                mf, rt, cfg["n_max"])
        except (ModelError, AsymptoticError, ResolutionError) as exc:
            summary["h_asym_at_n_max"] = f"failed: {exc}"
    ladder_rels = [row.get("ladder_rel", 0.0) for row in rows]
    invariants = {
        "u_plemelj": _invariant(u_resid, 1e-6),
        "ut_plemelj": _invariant(ut_resid, 1e-6),
        "theta_vs_lambda": _invariant(theta_gap, 1e-12),
        "ladder": _invariant(max(ladder_rels), 1e-9),
    }
    return header, rows, summary, invariants, failed


def _run_example(cfg):
    p = cfg["pair"]
    params = ExampleParams(a=p["a"], b=p["b"], alpha=p["alpha"], a1=p["a1"],
                           b1=p["b1"], alpha1=p["alpha1"])
    pair = params.pair()
    mf = model_field(pair)
    mt = circle_moments(pair, cfg["n_max"], 1, 1)
    lad = _exact_ladder(cfg, cfg["n_max"])
    sweep = _sweep(cfg)
    radii = _radii(cfg, pair)
    rt = R_entries(mf, sorted({m for n in sweep for m in (n - 1, n)}),
                   radii=radii, N=1024)

    order = cfg["kappa_order"]
    kap = kappa(params, order=order)
    kap2 = kappa(params, order=2 * order)
    kap_end = kappa_endpoint(params, mf)

    rows, failed = [], False
    ratio_disp, ratio_end, logE = [], [], []
    for n in sweep:
        row = {"n": n, "flag": ""}
        E = rt.E_at(n)
        _put(row, "E", E)
        row["sign_D"] = _sign_of(lad[n])
        if E == 0:
            row["flag"] = "E=0; skipped"
            failed = True
            rows.append(row)
            continue
        logE.append((n, float(np.log(abs(E)))))
        rd = E / E_asym_example(params, n, kap)
        re_ = E / E_asym_example(params, n, kap_end)
        _put(row, "ratio_display", rd)
        row["n_ratio_gap_display"] = n * abs(rd - 1.0)
        row["n_ratio_gap_endpoint"] = n * abs(re_ - 1.0)
        ratio_disp.append(n * abs(rd - 1.0))
        ratio_end.append(n * abs(re_ - 1.0))
        if lad[n] != 0 and lad[n - 1] != 0:
            h_exact = lad[n] / lad[n - 1]
            _put(row, "h_exact", h_exact)
            h_a = asymptotics.h_asym(mf, rt, n)
            _put(row, "h_asym", h_a)
            row["rel_err"] = abs(h_exact / h_a - 1.0)
        rows.append(row)
    header = ["n", "sign_D", "E_re", "E_im", "ratio_display_re",
              "ratio_display_im", "n_ratio_gap_display",
              "n_ratio_gap_endpoint", "h_exact_re", "h_exact_im",
              "h_asym_re", "h_asym_im", "rel_err", "flag"]

    ns = [n for n, _ in logE]
    vals = [v for _, v in logE]
    slope_raw, _ = _fit_line(ns, vals)
    slope_model, _, _ = _fit_decay_with_log(ns, vals)
    log_b1 = float(np.log(params.b1))

    n_top = sweep[-1]
    h_top = lad[n_top] / lad[n_top - 1]
    h_limit = -params.b1 * (n_top / (n_top - 1.0)) ** (params.alpha1 - 1.0)
    sign_run = [_sign_of(lad[n])
                for n in range(max(cfg["n_min"], 20), min(cfg["n_max"], 32) + 1)]
    alternating = (len(sign_run) < 2
                   or all(a == -b for a, b in zip(sign_run, sign_run[1:])))

    c24 = {}
    for n in (8, 16, 24):
        if n <= cfg["n_max"]:
            c_ex = exact_C(pair, mt, n)
            c_as = asymptotics.C24_asym(mf, rt, n) if n in rt.n_values \
                else asymptotics.C24_asym(mf, R_entries(mf, [n], radii=radii),
                                          n)
            c24[n] = [abs(c_ex[1] / c_as[0] - 1.0),
                      abs(c_ex[3] / c_as[1] - 1.0)]

    summary = {
        "kappa_display": [float(np.real(kap)), float(np.imag(kap))],
        "kappa_doubling": abs(kap - kap2),
        "kappa_endpoint": float(np.real(kap_end)),
        "E_decay_slope_model": slope_model,
        "E_decay_slope_raw": slope_raw,
        "log_b1": log_b1,
        "h_at_n_max": [float(np.real(h_top)), float(np.imag(h_top))],
        "h_limit_formula": h_limit,
        "C24_rel_by_n": {str(k): v for k, v in sorted(c24.items())},
        "radii": list(radii), "r0": max(radii[0], 1.0 / radii[1]),
    }
    invariants = {
        "kappa_stability": _invariant(abs(kap - kap2), 1e-10),
        "kappa_display_imag_nonzero": _invariant(
            abs(float(np.imag(kap))), 1e-6, larger_is_fail=False),
        "E_decay_slope_model_within_2pct": _invariant(
            abs(slope_model / log_b1 - 1.0), 0.02),
        "E_decay_slope_raw_within_2pct": _invariant(
            abs(slope_raw / log_b1 - 1.0), 0.02),
        "E_ratio_bounded_display_kappa": {
            "value": ratio_disp, "threshold": None,
            "pass": bool(ratio_disp and ratio_disp[-1] <= 2 * ratio_disp[0])},
        "E_ratio_bounded_endpoint_kappa": {
            "value": ratio_end, "threshold": None,
            "pass": bool(ratio_end and ratio_end[-1] <= 2 * ratio_end[0])},
        "h_vs_limit_formula": _invariant(abs(h_top / h_limit - 1.0), 1e-2),
        "sign_D_alternates": {"value": sign_run, "threshold": None,
                              "pass": bool(alternating)},
    }
    return header, rows, summary, invariants, failed


def _run_charpoly(cfg):
    w_sym = _circle_symbol(cfg["w"])
    rows, gaps = [], []
    for n in _sweep(cfg):
        for lam in cfg["lambdas"]:
            direct, via = charpoly_identity(w_sym, lam, n)
            gap = abs(direct - via) / max(abs(direct), 1e-300)
            row = {"n": n, "lambda": float(lam), "rel_gap": gap, "flag": ""}
            _put(row, "direct", direct)
            _put(row, "via_th", via)
            rows.append(row)
            gaps.append(gap)
    header = ["n", "lambda", "direct_re", "direct_im", "via_th_re",
              "via_th_im", "rel_gap", "flag"]
    invariants = {"charpoly_identity": _invariant(max(gaps), 1e-10)}
    return header, rows, {}, invariants, False


_DISPATCH = {"coeffs": _run_coeffs, "dets": _run_dets, "ortho": _run_ortho,
             "asym": _run_asym, "verify-model": _run_verify_model,
             "interval": _run_interval, "example": _run_example,
             "charpoly": _run_charpoly}


# ---------------------------------------------------------------------------
# serialization

def _fmt_cell(x):
    if isinstance(x, str):
        return x
    if isinstance(x, (bool, np.bool_)):
        return str(bool(x))
    if isinstance(x, (int, np.integer)):
        return str(int(x))
    return f"{float(x):.17g}"


def _write_csv(path, header, rows):
    with open(path, "w") as f:
        f.write(",".join(header) + "\n")
        for row in rows:
            f.write(",".join(_fmt_cell(row.get(c, "")) for c in header) + "\n")


def _jsonable(obj):
    if isinstance(obj, dict):
        return {str(k): _jsonable(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [_jsonable(v) for v in obj]
    if isinstance(obj, (bool, np.bool_)):
        return bool(obj)
    if isinstance(obj, (int, np.integer)):
        return int(obj)
    if isinstance(obj, (float, np.floating)):
        return float(obj)
    if isinstance(obj, (complex, np.complexfloating)):
        return [float(np.real(obj)), float(np.imag(obj))]
    if isinstance(obj, np.ndarray):
        return [_jsonable(v) for v in obj.tolist()]
    return obj


def _write_json(path, payload):
    with open(path, "w") as f:
        json.dump(_jsonable(payload), f, indent=2, sort_keys=True)
        f.write("\n")


def run(config, out_dir="."):
    """Validate, execute, and write report.csv/summary.json/invariants.json.

    Returns the process exit code (0 ok, 2 invalid config, 3 resolution
    failure).  On validation failure nothing is written.
    """
    from . import __version__
    cfg = effective_config(config)
    violations = validate(cfg)
    if violations:
        for v in violations:
            print(f"config: {v}", file=sys.stderr)
        return 2
    t0 = time.perf_counter()
    failed = False
    try:
        header, rows, summary, invariants, failed = _DISPATCH[cfg["mode"]](cfg)
    except (ResolutionError, BranchError, SingularSystemError, ModelError,
            SolvabilityError, AsymptoticError, CutProximityError) as exc:
        header, rows = ["flag"], [{"flag": f"{type(exc).__name__}: {exc}"}]
        summary = {"error": f"{type(exc).__name__}: {exc}"}
        invariants = {}
        failed = True
    os.makedirs(out_dir, exist_ok=True)
    _write_csv(os.path.join(out_dir, "report.csv"), header, rows)
    _write_json(os.path.join(out_dir, "summary.json"),
                {"config": cfg, "version": __version__, "summary": summary})
    _write_json(os.path.join(out_dir, "invariants.json"), invariants)
    print(f"[timing] mode={cfg['mode']}: {time.perf_counter() - t0:.2f} s",
          file=sys.stderr)
    return 3 if failed else 0
