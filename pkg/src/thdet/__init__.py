"""Toeplitz+Hankel determinants, orthogonal polynomials, and their asymptotics.

Two independent pipelines share the symbol layer: an exact one (moment
tables, determinant ladders, orthogonal polynomials, the 4 x 4 matrix
field built from them) and an asymptotic one (Szego functions, the model
4 x 4 solution, small-norm contour integrals).  Agreement between them is
the library's main correctness check; the `runner`/`cli` modules drive
both from JSON configs.
"""

__version__ = "0.1.0"

from .symbols import (AnalyticSymbol, BranchError, CircleGrid, FourierCoeffs,
                      ResolutionError, SymbolPair, build_d_product,
                      build_rational_power, constant_symbol,
                      fourier_coeffs_auto, safe_annulus, symbol_product,
                      symbol_scale)
from .szego import (CauchyField, LogBoundary, SzegoData, WindingError,
                    cauchy_field_from_samples, continuous_log, eval_cauchy,
                    eval_szego, rho_field, szego_data, szego_from_symbol)
from .orthopoly import (MomentTable, OrthoResult, SingularSystemError, YField,
                        build_Y, charpoly_identity, circle_moments,
                        det_ladder, exact_C, ortho_poly, ortho_residual,
                        poly_det_rep, rank_GXW, th_det, verify_Y)
from .asymptotics import (AsymptoticError, ExampleParams, ModelError, RTable,
                          SolvabilityError, C24_asym, E_asym_example, P_asym,
                          R_entries, build_J_Lambda, h_asym, kappa,
                          kappa_endpoint, model_field, poly_asym,
                          shift_identity_residual, solve_C_from_P,
                          verify_model_jump)
from .interval import (CutProximityError, IntervalWeight, build_interval_Y,
                       build_J_Theta, cauchy_segment, interval_moments,
                       interval_moment_table, interval_ortho,
                       interval_ortho_residual, model_pair, u_field,
                       verify_interval_Y, verify_u_jump, verify_ut_jump)
from .runner import effective_config, run, validate
