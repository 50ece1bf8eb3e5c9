"""Arithmetic of y^2 = x^3 + b x + t^(3^n+1) over F_{3^2n}(t).

Character sums and superelliptic point counts, the exact L-polynomial and
its analytic rank, Neron-Tate heights of explicit points, and the
sphere-packing density bounds of the narrow Mordell-Weil lattices.
"""

from .gf import (FieldCtx, FieldElement, Embedding, SizeGuardError, make_field,
                 legendre, embedding, embed, norm_map, trace_map, choose_b,
                 b_condition_holds)
from .funcfield import Poly, RatFn, parse_poly, format_poly
from .curve import (Curve, ECPoint, HeightEstimate, InfinityModel, LocalData,
                    DegreeCapError, naive_height, canonical_height, height_pairing,
                    infinity_model, tate_type_iv_check, reduce_at_infinity, is_narrow,
                    standard_curve, minimal_point, index_witness_point, known_points,
                    unity_scalars, conjugate_point, presentation_f9, on_curve)
from .counting import (ImageOracle, SumReport, ZetaReport, count_superelliptic,
                       kernel_count, image_membership, sigma, gamma_count, s_sum,
                       s_expected, zeta_report, place_sum, prime_experiment)
from .lseries import (LPoly, local_factor, l_from_sums, sums_from_l, expected_l,
                      analytic_rank, inverse_root_magnitudes, verify_rank_formula)
from .density import (Log2Form, CurveInvariants, DensityReport, invariants,
                      regulator_upper, min_norm_lower, center_density_lower,
                      density_table, narrow_vs_full_ratio, sha_regulator_constraint)

__version__ = "0.1.0"
