"""Toric crepant resolutions from consistent dimer models.

Computes perfect matchings and the lattice polygon, the fan of the stable
moduli space, tautological divisor labels, GIT chamber walls, and the full
per-vertex classification of the derived transforms of the vertex simples.
"""

from .model import (Arrow, DimerModel, DimerError, Face, FTermRelation,
                    f_term_relations, opposite_model, parse_dimer,
                    serialize_dimer, validate_dimer, vertex_rotation)
from .matchings import (HomologyBasis, MatchingPoint, PerfectMatching, Polygon,
                        enumerate_perfect_matchings, homology_basis,
                        matching_points_and_polygon, weak_path_degree)
from .moduli import (Fan, NonGenericTheta, Stability, StabilityParam,
                     TorusInvariantModule, build_fan, chart_section_path,
                     is_stable_cosupport, orbit_module, origin_fibre,
                     socle_vertices, special_theta, stable_matchings)
from .divisors import (CurveData, LineBundleClass, TorusDivisor, arrow_label,
                       bundle_degree_on_curve, common_zero_support,
                       curve_intersection_data, divisor_gcd, divisor_lcm,
                       divisor_difference, is_minus1_minus1, is_principal,
                       line_bundle_class, path_label)
from .reid import (Chamber, CrossCheckError, PsiReport, Wheel, WallInfo,
                   build_wheel, chamber_and_walls, classify_psi, h0_support,
                   h2_divisor, hminus1_support, opposite_dimer_check,
                   psi_zero_vertex, transposition_order)
from .fixtures import load_fixture

__all__ = [n for n in dir() if not n.startswith("_")]
__version__ = "0.1.0"
