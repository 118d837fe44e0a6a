"""T-adic L-functions and Iwasawa invariants of Artin-Schreier-Witt towers over P^1."""

__version__ = "0.1.0"

from .errors import CheckFailed, PrecisionError, SpecError, TowerError
from .ff import FieldCtx, build_field, closed_points, monic_irreducibles
from .padic import CycloRing, PadicInt, UnramRing, cyclo_substitute, cyclo_valuation, teichmuller, trace_to_zp
from .tseries import BiSeries, TSeries, binomial_power, euler_expand, ts_inverse, weierstrass_prepare
from .tower import (
    TowerSpec, as_cover_affine_count, frobenius_value, frobenius_values, layer_one_zeta_oracle,
    load_spec, make_spec, spec_to_dict,
)
from .lfun import (
    ClassicalL, NewtonPolygon, TadicL, ZpPoly, class_number_valuation, conjugate_product,
    l_at_one, l_rho_at_one, layer_zeta, newton_polygon, ramification_lower_bound, specialize, tadic_l,
)
from .iwasawa import (
    IwasawaInvariants, VerificationReport, invariants_from_fit, invariants_from_prep,
    scan_family, verify_theorem,
)

__all__ = [
    "CheckFailed", "PrecisionError", "SpecError", "TowerError", "FieldCtx", "build_field",
    "closed_points", "monic_irreducibles", "CycloRing", "PadicInt", "UnramRing", "cyclo_substitute",
    "cyclo_valuation", "teichmuller", "trace_to_zp", "BiSeries", "TSeries", "binomial_power",
    "euler_expand", "ts_inverse", "weierstrass_prepare", "TowerSpec", "as_cover_affine_count",
    "frobenius_value", "frobenius_values", "layer_one_zeta_oracle", "load_spec", "make_spec",
    "spec_to_dict", "ClassicalL", "NewtonPolygon", "TadicL", "ZpPoly", "class_number_valuation",
    "conjugate_product", "l_at_one", "l_rho_at_one", "layer_zeta", "newton_polygon",
    "ramification_lower_bound", "specialize", "tadic_l",
    "IwasawaInvariants", "VerificationReport", "invariants_from_fit", "invariants_from_prep", "scan_family",
    "verify_theorem",
]
