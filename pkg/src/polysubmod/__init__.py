"""Exact polynomial algebra and unitary-equivalence decisions for polynomial submodules."""

from __future__ import annotations

__version__ = "0.1.0"

from .equivalence import (
    Certificate,
    EquivalenceVerdict,
    Multipliers,
    Verdict,
    modulus_equivalent,
    monomial_orbit_exponent,
    reflect,
    stable_free_part,
    torus_modulus_equal,
    unitarily_equivalent,
    unitarily_equivalent_principal,
)
from .errors import (
    AllZero,
    AlphaNotInB,
    CapabilityWarning,
    DivByZero,
    InvalidBeta,
    InvalidBeurlingForm,
    NotCoprime,
    NotDivisible,
    PointOutOfDomain,
    PolySubmodError,
    PolySyntaxError,
    ProductMismatch,
    UndecidedStability,
    VariableIndexError,
    ZeroPolynomial,
)
from .factor import Factor, FactoredPoly, factor, squarefree
from .ideal import (
    BeurlingForm,
    IdealGens,
    beurling_form,
    gcd,
    gcd_many,
    groebner,
    ideal_equal,
    ideal_member,
    normal_form,
)
from .parser import format_poly, parse, parse_exponent
from .poly_core import GaussianRational, Point, Polynomial, exponent, gr, var
from .stability import (
    StabilityVerdict,
    Status,
    count_roots_open_disk,
    has_zero_in_open_polydisk,
    is_zero_free,
    torus_sample,
)
from .weights import (
    CertificateReport,
    WeightSignature,
    WeightValue,
    bergman_parts,
    c_alpha,
    certificate_check,
    e_s,
    inner_product,
    kernel_eval,
    kernel_truncation,
    mc_norm_estimate,
    norm_sq,
    weight,
)

__all__ = [
    "AllZero",
    "AlphaNotInB",
    "bergman_parts",
    "beurling_form",
    "BeurlingForm",
    "c_alpha",
    "CapabilityWarning",
    "Certificate",
    "certificate_check",
    "CertificateReport",
    "count_roots_open_disk",
    "DivByZero",
    "e_s",
    "EquivalenceVerdict",
    "exponent",
    "factor",
    "Factor",
    "FactoredPoly",
    "format_poly",
    "GaussianRational",
    "gcd",
    "gcd_many",
    "gr",
    "groebner",
    "has_zero_in_open_polydisk",
    "ideal_equal",
    "ideal_member",
    "IdealGens",
    "inner_product",
    "InvalidBeta",
    "InvalidBeurlingForm",
    "is_zero_free",
    "kernel_eval",
    "kernel_truncation",
    "mc_norm_estimate",
    "modulus_equivalent",
    "monomial_orbit_exponent",
    "Multipliers",
    "norm_sq",
    "normal_form",
    "NotCoprime",
    "NotDivisible",
    "parse",
    "parse_exponent",
    "Point",
    "PointOutOfDomain",
    "Polynomial",
    "PolySubmodError",
    "PolySyntaxError",
    "ProductMismatch",
    "reflect",
    "squarefree",
    "StabilityVerdict",
    "stable_free_part",
    "Status",
    "torus_modulus_equal",
    "torus_sample",
    "UndecidedStability",
    "unitarily_equivalent",
    "unitarily_equivalent_principal",
    "var",
    "VariableIndexError",
    "Verdict",
    "weight",
    "WeightSignature",
    "WeightValue",
    "ZeroPolynomial",
]
