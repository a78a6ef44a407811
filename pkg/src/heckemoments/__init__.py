"""Residue symbols, Gauss sums and first moments of Hecke L-values over Z[i] and Z[w]."""

__version__ = "0.1.0"

from .fields import QI, QW, FracQuad, QuadInt, get_field, parse_quadint  # noqa: E402
from .gauss import ComplexVal, gauss_sum_g, rational_gauss_sum, root_number  # noqa: E402
from .lfunc import (  # noqa: E402
    LValueRecord,
    dirichlet_L_central,
    dirichlet_L_via_hurwitz,
    enumerate_ideals,
    functional_equation_residual,
    hecke_L_central_order_n,
    hecke_L_central_quadratic,
)
from .moments import MomentReport, moment, patterson_diagnostic, predicted_constant  # noqa: E402
from .primes import PrimeElement, enumerate_prime_elements, factor  # noqa: E402
from .symbols import DirichletChar, residue_symbol  # noqa: E402

__all__ = [
    "QI",
    "QW",
    "QuadInt",
    "FracQuad",
    "get_field",
    "parse_quadint",
    "ComplexVal",
    "gauss_sum_g",
    "rational_gauss_sum",
    "root_number",
    "LValueRecord",
    "enumerate_ideals",
    "hecke_L_central_quadratic",
    "hecke_L_central_order_n",
    "functional_equation_residual",
    "dirichlet_L_central",
    "dirichlet_L_via_hurwitz",
    "MomentReport",
    "moment",
    "patterson_diagnostic",
    "predicted_constant",
    "PrimeElement",
    "enumerate_prime_elements",
    "factor",
    "DirichletChar",
    "residue_symbol",
]
