"""Finite Ramanujan expansions and shifted convolution sums of arithmetic functions."""

__version__ = "0.1.0"

from .sieve import (  # noqa: E402
    EXACT, FLOAT, ArithTable, SieveTables, build_sieve, dirichlet_convolve,
    divisors, mobius_invert, sigma_minus_one,
)
from .ramanujan import (  # noqa: E402
    RamanujanRow, cr_row, lemma1_indicator, ramanujan_sum, ramanujan_sum_direct,
)
from .expansion import (  # noqa: E402
    FiniteExpansion, dual_invert, evaluate, expansion_coeffs, truncate_support,
)
from .families import FamilySpec, build_fprime, load_custom, parse_family  # noqa: E402
from .convolution import (  # noqa: E402
    ConvolutionProblem, ConvolutionReport, brute_force, double_expansion,
    main_term, report, singular_series, theorem_bound,
)
from .decay import (  # noqa: E402
    DecayFit, SweepResult, error_sweep, fit_decay, ingham_check,
    lemma2_backward_check, lemma2_forward_check,
)

__all__ = [
    "__version__",
    "EXACT", "FLOAT", "ArithTable", "SieveTables", "build_sieve", "dirichlet_convolve",
    "divisors", "mobius_invert", "sigma_minus_one",
    "RamanujanRow", "cr_row", "lemma1_indicator", "ramanujan_sum", "ramanujan_sum_direct",
    "FiniteExpansion", "dual_invert", "evaluate", "expansion_coeffs", "truncate_support",
    "FamilySpec", "build_fprime", "load_custom", "parse_family",
    "ConvolutionProblem", "ConvolutionReport", "brute_force", "double_expansion",
    "main_term", "report", "singular_series", "theorem_bound",
    "DecayFit", "SweepResult", "error_sweep", "fit_decay", "ingham_check",
    "lemma2_backward_check", "lemma2_forward_check",
]
