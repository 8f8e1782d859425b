"""Exact and certified summation of formal power series at 1.

Series are lazy and exact over Q; summers return a three-way verdict
(Summed, NotInDomain, Inconclusive) with a witness; extensions build the
telescopic, multiplicative and rational closures of a base summer.
"""

from .arith import Codomain, PAdicValue, ApproxReal, Q, R, Z, padic_embed
from .errors import SummaError
from .extensions import (ProductExpression, consistency_report, grade_lower_bound, mult_extension_sum,
                         norlund_mean, rational_extension_sum, telescope_sum)
from .fixtures import fixture
from .kernels import BACKEND
from .lang import evaluate, parse
from .outcome import SummationOutcome, Verdict
from .poly import Polynomial, RationalFunction
from .recurrence import fit_linear_recurrence, rational_reconstruct
from .series import Series
from .summers import DEFAULT, METHODS, SummerConfig, run_summer

__version__ = "0.1.0"

__all__ = [
    "ApproxReal", "BACKEND", "Codomain", "DEFAULT", "METHODS", "PAdicValue", "Polynomial", "ProductExpression",
    "Q", "R", "RationalFunction", "Series", "SummaError", "SummationOutcome", "SummerConfig", "Verdict", "Z",
    "consistency_report", "evaluate", "fit_linear_recurrence", "fixture", "grade_lower_bound",
    "mult_extension_sum", "norlund_mean", "padic_embed", "parse", "rational_extension_sum",
    "rational_reconstruct", "run_summer", "telescope_sum",
]
