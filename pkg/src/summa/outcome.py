"""Three-way verdicts, certificates and their JSON form."""

from __future__ import annotations

import enum
import json
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Any, Optional

import mpmath

from .arith import ApproxReal, PAdicValue
from .poly import Polynomial, RationalFunction

SCHEMA_VERSION = "summa-report/1"


class Verdict(enum.Enum):
    SUMMED = "Summed"
    NOT_IN_DOMAIN = "NotInDomain"
    INCONCLUSIVE = "Inconclusive"

    def __str__(self):
        return self.value


@dataclass
class SummationOutcome:
    """Result of one summation attempt.

    ``value`` is a Fraction (exact), an ApproxReal (numeric, with error bound)
    or a PAdicValue.  ``reason`` is set for the two negative verdicts and
    ``witness`` holds whatever lets the verdict be rechecked.
    """

    method: str
    verdict: Verdict
    value: Any = None
    reason: str = ""
    params: dict = field(default_factory=dict)
    witness: dict = field(default_factory=dict)

    @property
    def summed(self) -> bool:
        return self.verdict is Verdict.SUMMED

    @property
    def exact(self) -> bool:
        return isinstance(self.value, Fraction)

    def approx(self) -> mpmath.mpf:
        """Real value as an mpf (exact values converted at 128 bits)."""
        v = self.value
        if isinstance(v, Fraction):
            return mpmath.mpf(v.numerator) / v.denominator
        if isinstance(v, ApproxReal):
            return v.value
        raise TypeError("outcome has no real value")

    def error_bound(self) -> mpmath.mpf:
        v = self.value
        if isinstance(v, ApproxReal):
            return v.error
        return mpmath.mpf(0)

    def close_to(self, target, tol) -> bool:
        """Whether the value lies within ``tol`` of ``target`` (real values only)."""
        if not self.summed:
            return False
        if isinstance(target, Fraction) and isinstance(self.value, Fraction):
            return abs(self.value - target) <= Fraction(tol)
        t = target if not isinstance(target, Fraction) else mpmath.mpf(target.numerator) / target.denominator
        return abs(self.approx() - t) <= tol

    def to_json(self) -> dict:
        return {
            "schema": SCHEMA_VERSION,
            "method": self.method,
            "params": jsonable(self.params),
            "verdict": self.verdict.value,
            "value": value_json(self.value) if self.summed else None,
            "reason": self.reason or None,
            "witness": jsonable(self.witness),
        }

    def render(self) -> str:
        head = f"{self.method}: {self.verdict.value}"
        if self.summed:
            head += f"  {format_value(self.value)}"
        elif self.reason:
            head += f"  ({self.reason})"
        return head


def summed(method, value, params=None, **witness) -> SummationOutcome:
    return SummationOutcome(method, Verdict.SUMMED, value, "", dict(params or {}), witness)


def not_in_domain(method, reason, params=None, **witness) -> SummationOutcome:
    return SummationOutcome(method, Verdict.NOT_IN_DOMAIN, None, reason, dict(params or {}), witness)


def inconclusive(method, reason, params=None, **witness) -> SummationOutcome:
    return SummationOutcome(method, Verdict.INCONCLUSIVE, None, reason, dict(params or {}), witness)


def _mp_str(x, digits=30) -> str:
    return mpmath.nstr(x, digits, min_fixed=-5, max_fixed=5)


def format_value(v) -> str:
    if isinstance(v, Fraction):
        return str(v)
    if isinstance(v, ApproxReal):
        return f"{_mp_str(v.value, 20)} ± {mpmath.nstr(v.error, 3)}"
    if isinstance(v, PAdicValue):
        guess = v.rational_guess()
        if v.is_zero:
            return f"≡ 0 mod {v.prime}^{v.precision}"
        shown = str(guess) if guess is not None else f"{v.prime}^{v.valuation}*{v.unit}"
        return f"≡ {shown} mod {v.prime}^{v.absolute_precision}"
    return str(v)


def value_json(v) -> Optional[dict]:
    if v is None:
        return None
    if isinstance(v, Fraction):
        return {"exact": str(v)}
    if isinstance(v, ApproxReal):
        return {"approx": _mp_str(v.value, 40), "error_bound": mpmath.nstr(v.error, 6)}
    if isinstance(v, PAdicValue):
        guess = v.rational_guess()
        return {
            "padic": {
                "prime": v.prime,
                "valuation": None if v.is_zero else v.valuation,
                "unit": v.unit,
                "precision": v.precision,
                "absolute_precision": v.absolute_precision,
            },
            "congruent_to": None if guess is None else str(guess),
        }
    return {"repr": str(v)}


def jsonable(x):
    """Convert witness data (Fractions, polynomials, nested containers) to JSON types."""
    if x is None or isinstance(x, (bool, int, str)):
        return x
    if isinstance(x, float):
        return x
    if isinstance(x, Fraction):
        return str(x)
    if hasattr(x, "_mpf_"):
        return _mp_str(mpmath.mp.make_mpf(x._mpf_), 30)
    if isinstance(x, Polynomial):
        return {"coefficients": [str(c) for c in x.coeffs], "text": str(x)}
    if isinstance(x, RationalFunction):
        return {"numerator": jsonable(x.num), "denominator": jsonable(x.den)}
    if isinstance(x, (ApproxReal, PAdicValue)):
        return value_json(x)
    if isinstance(x, SummationOutcome):
        return x.to_json()
    if isinstance(x, dict):
        return {str(k): jsonable(v) for k, v in x.items()}
    if isinstance(x, (list, tuple, set, frozenset)):
        return [jsonable(v) for v in x]
    if isinstance(x, enum.Enum):
        return x.value
    return str(x)


# JSON Schema for a single report object; the CLI wraps lists of these.
REPORT_SCHEMA = {
    "$schema": "https://json-schema.org/draft/2020-12/schema",
    "type": "object",
    "required": ["schema", "method", "params", "verdict", "value", "witness"],
    "properties": {
        "schema": {"const": SCHEMA_VERSION},
        "method": {"type": "string"},
        "params": {"type": "object"},
        "verdict": {"enum": [v.value for v in Verdict]},
        "value": {
            "oneOf": [
                {"type": "null"},
                {"type": "object", "required": ["exact"], "properties": {"exact": {"type": "string"}}},
                {"type": "object", "required": ["approx", "error_bound"],
                 "properties": {"approx": {"type": "string"}, "error_bound": {"type": "string"}}},
                {"type": "object", "required": ["padic", "congruent_to"]},
            ]
        },
        "reason": {"type": ["string", "null"]},
        "witness": {"type": "object"},
    },
}


def dumps(obj) -> str:
    return json.dumps(jsonable(obj), indent=2, sort_keys=False)


# Every CLI command prints one envelope; "reports" holds REPORT_SCHEMA objects.
ENVELOPE_SCHEMA = {
    "$schema": "https://json-schema.org/draft/2020-12/schema",
    "type": "object",
    "required": ["schema", "command"],
    "properties": {
        "schema": {"const": SCHEMA_VERSION},
        "command": {"enum": ["sum", "telescope", "mult", "rational", "norlund", "compare", "coeffs",
                             "fixtures-list", "fixtures-run-all"]},
        "input": {},
        "reports": {"type": "array", "items": REPORT_SCHEMA},
        "coefficients": {"type": "array", "items": {"type": "string"}},
        "fixtures": {"type": "array", "items": {
            "type": "object", "required": ["name", "note", "expression"]}},
        "results": {"type": "array", "items": {
            "type": "object", "required": ["criterion", "title", "passed", "detail", "seconds", "budget"]}},
        "consistency": {"type": "object"},
        "error": {"type": "object", "required": ["kind", "message"]},
        "exit_code": {"type": "integer"},
    },
}
