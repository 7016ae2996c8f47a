"""Coefficient backends.

Two scalar backends are supported:

* ``"exact"``: :class:`fractions.Fraction`, always in lowest terms.
* ``"complex"``: :class:`mpmath.mpc` at the ambient mpmath working precision
  (at least 64 bits is expected by the numerical modules).

Plain Python numbers are coerced on entry.
"""

from __future__ import annotations

import math
from fractions import Fraction
from numbers import Rational

import mpmath

from .errors import BackendMismatch, SchemaError

EXACT = "exact"
COMPLEX = "complex"
BACKENDS = (EXACT, COMPLEX)

MIN_COMPLEX_BITS = 64


def backend_of(x) -> str:
    if isinstance(x, (Rational, int)):
        return EXACT
    if isinstance(x, (mpmath.mpc, mpmath.mpf, complex, float)):
        return COMPLEX
    raise TypeError(f"unsupported scalar type {type(x).__name__}")


def coerce(x, backend: str):
    """Convert ``x`` to the canonical type of ``backend``.

    Exact values may be promoted to complex; the reverse raises.
    """
    if backend == EXACT:
        if isinstance(x, Fraction):
            return x
        if isinstance(x, (int, Rational)) and not isinstance(x, bool):
            return Fraction(x)
        if isinstance(x, str):
            return Fraction(x)
        raise BackendMismatch(f"cannot use {x!r} as an exact rational")
    if backend == COMPLEX:
        if isinstance(x, mpmath.mpc):
            return x
        if isinstance(x, Fraction):
            return mpmath.mpc(mpmath.mpf(x.numerator) / x.denominator)
        return mpmath.mpc(x)
    raise ValueError(f"unknown backend {backend!r}")


def zero(backend: str):
    return Fraction(0) if backend == EXACT else mpmath.mpc(0)


def one(backend: str):
    return Fraction(1) if backend == EXACT else mpmath.mpc(1)


def is_zero(x, tol=0) -> bool:
    if isinstance(x, Fraction):
        return x == 0
    return abs(x) <= tol


def exact_sqrt(q: Fraction):
    """Rational square root of ``q`` or ``None`` if ``q`` is not a square."""
    if q < 0:
        return None
    n, d = q.numerator, q.denominator
    rn, rd = math.isqrt(n), math.isqrt(d)
    if rn * rn == n and rd * rd == d:
        return Fraction(rn, rd)
    return None


def _mpf_digits(x: mpmath.mpf) -> int:
    # enough digits to reparse to the same value at the working precision
    bits = max(x._mpf_[3], mpmath.mp.prec)
    return max(1, math.ceil(bits * math.log10(2)) + 2)


def real_to_str(x) -> str:
    """Decimal string that reparses to the same binary value at its precision."""
    x = mpmath.mpf(x)
    if not x:
        return "0"
    return mpmath.libmp.to_str(x._mpf_, _mpf_digits(x))


def to_json(x):
    if isinstance(x, Fraction):
        return f"{x.numerator}/{x.denominator}"
    x = coerce(x, COMPLEX)
    return [real_to_str(x.real), real_to_str(x.imag)]


def from_json(obj):
    if isinstance(obj, str):
        try:
            return Fraction(obj)
        except (ValueError, ZeroDivisionError) as exc:
            raise SchemaError(f"bad rational {obj!r}") from exc
    if isinstance(obj, int) and not isinstance(obj, bool):
        return Fraction(obj)
    if isinstance(obj, (list, tuple)) and len(obj) == 2:
        try:
            return mpmath.mpc(mpmath.mpf(obj[0]), mpmath.mpf(obj[1]))
        except (ValueError, TypeError) as exc:
            raise SchemaError(f"bad complex {obj!r}") from exc
    raise SchemaError(f"unrecognised scalar {obj!r}")
