"""Truncated formal Laurent series with explicit precision bookkeeping.

A :class:`LaurentSeries` stores finitely many nonzero coefficients together
with ``known_through``: coefficients at exponents above it are *unknown*
(not zero).  ``known_through = inf`` marks an exact Laurent polynomial.

Precision propagation follows the usual rules for truncated series: a
product of ``a = O(z^(Ma+1))`` and ``b = O(z^(Mb+1))`` is known through
``min(Ma + val(b), Mb + val(a))``.  Operations that would silently use an
unknown coefficient raise :class:`InsufficientPrecision` instead.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Mapping

import mpmath

from . import scalars
from .errors import (
    BackendMismatch,
    InsufficientPrecision,
    NonzeroResidue,
    NotASquare,
    OddValuation,
    SchemaError,
)

INF = math.inf

#: relative precision used when inverting or taking roots of exact polynomials
DEFAULT_RELATIVE_PRECISION = 20


def _norm_bound(m):
    if m == INF:
        return INF
    if isinstance(m, float) and m.is_integer():
        return int(m)
    if not isinstance(m, int):
        raise TypeError(f"known_through must be an integer or inf, got {m!r}")
    return m


class LaurentSeries:
    """Immutable truncated Laurent series in ``z``."""

    __slots__ = ("_coeffs", "_known_through", "_backend", "_valuation")

    def __init__(self, coeffs: Mapping[int, object] | None = None,
                 known_through=INF, backend: str | None = None):
        coeffs = dict(coeffs or {})
        if backend is None:
            backend = scalars.EXACT
            for c in coeffs.values():
                if scalars.backend_of(c) == scalars.COMPLEX:
                    backend = scalars.COMPLEX
                    break
        if backend not in scalars.BACKENDS:
            raise ValueError(f"unknown backend {backend!r}")
        known_through = _norm_bound(known_through)
        clean = {}
        for e, c in coeffs.items():
            e = int(e)
            if e > known_through:
                continue
            c = scalars.coerce(c, backend)
            if c != 0:
                clean[e] = c
        object.__setattr__(self, "_coeffs", clean)
        object.__setattr__(self, "_known_through", known_through)
        object.__setattr__(self, "_backend", backend)
        object.__setattr__(self, "_valuation", min(clean) if clean else INF)

    def __setattr__(self, name, value):
        raise AttributeError("LaurentSeries is immutable")

    # -- constructors -----------------------------------------------------

    @classmethod
    def monomial(cls, exponent: int, coeff=1, known_through=INF, backend=None):
        return cls({exponent: coeff}, known_through, backend)

    @classmethod
    def zero(cls, known_through=INF, backend=scalars.EXACT):
        return cls({}, known_through, backend)

    @classmethod
    def from_list(cls, coeffs, valuation=0, known_through=None, backend=None):
        """Series whose coefficients, starting at ``valuation``, are ``coeffs``."""
        data = {valuation + i: c for i, c in enumerate(coeffs)}
        if known_through is None:
            known_through = INF
        return cls(data, known_through, backend)

    # -- accessors --------------------------------------------------------

    @property
    def valuation(self):
        """Lowest exponent with nonzero coefficient (``inf`` for zero)."""
        return self._valuation

    @property
    def known_through(self):
        return self._known_through

    @property
    def backend(self) -> str:
        return self._backend

    @property
    def coeffs(self) -> dict:
        return dict(self._coeffs)

    @property
    def is_exact(self) -> bool:
        return self._known_through == INF

    def is_zero(self) -> bool:
        return not self._coeffs

    @property
    def low(self):
        """Smallest exponent that may carry a nonzero coefficient."""
        if self._coeffs:
            return self._valuation
        return self._known_through + 1

    def __getitem__(self, e: int):
        if e > self._known_through:
            raise InsufficientPrecision(
                f"coefficient of z^{e} is unknown (known through {self._known_through})")
        return self._coeffs.get(e, scalars.zero(self._backend))

    coeff = __getitem__

    def items(self):
        return sorted(self._coeffs.items())

    # -- structural operations -------------------------------------------

    def truncate(self, known_through) -> "LaurentSeries":
        known_through = min(_norm_bound(known_through), self._known_through)
        return LaurentSeries(self._coeffs, known_through, self._backend)

    def shift(self, k: int) -> "LaurentSeries":
        """Multiply by the exact monomial ``z^k``."""
        return LaurentSeries({e + k: c for e, c in self._coeffs.items()},
                             self._known_through + k, self._backend)

    def drop_constant(self) -> "LaurentSeries":
        """Canonical representative in H' = H / C (zero constant term)."""
        return LaurentSeries({e: c for e, c in self._coeffs.items() if e != 0},
                             self._known_through, self._backend)

    def to_complex(self) -> "LaurentSeries":
        return LaurentSeries(self._coeffs, self._known_through, scalars.COMPLEX)

    def map_coeffs(self, fn) -> "LaurentSeries":
        return LaurentSeries({e: fn(c) for e, c in self._coeffs.items()},
                             self._known_through, self._backend)

    # -- arithmetic -------------------------------------------------------

    def _check_backend(self, other: "LaurentSeries"):
        if self._backend != other._backend:
            raise BackendMismatch(f"{self._backend} series combined with {other._backend} series")

    def __add__(self, other):
        if not isinstance(other, LaurentSeries):
            other = LaurentSeries({0: other}, backend=self._backend)
        self._check_backend(other)
        out = dict(self._coeffs)
        for e, c in other._coeffs.items():
            out[e] = out.get(e, 0) + c
        return LaurentSeries(out, min(self._known_through, other._known_through), self._backend)

    __radd__ = __add__

    def __neg__(self):
        return self.map_coeffs(lambda c: -c)

    def __sub__(self, other):
        return self + (-other)

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        if isinstance(other, LaurentSeries):
            return series_mul(self, other)
        c = scalars.coerce(other, self._backend)
        return self.map_coeffs(lambda x: x * c)

    __rmul__ = __mul__

    def __truediv__(self, other):
        if isinstance(other, LaurentSeries):
            return series_mul(self, series_invert(other))
        c = scalars.coerce(other, self._backend)
        return self.map_coeffs(lambda x: x / c)

    def __pow__(self, k: int):
        if not isinstance(k, int):
            return NotImplemented
        if k < 0:
            return series_invert(self) ** (-k)
        result = LaurentSeries({0: 1}, backend=self._backend)
        base = self
        while k:
            if k & 1:
                result = series_mul(result, base)
            base = series_mul(base, base)
            k >>= 1
        return result

    def __eq__(self, other):
        if not isinstance(other, LaurentSeries):
            return NotImplemented
        return (self._backend == other._backend
                and self._known_through == other._known_through
                and self._coeffs == other._coeffs)

    def __hash__(self):
        return hash((self._backend, self._known_through, tuple(self.items())))

    def agrees_with(self, other: "LaurentSeries", tol=0) -> bool:
        """Equality of all coefficients both series know."""
        m = min(self._known_through, other._known_through)
        exps = {e for e in self._coeffs if e <= m} | {e for e in other._coeffs if e <= m}
        for e in exps:
            if not scalars.is_zero(self._coeffs.get(e, 0) - other._coeffs.get(e, 0), tol):
                return False
        return True

    def __repr__(self):
        terms = []
        for e, c in self.items():
            if e == 0:
                terms.append(f"{c}")
            else:
                terms.append(f"{c}*z^{e}")
        body = " + ".join(terms) if terms else "0"
        if self.is_exact:
            return f"LaurentSeries({body})"
        return f"LaurentSeries({body} + O(z^{self._known_through + 1}))"

    # -- serialization ----------------------------------------------------

    def to_json(self) -> dict:
        out = {
            "valuation": None if self.is_zero() else self._valuation,
            "known_through": None if self.is_exact else self._known_through,
            "coeffs": {str(e): scalars.to_json(c) for e, c in self.items()},
        }
        if self._backend == scalars.COMPLEX:
            out["backend"] = scalars.COMPLEX
        return out

    @classmethod
    def from_json(cls, obj) -> "LaurentSeries":
        if not isinstance(obj, dict) or "coeffs" not in obj:
            raise SchemaError("a LaurentSeries needs a 'coeffs' mapping")
        try:
            coeffs = {int(e): scalars.from_json(c) for e, c in obj["coeffs"].items()}
        except (AttributeError, ValueError) as exc:
            raise SchemaError(f"bad coefficient map: {exc}") from exc
        kt = obj.get("known_through")
        kt = INF if kt is None else kt
        if not isinstance(kt, (int, float)) or isinstance(kt, bool):
            raise SchemaError("known_through must be an integer or null")
        backend = obj.get("backend")
        series = cls(coeffs, kt, backend)
        val = obj.get("valuation")
        if val is not None and val != series.valuation:
            raise SchemaError(f"declared valuation {val} but leading exponent is {series.valuation}")
        if val is not None and series.valuation > series.known_through:
            raise SchemaError("valuation beyond known_through")
        return series


@dataclass(frozen=True)
class OneForm:
    """``series * dz``."""

    series: LaurentSeries

    @property
    def known_through(self):
        return self.series.known_through

    def residue(self):
        return self.series[-1]

    def __add__(self, other: "OneForm"):
        return OneForm(self.series + other.series)

    def __mul__(self, f):
        if isinstance(f, LaurentSeries):
            return OneForm(series_mul(self.series, f))
        return OneForm(self.series * f)

    __rmul__ = __mul__


# -- ring operations ----------------------------------------------------------


def series_mul(a: LaurentSeries, b: LaurentSeries) -> LaurentSeries:
    a._check_backend(b)
    kt = min(a.known_through + b.low, b.known_through + a.low)
    out: dict[int, object] = {}
    for ea, ca in a._coeffs.items():
        for eb, cb in b._coeffs.items():
            e = ea + eb
            if e <= kt:
                out[e] = out.get(e, 0) + ca * cb
    return LaurentSeries(out, kt, a.backend)


def _relative_window(a: LaurentSeries, prec):
    """Leading exponent, leading coefficient and normalized coefficient list."""
    v = a.valuation
    r = a.known_through - v
    if r == INF:
        r = DEFAULT_RELATIVE_PRECISION if prec is None else prec
    elif prec is not None:
        r = min(r, prec)
    coeffs = [a._coeffs.get(v + k, scalars.zero(a.backend)) for k in range(r + 1)]
    return v, r, coeffs


def series_invert(a: LaurentSeries, prec: int | None = None) -> LaurentSeries:
    """Multiplicative inverse.

    For exact input the result carries ``prec`` (default
    ``DEFAULT_RELATIVE_PRECISION``) coefficients beyond the leading one;
    truncated input keeps its relative precision.
    """
    if a.is_zero():
        raise ZeroDivisionError("inverse of the zero series")
    v, r, A = _relative_window(a, prec)
    inv0 = 1 / A[0]
    B = [inv0]
    for n in range(1, r + 1):
        s = sum((A[k] * B[n - k] for k in range(1, n + 1)), scalars.zero(a.backend))
        B.append(-s * inv0)
    return LaurentSeries({-v + k: c for k, c in enumerate(B)}, -v + r, a.backend)


def series_sqrt(a: LaurentSeries, prec: int | None = None) -> LaurentSeries:
    """Square root with principal leading coefficient."""
    if a.is_zero():
        raise ZeroDivisionError("square root of the zero series")
    v, r, A = _relative_window(a, prec)
    if v % 2:
        raise OddValuation(f"valuation {v} is odd")
    if a.backend == scalars.EXACT:
        b0 = scalars.exact_sqrt(A[0])
        if b0 is None:
            raise NotASquare(f"leading coefficient {A[0]} is not a rational square")
    else:
        b0 = mpmath.sqrt(A[0])
    B = [b0]
    two_b0 = 2 * b0
    for n in range(1, r + 1):
        s = sum((B[k] * B[n - k] for k in range(1, n)), scalars.zero(a.backend))
        B.append((A[n] - s) / two_b0)
    w = v // 2
    return LaurentSeries({w + k: c for k, c in enumerate(B)}, w + r, a.backend)


def differentiate(a: LaurentSeries) -> OneForm:
    out = {e - 1: e * c for e, c in a._coeffs.items() if e != 0}
    return OneForm(LaurentSeries(out, a.known_through - 1, a.backend))


def antidifferentiate(w: OneForm, tol=0) -> LaurentSeries:
    """Antiderivative with zero constant term.

    ``tol`` only matters for the complex backend, where a residue of size at
    most ``tol`` is treated as zero.
    """
    s = w.series if isinstance(w, OneForm) else w
    if s.known_through < -1 and s.low <= -1:
        raise InsufficientPrecision("the residue coefficient is not known")
    res = s._coeffs.get(-1, 0)
    if not scalars.is_zero(res, tol):
        raise NonzeroResidue(f"z^-1 dz coefficient is {res}")
    out = {e + 1: c / (e + 1) for e, c in s._coeffs.items() if e != -1}
    return LaurentSeries(out, s.known_through + 1, s.backend)


def residue(w: OneForm):
    return w.residue()


def residue_pair(f: LaurentSeries, g: LaurentSeries):
    """``res_0(f dg) = sum_k f_{-k} * k * g_k``.

    Raises :class:`InsufficientPrecision` when some term of the sum could
    involve an unknown coefficient.
    """
    f._check_backend(g)
    total = scalars.zero(f.backend)
    lo, hi = g.low, -f.low
    if lo == INF or hi == -INF or lo > hi:
        return total
    fc, gc = f._coeffs, g._coeffs
    for k in range(int(lo), int(hi) + 1):
        if k == 0:
            continue
        f_known = -k <= f.known_through
        g_known = k <= g.known_through
        if f_known and g_known:
            a = fc.get(-k)
            if a is not None:
                b = gc.get(k)
                if b is not None:
                    total += a * k * b
        elif f_known and -k not in fc:
            continue
        elif g_known and k not in gc:
            continue
        else:
            raise InsufficientPrecision(
                f"pairing needs coefficients z^{-k} of f and z^{k} of g "
                f"(known through {f.known_through} and {g.known_through})")
    return total


# -- multivariate residues ----------------------------------------------------


@dataclass(frozen=True)
class MultiLogForm:
    """``h dt_1 ^ ... ^ dt_n / (t_1^m t_2 ... t_n)`` with polynomial ``h``.

    ``h`` maps exponent tuples of length ``n`` to coefficients.
    """

    n: int
    h: Mapping[tuple, object] = field(default_factory=dict)
    m: int = 1

    def __post_init__(self):
        if self.n < 2:
            raise ValueError("MultiLogForm needs at least two variables")
        if self.m < 1:
            raise ValueError("pole order m must be positive")
        for key in self.h:
            if len(key) != self.n or any(e < 0 for e in key):
                raise ValueError(f"bad monomial exponent {key!r}")


def _form_backend(psi: MultiLogForm) -> str:
    if any(scalars.backend_of(c) == scalars.COMPLEX for c in psi.h.values()):
        return scalars.COMPLEX
    return scalars.EXACT


def _direct_residue(psi: MultiLogForm, backend: str):
    shift = (psi.m,) + (1,) * (psi.n - 1)
    expansion = {tuple(e - s for e, s in zip(key, shift)): c for key, c in psi.h.items()}
    return scalars.coerce(expansion.get((-1,) * psi.n, 0), backend)


def _restrict_first_axis(psi: MultiLogForm, backend: str) -> LaurentSeries:
    """``h(t_1, 0, ..., 0)`` as a one-variable polynomial."""
    out: dict[int, object] = {}
    for key, c in psi.h.items():
        weight = 1
        for e in key[1:]:
            weight *= 0 ** e
        if weight:
            out[key[0]] = out.get(key[0], 0) + c * weight
    return LaurentSeries(out, backend=backend)


def multivar_residue(psi: MultiLogForm):
    """Residue of ``psi``, computed directly and by one-variable reduction.

    The direct route reads off the ``t^(-1,...,-1)`` coefficient; the
    reduced route takes ``res_0(h(t_1,0,...,0) dt_1 / t_1^m)``.
    """
    backend = _form_backend(psi)
    direct = _direct_residue(psi, backend)
    reduced_form = OneForm(_restrict_first_axis(psi, backend).shift(-psi.m))
    reduced = reduced_form.residue()
    if direct != reduced:
        raise AssertionError(f"residue routes disagree: {direct} != {reduced}")
    return direct
