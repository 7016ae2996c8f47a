"""Laurent data of a hyperelliptic curve at its Weierstrass point at infinity.

For ``y^2 = f(x)`` with ``deg f = 2g + 1`` the point at infinity is a
Weierstrass point with local parameter ``z`` such that ``x = z^-2`` and
``y = z^-(2g+1) * sqrt(z^(4g+2) f(z^-2))``.  Expanding global functions
gives the subspace K0; expanding ``x^(i-1) dx/y`` (first kind) and
``x^(g+j-1) dx/y`` (second kind) and integrating gives the classes that
fill out its annihilator.

Laurent data computed elsewhere (for instance along a curve germ in a
higher-dimensional variety) can be loaded with :class:`LaurentData` and run
through the same checks.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from fractions import Fraction
from pathlib import Path
from typing import NamedTuple, Sequence

import mpmath
import sympy

from . import scalars
from .errors import (
    InvalidCurve,
    NonzeroResidue,
    NotASquare,
    OddDegreeRequired,
    SchemaError,
    SingularCurve,
    WindowTooSmall,
)
from .series import (
    LaurentSeries,
    OneForm,
    antidifferentiate,
    residue_pair,
    series_invert,
    series_sqrt,
)
from .window import (
    WindowSpec,
    WindowSubspace,
    annihilator,
    gram,
    isotropy_check,
    pair,
    radical,
    reduce_basis,
    series_to_vector,
    span_sum,
)


@dataclass(frozen=True)
class HyperellipticCurve:
    """``y^2 = f(x)``; ``f_coeffs`` in ascending degree."""

    f_coeffs: tuple

    def __post_init__(self):
        coeffs = tuple(Fraction(c) for c in self.f_coeffs)
        object.__setattr__(self, "f_coeffs", coeffs)
        if not coeffs:
            raise InvalidCurve("empty polynomial")
        if coeffs[-1] == 0:
            # declared degree with a vanishing top coefficient: discriminant is 0
            raise SingularCurve("leading coefficient of f is zero")
        degree = len(coeffs) - 1
        if degree >= 1 and sympy.discriminant(self.polynomial(), _X) == 0:
            raise SingularCurve("f has a repeated root")
        if degree % 2 == 0:
            raise OddDegreeRequired(f"deg f = {degree}; an odd degree model is required")
        if degree < 3:
            raise InvalidCurve("deg f must be at least 3 (genus at least 1)")
        if scalars.exact_sqrt(coeffs[-1]) is None:
            raise NotASquare(f"leading coefficient {coeffs[-1]} is not a rational square")

    @property
    def degree(self) -> int:
        return len(self.f_coeffs) - 1

    @property
    def genus(self) -> int:
        return (self.degree - 1) // 2

    def polynomial(self):
        return sum(sympy.Rational(c.numerator, c.denominator) * _X ** i
                   for i, c in enumerate(self.f_coeffs))

    def __call__(self, x):
        acc = 0
        for c in reversed(self.f_coeffs):
            acc = acc * x + c
        return acc

    def to_json(self) -> dict:
        return {"f_coeffs": [str(c) for c in self.f_coeffs]}

    @classmethod
    def from_json(cls, obj) -> "HyperellipticCurve":
        if isinstance(obj, str):
            obj = json.loads(obj)
        try:
            coeffs = [Fraction(c) for c in obj["f_coeffs"]]
        except (KeyError, TypeError, ValueError, ZeroDivisionError) as exc:
            raise SchemaError(f"bad curve description: {exc}") from exc
        return cls(tuple(coeffs))


_X = sympy.Symbol("x")


class Expansion(NamedTuple):
    x: LaurentSeries
    y: LaurentSeries


def _root_factor(curve: HyperellipticCurve, rel_prec: int) -> LaurentSeries:
    """``sqrt(z^(4g+2) f(z^-2))``, an even unit in ``C[[z]]``."""
    d = curve.degree
    s = LaurentSeries({2 * (d - i): c for i, c in enumerate(curve.f_coeffs)})
    return series_sqrt(s, prec=rel_prec)


def expand_at_infinity(curve: HyperellipticCurve, order: int) -> Expansion:
    """Expansions of ``x`` and ``y`` in the local parameter at infinity.

    ``y`` is known through ``z^order``.
    """
    d = curve.degree
    if order < d:
        raise ValueError(f"order must be at least deg f = {d}")
    x = LaurentSeries.monomial(-2)
    y = _root_factor(curve, order + d).shift(-d)
    return Expansion(x, y)


class Semigroup(NamedTuple):
    generators: tuple
    gaps: tuple


def weierstrass_semigroup(g: int) -> Semigroup:
    """Pole orders at infinity of functions on a genus ``g`` hyperelliptic curve."""
    if g < 1:
        raise ValueError("genus must be positive")
    return Semigroup((2, 2 * g + 1), tuple(range(1, 2 * g, 2)))


def _k0_monomials(g: int, max_pole: int):
    """``(i, eps)`` with ``0 < 2i + (2g+1) eps <= max_pole``."""
    out = []
    for eps in (0, 1):
        i = 0
        while 2 * i + (2 * g + 1) * eps <= max_pole:
            if i or eps:
                out.append((i, eps))
            i += 1
    return sorted(out, key=lambda t: 2 * t[0] + (2 * g + 1) * t[1])


def function_expansions(curve: HyperellipticCurve, max_pole: int, order: int) -> list[LaurentSeries]:
    """Expansions of ``x^i y^eps`` with pole order at most ``max_pole``, known through ``order``."""
    g = curve.genus
    y = expand_at_infinity(curve, max(order + max_pole, curve.degree)).y
    out = []
    for i, eps in _k0_monomials(g, max_pole):
        base = y if eps else LaurentSeries.monomial(0)
        out.append(base.shift(-2 * i).truncate(order).drop_constant())
    return out


def k0_window(curve: HyperellipticCurve, window: WindowSpec) -> WindowSubspace:
    # depth 1 is allowed and gives 0: no function has a simple pole at a Weierstrass point
    funcs = function_expansions(curve, window.neg, window.pos)
    return reduce_basis([series_to_vector(f, window) for f in funcs], window)


def pole_orders(space: WindowSubspace) -> list[int]:
    """Pole orders of the reduced basis (leading exponents negated)."""
    exps = space.window.exponents
    return sorted(-exps[p] for p in space.pivots)


@dataclass(frozen=True)
class DifferentialData:
    omega_forms: tuple
    eta_forms: tuple
    f_antiderivs: tuple
    g_antiderivs: tuple

    @property
    def genus(self) -> int:
        return len(self.omega_forms)

    def pairing_matrix(self) -> list[list]:
        """``<f_i, g_j>``."""
        return [[residue_pair(f, g) for g in self.g_antiderivs] for f in self.f_antiderivs]


def differential_basis(curve: HyperellipticCurve, order: int) -> DifferentialData:
    """First and second kind differentials and their antiderivatives.

    All antiderivatives are known through ``z^order``; the forms through
    ``z^(order-1)``.
    """
    g = curve.genus
    if order < 2 * g + 1:
        raise ValueError(f"order must be at least {2 * g + 1}")
    inv = series_invert(_root_factor(curve, order + 2 * g - 1), prec=order + 2 * g - 1)
    omegas, etas, fs, gs = [], [], [], []
    for i in range(1, g + 1):
        w = OneForm((inv * -2).shift(2 * g - 2 * i).truncate(order - 1))
        omegas.append(w)
        fs.append(antidifferentiate(w).truncate(order))
    for j in range(1, g + 1):
        w = OneForm((inv * -2).shift(-2 * j).truncate(order - 1))
        try:
            gs.append(antidifferentiate(w).truncate(order))
        except NonzeroResidue as exc:  # pragma: no cover - a single-pole form has no residue
            raise AssertionError(f"second kind form eta_{j} has a residue") from exc
        etas.append(w)
    return DifferentialData(tuple(omegas), tuple(etas), tuple(fs), tuple(gs))


# -- Laurent data from any source ---------------------------------------------


@dataclass(frozen=True)
class LaurentData:
    """Expansions feeding the window checks.

    ``k0`` holds expansions of global functions, ``first_kind`` and
    ``second_kind`` the antiderivatives of the expanded one-forms.
    ``ambient_n`` is the dimension of the variety the data came from.
    """

    k0: tuple
    first_kind: tuple = ()
    second_kind: tuple = ()
    ambient_n: int = 1
    meta: dict = field(default_factory=dict)

    @property
    def genus(self) -> int:
        return len(self.first_kind)

    def k0_window(self, window: WindowSpec) -> WindowSubspace:
        vecs = [series_to_vector(f, window) for f in self.k0 if f.low >= -window.neg]
        backend = self.k0[0].backend if self.k0 else scalars.EXACT
        return reduce_basis(vecs, window, backend)

    def to_json(self) -> dict:
        return {
            "k0": [f.to_json() for f in self.k0],
            "first_kind": [f.to_json() for f in self.first_kind],
            "second_kind": [f.to_json() for f in self.second_kind],
            "n": self.ambient_n,
        }

    @classmethod
    def from_json(cls, obj) -> "LaurentData":
        if isinstance(obj, list):
            obj = {"k0": obj}
        if not isinstance(obj, dict) or "k0" not in obj:
            raise SchemaError("Laurent data needs a 'k0' list of series")
        first = obj.get("first_kind", [])
        second = obj.get("second_kind", [])
        if len(first) != len(second):
            raise SchemaError("first_kind and second_kind must have equal length")
        n = obj.get("n", 1)
        if not isinstance(n, int) or n < 1:
            raise SchemaError("n must be a positive integer")
        return cls(tuple(LaurentSeries.from_json(s) for s in obj["k0"]),
                   tuple(LaurentSeries.from_json(s) for s in first),
                   tuple(LaurentSeries.from_json(s) for s in second),
                   n)

    @classmethod
    def load(cls, path) -> "LaurentData":
        return cls.from_json(json.loads(Path(path).read_text()))


def curve_laurent_data(curve: HyperellipticCurve, max_pole: int, order: int) -> LaurentData:
    """Export a curve's Laurent data in the ingestion format."""
    diff = differential_basis(curve, max(order, 2 * curve.genus + 1))
    return LaurentData(
        tuple(function_expansions(curve, max_pole, order)),
        tuple(f.truncate(order) for f in diff.f_antiderivs),
        tuple(g.truncate(order) for g in diff.g_antiderivs),
        1,
        {"curve": curve.to_json()},
    )


@dataclass
class AnnihilatorReport:
    window: WindowSpec
    genus: int
    k0_dim: int
    omega_dim: int
    annihilator_dim: int
    checks: dict

    @property
    def radical_dim(self) -> int:
        return self.window.pos - self.window.neg

    @property
    def quotient_dim(self) -> int:
        """``dim K0^perp / K0`` with the window radical factored out."""
        return self.annihilator_dim - self.k0_dim - self.radical_dim

    @property
    def passed(self) -> bool:
        return all(self.checks.values())

    def to_json(self) -> dict:
        return {
            "window": self.window.to_json(),
            "genus": self.genus,
            "k0_dim": self.k0_dim,
            "omega_dim": self.omega_dim,
            "annihilator_dim": self.annihilator_dim,
            "radical_dim": self.radical_dim,
            "quotient_dim": self.quotient_dim,
            "checks": dict(self.checks),
            "passed": self.passed,
        }


def check_laurent_data(k0: WindowSubspace, first_kind: Sequence[LaurentSeries],
                       second_kind: Sequence[LaurentSeries], tol=None) -> AnnihilatorReport:
    """Check that ``K0 + span(first, second)`` is the annihilator of ``K0``."""
    window = k0.window
    g = len(first_kind)
    worst = max((-s.low for s in second_kind), default=0)
    if worst > window.neg:
        raise WindowTooSmall(f"second kind antiderivatives have poles of order {worst} "
                             f"beyond the window depth {window.neg}")
    fvecs = [series_to_vector(f, window, k0.backend) for f in first_kind]
    gvecs = [series_to_vector(h, window, k0.backend) for h in second_kind]
    omega = span_sum(k0, reduce_basis(fvecs + gvecs, window, k0.backend), tol=tol)
    perp = annihilator(k0, tol)
    # exponents above N pair with nothing; compare modulo that radical
    omega_mod = span_sum(omega, radical(window, k0.backend), tol=tol)
    zero_tol = 0 if k0.backend == scalars.EXACT else (tol or 1e-20)

    def vanishes(m):
        return all(scalars.is_zero(x, zero_tol) for row in m for x in row)

    ff = gram(window, fvecs)
    k0f = [[pair(window, k, f) for f in fvecs] for k in k0.basis]
    fg = [[pair(window, f, h) for h in gvecs] for f in fvecs]
    fg_det = sympy.Matrix(fg).det() if k0.backend == scalars.EXACT else _det(fg)
    checks = {
        "annihilator": omega_mod.equals(perp, tol),
        "quotient_dim": perp.dim - k0.dim - (window.pos - window.neg) == 2 * g,
        "k0_isotropic": isotropy_check(k0, tol)["isotropic"],
        "ff_block_zero": vanishes(ff),
        "k0_f_zero": vanishes(k0f),
        "fg_invertible": not scalars.is_zero(fg_det, zero_tol) if g else True,
    }
    return AnnihilatorReport(window, g, k0.dim, omega.dim, perp.dim, checks)


def _det(m):
    if not m:
        return 1
    return mpmath.det(mpmath.matrix(m))


def verify_annihilator_lemma(source, window: WindowSpec, tol=None) -> AnnihilatorReport:
    """Run :func:`check_laurent_data` on a curve or on ingested Laurent data."""
    if isinstance(source, HyperellipticCurve):
        k0 = k0_window(source, window)
        diff = differential_basis(source, max(window.pos, 2 * source.genus + 1))
        return check_laurent_data(k0, diff.f_antiderivs, diff.g_antiderivs, tol)
    if isinstance(source, LaurentData):
        return check_laurent_data(source.k0_window(window), source.first_kind,
                                  source.second_kind, tol)
    raise TypeError(f"expected a curve or Laurent data, got {type(source).__name__}")
