"""Periods of elliptic curves by contour quadrature.

For ``y^2 = f(x)`` with ``deg f = 3`` the roots are sorted by real part,
then imaginary part.  The A-cycle is a rectangle around the first two
roots, the B-cycle a rectangle around the last two; each keeps a fixed
clearance from every root.  Along a contour the branch of ``y`` is carried
from panel to panel by choosing the square root nearest the value at the
panel start, and each panel is integrated with Gauss-Legendre rules of 24
and 48 nodes, bisecting until the two agree.

The homology basis is oriented so that ``Im(B/A) > 0``.  With that
orientation the Legendre relation reads ``A B' - A' B = 2 pi i <f, g>``,
where ``f`` and ``g`` are the Laurent antiderivatives of ``dx/y`` and
``x dx/y`` at infinity.
"""

from __future__ import annotations

import functools
from dataclasses import dataclass, field
from fractions import Fraction
from typing import NamedTuple

import mpmath
from mpmath.calculus.quadrature import GaussLegendre

from .curves import HyperellipticCurve, differential_basis
from .errors import GenusUnsupported, IllConditioned, QuadratureFailure, SingularCurve

DEFAULT_PRECISION_BITS = 256
DEFAULT_CLEARANCE = mpmath.mpf(1) / 4
_LOW_DEGREE, _HIGH_DEGREE = 4, 5  # 24 and 48 nodes
_MAX_DEPTH = 12


def _require_elliptic(curve: HyperellipticCurve):
    if curve.genus != 1:
        raise GenusUnsupported(f"periods are implemented for genus 1 only (got genus {curve.genus})")


@functools.lru_cache(maxsize=None)
def _gl_nodes(degree: int, prec: int):
    with mpmath.workprec(prec):
        return tuple(GaussLegendre(mpmath.mp).calc_nodes(degree, prec))


def _root_key(r):
    return (round(float(r.real), 9), float(r.imag))


def curve_roots(curve: HyperellipticCurve) -> list:
    """Roots of ``f`` at the working precision, sorted by (real, imag)."""
    desc = [mpmath.mpf(c.numerator) / c.denominator for c in reversed(curve.f_coeffs)]
    roots = mpmath.polyroots(desc, maxsteps=200, extraprec=2 * mpmath.mp.prec)
    roots = [mpmath.mpc(r) for r in roots]
    for i in range(len(roots)):
        for j in range(i + 1, len(roots)):
            if abs(roots[i] - roots[j]) < mpmath.mpf(2) ** (-mpmath.mp.prec // 2):
                raise SingularCurve("f has a repeated root")
    return sorted(roots, key=_root_key)


def _dist_to_segment(p, a, b):
    ab = b - a
    t = mpmath.re((p - a) * mpmath.conj(ab)) / abs(ab) ** 2
    t = min(max(t, 0), 1)
    return abs(p - (a + t * ab))


def _rectangle(a, b, delta):
    u = (b - a) / abs(b - a)
    n = 1j * u
    return (a - delta * u - delta * n, b + delta * u - delta * n,
            b + delta * u + delta * n, a - delta * u + delta * n)


class Cycles(NamedTuple):
    roots: tuple
    a_cycle: tuple
    b_cycle: tuple
    clearance: object


def branch_cycles(curve: HyperellipticCurve, clearance=DEFAULT_CLEARANCE) -> Cycles:
    """Closed polygonal A- and B-cycles around pairs of branch points.

    ``clearance`` is a fraction of the smallest distance between a root and
    anything the contours must avoid.
    """
    _require_elliptic(curve)
    e1, e2, e3 = curve_roots(curve)
    scale = min(abs(e1 - e2), abs(e2 - e3), abs(e1 - e3),
                _dist_to_segment(e3, e1, e2), _dist_to_segment(e1, e2, e3))
    delta = mpmath.mpf(clearance) * scale
    return Cycles((e1, e2, e3), _rectangle(e1, e2, delta), _rectangle(e2, e3, delta), delta)


class _Integrand:
    """``(1/y, x/y)`` with ``y^2 = f(x)`` continued along a path."""

    def __init__(self, curve: HyperellipticCurve):
        self.coeffs = [mpmath.mpf(c.numerator) / c.denominator for c in reversed(curve.f_coeffs)]

    def y_near(self, x, y_ref):
        acc = mpmath.mpc(0)
        for c in self.coeffs:
            acc = acc * x + c
        y = mpmath.sqrt(acc)
        if y_ref is not None and abs(y + y_ref) < abs(y - y_ref):
            y = -y
        return y


def _panel(integrand, a, b, y_a, degree, prec):
    mid = (a + b) / 2
    half = (b - a) / 2
    s1 = s2 = mpmath.mpc(0)
    for t, w in _gl_nodes(degree, prec):
        x = mid + half * t
        y = integrand.y_near(x, y_a)
        s1 += w / y
        s2 += w * x / y
    return s1 * half, s2 * half


def _integrate_path(integrand, vertices, y0, tol_rel, max_panel, prec):
    """Integrate ``dx/y`` and ``x dx/y`` around the closed polygon."""
    pts = list(vertices) + [vertices[0]]
    panels = []
    for p, q in zip(pts, pts[1:]):
        k = int(mpmath.ceil(abs(q - p) / max_panel))
        panels.extend((p + (q - p) * i / k, p + (q - p) * (i + 1) / k) for i in range(k))
    perimeter = sum(abs(b - a) for a, b in panels)
    # crude magnitude for an absolute tolerance
    y = y0
    size = mpmath.mpf(0)
    for a, b in panels:
        y = integrand.y_near(a, y)
        size += abs(b - a) * max(1 / abs(y), abs(a) / abs(y))
    tol_abs = tol_rel * size

    total1 = total2 = mpmath.mpc(0)
    err_total = mpmath.mpf(0)
    y = y0
    stack = [(a, b, 0) for a, b in reversed(panels)]
    while stack:
        a, b, depth = stack.pop()
        y_a = integrand.y_near(a, y)
        lo = _panel(integrand, a, b, y_a, _LOW_DEGREE, prec)
        hi = _panel(integrand, a, b, y_a, _HIGH_DEGREE, prec)
        err = max(abs(hi[0] - lo[0]), abs(hi[1] - lo[1]))
        allowed = tol_abs * abs(b - a) / perimeter
        if err > allowed:
            if depth >= _MAX_DEPTH:
                raise QuadratureFailure("panel did not converge", error_estimate=err)
            m = (a + b) / 2
            stack.append((m, b, depth + 1))
            stack.append((a, m, depth + 1))
            continue
        total1 += hi[0]
        total2 += hi[1]
        err_total += err
        y = integrand.y_near(b, y_a)
    if abs(y - y0) > abs(y + y0):
        raise QuadratureFailure("branch of y did not close up around the cycle")
    return total1, total2, err_total


@dataclass(frozen=True)
class PeriodData:
    """Periods of ``dx/y`` (``A``, ``B``) and ``x dx/y`` (``A2``, ``B2``)."""

    A: object
    B: object
    A2: object
    B2: object
    error_estimate: object
    precision_bits: int
    tolerance: object

    @property
    def tau(self):
        return self.B / self.A

    def legendre_lhs(self):
        return self.A * self.B2 - self.A2 * self.B

    def to_json(self) -> dict:
        from .scalars import to_json
        with mpmath.workprec(self.precision_bits):
            return {"A": to_json(self.A), "B": to_json(self.B),
                    "A2": to_json(self.A2), "B2": to_json(self.B2),
                    "error_estimate": mpmath.nstr(self.error_estimate, 5),
                    "precision_bits": self.precision_bits}


def period_matrix(curve: HyperellipticCurve, precision_bits: int = DEFAULT_PRECISION_BITS,
                  clearance=DEFAULT_CLEARANCE) -> PeriodData:
    _require_elliptic(curve)
    with mpmath.workprec(precision_bits):
        tol = mpmath.mpf(2) ** (-(precision_bits // 2))
        cycles = branch_cycles(curve, clearance)
        integrand = _Integrand(curve)
        max_panel = cycles.clearance / 2
        out = []
        for contour in (cycles.a_cycle, cycles.b_cycle):
            y0 = integrand.y_near(contour[0], None)
            out.append(_integrate_path(integrand, contour, y0, tol, max_panel, precision_bits))
        (A, A2, ea), (B, B2, eb) = out
        # fix the overall sign of the A-cycle, then orient B against it
        if mpmath.re(A) < -tol * abs(A) or (abs(mpmath.re(A)) <= tol * abs(A) and mpmath.im(A) < 0):
            A, A2 = -A, -A2
        if mpmath.im(B / A) < 0:
            B, B2 = -B, -B2
        return PeriodData(A, B, A2, B2, ea + eb, precision_bits, tol)


class Reciprocity(NamedTuple):
    lhs: object
    rhs: object
    rel_err: object
    pairing: Fraction
    periods: PeriodData

    def to_json(self) -> dict:
        from .scalars import to_json
        out = self.periods.to_json()
        with mpmath.workprec(self.periods.precision_bits):
            out.update({"lhs": to_json(self.lhs), "rhs": to_json(self.rhs),
                        "pairing": f"{self.pairing.numerator}/{self.pairing.denominator}",
                        "rel_err": mpmath.nstr(self.rel_err, 5)})
        return out


def residue_pairing_value(curve: HyperellipticCurve) -> Fraction:
    """Exact ``<f, g>`` for ``f = int dx/y`` and ``g = int x dx/y``."""
    return differential_basis(curve, 2 * curve.genus + 2).pairing_matrix()[0][0]


def verify_classical_reciprocity(curve: HyperellipticCurve,
                                 precision_bits: int = DEFAULT_PRECISION_BITS,
                                 clearance=DEFAULT_CLEARANCE) -> Reciprocity:
    _require_elliptic(curve)
    pairing = residue_pairing_value(curve)
    periods = period_matrix(curve, precision_bits, clearance)
    with mpmath.workprec(precision_bits):
        lhs = periods.legendre_lhs()
        rhs = 2j * mpmath.pi * (mpmath.mpf(pairing.numerator) / pairing.denominator)
        rel = abs(lhs - rhs) / abs(rhs)
    return Reciprocity(lhs, rhs, rel, pairing, periods)


# -- the lattice ---------------------------------------------------------------


@dataclass(frozen=True)
class LatticeLambda:
    """Integral classes in coordinates of a quotient basis.

    ``basis`` lists ``2g`` coordinate vectors; ``gram`` is the matrix of
    ``2 pi i <,>`` on them and ``gram_int`` its rounding.
    """

    basis: tuple
    gram_int: tuple
    gram: tuple = field(default=(), compare=False)
    max_rounding_error: object = field(default=0, compare=False)

    @property
    def rank(self) -> int:
        return len(self.basis)

    def to_json(self) -> dict:
        from .scalars import to_json
        return {"basis": [[to_json(x) for x in v] for v in self.basis],
                "gram_int": [list(r) for r in self.gram_int]}

    @classmethod
    def from_json(cls, obj) -> "LatticeLambda":
        from .scalars import coerce, from_json, COMPLEX
        basis = tuple(tuple(coerce(from_json(x), COMPLEX) for x in v) for v in obj["basis"])
        gram_int = tuple(tuple(int(x) for x in r) for r in obj.get("gram_int", []))
        return cls(basis, gram_int)


def round_gram(gram_matrix, tol=1e-8):
    """Round a numerical Gram matrix; returns ``(integer matrix, max error)``."""
    gi, err = [], mpmath.mpf(0)
    for row in gram_matrix:
        r = []
        for x in row:
            n = int(mpmath.nint(mpmath.re(x)))
            err = max(err, abs(x - n))
            r.append(n)
        gi.append(tuple(r))
    return tuple(gi), err


def lambda_lattice(curve: HyperellipticCurve, precision_bits: int = DEFAULT_PRECISION_BITS,
                   max_condition=mpmath.mpf(10) ** 12, periods: PeriodData | None = None) -> LatticeLambda:
    """Dual basis of the (A, B)-cycles in coordinates of the ``(f, g)`` basis."""
    _require_elliptic(curve)
    pairing = residue_pairing_value(curve)
    periods = periods or period_matrix(curve, precision_bits)
    with mpmath.workprec(precision_bits):
        P = mpmath.matrix([[periods.A, periods.A2], [periods.B, periods.B2]])
        cond = mpmath.mnorm(P, 1) * mpmath.mnorm(P ** -1, 1)
        if cond > max_condition:
            raise IllConditioned(f"period matrix condition number {mpmath.nstr(cond, 5)}")
        # the inverse comes back with guard bits; round to the working precision
        Pinv = P ** -1
        alpha = (+Pinv[0, 0], +Pinv[1, 0])
        beta = (+Pinv[0, 1], +Pinv[1, 1])
        c = mpmath.mpf(pairing.numerator) / pairing.denominator
        form = [[0, c], [-c, 0]]
        vecs = (alpha, beta)
        gram = tuple(tuple(2j * mpmath.pi * _bilinear(form, u, v) for v in vecs) for u in vecs)
        gram_int, err = round_gram(gram)
    return LatticeLambda(vecs, gram_int, gram, err)


def _bilinear(form, u, v):
    return sum(u[i] * form[i][j] * v[j] for i in range(len(u)) for j in range(len(v)))


def hodge_positivity(curve: HyperellipticCurve, precision_bits: int = DEFAULT_PRECISION_BITS,
                     periods: PeriodData | None = None):
    """``i Q(v, conj v)`` for ``v`` the class of ``dx/y``.

    Conjugation is taken with respect to the real structure spanned by the
    lattice, so ``v`` has lattice coordinates equal to its periods.
    """
    periods = periods or period_matrix(curve, precision_bits)
    lat = lambda_lattice(curve, precision_bits, periods=periods)
    with mpmath.workprec(precision_bits):
        v_lat = (periods.A, periods.B)
        v = tuple(sum(v_lat[k] * lat.basis[k][i] for k in range(2)) for i in range(2))
        vbar = tuple(sum(mpmath.conj(v_lat[k]) * lat.basis[k][i] for k in range(2)) for i in range(2))
        c = residue_pairing_value(curve)
        c = mpmath.mpf(c.numerator) / c.denominator
        q = 2j * mpmath.pi * _bilinear([[0, c], [-c, 0]], v, vbar)
        return mpmath.re(1j * q)


# -- SL(2, Z) ------------------------------------------------------------------


def reduce_tau(tau):
    """Representative of ``tau`` in the standard fundamental domain."""
    tau = mpmath.mpc(tau)
    if mpmath.im(tau) <= 0:
        raise ValueError("tau must lie in the upper half plane")
    for _ in range(1000):
        tau = tau - mpmath.nint(mpmath.re(tau))
        if abs(tau) < 1:
            tau = -1 / tau
        else:
            break
    return tau


def sl2z_distance(t1, t2):
    """Distance between fundamental-domain representatives, boundary-aware."""
    r1, r2 = reduce_tau(t1), reduce_tau(t2)
    candidates = [r1, r1 + 1, r1 - 1, -1 / r1, -1 / r1 + 1, -1 / r1 - 1]
    return min(abs(c - r2) for c in candidates)
