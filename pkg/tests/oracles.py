"""Independent reference computations.

Nothing here imports the package under test.  Expansions come from sympy's
own series machinery, periods from the arithmetic-geometric mean.
"""

from __future__ import annotations

from fractions import Fraction

import mpmath
import sympy

z = sympy.Symbol("z")


def y_expansion(f_coeffs, order):
    """``y`` at infinity for ``y^2 = f(x)``, ``x = z^-2``, through ``z^order``."""
    d = len(f_coeffs) - 1
    f = sum(sympy.Rational(c) * z ** (-2 * k) for k, c in enumerate(f_coeffs))
    unit = sympy.expand(f * z ** (2 * d))
    s = sympy.series(sympy.sqrt(unit), z, 0, order + d + 1).removeO()
    return sympy.expand(s * z ** (-d))


def _coeffs(expr, lo, hi):
    expr = sympy.expand(expr)
    return {k: Fraction(str(expr.coeff(z, k))) for k in range(lo, hi + 1) if expr.coeff(z, k) != 0}


def antiderivatives(f_coeffs, order):
    """Coefficient dicts of ``f = int dx/y`` and ``g = int x dx/y`` (g = 1 curves)."""
    d = len(f_coeffs) - 1
    y = y_expansion(f_coeffs, order + 2 * d)
    dx = -2 * z ** -3
    omega = sympy.series(dx / y, z, 0, order).removeO()
    eta = sympy.series(z ** -2 * dx / y, z, 0, order).removeO()
    f = sympy.integrate(sympy.expand(omega), z)
    g = sympy.integrate(sympy.expand(eta), z)
    return _coeffs(f, -2 * d, order), _coeffs(g, -2 * d, order)


def residue_pairing(f: dict, g: dict) -> Fraction:
    """``res_0(f dg)`` directly from the product ``f * g'``."""
    total = Fraction(0)
    for a, ca in f.items():
        for b, cb in g.items():
            # f dg contains ca * cb * b * z^(a + b - 1)
            if a + b == 0:
                total += ca * cb * b
    return total


def curve_pairing_value(f_coeffs, order=12) -> Fraction:
    f, g = antiderivatives(f_coeffs, order)
    return residue_pairing(f, g)


# -- periods from the AGM ------------------------------------------------------


def agm(a, b, steps=200):
    """Optimal AGM: the square root closest to the arithmetic mean is taken."""
    for _ in range(steps):
        a1 = (a + b) / 2
        b1 = mpmath.sqrt(a * b)
        if abs(a1 - b1) > abs(a1 + b1):
            b1 = -b1
        a, b = a1, b1
        if abs(a - b) <= abs(a) * mpmath.mpf(2) ** (-mpmath.mp.prec + 4):
            break
    return a


def agm_periods(e1, e2, e3):
    """Two periods of ``dx/y`` on ``y^2 = 4 (x - e1)(x - e2)(x - e3)``."""
    w1 = mpmath.pi / agm(mpmath.sqrt(e1 - e3), mpmath.sqrt(e1 - e2))
    w2 = 1j * mpmath.pi / agm(mpmath.sqrt(e1 - e3), mpmath.sqrt(e2 - e3))
    return w1, w2


def agm_ratio(e1, e2, e3):
    w1, w2 = agm_periods(e1, e2, e3)
    t = w2 / w1
    return t if mpmath.im(t) > 0 else -t


def lattice_change(p1, p2, q1, q2):
    """Real matrix ``M`` with ``(p1, p2) = M (q1, q2)``, solved from real parts."""
    Q = mpmath.matrix([[mpmath.re(q1), mpmath.re(q2)], [mpmath.im(q1), mpmath.im(q2)]])
    rows = []
    for p in (p1, p2):
        sol = mpmath.lu_solve(Q, mpmath.matrix([mpmath.re(p), mpmath.im(p)]))
        rows.append([sol[0], sol[1]])
    return rows


def fundamental_domain(tau):
    """Reduce ``tau`` into the standard fundamental domain (oracle copy)."""
    for _ in range(500):
        tau = tau - mpmath.floor(mpmath.re(tau) + mpmath.mpf(1) / 2)
        if abs(tau) < 1 - mpmath.mpf(10) ** -30:
            tau = -1 / tau
        else:
            return tau
    return tau


LEMNISCATIC_ROOTS = (1, 0, -1)


def hexagonal_roots():
    w = mpmath.expjpi(mpmath.mpf(2) / 3)
    return (mpmath.mpc(1), w, mpmath.conj(w))
