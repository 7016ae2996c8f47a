"""
Periods and the Legendre relation
=================================

Contour quadrature of dx/y and x dx/y around the branch cuts of two
elliptic curves, checked against AB' - A'B = 2 pi i <f, g>.
"""

import mpmath

from laurentdata import HyperellipticCurve, verify_classical_reciprocity
from laurentdata.periods import sl2z_distance

mpmath.mp.prec = 256
cases = {
    "y^2 = 4x^3 - 4x": (["0", "-4", "0", "4"], mpmath.mpc(0, 1)),
    "y^2 = 4x^3 - 4": (["-4", "0", "0", "4"], mpmath.expjpi(mpmath.mpf(1) / 3)),
}

for name, (coeffs, expected) in cases.items():
    r = verify_classical_reciprocity(HyperellipticCurve(coeffs), 256)
    tau = r.periods.tau
    print(name)
    print("  A   =", mpmath.nstr(r.periods.A, 20))
    print("  B   =", mpmath.nstr(r.periods.B, 20))
    print("  tau =", mpmath.nstr(tau, 20), " distance to expected orbit",
          mpmath.nstr(sl2z_distance(tau, expected), 3))
    print("  <f, g> =", r.pairing, " relative error", mpmath.nstr(r.rel_err, 3))
