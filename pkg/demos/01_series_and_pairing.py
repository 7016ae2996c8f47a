"""
Laurent series and the residue pairing
======================================

Exact arithmetic on truncated Laurent series, and the pairing
<f, g> = res(f dg) that everything else is built on.
"""

from fractions import Fraction

from laurentdata import LaurentSeries, MultiLogForm, multivar_residue, residue_pair, series_sqrt

z = LaurentSeries.monomial

# sqrt(1 + z^6), known through z^17
r = series_sqrt(LaurentSeries({0: 1, 6: 1}, known_through=17))
print("sqrt(1 + z^6) =", r.coeffs, "known through", r.known_through)

# the basic values: <z^-1, z> = 1 and <z^-3, z^3> = 3
print("<z^-1, z>   =", residue_pair(z(-1), z(1)))
print("<z^-3, z^3> =", residue_pair(z(-3), z(3)))

# skew-symmetry on a less trivial pair
f = LaurentSeries({-2: Fraction(1, 3), 1: 5, 4: -1}, known_through=10)
g = LaurentSeries({-1: 2, 2: Fraction(7, 2)}, known_through=10)
print("<f, g> =", residue_pair(f, g), " <g, f> =", residue_pair(g, f))

# residue of h dz1/z1^m ^ dz2/z2 ^ ... computed directly and by reduction to one variable
psi = MultiLogForm(2, {(1, 0): 5, (0, 0): 3}, 2)
print("res psi =", multivar_residue(psi))
