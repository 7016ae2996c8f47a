"""
K0 and its annihilator on a window
==================================

For y^2 = x^5 + 1 (genus 2) the tails of polynomial functions and the
antiderivatives of second-kind differentials annihilate each other; the
quotient has dimension 2g.
"""

from fractions import Fraction

from laurentdata import HyperellipticCurve, WindowSpec, verify_annihilator_lemma, weierstrass_semigroup

curve = HyperellipticCurve([Fraction(1), 0, 0, 0, 0, Fraction(1)])
print("genus", curve.genus, " gaps", weierstrass_semigroup(curve.genus).gaps)

for n in range(3, 14, 2):
    rep = verify_annihilator_lemma(curve, WindowSpec.square(n))
    print(f"N = M = {n:2d}: dim K0 = {rep.k0_dim:2d}, dim K0^perp = {rep.annihilator_dim:2d}, "
          f"quotient {rep.quotient_dim}, passed {rep.passed}")
