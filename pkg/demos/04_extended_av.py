"""
Extended abelian varieties
==========================

Build a triple (Z, K0, Lambda) from a period matrix, check the axioms,
write it to JSON and read the period matrix back.
"""

import json

import mpmath

from laurentdata import (
    ExtendedAV,
    HyperellipticCurve,
    SiegelPoint,
    build_from_curve,
    de_extend,
    extend_from_tau,
    validate,
)

tau = SiegelPoint([[0.3 + 1.7j, 0.2], [0.2, 1.1j]])
e = extend_from_tau(tau)
print("window", e.window, " dim K0", e.K0.dim, " dim Z", e.Z.dim)
print("axioms", validate(e).axioms)

text = json.dumps(e.to_json())
back = ExtendedAV.from_json(json.loads(text))
print("JSON bytes", len(text), " round trip equal:", back == e)
print("recovered tau error", mpmath.nstr(de_extend(back).distance(tau), 3))

# the same from a curve; the triple carries the lattice of its periods
curve_eav = build_from_curve(HyperellipticCurve(["0", "-4", "0", "4"]))
with mpmath.workprec(curve_eav.precision_bits):
    print("curve tau", mpmath.nstr(de_extend(curve_eav).tau[0][0], 15))
