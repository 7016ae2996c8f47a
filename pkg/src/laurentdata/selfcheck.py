"""Invariant suites run end to end by ``laurentdata selfcheck``.

Functions are looked up through their modules at call time so that a
patched implementation is the one exercised.
"""

from __future__ import annotations

import random
from fractions import Fraction

from . import curves, eav, series, window


def _random_series(rng: random.Random, low=-8, high=12) -> series.LaurentSeries:
    coeffs = {e: Fraction(rng.randint(-9, 9), rng.randint(1, 5)) for e in range(low, high + 1)
              if rng.random() < 0.6}
    return series.LaurentSeries(coeffs, known_through=high)


def skew_suite(rng: random.Random, trials: int = 200) -> dict:
    pair = series.residue_pair
    one = pair(series.LaurentSeries.monomial(-1), series.LaurentSeries.monomial(1))
    bad = 0
    for _ in range(trials):
        f, g = _random_series(rng), _random_series(rng)
        if pair(f, g) + pair(g, f) != 0 or pair(f, f) != 0:
            bad += 1
    return {"passed": bad == 0 and one == 1, "trials": trials, "failures": bad,
            "reference_value_ok": one == 1}


def double_annihilator_suite(rng: random.Random, trials: int = 60) -> dict:
    bad = 0
    for _ in range(trials):
        n = rng.randint(1, 4)
        w = window.WindowSpec.square(n)
        k = rng.randint(0, w.dim)
        vecs = [tuple(Fraction(rng.randint(-3, 3)) for _ in range(w.dim)) for _ in range(k)]
        s = window.reduce_basis(vecs, w)
        back = window.annihilator(window.annihilator(s))
        if back.basis != s.basis or s.dim + window.annihilator(s).dim != w.dim:
            bad += 1
    return {"passed": bad == 0, "trials": trials, "failures": bad}


def residue_route_suite(rng: random.Random, trials: int = 200) -> dict:
    bad = 0
    for _ in range(trials):
        n = rng.randint(2, 4)
        h = {}
        for _ in range(rng.randint(1, 6)):
            key = tuple(rng.randint(0, 3) for _ in range(n))
            h[key] = Fraction(rng.randint(-5, 5))
        psi = series.MultiLogForm(n, h, rng.randint(1, 5))
        b = series._form_backend(psi)
        direct = series._direct_residue(psi, b)
        reduced = series.OneForm(series._restrict_first_axis(psi, b).shift(-psi.m)).residue()
        if direct != reduced:
            bad += 1
    return {"passed": bad == 0, "trials": trials, "failures": bad}


def stabilization_suite(genera=(1, 2), extra: int = 2) -> dict:
    results = {}
    ok = True
    for g in genera:
        curve = curves.HyperellipticCurve([Fraction(1)] + [Fraction(0)] * (2 * g) + [Fraction(1)])
        dims = []
        for n in range(4 * g + 4, 4 * g + 5 + extra):
            rep = curves.verify_annihilator_lemma(curve, window.WindowSpec.square(n))
            dims.append(rep.quotient_dim)
            ok = ok and rep.passed and rep.quotient_dim == 2 * g
        results[f"g{g}"] = dims
    return {"passed": ok, "quotient_dims": results}


def round_trip_suite(rng: random.Random, trials: int = 50) -> dict:
    bad = 0
    for _ in range(trials):
        f = _random_series(rng).drop_constant()
        if series.antidifferentiate(series.differentiate(f)) != f:
            bad += 1
    taus = [[[1j]], [[0.3 + 1.7j]], [[1j, 0], [0, 2j]]]
    worst = 0.0
    for t in taus:
        tau = eav.SiegelPoint(t)
        back = eav.de_extend(eav.extend_from_tau(tau))
        worst = max(worst, float(back.distance(tau)))
    return {"passed": bad == 0 and worst < 1e-12, "series_failures": bad,
            "tau_max_error": f"{worst:.3e}"}


def run(seed: int = 0) -> dict:
    rng = random.Random(seed)
    suites = {
        "skew_symmetry": skew_suite(rng),
        "double_annihilator": double_annihilator_suite(rng),
        "residue_routes": residue_route_suite(rng),
        "stabilization": stabilization_suite(),
        "round_trip": round_trip_suite(rng),
    }
    return {"passed": all(s["passed"] for s in suites.values()), "suites": suites}
