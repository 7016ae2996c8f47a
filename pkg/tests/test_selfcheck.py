from fractions import Fraction

import pytest

from laurentdata import cli, curves, selfcheck, series


def test_clean_build_passes():
    rep = selfcheck.run()
    assert rep["passed"], rep
    assert set(rep["suites"]) == {"skew_symmetry", "double_annihilator", "residue_routes",
                                  "stabilization", "round_trip"}


def test_seeds_are_reproducible():
    assert selfcheck.run(seed=3) == selfcheck.run(seed=3)


def _abs_k_pairing(f, g):
    # sum of f_{-k} |k| g_k: the |k| destroys skew-symmetry
    return sum((c * abs(e) * g[-e] for e, c in f.coeffs.items() if e), Fraction(0))


@pytest.mark.parametrize("mutation", ["sign", "abs_k"])
def test_pairing_mutations_caught(monkeypatch, mutation):
    original = series.residue_pair
    if mutation == "sign":
        # a global sign flip keeps skew-symmetry but breaks <z^-1, z> = 1
        bad = lambda f, g: -original(f, g)  # noqa: E731
    else:
        bad = _abs_k_pairing
    monkeypatch.setattr(series, "residue_pair", bad)
    rep = selfcheck.run()
    assert not rep["suites"]["skew_symmetry"]["passed"]
    assert not rep["passed"]
    code, report = cli.run(["selfcheck"])
    assert code == 1 and report["passed"] is False


def test_truncation_mutation_caught(monkeypatch):
    original = curves.series_to_vector

    def truncated(f, window, *rest):
        # forgets the top coefficient of the window
        v = list(original(f, window, *rest))
        v[-1] = 0 * v[-1]
        return tuple(v)

    monkeypatch.setattr(curves, "series_to_vector", truncated)
    rep = selfcheck.run()
    assert not rep["suites"]["stabilization"]["passed"]
    code, _ = cli.run(["selfcheck"])
    assert code == 1


def test_residue_route_mutation_caught(monkeypatch):
    original = series._direct_residue
    monkeypatch.setattr(series, "_direct_residue", lambda psi, b: 2 * original(psi, b) + 1)
    assert not selfcheck.run()["suites"]["residue_routes"]["passed"]
