import json
import random
from dataclasses import replace
from fractions import Fraction

import mpmath
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

import oracles
from laurentdata import (
    ExtendedAV,
    HyperellipticCurve,
    SiegelPoint,
    WindowSpec,
    build_from_curve,
    de_extend,
    differential_basis,
    extend_from_tau,
    k_preimage,
    polarization_pairing,
    validate,
)
from laurentdata import scalars
from laurentdata.eav import f_one, positivity_matrix, symplectic_basis
from laurentdata.errors import GenusUnsupported, InvalidWindow, NotSiegel, SingularCurve
from laurentdata.periods import LatticeLambda, sl2z_distance
from laurentdata.window import reduce_basis


@pytest.fixture(scope="module")
def lemniscatic_eav(lemniscatic):
    return build_from_curve(lemniscatic)


@pytest.fixture(scope="module")
def hexagonal_eav(hexagonal):
    return build_from_curve(hexagonal)


def random_siegel(rng, g):
    """Random symmetric tau with Im tau = L L^T + I (positive definite)."""
    re = [[rng.uniform(-1, 1) for _ in range(g)] for _ in range(g)]
    L = [[rng.uniform(-1, 1) for _ in range(g)] for _ in range(g)]
    tau = []
    for i in range(g):
        row = []
        for j in range(g):
            im = sum(L[i][k] * L[j][k] for k in range(g)) + (1 if i == j else 0)
            row.append(complex((re[i][j] + re[j][i]) / 2, im))
        tau.append(row)
    return SiegelPoint(tau)


# -- Siegel points -------------------------------------------------------------


def test_siegel_validation():
    with pytest.raises(NotSiegel):
        SiegelPoint([[-1j]])
    with pytest.raises(NotSiegel):
        SiegelPoint([[1j, 0.5], [0.2, 1j]])
    with pytest.raises(NotSiegel):
        SiegelPoint([[1j, 2j], [2j, 1j]])
    with pytest.raises(NotSiegel):
        SiegelPoint([[1j, 0]])
    assert SiegelPoint(1j).g == 1


def test_siegel_json():
    with mpmath.workprec(256):
        s = SiegelPoint([[0.3 + 1.7j, 0.1], [0.1, 2j]])
        obj = json.loads(json.dumps(s.to_json()))
        assert obj["g"] == 2
        assert SiegelPoint.from_json(obj) == s


# -- synthetic extension ---------------------------------------------------------


@pytest.mark.parametrize("tau", [[[1j]], [[0.3 + 1.7j]], [[1j, 0], [0, 2j]]])
def test_extend_validates_and_round_trips(tau):
    s = SiegelPoint(tau)
    e = extend_from_tau(s)
    rep = validate(e)
    assert rep.passed, rep.axioms
    assert de_extend(e).distance(s) < 1e-12


def test_extend_structure():
    e = extend_from_tau(SiegelPoint([[1j, 0], [0, 2j]]), 6)
    w = e.window
    assert e.K0.dim == 4
    assert e.Z.dim == 6
    assert e.K0.issubspace(e.Z)
    with mpmath.workprec(e.precision_bits):
        assert e.quotient_basis[0] == w.monomial(1, scalars.COMPLEX)
        assert e.quotient_basis[2][w.index(-1)] == 1
        assert e.quotient_basis[3][w.index(-2)] == mpmath.mpf(1) / 2
    assert e.Lambda.gram_int == ((0, 0, 1, 0), (0, 0, 0, 1), (-1, 0, 0, 0), (0, -1, 0, 0))


def test_extend_window_rules():
    with pytest.raises(InvalidWindow):
        extend_from_tau(SiegelPoint([[1j, 0], [0, 1j]]), 2)
    with pytest.raises(InvalidWindow):
        extend_from_tau(SiegelPoint([[1j]]), WindowSpec(3, 4))


@settings(max_examples=12, deadline=None)
@given(st.integers(0, 10 ** 6), st.sampled_from([1, 2, 3]))
def test_round_trip_random(seed, g):
    s = random_siegel(random.Random(seed), g)
    e = extend_from_tau(s, g + 2)
    assert validate(e).passed
    assert de_extend(e).distance(s) < 1e-12


# -- curves ----------------------------------------------------------------------


def test_build_from_curve(lemniscatic_eav):
    rep = validate(lemniscatic_eav)
    assert rep.passed, rep.axioms
    assert rep.details["quotient_dim"] == 2


def test_de_extend_curves(lemniscatic_eav, hexagonal_eav):
    with mpmath.workprec(256):
        t = de_extend(lemniscatic_eav).tau[0][0]
        assert sl2z_distance(t, oracles.agm_ratio(*oracles.LEMNISCATIC_ROOTS)) < 1e-8
        t = de_extend(hexagonal_eav).tau[0][0]
        assert sl2z_distance(t, oracles.agm_ratio(*oracles.hexagonal_roots())) < 1e-8


def test_build_partial_genus_two():
    c = HyperellipticCurve([1, 0, 0, 0, 0, 1])
    with pytest.raises(GenusUnsupported):
        build_from_curve(c)
    e = build_from_curve(c, allow_partial=True)
    assert e.partial and e.Z is None and e.Lambda is None
    assert f_one(e).dim == 2
    assert e.K0.dim == 12 - 2
    rep = validate(e)
    assert not rep.passed and rep.details["complete"] is False
    with pytest.raises(GenusUnsupported):
        de_extend(e)


def test_build_singular():
    with pytest.raises(SingularCurve):
        build_from_curve(HyperellipticCurve([0, 0, 0, 1]))


# -- tampering -------------------------------------------------------------------


def _perturb_z(e):
    with mpmath.workprec(e.precision_bits):
        rows = [list(r) for r in e.Z.basis]
        rows[0][e.window.index(1)] += 1
        return replace(e, Z=reduce_basis(rows, e.window, scalars.COMPLEX))


def test_tamper_nonisotropic(lemniscatic_eav):
    for e in (lemniscatic_eav, extend_from_tau(SiegelPoint([[1j]]))):
        rep = validate(_perturb_z(e))
        assert "maximal_isotropic" in rep.failed()
        assert rep.details["z_isotropic"] is False


def test_tamper_dropped_lattice_vector():
    e = extend_from_tau(SiegelPoint([[1j, 0], [0, 2j]]))
    lam = LatticeLambda(e.Lambda.basis[:-1], ())
    rep = validate(replace(e, Lambda=lam))
    assert rep.failed() == ["lattice"]


def test_tamper_non_unimodular_lattice():
    e = extend_from_tau(SiegelPoint([[1j]]))
    with mpmath.workprec(e.precision_bits):
        b = e.Lambda.basis
        lam = LatticeLambda((tuple(2 * x for x in b[0]), b[1]), ())
    assert "lattice" in validate(replace(e, Lambda=lam)).failed()


def test_tamper_k0_outside_z():
    e = extend_from_tau(SiegelPoint([[1j]]), 4)
    with mpmath.workprec(e.precision_bits):
        k0 = reduce_basis(list(e.K0.basis) + [e.window.monomial(-1, scalars.COMPLEX)],
                          e.window, scalars.COMPLEX)
    assert "k0_in_z" in validate(replace(e, K0=k0)).failed()


def test_tamper_wrong_hodge_line():
    # Z built from the holomorphic line instead of its conjugate
    e = extend_from_tau(SiegelPoint([[1j]]), 4)
    w = e.window
    with mpmath.workprec(e.precision_bits):
        z = reduce_basis(list(e.K0.basis) + [w.monomial(-1, scalars.COMPLEX)], w, scalars.COMPLEX)
    rep = validate(replace(e, Z=z))
    assert not rep.passed


# -- K, positivity, polarization -------------------------------------------------


def test_k_preimage(lemniscatic_eav):
    for e in (extend_from_tau(SiegelPoint([[1j]])), lemniscatic_eav):
        k = k_preimage(e)
        assert k.passed, k.checks
        assert len(k.lifts) == 2


def test_k_preimage_tampered():
    e = extend_from_tau(SiegelPoint([[1j]]), 4)
    with mpmath.workprec(e.precision_bits):
        qb = list(e.quotient_basis)
        qb[0] = e.window.monomial(4, scalars.COMPLEX)
    k = k_preimage(replace(e, quotient_basis=tuple(qb)))
    assert not k.checks["k_in_k0_perp"] and not k.passed


def test_positivity(lemniscatic_eav, hexagonal_eav):
    for e in (lemniscatic_eav, hexagonal_eav, extend_from_tau(SiegelPoint([[1j, 0.2], [0.2, 2j]]))):
        H = positivity_matrix(e)
        with mpmath.workprec(e.precision_bits):
            ev = mpmath.eighe((H + H.H) / 2, eigvals_only=True)
            assert min(mpmath.re(x) for x in ev) > 1e-6


def test_polarization_examples(x3p1):
    d = differential_basis(x3p1, 12)
    f, g = d.f_antiderivs[0], d.g_antiderivs[0]
    eight_pi_i = 8j * mpmath.pi
    assert abs(polarization_pairing(f, g, 1) - eight_pi_i) < 1e-14
    assert abs(polarization_pairing(f, g, 2) + eight_pi_i) < 1e-14
    assert polarization_pairing(f, g, 3) == polarization_pairing(f, g, 1)
    assert polarization_pairing(g, f, 1) == -polarization_pairing(f, g, 1)


def test_polarization_window_vectors():
    w = WindowSpec.square(2)
    x, y = w.monomial(-1), w.monomial(1)
    assert polarization_pairing(x, y, 1, window=w) == 2j * mpmath.pi
    with pytest.raises(ValueError):
        polarization_pairing(x, y, 1)
    with pytest.raises(ValueError):
        polarization_pairing(x, y, 0, window=w)


def test_lattice_integrality_under_polarization():
    e = extend_from_tau(SiegelPoint([[0.2 + 1.1j, 0.3], [0.3, 0.9j]]))
    for n in (1, 2):
        for x in e.Lambda.basis:
            for y in e.Lambda.basis:
                q = e.Q(x, y) * (-1) ** (n - 1)
                assert abs(q - mpmath.nint(mpmath.re(q))) < 1e-8


def test_de_extend_ignores_n():
    e = extend_from_tau(SiegelPoint([[0.3 + 1.7j]]))
    ref = de_extend(e)
    for n in range(1, 7):
        assert de_extend(replace(e, ambient_n=n)).tau == ref.tau


# -- symplectic bases ------------------------------------------------------------


def test_symplectic_basis_identity_on_standard_form():
    J = [[0, 0, 1, 0], [0, 0, 0, 1], [-1, 0, 0, 0], [0, -1, 0, 0]]
    assert symplectic_basis(J) == [[1 if i == k else 0 for i in range(4)] for k in range(4)]


def _transform(G, U):
    n = len(G)
    return [[sum(U[a][i] * G[i][j] * U[b][j] for i in range(n) for j in range(n))
             for b in range(n)] for a in range(n)]


@settings(max_examples=60, deadline=None)
@given(st.integers(0, 10 ** 6), st.sampled_from([1, 2, 3]))
def test_symplectic_basis_on_scrambled_forms(seed, g):
    rng = random.Random(seed)
    n = 2 * g
    J = [[0] * n for _ in range(n)]
    for k in range(g):
        J[k][g + k], J[g + k][k] = 1, -1
    # scramble with random elementary integer operations
    M = [[1 if i == j else 0 for j in range(n)] for i in range(n)]
    for _ in range(8):
        a, b = rng.sample(range(n), 2)
        c = rng.randint(-3, 3)
        M[a] = [x + c * y for x, y in zip(M[a], M[b])]
    G = _transform(J, M)
    U = symplectic_basis(G)
    assert _transform(G, U) == J


# -- serialization ---------------------------------------------------------------


def test_eav_json_round_trip(lemniscatic_eav):
    for e in (lemniscatic_eav, extend_from_tau(SiegelPoint([[0.3 + 1.7j]]))):
        text = json.dumps(e.to_json())
        back = ExtendedAV.from_json(json.loads(text))
        assert back == e
        assert json.dumps(back.to_json()) == text
        assert validate(back).passed


def test_eav_json_shape():
    obj = extend_from_tau(SiegelPoint([[1j]])).to_json()
    assert set(obj) >= {"window", "K0", "Z", "Lambda", "n"}
    assert set(obj["Lambda"]) == {"basis", "gram_int"}
    assert obj["n"] == 1
