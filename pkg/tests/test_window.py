import json
from fractions import Fraction

import mpmath
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from laurentdata import LaurentSeries, WindowSpec, annihilator, isotropy_check, quotient_gram, reduce_basis
from laurentdata import scalars
from laurentdata.errors import DimensionMismatch, InsufficientPrecision, InvalidWindow, NotIsotropic, WindowTooSmall
from laurentdata.window import (
    WindowSubspace,
    intersection,
    pair,
    radical,
    series_to_vector,
    span_sum,
    vector_to_series,
)

W2 = WindowSpec.square(2)


def vec(w, **terms):
    """Window vector from keyword exponents, e.g. ``m1=1`` for ``z^-1``."""
    v = [Fraction(0)] * w.dim
    for k, c in terms.items():
        e = -int(k[1:]) if k.startswith("m") else int(k[1:])
        v[w.index(e)] = Fraction(c)
    return tuple(v)


def mono(w, e):
    return w.monomial(e)


def test_window_spec_rules():
    assert W2.exponents == [-2, -1, 1, 2]
    with pytest.raises(InvalidWindow):
        WindowSpec(3, 2)
    with pytest.raises(InvalidWindow):
        WindowSpec(0, 2)
    assert WindowSpec(2, 5).dim == 7


def test_pair_monomials():
    assert pair(W2, mono(W2, -1), mono(W2, 1)) == 1
    assert pair(W2, mono(W2, -2), mono(W2, 2)) == 2
    assert pair(W2, mono(W2, 2), mono(W2, -2)) == -2
    assert pair(W2, mono(W2, 1), mono(W2, 2)) == 0


def test_reduce_basis_examples():
    s = reduce_basis([vec(W2, p1=1, p2=1), vec(W2, p1=2, p2=2)], W2)
    assert s.dim == 1 and s.basis == (vec(W2, p1=1, p2=1),)
    assert reduce_basis([], W2).dim == 0
    s = reduce_basis([mono(W2, -1), vec(W2, m1=1, p1=1)], W2)
    assert s.basis == (mono(W2, -1), mono(W2, 1))


def test_reduce_basis_dimension_mismatch():
    with pytest.raises(DimensionMismatch):
        reduce_basis([(1, 2, 3)], W2)


def test_annihilator_examples():
    s = reduce_basis([mono(W2, 1)], W2)
    assert annihilator(s).basis == (mono(W2, -2), mono(W2, 1), mono(W2, 2))
    full = reduce_basis([mono(W2, e) for e in W2.exponents], W2)
    assert annihilator(full).dim == 0
    s = reduce_basis([mono(W2, -2), mono(W2, 2)], W2)
    assert annihilator(s).basis == (mono(W2, -1), mono(W2, 1))


def test_quotient_gram_of_zero_subspace():
    qg = quotient_gram(reduce_basis([], W2))
    assert qg.basis == [mono(W2, e) for e in (-2, -1, 1, 2)]
    assert qg.gram == [[0, 0, 0, 2], [0, 0, 1, 0], [0, -1, 0, 0], [-2, 0, 0, 0]]


def test_quotient_gram_single_vector():
    s = reduce_basis([vec(W2, m1=1, p1=1)], W2)
    qg = quotient_gram(s)
    assert len(qg.basis) == 2
    g = qg.gram
    assert g[0][1] == -g[1][0] != 0


def test_quotient_gram_not_isotropic():
    with pytest.raises(NotIsotropic):
        quotient_gram(reduce_basis([mono(W2, -1), mono(W2, 1)], W2))


def test_isotropy_examples():
    assert isotropy_check(reduce_basis([mono(W2, 1)], W2)) == \
        {"isotropic": True, "maximal": False, "window_relative": False}
    assert not isotropy_check(reduce_basis([mono(W2, -1), mono(W2, 1)], W2))["isotropic"]
    r = isotropy_check(reduce_basis([mono(W2, -1), mono(W2, -2)], W2))
    assert r["isotropic"] and r["maximal"]


def test_non_square_window_radical():
    w = WindowSpec(2, 4)
    assert radical(w).basis == (w.monomial(3), w.monomial(4))
    s = reduce_basis([w.monomial(-1), w.monomial(-2)], w)
    r = isotropy_check(s)
    assert r["isotropic"] and not r["maximal"] and r["window_relative"]
    assert isotropy_check(span_sum(s, radical(w)))["maximal"]


def test_series_to_vector():
    w = WindowSpec(2, 3)
    f = LaurentSeries({-2: 1, 0: 9, 3: Fraction(1, 2)}, 3)
    assert series_to_vector(f, w) == (1, 0, 0, 0, Fraction(1, 2))
    assert vector_to_series(series_to_vector(f, w), w) == f.drop_constant()
    with pytest.raises(WindowTooSmall):
        series_to_vector(LaurentSeries({-3: 1}, 5), w)
    with pytest.raises(InsufficientPrecision):
        series_to_vector(LaurentSeries({-1: 1}, 2), w)


def test_intersection_and_sum():
    a = reduce_basis([mono(W2, -1), mono(W2, 1)], W2)
    b = reduce_basis([mono(W2, 1), mono(W2, 2)], W2)
    assert intersection(a, b).basis == (mono(W2, 1),)
    assert span_sum(a, b).dim == 3


def test_complex_backend():
    with mpmath.workprec(128):
        v = tuple(mpmath.mpc(x) for x in (1, 0, 0, 1))
        s = reduce_basis([v, tuple(2 * x for x in v)], W2)
        assert s.backend == scalars.COMPLEX and s.dim == 1
        assert annihilator(annihilator(s)).equals(s)


def test_json_round_trip():
    s = reduce_basis([vec(W2, m2=Fraction(1, 3), p1=2), mono(W2, -1)], W2)
    obj = json.loads(json.dumps(s.to_json()))
    assert obj["window"] == {"neg": 2, "pos": 2}
    assert WindowSubspace.from_json(obj) == s


# -- properties ----------------------------------------------------------------


@st.composite
def subspaces(draw):
    n = draw(st.integers(1, 4))
    m = draw(st.integers(n, n + 2))
    w = WindowSpec(n, m)
    k = draw(st.integers(0, w.dim))
    vecs = [tuple(Fraction(draw(st.integers(-3, 3))) for _ in range(w.dim)) for _ in range(k)]
    return reduce_basis(vecs, w)


@settings(max_examples=120, deadline=None)
@given(subspaces())
def test_double_annihilator_and_dimension(s):
    w = s.window
    ann = annihilator(s)
    if w.is_square:
        assert annihilator(ann) == s
        assert s.dim + ann.dim == w.dim
    else:
        # the radical is annihilated by everything
        assert annihilator(ann) == span_sum(s, radical(w))


@settings(max_examples=80, deadline=None)
@given(subspaces(), st.lists(st.integers(-2, 2), min_size=1, max_size=10))
def test_monotonicity(s, extra):
    w = s.window
    v = tuple(Fraction(extra[i % len(extra)]) for i in range(w.dim))
    t = span_sum(s, reduce_basis([v], w))
    assert annihilator(t).issubspace(annihilator(s))


@settings(max_examples=80, deadline=None)
@given(subspaces())
def test_quotient_gram_skew_nondegenerate(s):
    import sympy
    iso = intersection(s, annihilator(s))
    qg = quotient_gram(iso)
    g = qg.gram
    n = len(g)
    assert all(g[i][i] == 0 and g[i][j] == -g[j][i] for i in range(n) for j in range(n))
    if iso.window.is_square and n:
        assert sympy.Matrix(g).det() != 0
