"""Finite windows of H' carrying the residue symplectic form.

A window ``[-N..M] minus {0}`` is the span of ``z^k`` for ``-N <= k <= M``,
``k != 0``.  Vectors are tuples of coefficients in the fixed exponent order
``-N, ..., -1, 1, ..., M``.  On monomials the form reads
``<z^a, z^b> = b * delta(a + b, 0)``; it is nondegenerate exactly when
``N == M``.  For ``M > N`` the exponents ``N+1..M`` span its radical: they
hold the tails of truncated series but pair to zero with every window
vector.

Subspaces are stored in reduced row echelon form, which makes equality of
exact subspaces a plain comparison.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import NamedTuple, Sequence

import mpmath

from . import scalars
from .errors import (
    DimensionMismatch,
    InsufficientPrecision,
    InvalidWindow,
    NotIsotropic,
    SchemaError,
    WindowTooSmall,
)
from .series import LaurentSeries


@dataclass(frozen=True)
class WindowSpec:
    neg: int
    pos: int

    def __post_init__(self):
        if self.neg < 1 or self.pos < 1:
            raise InvalidWindow("window depths must be positive")
        if self.pos < self.neg:
            raise InvalidWindow(f"pos_height {self.pos} < neg_depth {self.neg}: "
                                "pairings against truncated series would not be exact")

    @classmethod
    def square(cls, n: int) -> "WindowSpec":
        return cls(n, n)

    @property
    def neg_depth(self):
        return self.neg

    @property
    def pos_height(self):
        return self.pos

    @property
    def dim(self) -> int:
        return self.neg + self.pos

    @property
    def is_square(self) -> bool:
        return self.neg == self.pos

    @property
    def exponents(self) -> list[int]:
        return list(range(-self.neg, 0)) + list(range(1, self.pos + 1))

    def index(self, e: int) -> int:
        if e == 0 or e < -self.neg or e > self.pos:
            raise IndexError(f"exponent {e} outside window")
        return e + self.neg if e < 0 else e + self.neg - 1

    def monomial(self, e: int, backend=scalars.EXACT) -> tuple:
        v = [scalars.zero(backend)] * self.dim
        v[self.index(e)] = scalars.one(backend)
        return tuple(v)

    def to_json(self):
        return {"neg": self.neg, "pos": self.pos}

    @classmethod
    def from_json(cls, obj) -> "WindowSpec":
        try:
            return cls(int(obj["neg"]), int(obj["pos"]))
        except (KeyError, TypeError, ValueError) as exc:
            raise SchemaError(f"bad window {obj!r}") from exc


# -- dense linear algebra over Fraction or mpc -------------------------------


def default_tol():
    """Rank tolerance for the complex backend at the current working precision."""
    return mpmath.mpf(2) ** (-(mpmath.mp.prec // 2))


def _scale(rows):
    m = 0
    for r in rows:
        for x in r:
            a = abs(x)
            if a > m:
                m = a
    return m


def rref(rows: Sequence[Sequence], backend: str, tol=None):
    """Reduced row echelon form; returns ``(rows, pivot_columns)``."""
    rows = [[scalars.coerce(x, backend) for x in r] for r in rows]
    if not rows:
        return [], []
    ncols = len(rows[0])
    exact = backend == scalars.EXACT
    if not exact:
        tol = default_tol() if tol is None else tol
        eps = tol * max(1, _scale(rows))
    pivots = []
    r = 0
    for c in range(ncols):
        if r == len(rows):
            break
        if exact:
            p = next((i for i in range(r, len(rows)) if rows[i][c] != 0), None)
        else:
            p = max(range(r, len(rows)), key=lambda i: abs(rows[i][c]))
            if abs(rows[p][c]) <= eps:
                p = None
        if p is None:
            continue
        rows[r], rows[p] = rows[p], rows[r]
        inv = 1 / rows[r][c]
        rows[r] = [x * inv for x in rows[r]]
        for i in range(len(rows)):
            if i != r:
                f = rows[i][c]
                if f != 0:
                    rows[i] = [x - f * y for x, y in zip(rows[i], rows[r])]
        if not exact:
            for i in range(len(rows)):
                if i != r:
                    rows[i][c] = scalars.zero(backend)
        pivots.append(c)
        r += 1
    out = rows[:r]
    if not exact:
        for row in out:
            for j, x in enumerate(row):
                if abs(x) <= eps:
                    row[j] = scalars.zero(backend)
    return [tuple(row) for row in out], pivots


def nullspace(rows: Sequence[Sequence], ncols: int, backend: str, tol=None) -> list[tuple]:
    """Basis of ``{v : row . v = 0 for all rows}``."""
    red, pivots = rref(rows, backend, tol) if rows else ([], [])
    free = [c for c in range(ncols) if c not in pivots]
    basis = []
    for fcol in free:
        v = [scalars.zero(backend)] * ncols
        v[fcol] = scalars.one(backend)
        for row, pc in zip(red, pivots):
            v[pc] = -row[fcol]
        basis.append(tuple(v))
    return basis


def rank(rows, backend, tol=None) -> int:
    return len(rref(rows, backend, tol)[1]) if rows else 0


# -- the residue form on window vectors ---------------------------------------


def pair(window: WindowSpec, u: Sequence, v: Sequence):
    """``<u, v> = sum_a u_a * v_{-a} * (-a)`` over window exponents."""
    total = 0
    for a in range(1, window.neg + 1):
        # a > 0 side: <z^-a, z^a> = a and <z^a, z^-a> = -a
        total += a * (u[window.index(-a)] * v[window.index(a)]
                      - u[window.index(a)] * v[window.index(-a)])
    return total


def gram(window: WindowSpec, vectors: Sequence[Sequence]) -> list[list]:
    return [[pair(window, u, v) for v in vectors] for u in vectors]


# -- subspaces ----------------------------------------------------------------


@dataclass(frozen=True)
class WindowSubspace:
    """Subspace of a window in canonical reduced form.

    Build instances through :func:`reduce_basis`.
    """

    window: WindowSpec
    basis: tuple
    backend: str = scalars.EXACT

    @property
    def dim(self) -> int:
        return len(self.basis)

    @property
    def pivots(self) -> list[int]:
        out = []
        for row in self.basis:
            out.append(next(j for j, x in enumerate(row) if x != 0))
        return out

    def vectors(self) -> list[tuple]:
        return list(self.basis)

    def to_complex(self) -> "WindowSubspace":
        if self.backend == scalars.COMPLEX:
            return self
        return reduce_basis(self.basis, self.window, scalars.COMPLEX)

    def contains(self, v, tol=None) -> bool:
        return rank(list(self.basis) + [v], self.backend, tol) == self.dim

    def issubspace(self, other: "WindowSubspace", tol=None) -> bool:
        backend = _common_backend(self, other)
        return rank(list(other.basis) + list(self.basis), backend, tol) == other.dim

    def equals(self, other: "WindowSubspace", tol=None) -> bool:
        return self.dim == other.dim and self.issubspace(other, tol)

    def as_series(self) -> list[LaurentSeries]:
        exps = self.window.exponents
        return [LaurentSeries(dict(zip(exps, row)), self.window.pos, self.backend)
                for row in self.basis]

    def to_json(self) -> dict:
        return {"window": self.window.to_json(),
                "basis": [[scalars.to_json(x) for x in row] for row in self.basis]}

    @classmethod
    def from_json(cls, obj) -> "WindowSubspace":
        try:
            window = WindowSpec.from_json(obj["window"])
            rows = [[scalars.from_json(x) for x in row] for row in obj["basis"]]
        except (KeyError, TypeError) as exc:
            raise SchemaError(f"bad subspace: {exc}") from exc
        backend = scalars.EXACT
        if any(scalars.backend_of(x) == scalars.COMPLEX for row in rows for x in row):
            backend = scalars.COMPLEX
        for row in rows:
            if len(row) != window.dim:
                raise SchemaError("basis row length does not match the window")
        # stored rows are already canonical; keep them bit-exact
        return cls(window, tuple(tuple(scalars.coerce(x, backend) for x in row) for row in rows),
                   backend)


def _common_backend(*spaces) -> str:
    if any(s.backend == scalars.COMPLEX for s in spaces):
        return scalars.COMPLEX
    return scalars.EXACT


def reduce_basis(vectors, window: WindowSpec, backend: str | None = None,
                 tol=None) -> WindowSubspace:
    vectors = [tuple(v) for v in vectors]
    for v in vectors:
        if len(v) != window.dim:
            raise DimensionMismatch(f"vector of length {len(v)} in a window of dimension {window.dim}")
    if backend is None:
        backend = scalars.EXACT
        if any(scalars.backend_of(x) == scalars.COMPLEX for v in vectors for x in v):
            backend = scalars.COMPLEX
    rows, _ = rref(vectors, backend, tol)
    return WindowSubspace(window, tuple(rows), backend)


def span_sum(*spaces: WindowSubspace, tol=None) -> WindowSubspace:
    backend = _common_backend(*spaces)
    rows = [v for s in spaces for v in s.basis]
    return reduce_basis(rows, spaces[0].window, backend, tol)


def intersection(s: WindowSubspace, t: WindowSubspace, tol=None) -> WindowSubspace:
    backend = _common_backend(s, t)
    w = s.window
    if not s.dim or not t.dim:
        return WindowSubspace(w, (), backend)
    t_eqs = nullspace(list(t.basis), w.dim, backend, tol)
    # coefficients a with sum a_i s_i satisfying t's equations
    system = [[sum(e[j] * row[j] for j in range(w.dim)) for row in s.basis] for e in t_eqs]
    coeffs = nullspace(system, s.dim, backend, tol) if system else \
        [tuple(scalars.one(backend) if i == k else scalars.zero(backend) for i in range(s.dim))
         for k in range(s.dim)]
    vecs = [tuple(sum(a[i] * s.basis[i][j] for i in range(s.dim)) for j in range(w.dim))
            for a in coeffs]
    return reduce_basis(vecs, w, backend, tol)


def positive_part(window: WindowSpec, backend=scalars.EXACT) -> WindowSubspace:
    """The shadow of H'_+ : span of ``z^1 .. z^M``."""
    return reduce_basis([window.monomial(e, backend) for e in range(1, window.pos + 1)],
                        window, backend)


def negative_part(window: WindowSpec, backend=scalars.EXACT) -> WindowSubspace:
    return reduce_basis([window.monomial(e, backend) for e in range(-window.neg, 0)],
                        window, backend)


def radical(window: WindowSpec, backend=scalars.EXACT) -> WindowSubspace:
    return reduce_basis([window.monomial(e, backend) for e in range(window.neg + 1, window.pos + 1)],
                        window, backend)


def annihilator(s: WindowSubspace, tol=None) -> WindowSubspace:
    w = s.window
    # <s, z^b> = b * s_{-b}
    eqs = []
    for row in s.basis:
        eq = [scalars.zero(s.backend)] * w.dim
        for b in w.exponents:
            if -b >= -w.neg and -b <= w.pos:
                eq[w.index(b)] = b * row[w.index(-b)]
        eqs.append(eq)
    return reduce_basis(nullspace(eqs, w.dim, s.backend, tol), w, s.backend, tol)


def _is_zero_matrix(m, tol) -> bool:
    return all(scalars.is_zero(x, tol) for row in m for x in row)


def _pair_tol(s: WindowSubspace, tol):
    if s.backend == scalars.EXACT:
        return 0
    tol = default_tol() if tol is None else tol
    return tol * max(1, _scale(s.basis)) ** 2 * max(1, s.window.neg)


def isotropy_check(s: WindowSubspace, tol=None) -> dict:
    """Isotropy and maximality of ``s`` inside its window.

    ``maximal`` means ``s`` equals its own annihilator.  On a square window
    this is ``dim s = N``.  On a non-square window maximality is relative to
    the window (every maximal isotropic subspace contains the radical) and
    ``window_relative`` is set.
    """
    isotropic = _is_zero_matrix(gram(s.window, s.basis), _pair_tol(s, tol))
    maximal = isotropic and annihilator(s, tol).dim == s.dim
    return {"isotropic": isotropic, "maximal": maximal,
            "window_relative": not s.window.is_square}


class QuotientGram(NamedTuple):
    gram: list
    basis: list


def quotient_gram(s: WindowSubspace, tol=None) -> QuotientGram:
    """Gram matrix of the form on ``s^perp / s`` for isotropic ``s``.

    The complement basis is chosen greedily from the reduced basis of
    ``s^perp``, lowest pivot exponent first.
    """
    if not _is_zero_matrix(gram(s.window, s.basis), _pair_tol(s, tol)):
        raise NotIsotropic("subspace is not isotropic")
    perp = annihilator(s, tol)
    chosen = []
    current = list(s.basis)
    r = len(current)
    for v in perp.basis:
        if rank(current + [v], s.backend, tol) > r:
            current.append(v)
            chosen.append(v)
            r += 1
    return QuotientGram(gram(s.window, chosen), chosen)


def series_to_vector(f: LaurentSeries, window: WindowSpec, backend: str | None = None) -> tuple:
    """Window coordinates of ``f`` modulo constants.

    ``f`` must have no pole beyond ``-N`` and be known through ``M``.
    """
    backend = backend or f.backend
    if f.low < -window.neg:
        raise WindowTooSmall(f"pole of order {-f.low} does not fit a window of depth {window.neg}")
    if f.known_through < window.pos:
        raise InsufficientPrecision(
            f"series known through {f.known_through} but window reaches z^{window.pos}")
    return tuple(scalars.coerce(f[e], backend) for e in window.exponents)


def vector_to_series(v: Sequence, window: WindowSpec, backend: str | None = None) -> LaurentSeries:
    return LaurentSeries(dict(zip(window.exponents, v)), window.pos, backend)


def coordinates(vectors: Sequence[Sequence], target: Sequence, backend: str, tol=None) -> list:
    """Solve ``sum c_i vectors[i] = target`` (least-rank exact or numeric)."""
    n = len(vectors)
    dim = len(target)
    aug = [[vectors[i][j] for i in range(n)] + [target[j]] for j in range(dim)]
    red, pivots = rref(aug, backend, tol)
    if n in pivots:
        raise ValueError("target is not in the span")
    c = [scalars.zero(backend)] * n
    for row, p in zip(red, pivots):
        c[p] = row[n]
    return c


__all__ = [
    "WindowSpec", "WindowSubspace", "QuotientGram",
    "reduce_basis", "annihilator", "quotient_gram", "isotropy_check",
    "span_sum", "intersection", "positive_part", "negative_part", "radical",
    "pair", "gram", "rank", "rref", "nullspace", "coordinates",
    "series_to_vector", "vector_to_series", "default_tol",
]
