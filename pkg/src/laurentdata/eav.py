"""Extended abelian varieties on a finite window.

A triple ``(Z, K0, Lambda)`` lives in a square window of H'.  ``K0`` is
isotropic, ``Z`` is maximal isotropic with ``K0 <= Z`` and complements the
positive part, and ``Lambda`` is a lattice in ``K0^perp / K0`` given by
coordinates in an explicit quotient basis.  The integral form on the
lattice is ``2 pi i <,>``; the sign ``(-1)^(n-1)`` of the ambient dimension
only enters :func:`polarization_pairing`.
"""

from __future__ import annotations

from dataclasses import dataclass, field, replace

import mpmath

from . import scalars
from .curves import HyperellipticCurve, differential_basis, k0_window
from .errors import (
    DegenerateFOne,
    GenusUnsupported,
    InvalidWindow,
    NotSiegel,
    SchemaError,
)
from .periods import DEFAULT_PRECISION_BITS, LatticeLambda, lambda_lattice, period_matrix, round_gram
from .series import LaurentSeries, residue_pair
from .window import (
    WindowSpec,
    WindowSubspace,
    annihilator,
    coordinates,
    default_tol,
    gram,
    intersection,
    isotropy_check,
    pair,
    positive_part,
    rank,
    reduce_basis,
    series_to_vector,
    span_sum,
)

INTEGRALITY_TOL = 1e-8


def _lattice_scale():
    # c with c^2 = i / (2 pi): makes 2 pi i <,> standard on the synthetic lattice
    return mpmath.expjpi(mpmath.mpf(1) / 4) / mpmath.sqrt(2 * mpmath.pi)


# -- Siegel points -------------------------------------------------------------


@dataclass(frozen=True)
class SiegelPoint:
    """Symmetric ``g x g`` complex matrix with positive definite imaginary part."""

    tau: tuple
    tol: float = 1e-12

    def __post_init__(self):
        rows = self.tau
        if isinstance(rows, mpmath.matrix):
            rows = [[rows[i, j] for j in range(rows.cols)] for i in range(rows.rows)]
        elif not isinstance(rows, (list, tuple)):
            rows = [[rows]]
        rows = tuple(tuple(mpmath.mpc(x) for x in r) for r in rows)
        g = len(rows)
        if g == 0 or any(len(r) != g for r in rows):
            raise NotSiegel("tau must be a nonempty square matrix")
        scale = max(1, max(abs(x) for r in rows for x in r))
        for i in range(g):
            for j in range(i + 1, g):
                if abs(rows[i][j] - rows[j][i]) > self.tol * scale:
                    raise NotSiegel("tau is not symmetric")
        im = mpmath.matrix([[mpmath.im(x) for x in r] for r in rows])
        im = (im + im.T) / 2
        try:
            mpmath.cholesky(im)
        except ValueError:
            raise NotSiegel("Im(tau) is not positive definite") from None
        object.__setattr__(self, "tau", rows)

    @property
    def g(self) -> int:
        return len(self.tau)

    def matrix(self) -> mpmath.matrix:
        return mpmath.matrix([list(r) for r in self.tau])

    def distance(self, other: "SiegelPoint"):
        return max(abs(a - b) for ra, rb in zip(self.tau, other.tau) for a, b in zip(ra, rb))

    def to_json(self) -> dict:
        return {"g": self.g, "tau": [[scalars.to_json(x) for x in r] for r in self.tau]}

    @classmethod
    def from_json(cls, obj) -> "SiegelPoint":
        try:
            rows = [[scalars.coerce(scalars.from_json(x), scalars.COMPLEX) for x in r] for r in obj["tau"]]
        except (KeyError, TypeError) as exc:
            raise SchemaError(f"bad Siegel point: {exc}") from exc
        if "g" in obj and obj["g"] != len(rows):
            raise SchemaError("g does not match the size of tau")
        return cls(tuple(tuple(r) for r in rows))


# -- the triple ----------------------------------------------------------------


@dataclass(frozen=True)
class ExtendedAV:
    """The triple ``(Z, K0, Lambda)`` on a square window.

    ``quotient_basis`` lists ``2g`` window vectors in ``K0^perp`` whose
    classes span ``K0^perp / K0``; ``Lambda.basis`` holds coordinates with
    respect to it.  ``Z`` and ``Lambda`` are ``None`` for a partial triple.
    """

    window: WindowSpec
    K0: WindowSubspace
    Z: WindowSubspace | None
    Lambda: LatticeLambda | None
    quotient_basis: tuple
    ambient_n: int = 1
    precision_bits: int = DEFAULT_PRECISION_BITS
    partial: bool = False
    meta: dict = field(default_factory=dict, compare=False)

    @property
    def backend(self) -> str:
        return scalars.COMPLEX

    @property
    def genus(self) -> int:
        return len(self.quotient_basis) // 2

    def lattice_vectors(self) -> list[tuple]:
        """Window representatives of the lattice basis."""
        if self.Lambda is None:
            return []
        q = self.quotient_basis
        return [tuple(sum(c[i] * q[i][j] for i in range(len(q))) for j in range(self.window.dim))
                for c in self.Lambda.basis]

    def quotient_gram(self) -> list[list]:
        return gram(self.window, self.quotient_basis)

    def Q(self, x, y):
        """``2 pi i <x, y>`` for quotient coordinates ``x`` and ``y``."""
        G = self.quotient_gram()
        s = sum(x[i] * G[i][j] * y[j] for i in range(len(x)) for j in range(len(y)))
        return 2j * mpmath.pi * s

    def to_json(self) -> dict:
        with mpmath.workprec(self.precision_bits):
            return self._to_json()

    def _to_json(self) -> dict:
        out = {
            "window": self.window.to_json(),
            "K0": self.K0.to_json(),
            "Z": None if self.Z is None else self.Z.to_json(),
            "Lambda": None if self.Lambda is None else self.Lambda.to_json(),
            "quotient_basis": [[scalars.to_json(x) for x in v] for v in self.quotient_basis],
            "n": self.ambient_n,
            "precision_bits": self.precision_bits,
        }
        if self.partial:
            out["partial"] = True
        return out

    @classmethod
    def from_json(cls, obj) -> "ExtendedAV":
        try:
            bits = int(obj.get("precision_bits", DEFAULT_PRECISION_BITS))
            with mpmath.workprec(bits):
                window = WindowSpec.from_json(obj["window"])
                k0 = _complex_space(WindowSubspace.from_json(obj["K0"]))
                z = None if obj.get("Z") is None else _complex_space(WindowSubspace.from_json(obj["Z"]))
                lam = None if obj.get("Lambda") is None else LatticeLambda.from_json(obj["Lambda"])
                qb = tuple(tuple(scalars.coerce(scalars.from_json(x), scalars.COMPLEX) for x in v)
                           for v in obj["quotient_basis"])
            n = obj.get("n", 1)
        except (KeyError, TypeError, AttributeError) as exc:
            raise SchemaError(f"bad extended abelian variety: {exc}") from exc
        if not isinstance(n, int) or n < 1:
            raise SchemaError("n must be a positive integer")
        if any(len(v) != window.dim for v in qb):
            raise SchemaError("quotient basis vector length does not match the window")
        return cls(window, k0, z, lam, qb, n, bits, bool(obj.get("partial", False)))


def _complex_space(s: WindowSubspace) -> WindowSubspace:
    if s.backend == scalars.COMPLEX:
        return s
    return WindowSubspace(s.window, tuple(tuple(scalars.coerce(x, scalars.COMPLEX) for x in r)
                                          for r in s.basis), scalars.COMPLEX)


def _require_square(window: WindowSpec):
    if not window.is_square:
        raise InvalidWindow("extended abelian varieties need a square window: "
                            "the radical of a non-square window lies in the positive part")


# -- construction --------------------------------------------------------------


def extend_from_tau(tau: SiegelPoint, window: WindowSpec | int | None = None, *,
                    ambient_n: int = 1, precision_bits: int = DEFAULT_PRECISION_BITS) -> ExtendedAV:
    """Synthetic triple whose de-extension is ``tau``.

    ``K0`` is the tail ``z^-k`` for ``g < k <= N``; the quotient basis is
    ``e_k = z^k`` followed by ``f_k = z^-k / k``.
    """
    if not isinstance(tau, SiegelPoint):
        tau = SiegelPoint(tau)
    g = tau.g
    if window is None:
        window = WindowSpec.square(g + 1)
    elif isinstance(window, int):
        window = WindowSpec.square(window)
    _require_square(window)
    if window.neg < g + 1:
        raise InvalidWindow(f"window depth must be at least g + 1 = {g + 1}")
    with mpmath.workprec(precision_bits):
        C = scalars.COMPLEX
        k0 = reduce_basis([window.monomial(-k, C) for k in range(g + 1, window.neg + 1)], window, C)
        e = [window.monomial(k, C) for k in range(1, g + 1)]
        f = [tuple(x / k for x in window.monomial(-k, C)) for k in range(1, g + 1)]
        c = _lattice_scale()
        T = tau.tau
        # alpha_k = c (e_k - sum_j tau_kj f_j), beta_k = c f_k in (e, f) coordinates
        alphas = [tuple([c if i == k else 0 for i in range(g)] + [-c * T[k][j] for j in range(g)])
                  for k in range(g)]
        betas = [tuple([mpmath.mpc(0)] * g + [c if j == k else 0 for j in range(g)]) for k in range(g)]
        basis = tuple(tuple(mpmath.mpc(x) for x in v) for v in alphas + betas)
        qb = tuple(e + f)
        lam = _lattice(window, qb, basis)
        u = []
        for k in range(g):
            u.append(tuple(e[k][i] + sum((mpmath.conj(T[k][j]) - T[k][j]) * f[j][i] for j in range(g))
                           for i in range(window.dim)))
        z = reduce_basis(list(k0.basis) + u, window, C)
    return ExtendedAV(window, k0, z, lam, qb, ambient_n, precision_bits,
                      meta={"source": "tau"})


def _lattice(window, qb, basis) -> LatticeLambda:
    G = gram(window, qb)
    gr = tuple(tuple(2j * mpmath.pi * sum(x[i] * G[i][j] * y[j] for i in range(len(x)) for j in range(len(y)))
                     for y in basis) for x in basis)
    gi, err = round_gram(gr)
    return LatticeLambda(basis, gi, gr, err)


def build_from_curve(curve: HyperellipticCurve, window: WindowSpec | int | None = None, *,
                     precision_bits: int = DEFAULT_PRECISION_BITS, allow_partial: bool = False,
                     ambient_n: int = 1) -> ExtendedAV:
    """Geometric triple of a hyperelliptic curve.

    ``U`` is the conjugate of the holomorphic line, found from the periods;
    ``Z`` is ``K0`` plus its lift along the ``(f, g)`` quotient basis.
    """
    g = curve.genus
    if window is None:
        window = WindowSpec.square(4 * g + 4)
    elif isinstance(window, int):
        window = WindowSpec.square(window)
    _require_square(window)
    if g != 1 and not allow_partial:
        raise GenusUnsupported(f"the lattice needs periods, available for genus 1 only (got {g})")
    diff = differential_basis(curve, max(window.pos, 2 * g + 1))
    qb_exact = [series_to_vector(s, window) for s in diff.f_antiderivs + diff.g_antiderivs]
    k0_exact = k0_window(curve, window)
    with mpmath.workprec(precision_bits):
        C = scalars.COMPLEX
        k0 = _complex_space(k0_exact)
        qb = tuple(tuple(scalars.coerce(x, C) for x in v) for v in qb_exact)
        meta = {"source": "curve", "curve": curve.to_json()}
        if g != 1:
            return ExtendedAV(window, k0, None, None, qb, ambient_n, precision_bits, True, meta)
        periods = period_matrix(curve, precision_bits)
        lam = lambda_lattice(curve, precision_bits, periods=periods)
        # conj(F^1): Lambda coordinates (conj A, conj B) mapped back to (f, g)
        a, b = mpmath.conj(periods.A), mpmath.conj(periods.B)
        ca = a * lam.basis[0][0] + b * lam.basis[1][0]
        cb = a * lam.basis[0][1] + b * lam.basis[1][1]
        u = tuple(ca * qb[0][i] + cb * qb[1][i] for i in range(window.dim))
        z = reduce_basis(list(k0.basis) + [u], window, C)
        lam = _lattice(window, qb, lam.basis)
    return ExtendedAV(window, k0, z, lam, qb, ambient_n, precision_bits, False, meta)


# -- validation ----------------------------------------------------------------


AXIOMS = ("complement", "maximal_isotropic", "k0_in_z", "lattice", "hodge_complement", "positivity")


@dataclass
class ValidationReport:
    axioms: dict
    details: dict

    @property
    def passed(self) -> bool:
        return all(v is True for v in self.axioms.values())

    def failed(self) -> list[str]:
        return [k for k, v in self.axioms.items() if v is False]

    def to_json(self) -> dict:
        return {"passed": self.passed, "axioms": dict(self.axioms), "details": self.details}


def f_one(eav: ExtendedAV, tol=None) -> WindowSubspace:
    """``K0^perp`` intersected with the positive part."""
    with mpmath.workprec(eav.precision_bits):
        return intersection(annihilator(eav.K0, tol), positive_part(eav.window, scalars.COMPLEX), tol)


def quotient_coordinates(eav: ExtendedAV, v, tol=None) -> list:
    """Coordinates of the class of ``v`` in the quotient basis (``v`` in ``K0^perp``)."""
    vecs = list(eav.quotient_basis) + list(eav.K0.basis)
    return coordinates(vecs, v, scalars.COMPLEX, tol)[:len(eav.quotient_basis)]


def _lattice_coordinates(eav: ExtendedAV, x):
    """Quotient coordinates ``x`` rewritten in the lattice basis."""
    M = mpmath.matrix([list(col) for col in eav.Lambda.basis]).T
    return list(mpmath.lu_solve(M, mpmath.matrix(list(x))))


def _from_lattice(eav: ExtendedAV, c):
    basis = eav.Lambda.basis
    return [sum(c[k] * basis[k][i] for k in range(len(basis))) for i in range(len(basis[0]))]


def _real_rank(vectors, tol) -> int:
    rows = [[mpmath.re(x) for x in v] + [mpmath.im(x) for x in v] for v in vectors]
    if not rows:
        return 0
    return rank(rows, scalars.COMPLEX, tol)


def validate(eav: ExtendedAV, tol=None, int_tol=INTEGRALITY_TOL) -> ValidationReport:
    """Check every axiom of the triple; failures are entries, never exceptions."""
    with mpmath.workprec(eav.precision_bits):
        return _validate(eav, tol, int_tol)


def _validate(eav, tol, int_tol):
    tol = default_tol() if tol is None else tol
    w = eav.window
    C = scalars.COMPLEX
    g = eav.genus
    ax = {k: None for k in AXIOMS}
    det = {"genus": g, "window": w.to_json(), "partial": eav.partial}
    perp = annihilator(eav.K0, tol)
    det["quotient_dim"] = perp.dim - eav.K0.dim
    F1 = intersection(perp, positive_part(w, C), tol)
    det["f1_dim"] = F1.dim
    Z = eav.Z
    if Z is not None:
        pos = positive_part(w, C)
        ax["complement"] = (intersection(Z, pos, tol).dim == 0
                            and span_sum(Z, pos, tol=tol).dim == w.dim)
        iso = isotropy_check(Z, tol)
        ax["maximal_isotropic"] = iso["isotropic"] and iso["maximal"]
        det["z_isotropic"] = iso["isotropic"]
        ax["k0_in_z"] = eav.K0.issubspace(Z, tol)
    if eav.Lambda is not None:
        ax["lattice"], det["lattice"] = _check_lattice(eav, perp, tol, int_tol)
    if Z is not None:
        ZK = intersection(Z, perp, tol)
        u_dim = ZK.dim - eav.K0.dim
        both = span_sum(F1, ZK, tol=tol).dim - eav.K0.dim
        ok = F1.dim == g and u_dim == g and both == 2 * g
        det["u_dim"] = u_dim
        if ok and eav.Lambda is not None and ax["lattice"]:
            # U must be the conjugate of F^1 for the real structure of Lambda
            conj_ok = True
            for v in F1.basis:
                c = _lattice_coordinates(eav, quotient_coordinates(eav, v, tol))
                x = _from_lattice(eav, [mpmath.conj(t) for t in c])
                rep = tuple(sum(x[i] * eav.quotient_basis[i][j] for i in range(2 * g)) for j in range(w.dim))
                conj_ok = conj_ok and ZK.contains(rep, tol)
            det["u_is_conjugate"] = conj_ok
            ok = ok and conj_ok
        ax["hodge_complement"] = ok
    if eav.Lambda is not None and ax["lattice"] and F1.dim == g:
        H = positivity_matrix(eav, F1, tol)
        mins = _min_eigenvalue(H)
        det["positivity_min_eigenvalue"] = mpmath.nstr(mins, 8)
        ax["positivity"] = bool(mins > 0)
    if eav.partial:
        det["complete"] = False
    return ValidationReport(ax, det)


def _check_lattice(eav, perp, tol, int_tol):
    g = eav.genus
    lam = eav.Lambda
    info = {"count": len(lam.basis)}
    ok = len(lam.basis) == 2 * g and all(len(v) == 2 * g for v in lam.basis)
    # quotient basis: inside K0^perp and independent modulo K0
    qb_ok = all(perp.contains(v, tol) for v in eav.quotient_basis)
    qb_ok = qb_ok and rank(list(eav.K0.basis) + list(eav.quotient_basis), scalars.COMPLEX, tol) \
        == eav.K0.dim + len(eav.quotient_basis) == perp.dim
    info["quotient_basis_ok"] = qb_ok
    info["real_rank"] = _real_rank(lam.basis, tol)
    ok = ok and qb_ok and info["real_rank"] == 2 * g
    if not ok:
        return False, info
    gr = [[eav.Q(x, y) for y in lam.basis] for x in lam.basis]
    gi, err = round_gram(gr)
    info["max_rounding_error"] = mpmath.nstr(err, 5)
    d = mpmath.det(mpmath.matrix([list(r) for r in gi]))
    skew = all(gi[i][j] == -gi[j][i] for i in range(2 * g) for j in range(2 * g))
    info["gram_int"] = [list(r) for r in gi]
    ok = err < int_tol and skew and abs(d) == 1
    if lam.gram_int:
        ok = ok and tuple(tuple(r) for r in lam.gram_int) == gi
    return ok, info


def positivity_matrix(eav: ExtendedAV, F1: WindowSubspace | None = None, tol=None):
    """Hermitian matrix ``i Q(v_k, conj v_l)`` on a basis of ``F^1``."""
    with mpmath.workprec(eav.precision_bits):
        F1 = F1 or f_one(eav, tol)
        vs = [quotient_coordinates(eav, v, tol) for v in F1.basis]
        bars = [_from_lattice(eav, [mpmath.conj(t) for t in _lattice_coordinates(eav, x)]) for x in vs]
        return mpmath.matrix([[1j * eav.Q(x, y) for y in bars] for x in vs])


def _min_eigenvalue(H):
    H = (H + H.H) / 2
    ev = mpmath.eighe(H, eigvals_only=True)
    return min(mpmath.re(x) for x in ev)


# -- de-extension --------------------------------------------------------------


def symplectic_basis(gram_int) -> list[list[int]]:
    """Integer change of basis bringing a unimodular skew form to ``[[0, I], [-I, 0]]``.

    Returns the new basis vectors as integer coefficient lists (alphas first,
    then betas).  An already standard form is left unchanged.
    """
    n = len(gram_int)
    G = [list(map(int, r)) for r in gram_int]

    def Q(u, v):
        return sum(u[i] * G[i][j] * v[j] for i in range(n) for j in range(n))

    remaining = [[1 if i == k else 0 for i in range(n)] for k in range(n)]
    alphas, betas = [], []
    while remaining:
        e = remaining.pop(0)
        others = remaining
        while True:
            vals = [Q(e, r) for r in others]
            nz = [i for i, v in enumerate(vals) if v]
            if not nz:
                raise ValueError("form is degenerate over the integers")
            p = min(nz, key=lambda i: abs(vals[i]))
            if len(nz) == 1 or all(vals[i] % vals[p] == 0 for i in nz):
                for i in nz:
                    if i != p:
                        q = vals[i] // vals[p]
                        others[i] = [a - q * b for a, b in zip(others[i], others[p])]
                break
            for i in nz:
                if i != p:
                    q = vals[i] // vals[p]
                    others[i] = [a - q * b for a, b in zip(others[i], others[p])]
        f = others.pop(p)
        v = Q(e, f)
        if abs(v) != 1:
            raise ValueError("form is not unimodular")
        if v < 0:
            f = [-x for x in f]
        for i, r in enumerate(others):
            qe, qf = Q(e, r), Q(f, r)
            others[i] = [ri - qe * fi + qf * ei for ri, ei, fi in zip(r, e, f)]
        alphas.append(e)
        betas.append(f)
    return alphas + betas


def de_extend(eav: ExtendedAV, tol=None) -> SiegelPoint:
    """Period matrix ``tau = B A^-1`` of ``F^1`` in a symplectic lattice basis."""
    if eav.Lambda is None:
        raise GenusUnsupported("a partial triple has no lattice to de-extend against")
    with mpmath.workprec(eav.precision_bits):
        g = eav.genus
        lam = eav.Lambda
        gi = lam.gram_int or round_gram([[eav.Q(x, y) for y in lam.basis] for x in lam.basis])[0]
        U = symplectic_basis(gi)
        sbasis = [[sum(u[k] * lam.basis[k][i] for k in range(2 * g)) for i in range(2 * g)] for u in U]
        M = mpmath.matrix(sbasis).T
        F1 = f_one(eav, tol)
        if F1.dim != g:
            raise DegenerateFOne(f"F^1 has dimension {F1.dim}, expected {g}")
        cols = [mpmath.lu_solve(M, mpmath.matrix(quotient_coordinates(eav, v, tol))) for v in F1.basis]
        A = mpmath.matrix([[cols[k][i] for k in range(g)] for i in range(g)])
        B = mpmath.matrix([[cols[k][g + i] for k in range(g)] for i in range(g)])
        scale = max(mpmath.mnorm(A, 1), mpmath.mnorm(B, 1))
        if abs(mpmath.det(A)) <= (tol or default_tol()) * scale ** g:
            raise DegenerateFOne("A block is singular")
        tau = B * A ** -1
        return SiegelPoint(tau, tol=1e-8)


# -- K and the polarization ----------------------------------------------------


@dataclass
class KPreimage:
    k0_basis: tuple
    lifts: tuple
    checks: dict

    @property
    def passed(self) -> bool:
        return all(self.checks.values())

    def to_json(self) -> dict:
        return {"passed": self.passed, "checks": dict(self.checks),
                "k0_dim": len(self.k0_basis), "lattice_rank": len(self.lifts)}


def k_preimage(eav: ExtendedAV, tol=None) -> KPreimage:
    """``K`` as ``K0`` plus lifts of the lattice basis, with its containments."""
    with mpmath.workprec(eav.precision_bits):
        lifts = eav.lattice_vectors()
        perp = annihilator(eav.K0, tol)
        K = span_sum(eav.K0, reduce_basis(lifts, eav.window, scalars.COMPLEX, tol), tol=tol) \
            if lifts else eav.K0
        checks = {
            "k0_in_k": eav.K0.issubspace(K, tol),
            "k_in_k0_perp": all(perp.contains(v, tol) for v in lifts),
        }
        image_ok = len(lifts) == 2 * eav.genus
        if image_ok and checks["k_in_k0_perp"]:
            for v, c in zip(lifts, eav.Lambda.basis):
                x = quotient_coordinates(eav, v, tol)
                image_ok = image_ok and all(abs(a - b) <= (tol or default_tol()) * 10 for a, b in zip(x, c))
            image_ok = image_ok and _real_rank(eav.Lambda.basis, tol) == 2 * eav.genus
        else:
            image_ok = False
        checks["image_is_lambda"] = image_ok
        return KPreimage(tuple(eav.K0.basis), tuple(lifts), checks)


def polarization_pairing(x, y, n: int = 1, window: WindowSpec | None = None):
    """``(-1)^(n-1) 2 pi i <x, y>`` for series or window vectors."""
    if n < 1:
        raise ValueError("n must be at least 1")
    if isinstance(x, LaurentSeries) and isinstance(y, LaurentSeries):
        r = residue_pair(x, y)
    else:
        if window is None:
            raise ValueError("window vectors need their window")
        r = pair(window, x, y)
    r = scalars.coerce(r, scalars.COMPLEX)
    base = 2j * mpmath.pi * r
    return base if n % 2 == 1 else -base


def with_ambient_n(eav: ExtendedAV, n: int) -> ExtendedAV:
    return replace(eav, ambient_n=n)
