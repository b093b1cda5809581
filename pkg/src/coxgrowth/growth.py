"""Word/geodesic counts, transfer matrices, certified growth rates and Perron certificates."""

from __future__ import annotations

import math
import warnings
from dataclasses import dataclass, field
from fractions import Fraction

import numpy as np

from .automata import FAIL, Automaton, CoreGraph, accept_core, period, strongly_connected
from .errors import InternalInvariantError, ResourceCapError

DEFAULT_TOL = Fraction(1, 10**9)
DEFAULT_MAX_ITER = 10**6
DEFAULT_CHARPOLY_DIM = 512

CERTIFIED = "CertifiedPerron"
NOT_CERTIFIED = "NotCertified"


def count_words(a: Automaton, K: int):
    """Number of accepted words of each length 0..K (exact)."""
    if K < 0:
        raise ValueError("K must be non-negative")
    vec = {0: 1}
    out = [1]
    for _ in range(K):
        nxt = {}
        for s, c in vec.items():
            for t in a.trans[s]:
                if t != FAIL:
                    nxt[t] = nxt.get(t, 0) + c
        vec = nxt
        out.append(sum(vec.values()))
    return out


@dataclass(frozen=True)
class TransferMatrix:
    """Letter-multiplicity adjacency of the accept core, plus the start row."""

    matrix: tuple  # tuple of tuples of int
    start: tuple  # start[v] = number of letters taking the start state to core node v

    @property
    def dim(self):
        return len(self.matrix)

    def array(self):
        return np.array(self.matrix, dtype=np.int64).reshape(self.dim, self.dim)

    def graph(self) -> CoreGraph:
        return CoreGraph(tuple(tuple((v, m) for v, m in enumerate(row) if m)
                               for row in self.matrix))

    def counts(self, K):
        """v_0..v_K via v_k = start . M^(k-1) . 1 for k >= 1."""
        out = [1]
        row = list(self.start)
        for _ in range(K):
            out.append(sum(row))
            row = [sum(row[u] * self.matrix[u][v] for u in range(self.dim) if row[u])
                   for v in range(self.dim)]
        return out


def transfer_matrix(a: Automaton) -> TransferMatrix:
    size = len(a.states) - 1
    M = [[0] * size for _ in range(size)]
    for k in range(1, len(a.states)):
        for t in a.trans[k]:
            if t != FAIL:
                M[k - 1][t - 1] += 1
    start = [0] * size
    for t in a.trans[0]:
        if t != FAIL:
            start[t - 1] += 1
    return TransferMatrix(tuple(tuple(r) for r in M), tuple(start))


def _as_rows(M):
    """Sparse rows [(col, value), ...] from a TransferMatrix, CoreGraph or dense matrix."""
    if isinstance(M, CoreGraph):
        return [list(r) for r in M.succ]
    if isinstance(M, TransferMatrix):
        M = M.matrix
    M = [list(map(int, r)) for r in M]
    return [[(j, x) for j, x in enumerate(r) if x] for r in M]


# -- spectral radius ---------------------------------------------------------------

@dataclass(frozen=True)
class RateEnclosure:
    lo: Fraction
    hi: Fraction
    iterations: int = 0
    converged: bool = True

    @property
    def width(self):
        return self.hi - self.lo

    @property
    def mid(self):
        return (self.lo + self.hi) / 2

    def contains(self, x):
        return self.lo <= x <= self.hi

    def __float__(self):
        return float(self.mid)


def _collatz_bounds(rows, x, shift):
    lo = hi = None
    y = []
    for i, row in enumerate(rows):
        yi = sum(m * x[j] for j, m in row)
        if shift:
            yi += shift * x[i]
        y.append(yi)
        q = Fraction(yi, x[i])
        if lo is None or q < lo:
            lo = q
        if hi is None or q > hi:
            hi = q
    return lo - shift, hi - shift, y


def collatz_wielandt_iterates(M, steps, x0=None):
    """Exact Collatz-Wielandt bounds of the plain power iterates M^t x0.

    For irreducible non-negative M these intervals are nested.
    """
    rows = _as_rows(M)
    x = list(x0) if x0 is not None else [1] * len(rows)
    out = []
    for _ in range(steps):
        lo, hi, x = _collatz_bounds(rows, x, 0)
        out.append((lo, hi))
    return out


def _is_irreducible(rows):
    g = CoreGraph(tuple(tuple(r) for r in rows))
    ok, _ = strongly_connected(g)
    return ok and any(rows)


def _irreducible_enclosure(rows, tol, max_iter):
    n = len(rows)
    g = CoreGraph(tuple(tuple(r) for r in rows))
    # Power iteration on M + I when M is periodic, so that iterates converge.
    shift = 0 if period(g) == 1 else 1

    # Float warm start: any positive vector gives certified bounds, the
    # exact evaluation below is what certifies.
    from scipy.sparse import identity
    A = g.sparse().astype(float) + shift * identity(n, format="csr")
    xf = np.ones(n)
    for _ in range(min(max_iter, 20000)):
        y = A @ xf
        y /= y.max()
        ratio = (A @ y) / y
        xf = y
        if ratio.max() - ratio.min() < float(tol) * 1e-3:
            break
    x = [max(1, int(math.ldexp(v, 200))) for v in xf]

    lo, hi = Fraction(0), None
    it = 0
    while True:
        it += 1
        cl, ch, y = _collatz_bounds(rows, x, shift)
        lo = max(lo, cl)
        hi = ch if hi is None else min(hi, ch)
        if hi - lo <= tol:
            return RateEnclosure(lo, hi, it, True)
        if it >= max_iter:
            warnings.warn(f"spectral radius enclosure did not reach tolerance {float(tol):g} "
                          f"in {max_iter} iterations (width {float(hi - lo):g})")
            return RateEnclosure(lo, hi, it, False)
        top = max(y).bit_length()
        if top > 400:
            s = top - 300
            y = [max(1, v >> s) for v in y]
        x = y


def spectral_radius_enclosure(M, tol=DEFAULT_TOL, max_iter=DEFAULT_MAX_ITER) -> RateEnclosure:
    """Certified rational interval [lo, hi] containing the spectral radius.

    Bounds are Collatz-Wielandt quotients min/max (Mx)_i / x_i evaluated in
    exact arithmetic.  Reducible matrices are handled per strongly connected
    component (the radius is the maximum over components).
    """
    tol = Fraction(tol)
    rows = _as_rows(M)
    if not any(rows):
        raise ValueError("zero matrix has no Perron root")
    g = CoreGraph(tuple(tuple(r) for r in rows))
    ok, comps = strongly_connected(g)
    if ok:
        return _irreducible_enclosure(rows, tol, max_iter)
    best = None
    for comp in comps:
        pos = {v: k for k, v in enumerate(comp)}
        sub = [[(pos[v], m) for v, m in rows[u] if v in pos] for u in comp]
        if not any(sub):
            continue
        enc = _irreducible_enclosure(sub, tol, max_iter)
        if best is None:
            best = enc
        else:
            best = RateEnclosure(max(best.lo, enc.lo), max(best.hi, enc.hi),
                                 best.iterations + enc.iterations,
                                 best.converged and enc.converged)
    if best is None:
        raise ValueError("matrix is nilpotent; spectral radius is 0")
    return best


def growth_rate(a: Automaton, tol=DEFAULT_TOL, max_iter=DEFAULT_MAX_ITER) -> RateEnclosure:
    """Growth rate of the accepted language; 0 for finite languages."""
    T = transfer_matrix(a)
    try:
        return spectral_radius_enclosure(T, tol, max_iter)
    except ValueError:
        return RateEnclosure(Fraction(0), Fraction(0))


# -- Perron certificate -------------------------------------------------------------

@dataclass(frozen=True)
class PerronCertificate:
    irreducible: bool
    period: int | None
    primitive: bool
    conclusion: str
    reason: str = ""

    @property
    def certified(self):
        return self.conclusion == CERTIFIED

    def to_json(self):
        return {"irreducible": self.irreducible, "period": self.period,
                "primitive": self.primitive, "conclusion": self.conclusion,
                "reason": self.reason}


def perron_certificate(a: Automaton) -> PerronCertificate:
    """Primitive transfer matrix => its spectral radius is a Perron number."""
    core = accept_core(a)
    ok, comps = strongly_connected(core)
    if not ok or core.edge_count() == 0:
        if not comps:
            reason = "empty core"
        elif core.edge_count() == 0:
            reason = "core has no cycles (finite language)"
        else:
            reason = f"core not strongly connected ({len(comps)} components)"
        return PerronCertificate(False, None, False, NOT_CERTIFIED, reason)
    p = period(core)
    if p != 1:
        return PerronCertificate(True, p, False, NOT_CERTIFIED, f"period = {p}")
    return PerronCertificate(True, 1, True, CERTIFIED)


# -- characteristic polynomial and corroboration ------------------------------------

def characteristic_polynomial(M, max_dim=DEFAULT_CHARPOLY_DIM):
    """Integer coefficients of det(xI - M), lowest degree first (Faddeev-LeVerrier).

    Every division in the recurrence is exact, so Python integers suffice.
    """
    rows = _as_rows(M)
    n = len(rows)
    if n > max_dim:
        raise ResourceCapError("charpoly", max_dim, f"matrix dimension {n}")
    coeffs = [0] * (n + 1)
    coeffs[n] = 1
    Mk = np.zeros((n, n), dtype=object)
    for k in range(1, n + 1):
        # Mk <- M * Mk + c_{n-k+1} I ; c_{n-k} = -tr(M Mk) / k
        prod = np.zeros((n, n), dtype=object)
        for i, row in enumerate(rows):
            for j, m in row:
                prod[i] += m * Mk[j]
        Mk = prod
        for i in range(n):
            Mk[i, i] += coeffs[n - k + 1]
        tr = 0
        for i, row in enumerate(rows):
            for j, m in row:
                tr += m * Mk[j, i]
        c, r = divmod(-tr, k)
        if r:
            raise InternalInvariantError("inexact Faddeev-LeVerrier division")
        coeffs[n - k] = int(c)
    return coeffs


@dataclass(frozen=True)
class Corroboration:
    margin: float | None
    dominant: complex | None
    roots: tuple
    corroborated: bool
    note: str = ""

    def to_json(self):
        return {"margin": self.margin, "corroborated": self.corroborated, "note": self.note,
                "dominant": None if self.dominant is None else self.dominant.real}


def corroborate_perron(p, rho: RateEnclosure, tol=1e-8) -> Corroboration:
    """Floating-point check that the root in ``rho`` strictly dominates the others.

    ``margin = rho.lo - max|z|`` over the remaining roots (with multiplicity).
    """
    coeffs = list(p)
    while len(coeffs) > 1 and coeffs[0] == 0:
        coeffs.pop(0)  # roots at zero never compete
    if len(coeffs) <= 1:
        return Corroboration(None, None, (), False, "no non-zero roots")
    try:
        scale = max(abs(c) for c in coeffs)
        roots = np.roots([c / scale for c in reversed(coeffs)])
    except (OverflowError, np.linalg.LinAlgError) as exc:
        return Corroboration(None, None, (), False, f"root finding failed: {exc}")
    if not np.all(np.isfinite(roots)):
        return Corroboration(None, None, (), False, "root finding did not converge")
    target = float(rho.mid)
    k = int(np.argmin(np.abs(roots - target)))
    dominant = complex(roots[k])
    others = np.delete(roots, k)
    top = float(np.max(np.abs(others))) if len(others) else 0.0
    margin = float(rho.lo) - top
    roots = tuple(sorted((complex(z) for z in roots), key=lambda z: (-abs(z), z.real, z.imag)))
    return Corroboration(margin, dominant, roots, margin > tol)


# -- generating functions ------------------------------------------------------------

def rational_series(a: Automaton, cap=DEFAULT_CHARPOLY_DIM):
    """(P, Q) integer polynomials with sum v_k z^k = P(z)/Q(z), in lowest terms, Q(0) = 1.

    Q divides det(I - zM) (the reversed characteristic polynomial of the core)
    and P = (series * det(I - zM)) truncated at degree dim M.
    """
    import sympy

    T = transfer_matrix(a)
    n = T.dim
    if n > cap:
        raise ResourceCapError("charpoly", cap, f"core dimension {n}")
    det = list(reversed(characteristic_polynomial(T, max_dim=cap))) if n else [1]
    v = count_words(a, n + 1)
    P = [sum(det[j] * v[k - j] for j in range(min(k, len(det) - 1) + 1)) for k in range(n + 1)]
    z = sympy.Symbol("z")
    Pp = sympy.Poly(list(reversed(P)), z, domain="ZZ")
    Qp = sympy.Poly(list(reversed(det)), z, domain="ZZ")
    Pp, Qp = Pp.cancel(Qp, include=True)
    Pq = [Fraction(int(c.p), int(c.q)) for c in map(sympy.Rational, reversed(Pp.all_coeffs()))]
    Qq = [Fraction(int(c.p), int(c.q)) for c in map(sympy.Rational, reversed(Qp.all_coeffs()))]
    q0 = Qq[0]
    Pq, Qq = [c / q0 for c in Pq], [c / q0 for c in Qq]
    # Gauss's lemma: a factor of det(I - zM) with constant term 1 is integral.
    if any(c.denominator != 1 for c in Pq + Qq):
        raise InternalInvariantError("non-integral reduced series")
    Pc, Qc = [int(c) for c in Pq], [int(c) for c in Qq]
    Pc, Qc = _trim_zeros(Pc), _trim_zeros(Qc)
    terms = len(Pc) - 1 + len(Qc) - 1 + 5
    if series_coefficients(Pc, Qc, terms) != count_words(a, terms - 1):
        raise InternalInvariantError("rational series disagrees with word counts")
    return Pc, Qc


def _trim_zeros(p):
    p = list(p)
    while len(p) > 1 and p[-1] == 0:
        p.pop()
    return p


def series_coefficients(P, Q, terms):
    """First ``terms`` Taylor coefficients of P/Q (Q(0) = +-1)."""
    out = []
    q0 = Q[0]
    for k in range(terms):
        c = P[k] if k < len(P) else 0
        for j in range(1, min(k, len(Q) - 1) + 1):
            c -= Q[j] * out[k - j]
        if c % q0:
            raise ValueError("Q(0) must be a unit")
        out.append(c // q0)
    return out


# -- asymptotics ------------------------------------------------------------------

@dataclass(frozen=True)
class DeltaReport:
    delta_hat: Fraction
    ratios: tuple  # r_k = g_k / (delta_hat^k w_k), as Fractions
    trend: float  # |r_K - 1|
    strict_domination: bool  # gamma.lo > omega.hi
    free_product: bool


def delta_report(w, g, omega: RateEnclosure, gamma: RateEnclosure, K=None,
                 certificates=None, free_product=False) -> DeltaReport:
    """Ratios g_k / (delta^k w_k) with delta estimated from interval midpoints."""
    if certificates is not None and not all(c.certified for c in certificates):
        raise ValueError("delta report needs both automata CertifiedPerron")
    K = len(w) - 1 if K is None else K
    if omega.mid == 0:
        raise ValueError("word growth rate is zero")
    delta = gamma.mid / omega.mid
    ratios = []
    for k in range(K + 1):
        ratios.append(Fraction(g[k]) / (delta ** k * w[k]) if w[k] else Fraction(0))
    return DeltaReport(delta, tuple(ratios), abs(float(ratios[K]) - 1.0),
                       gamma.lo > omega.hi, free_product)


@dataclass
class GrowthReport:
    w: list
    g: list
    omega: RateEnclosure
    gamma: RateEnclosure
    shortlex_certificate: PerronCertificate
    geo_certificate: PerronCertificate
    delta: DeltaReport | None = None
    extras: dict = field(default_factory=dict)

    @property
    def delta_enclosure(self):
        if self.omega.lo <= 0:
            return None
        return (self.gamma.lo / self.omega.hi, self.gamma.hi / self.omega.lo)
