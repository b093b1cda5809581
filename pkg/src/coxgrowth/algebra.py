"""Exact arithmetic in Q(2cos(pi/L)) and the geometric representation.

Every Gram entry -cos(pi/m) lies in the field generated by c_L = 2cos(pi/L)
where L is the lcm of the finite labels, since c_m = V_{L/m}(c_L) for the
Chebyshev-type polynomials V_k(z + 1/z) = z^k + z^-k.  Elements are kept as
rational coefficient tuples in the power basis of c_L, reduced modulo the
minimal polynomial, so equality is structural and sign is decided by
certified interval evaluation.

Polynomials are coefficient lists, lowest degree first.
"""

from __future__ import annotations

import math
from contextlib import contextmanager
from fractions import Fraction
from functools import lru_cache, reduce

import mpmath

from .diagram import INF, CoxeterDiagram
from .errors import ResourceCapError

DEFAULT_MAX_DEGREE = 64


# -- integer polynomials ----------------------------------------------------

def _trim(p):
    p = list(p)
    while len(p) > 1 and p[-1] == 0:
        p.pop()
    return p


def poly_mul(a, b):
    out = [0] * (len(a) + len(b) - 1)
    for i, x in enumerate(a):
        if x:
            for j, y in enumerate(b):
                out[i + j] += x * y
    return _trim(out)


def poly_divmod(num, den):
    """Division by a polynomial with leading coefficient +-1 (exact over Z)."""
    num = list(num)
    lead = den[-1]
    q = [0] * max(1, len(num) - len(den) + 1)
    for k in range(len(num) - len(den), -1, -1):
        c = num[k + len(den) - 1] // lead if lead in (1, -1) else Fraction(num[k + len(den) - 1], lead)
        q[k] = c
        if c:
            for i, d in enumerate(den):
                num[k + i] -= c * d
    return _trim(q), _trim(num[:len(den) - 1] or [0])


@lru_cache(maxsize=None)
def cyclotomic(n):
    """The n-th cyclotomic polynomial, from x^n - 1 = prod_{d | n} Phi_d."""
    p = [-1] + [0] * (n - 1) + [1]
    for d in range(1, n):
        if n % d == 0:
            p, r = poly_divmod(p, list(cyclotomic(d)))
            assert r == [0]
    return tuple(p)


@lru_cache(maxsize=None)
def chebyshev_v(k):
    """V_k with V_k(z + 1/z) = z^k + z^-k: V_0 = 2, V_1 = x, V_k = x V_{k-1} - V_{k-2}."""
    if k == 0:
        return (2,)
    if k == 1:
        return (0, 1)
    a, b = list(chebyshev_v(k - 1)), list(chebyshev_v(k - 2))
    out = [0] + a
    for i, c in enumerate(b):
        out[i] -= c
    return tuple(_trim(out))


@lru_cache(maxsize=None)
def minimal_polynomial_2cos(L: int):
    """Monic integer minimal polynomial of 2cos(pi/L).

    Obtained by folding the palindromic cyclotomic polynomial Phi_{2L} with
    x = z + 1/z, so no factoring is needed.
    """
    if L < 1:
        raise ValueError("L must be positive")
    if L == 1:
        return (2, 1)  # 2cos(pi) = -2
    phi = cyclotomic(2 * L)
    m = (len(phi) - 1) // 2
    out = [phi[m]]
    for k in range(1, m + 1):
        v = chebyshev_v(k)
        out += [0] * (len(v) - len(out))
        for i, c in enumerate(v):
            out[i] += phi[m + k] * c
    return tuple(_trim(out))


def field_degree(L):
    return len(minimal_polynomial_2cos(L)) - 1


@contextmanager
def _iv_prec(prec):
    old = mpmath.iv.prec
    mpmath.iv.prec = prec
    try:
        yield mpmath.iv
    finally:
        mpmath.iv.prec = old


# -- the field ----------------------------------------------------------------

class NumberField:
    """Q(c_L) with c_L = 2cos(pi/L)."""

    def __init__(self, L):
        self.L = L
        self.modulus = minimal_polynomial_2cos(L)
        self.degree = len(self.modulus) - 1
        self._powers = {}
        self.zero = FieldElement(self, (Fraction(0),) * self.degree)
        self.one = self.from_rational(1)

    def __repr__(self):
        return f"NumberField(L={self.L}, degree={self.degree})"

    def __eq__(self, other):
        return isinstance(other, NumberField) and other.L == self.L

    def __hash__(self):
        return hash(("NumberField", self.L))

    def element(self, coeffs):
        """Element from power-basis coefficients of any length (reduced here)."""
        coeffs = [Fraction(c) for c in coeffs]
        mod = self.modulus
        d = self.degree
        for k in range(len(coeffs) - 1, d - 1, -1):
            c = coeffs[k]
            if c:
                for i in range(d):
                    coeffs[k - d + i] -= c * mod[i]
        coeffs = coeffs[:d] + [Fraction(0)] * (d - len(coeffs))
        return FieldElement(self, tuple(coeffs))

    def from_rational(self, q):
        return self.element([q])

    def coerce(self, x):
        if isinstance(x, FieldElement):
            if x.field != self:
                raise ValueError("elements of different fields")
            return x
        return self.from_rational(x)

    def generator(self):
        return self.element([0, 1])

    def two_cos(self, m):
        """2cos(pi/m) as a field element; ``m`` may be INF (value 2)."""
        if m == INF:
            return self.from_rational(2)
        if m == 2:
            return self.zero
        if self.L % m:
            raise ValueError(f"2cos(pi/{m}) does not lie in Q(2cos(pi/{self.L}))")
        return self.element(chebyshev_v(self.L // m)) if m > 1 else self.from_rational(-2)

    def generator_enclosure(self, prec):
        with _iv_prec(prec) as iv:
            return 2 * iv.cos(iv.pi / self.L)

    def power_enclosures(self, prec):
        """Certified intervals for c_L^k, k < degree, at ``prec`` bits."""
        if prec not in self._powers:
            c = self.generator_enclosure(prec + 20)
            with _iv_prec(prec) as iv:
                pw = [iv.mpf(1)]
                for _ in range(1, self.degree):
                    pw.append(pw[-1] * c)
            self._powers[prec] = pw
        return self._powers[prec]


@lru_cache(maxsize=None)
def get_field(L) -> NumberField:
    return NumberField(L)


def field_for_diagram(d: CoxeterDiagram, max_degree=DEFAULT_MAX_DEGREE) -> NumberField:
    L = reduce(math.lcm, [m for m in d.finite_labels() if m >= 3], 1)
    deg = field_degree(L)
    if deg > max_degree:
        raise ResourceCapError("degree", max_degree,
                               f"field Q(2cos(pi/{L})) has degree {deg}")
    return get_field(L)


class FieldElement:
    __slots__ = ("field", "coeffs", "_hash")

    def __init__(self, field, coeffs):
        self.field = field
        self.coeffs = coeffs
        self._hash = None

    # arithmetic
    def __add__(self, other):
        try:
            other = self.field.coerce(other)
        except TypeError:
            return NotImplemented
        return FieldElement(self.field, tuple(a + b for a, b in zip(self.coeffs, other.coeffs)))

    __radd__ = __add__

    def __neg__(self):
        return FieldElement(self.field, tuple(-a for a in self.coeffs))

    def __sub__(self, other):
        return self + (-self.field.coerce(other))

    def __rsub__(self, other):
        return self.field.coerce(other) - self

    def __mul__(self, other):
        if isinstance(other, (int, Fraction)):
            return FieldElement(self.field, tuple(a * other for a in self.coeffs))
        if not isinstance(other, FieldElement):
            return NotImplemented
        other = self.field.coerce(other)
        a, b = self.coeffs, other.coeffs
        out = [Fraction(0)] * (2 * len(a) - 1)
        for i, x in enumerate(a):
            if x:
                for j, y in enumerate(b):
                    if y:
                        out[i + j] += x * y
        return self.field.element(out)

    __rmul__ = __mul__

    # comparison
    def __eq__(self, other):
        if isinstance(other, (int, Fraction)):
            return self.coeffs[0] == other and not any(self.coeffs[1:])
        if isinstance(other, FieldElement):
            return self.field == other.field and self.coeffs == other.coeffs
        return NotImplemented

    def __hash__(self):
        if self._hash is None:
            if not any(self.coeffs[1:]):
                self._hash = hash(self.coeffs[0])
            else:
                self._hash = hash(self.coeffs)
        return self._hash

    def __lt__(self, other):
        return (self - other).sign() < 0

    def __le__(self, other):
        return (self - other).sign() <= 0

    def __gt__(self, other):
        return (self - other).sign() > 0

    def __ge__(self, other):
        return (self - other).sign() >= 0

    def is_zero(self):
        return not any(self.coeffs)

    def is_rational(self):
        return not any(self.coeffs[1:])

    def sign(self):
        """Exact sign: -1, 0 or 1."""
        if self.is_rational():
            c = self.coeffs[0]
            return (c > 0) - (c < 0)
        prec = 64
        while True:
            iv = self.enclosure(prec)
            if iv.a > 0:
                return 1
            if iv.b < 0:
                return -1
            # Nonzero in normal form means nonzero as a number, so this terminates.
            prec *= 2

    def enclosure(self, prec=64):
        powers = self.field.power_enclosures(prec)
        with _iv_prec(prec) as iv:
            acc = iv.mpf(0)
            for c, pw in zip(self.coeffs, powers):
                if c:
                    acc += iv.mpf(c.numerator) / c.denominator * pw
        return acc

    def to_mpf(self, dps=30):
        with mpmath.workdps(dps + 10):
            c = 2 * mpmath.cos(mpmath.pi / self.field.L)
            acc = mpmath.mpf(0)
            for k in reversed(range(len(self.coeffs))):
                acc = acc * c + mpmath.mpf(self.coeffs[k].numerator) / self.coeffs[k].denominator
            return +acc

    def __float__(self):
        return float(self.to_mpf(20))

    def decimal(self, digits=30):
        """Decimal rendering with ``digits`` significant digits."""
        return mpmath.nstr(self.to_mpf(digits + 5), digits)

    def __str__(self):
        if self.is_rational():
            return str(self.coeffs[0])
        terms = []
        for k, c in enumerate(self.coeffs):
            if not c:
                continue
            mono = "" if k == 0 else ("c" if k == 1 else f"c^{k}")
            if k == 0:
                terms.append(str(c))
            elif c == 1:
                terms.append(mono)
            elif c == -1:
                terms.append("-" + mono)
            else:
                terms.append(f"{c}*{mono}")
        return " + ".join(terms).replace("+ -", "- ")

    def __repr__(self):
        return f"FieldElement({self}, L={self.field.L})"


# -- bilinear form and reflections ------------------------------------------------

class BilinearForm:
    """Gram matrix B(alpha_i, alpha_j) = -cos(pi/m_ij) of the geometric representation."""

    def __init__(self, diagram: CoxeterDiagram, field: NumberField):
        self.diagram = diagram
        self.field = field
        n = diagram.rank
        half = Fraction(-1, 2)
        self.matrix = tuple(
            tuple(field.one if i == j else field.two_cos(diagram.labels[i][j]) * half
                  for j in range(n))
            for i in range(n))
        # 2B entries are algebraic integers; reflections use them directly.
        self.doubled = tuple(tuple(e * 2 for e in row) for row in self.matrix)

    @property
    def rank(self):
        return self.diagram.rank

    def __getitem__(self, ij):
        i, j = ij
        return self.matrix[i][j]


def gram_matrix(d: CoxeterDiagram, max_degree=DEFAULT_MAX_DEGREE) -> BilinearForm:
    return BilinearForm(d, field_for_diagram(d, max_degree))


def simple_root(B: BilinearForm, i):
    f = B.field
    return tuple(f.one if k == i else f.zero for k in range(B.rank))


def inner(B: BilinearForm, u, v):
    if len(u) != B.rank or len(v) != B.rank:
        raise ValueError("dimension mismatch")
    acc = B.field.zero
    for i, ui in enumerate(u):
        if ui.is_zero():
            continue
        row = B.matrix[i]
        for j, vj in enumerate(v):
            if not vj.is_zero() and not row[j].is_zero():
                acc = acc + ui * row[j] * vj
    return acc


def inner_simple(B: BilinearForm, v, i):
    """(v | alpha_i)."""
    acc = B.field.zero
    for k, vk in enumerate(v):
        if not vk.is_zero() and not B.matrix[k][i].is_zero():
            acc = acc + vk * B.matrix[k][i]
    return acc


def apply_reflection(B: BilinearForm, i, v):
    """sigma_i(v) = v - 2 (v | alpha_i) alpha_i."""
    if not 0 <= i < B.rank:
        raise IndexError(f"generator index {i} out of range")
    if len(v) != B.rank:
        raise ValueError("dimension mismatch")
    out = list(v)
    out[i] = v[i] - inner_simple(B, v, i) * 2
    return tuple(out)
