"""Brute-force ground truth: breadth-first enumeration of the group itself.

Nothing here touches small roots or automata.  Elements are identified
exactly: the group acts simply transitively on the chambers of its Tits cone,
so ``w`` is determined by ``w . f`` where ``f`` is the dual vector with
``f(alpha_i) = 1`` for all i.  In coordinates ``x_i = f(alpha_i)`` the
generator s_j acts by ``x_i -> x_i + c_ij x_j`` (i != j), ``x_j -> -x_j``,
with ``c_ij = 2cos(pi/m_ij)``.  Field elements are integer vectors in the
basis 1, V_1(c_L), ..., V_{d-1}(c_L) of Z[c_L], which keeps coefficients
small, and a whole BFS level is processed at once with numpy.

:func:`group_element` gives the full matrix rho(w) in exact field arithmetic
for independent spot checks.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache

import numpy as np

from .algebra import (DEFAULT_MAX_DEGREE, BilinearForm, chebyshev_v, field_for_diagram,
                      gram_matrix)
from .diagram import INF, CoxeterDiagram
from .errors import ResourceCapError

DEFAULT_DEPTH = 8
DEFAULT_MAX_ELEMENTS = 2_000_000
_SAFE = 2**62


def _basis_change(field):
    """Columns of T: power-basis coefficients of 1, V_1, ..., V_{d-1}."""
    d = field.degree
    T = [[0] * d for _ in range(d)]
    T[0][0] = 1
    for k in range(1, d):
        for i, c in enumerate(chebyshev_v(k)):
            T[i][k] = c
    return T


def _solve_unitriangular(T, b):
    d = len(T)
    x = [0] * d
    for i in reversed(range(d)):
        s = b[i] - sum(T[i][j] * x[j] for j in range(i + 1, d))
        x[i] = s  # T[i][i] == 1
    return x


def _multiplier(field, value):
    """Integer matrix of multiplication by ``value`` in the V-basis."""
    d = field.degree
    T = _basis_change(field)
    cols = []
    for k in range(d):
        basis_elt = field.element([T[i][k] for i in range(d)])
        prod = basis_elt * value
        coeffs = prod.coeffs
        if any(c.denominator != 1 for c in coeffs):
            raise ValueError("multiplier is not an algebraic integer")
        cols.append(_solve_unitriangular(T, [int(c) for c in coeffs]))
    return np.array(cols, dtype=np.int64).T  # M[:, k] = image of basis vector k


@dataclass(frozen=True)
class OracleResult:
    w: tuple
    g: tuple
    order: tuple
    normal_forms: tuple  # normal_forms[k]: int array (w_k, k) of shortlex-least words
    geodesics: tuple  # geodesics[k]: per-element geodesic counts, aligned with normal_forms


@lru_cache(maxsize=16)
def _explore(d: CoxeterDiagram, K: int, order: tuple, max_degree: int, max_elements: int):
    if K < 0:
        raise ValueError("depth must be non-negative")
    if K > 20:
        raise ResourceCapError("depth", 20, "oracle depth too large for 64-bit geodesic counts")
    field = field_for_diagram(d, max_degree)
    n, deg = d.rank, field.degree
    pos = np.empty(n, dtype=np.int64)
    for rank, gen in enumerate(order):
        pos[gen] = rank

    mult = {}
    for i in range(n):
        for j in range(n):
            m = d.labels[i][j]
            if i != j and m != 2:
                mult[i, j] = _multiplier(field, field.two_cos(m)) if m != INF else None
    growth = 1 + sum(2 if M is None else int(np.abs(M).sum(axis=1).max())
                     for M in mult.values())

    x0 = np.zeros((1, n, deg), dtype=np.int64)
    x0[:, :, 0] = 1
    level = x0
    prev_keys = np.empty(0, dtype=_void(n * deg))
    keys = _as_void(level)
    geo = np.ones(1, dtype=np.int64)
    words = np.zeros((1, 0), dtype=np.int64)
    lex_rank = np.zeros(1, dtype=np.int64)
    w, g, nfs, geos = [1], [1], [words], [geo]
    total = 1

    for k in range(K):
        if np.abs(level).max() * growth >= _SAFE:
            raise ResourceCapError("depth", k, "oracle coefficients would overflow int64")
        F = len(level)
        cand = np.empty((n, F, n, deg), dtype=np.int64)
        for j in range(n):
            y = level.copy()
            y[:, j, :] = -level[:, j, :]
            for i in range(n):
                if (i, j) in mult:
                    M = mult[i, j]
                    y[:, i, :] += 2 * level[:, j, :] if M is None else level[:, j, :] @ M.T
            cand[j] = y
        cand = cand.reshape(n * F, n, deg)
        parent = np.tile(np.arange(F), n)
        letter = np.repeat(np.arange(n), F)
        ckeys = _as_void(cand)
        fresh = ~np.isin(ckeys, prev_keys)
        cand, ckeys, parent, letter = cand[fresh], ckeys[fresh], parent[fresh], letter[fresh]
        uniq, first, inv = np.unique(ckeys, return_index=True, return_inverse=True)
        inv = inv.reshape(-1)
        size = len(uniq)
        total += size
        if total > max_elements:
            raise ResourceCapError("elements", max_elements, "oracle enumeration too large")

        new_geo = np.zeros(size, dtype=np.int64)
        np.add.at(new_geo, inv, geo[parent])
        # Shortlex-least word of s_j * u is j followed by the least word of u,
        # minimised over j first, then over u.
        score = pos[letter] * F + lex_rank[parent]
        best = np.full(size, np.iinfo(np.int64).max, dtype=np.int64)
        np.minimum.at(best, inv, score)
        best_letter = order_array(order)[best // F]
        best_parent = np.argsort(lex_rank)[best % F]
        new_words = np.concatenate([best_letter[:, None], words[best_parent]], axis=1)
        new_rank = np.empty(size, dtype=np.int64)
        new_rank[np.argsort(best, kind="stable")] = np.arange(size)

        prev_keys, keys = keys, uniq
        level = cand[first]
        geo, words, lex_rank = new_geo, new_words, new_rank
        w.append(size)
        g.append(int(geo.sum()))
        nfs.append(words)
        geos.append(geo)
        if size == 0:
            for _ in range(k + 1, K):
                w.append(0)
                g.append(0)
                nfs.append(np.zeros((0, len(nfs)), dtype=np.int64))
                geos.append(np.zeros(0, dtype=np.int64))
            break
    return OracleResult(tuple(w), tuple(g), order, tuple(nfs), tuple(geos))


def order_array(order):
    return np.asarray(order, dtype=np.int64)


def _void(width):
    return np.dtype((np.void, 8 * width))


def _as_void(arr):
    flat = np.ascontiguousarray(arr.reshape(len(arr), -1))
    return flat.view(_void(flat.shape[1])).reshape(-1)


def _order(d, order):
    return tuple(range(d.rank)) if order is None else tuple(order)


def explore(d: CoxeterDiagram, K=DEFAULT_DEPTH, order=None, max_degree=DEFAULT_MAX_DEGREE,
            max_elements=DEFAULT_MAX_ELEMENTS) -> OracleResult:
    return _explore(d, K, _order(d, order), max_degree, max_elements)


def bfs_group(d: CoxeterDiagram, K=DEFAULT_DEPTH, **caps):
    """Element counts w_0..w_K and, per depth, the elements' shortlex normal forms."""
    res = explore(d, K, **caps)
    return list(res.w), res.normal_forms


def geodesic_counts(d: CoxeterDiagram, K=DEFAULT_DEPTH, **caps):
    """g_0..g_K: a word of length k+1 is geodesic iff its prefix is and its
    endpoint lies at depth k+1."""
    return list(explore(d, K, **caps).g)


def shortlex_language_counts(d: CoxeterDiagram, order=None, K=DEFAULT_DEPTH, **caps):
    """Number of distinct lexicographically least geodesic words per length."""
    res = explore(d, K, order=order, **caps)
    return [len({tuple(wd) for wd in words}) for words in res.normal_forms]


def shortlex_normal_forms(d: CoxeterDiagram, order=None, K=DEFAULT_DEPTH, **caps):
    res = explore(d, K, order=order, **caps)
    return [[tuple(int(x) for x in wd) for wd in words] for words in res.normal_forms]


# -- exact matrices ----------------------------------------------------------------

@dataclass(frozen=True)
class GroupElement:
    """rho(w) as an exact matrix acting on simple-root coordinates (columns = images)."""

    matrix: tuple

    def __mul__(self, other):
        n = len(self.matrix)
        zero = self.matrix[0][0].field.zero
        out = []
        for i in range(n):
            row = []
            for j in range(n):
                acc = zero
                for k in range(n):
                    a, b = self.matrix[i][k], other.matrix[k][j]
                    if not a.is_zero() and not b.is_zero():
                        acc = acc + a * b
                row.append(acc)
            out.append(tuple(row))
        return GroupElement(tuple(out))

    def is_identity(self):
        return all((e == 1) if i == j else e.is_zero()
                   for i, row in enumerate(self.matrix) for j, e in enumerate(row))


def identity_element(B: BilinearForm) -> GroupElement:
    f = B.field
    n = B.rank
    return GroupElement(tuple(tuple(f.one if i == j else f.zero for j in range(n))
                              for i in range(n)))


def generator_matrix(B: BilinearForm, i) -> GroupElement:
    """sigma_i: column j is sigma_i(alpha_j) = alpha_j - 2B_ij alpha_i."""
    f = B.field
    n = B.rank
    rows = []
    for r in range(n):
        row = []
        for c in range(n):
            e = f.one if r == c else f.zero
            if r == i:
                e = e - B.matrix[i][c] * 2
            row.append(e)
        rows.append(tuple(row))
    return GroupElement(tuple(rows))


def group_element(d: CoxeterDiagram, word, max_degree=DEFAULT_MAX_DEGREE) -> GroupElement:
    B = gram_matrix(d, max_degree)
    out = identity_element(B)
    for letter in word:
        out = out * generator_matrix(B, letter)
    return out


def fraction_matrix(el: GroupElement):
    return [[tuple(Fraction(c) for c in e.coeffs) for e in row] for row in el.matrix]
