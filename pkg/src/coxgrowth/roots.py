"""Small (minimal) roots and the simple-reflection action on them."""

from __future__ import annotations

from collections import deque
from dataclasses import dataclass
from functools import cmp_to_key

from .algebra import (DEFAULT_MAX_DEGREE, BilinearForm, apply_reflection, gram_matrix,
                      inner_simple, simple_root)
from .diagram import INF, CoxeterDiagram
from .errors import DiagramError, InternalInvariantError, ResourceCapError

DEFAULT_MAX_ROOTS = 100_000

# Sentinels in the action table.
NOT_SMALL = -1
NEGATIVE_SELF = -2


class _Fixed:
    def __repr__(self):
        return "FIXED"


FIXED = _Fixed()


@dataclass(frozen=True, eq=False)
class SmallRootSet:
    diagram: CoxeterDiagram
    form: BilinearForm
    roots: tuple  # simple roots first, at indices 0..n-1
    action: tuple  # action[i][r]: root index, NOT_SMALL or NEGATIVE_SELF

    def __len__(self):
        return len(self.roots)

    @property
    def rank(self):
        return self.diagram.rank

    def index(self, v):
        return self._index().get(tuple(v))

    def _index(self):
        idx = self.__dict__.get("_idx")
        if idx is None:
            idx = {r: k for k, r in enumerate(self.roots)}
            object.__setattr__(self, "_idx", idx)
        return idx

    def simple(self, i):
        return i

    def format_root(self, r, decimal=False, digits=12):
        """Human-readable root, e.g. ``a1 + (c)*a3``; 1-based simple roots."""
        parts = []
        for k, c in enumerate(self.roots[r]):
            if c.is_zero():
                continue
            coef = c.decimal(digits) if decimal else str(c)
            parts.append(f"a{k + 1}" if coef == "1" else f"({coef})*a{k + 1}")
        return " + ".join(parts)


def _height(v):
    acc = v[0]
    for c in v[1:]:
        acc = acc + c
    return acc


def _compare_roots(u, v):
    s = (_height(u) - _height(v)).sign()
    if s:
        return s
    for a, b in zip(u, v):
        s = (a - b).sign()
        if s:
            return s
    return 0


def small_roots(d: CoxeterDiagram, max_degree=DEFAULT_MAX_DEGREE,
                max_roots=DEFAULT_MAX_ROOTS) -> SmallRootSet:
    """Close the simple roots under sigma_i whenever -1 < (r|alpha_i) < 0."""
    B = gram_matrix(d, max_degree)
    n = d.rank
    simple = [simple_root(B, i) for i in range(n)]
    found = {r: k for k, r in enumerate(simple)}
    order = list(simple)
    queue = deque(simple)
    while queue:
        r = queue.popleft()
        for i in range(n):
            p = inner_simple(B, r, i)
            if p.sign() < 0 and (p + 1).sign() > 0:
                image = apply_reflection(B, i, r)
                if image not in found:
                    found[image] = len(order)
                    order.append(image)
                    if len(order) > max_roots:
                        raise ResourceCapError("sigma", max_roots, "too many small roots")
                    queue.append(image)

    others = sorted(order[n:], key=cmp_to_key(_compare_roots))
    roots = tuple(simple + others)
    index = {r: k for k, r in enumerate(roots)}
    action = []
    for i in range(n):
        row = []
        for k, r in enumerate(roots):
            if k == i:
                row.append(NEGATIVE_SELF)
            else:
                row.append(index.get(apply_reflection(B, i, r), NOT_SMALL))
        action.append(tuple(row))
    return SmallRootSet(d, B, roots, tuple(action))


def act(s: SmallRootSet, i, r):
    return s.action[i][r]


def _require_infinite(s, i, j):
    if i == j or s.diagram.labels[i][j] != INF:
        raise DiagramError(f"generators {i + 1} and {j + 1} are not joined by an infinity edge")


def stabilizer_roots(s: SmallRootSet, i, j):
    """Indices of small roots fixed by both sigma_i and sigma_j."""
    _require_infinite(s, i, j)
    return [r for r in range(len(s)) if s.action[i][r] == r and s.action[j][r] == r]


def cycle_escape(s: SmallRootSet, i, j, r):
    """Least N >= 1 with (sigma_i sigma_j)^N(r) outside Sigma, or FIXED.

    Leaving Sigma includes becoming a negative root.  The bound 4|Sigma| is a
    safety net; hitting it means the arithmetic is broken.
    """
    _require_infinite(s, i, j)
    if s.action[i][r] == r and s.action[j][r] == r:
        return FIXED
    B = s.form
    v = s.roots[r]
    bound = 4 * len(s)
    for N in range(1, bound + 1):
        v = apply_reflection(B, i, apply_reflection(B, j, v))
        if s.index(v) is None:
            return N
    raise InternalInvariantError(
        f"root {r} did not leave Sigma under (s{i + 1} s{j + 1})^N within {bound} steps")


def in_stabilizer_span(s: SmallRootSet, i, j, r):
    """Whether root r is a combination of alpha_i + alpha_j and the alpha_k with
    m_ki = m_kj = 2."""
    v = s.roots[r]
    if v[i] != v[j]:
        return False
    lab = s.diagram.labels
    return all(v[k].is_zero() for k in range(s.rank)
               if k not in (i, j) and not (lab[k][i] == 2 and lab[k][j] == 2))
