import math

import mpmath
import pytest

from coxgrowth.algebra import apply_reflection, inner_simple
from coxgrowth.analysis import shortlex_order
from coxgrowth.diagram import INF, CoxeterDiagram
from coxgrowth.errors import DiagramError, ResourceCapError
from coxgrowth.roots import (FIXED, NEGATIVE_SELF, NOT_SMALL, act, cycle_escape,
                             in_stabilizer_span, small_roots, stabilizer_roots)

GOLDEN = CoxeterDiagram.from_edges(3, [(0, 1, INF), (1, 2, INF)])
M13_4 = CoxeterDiagram.from_edges(3, [(0, 1, INF), (1, 2, INF), (0, 2, 4)])


def float_closure(d, dps=60):
    """Independent small-root closure in 60-digit floating point."""
    n = d.rank
    with mpmath.workdps(dps):
        B = [[mpmath.mpf(1) if i == j else -mpmath.cos(mpmath.pi / d.label(i, j))
              if d.label(i, j) != INF else mpmath.mpf(-1) for j in range(n)] for i in range(n)]
        eps = mpmath.mpf(10) ** -(dps // 2)
        roots = [tuple(mpmath.mpf(1 if k == i else 0) for k in range(n)) for i in range(n)]
        queue = list(roots)
        while queue:
            r = queue.pop()
            for i in range(n):
                p = sum(r[k] * B[k][i] for k in range(n))
                if -1 + eps < p < -eps:
                    img = tuple(r[k] - (2 * p if k == i else 0) for k in range(n))
                    if not any(max(abs(a - b) for a, b in zip(img, q)) < eps for q in roots):
                        roots.append(img)
                        queue.append(img)
        return sorted(tuple(round(float(x), 12) for x in r) for r in roots)


def exact_as_floats(s):
    return sorted(tuple(round(float(x), 12) for x in r) for r in s.roots)


def test_universal_only_simple_roots():
    s = small_roots(CoxeterDiagram.universal(3))
    assert len(s) == 3
    assert act(s, 0, 1) == NOT_SMALL


def test_golden_only_simple_roots():
    assert len(small_roots(GOLDEN)) == 3


def test_m13_four_example():
    s = small_roots(M13_4)
    assert len(s) == 5
    r2 = math.sqrt(2)
    assert exact_as_floats(s) == sorted([(1.0, 0.0, 0.0), (0.0, 1.0, 0.0), (0.0, 0.0, 1.0),
                                         (1.0, 0.0, round(r2, 12)), (round(r2, 12), 0.0, 1.0)])
    # sigma_3(alpha_1) = alpha_1 + sqrt2 alpha_3
    k = act(s, 2, 0)
    assert k >= 3
    v = s.roots[k]
    assert v[0] == 1 and v[1] == 0 and abs(float(v[2]) - r2) < 1e-15
    assert s.format_root(k) == "a1 + (c)*a3"


@pytest.mark.parametrize("d", [
    M13_4,
    CoxeterDiagram.from_edges(3, [(0, 1, INF), (1, 2, 5), (0, 2, 3)]),
    CoxeterDiagram.from_edges(4, [(0, 1, INF), (1, 2, INF), (2, 3, INF), (0, 2, 3), (1, 3, 4),
                                  (0, 3, 5)]),
    CoxeterDiagram.from_edges(4, [(0, 1, 3), (1, 2, 3), (2, 3, 3)]),  # A4, finite
    CoxeterDiagram.from_edges(3, [(0, 1, 5), (1, 2, 3)]),  # H3
])
def test_matches_float_closure(d):
    assert exact_as_floats(small_roots(d)) == float_closure(d)


def test_action_sentinels():
    s = small_roots(M13_4)
    for i in range(3):
        assert act(s, i, i) == NEGATIVE_SELF
        assert sum(1 for t in s.action[i] if t == NEGATIVE_SELF) == 1


def _check_invariants(s):
    B = s.form
    n = s.rank
    for k, r in enumerate(s.roots):
        assert all(c.sign() >= 0 for c in r) and any(not c.is_zero() for c in r)
        for i in range(n):
            p = inner_simple(B, r, i)
            if k != i:
                assert (p - 1).sign() < 0
            if p.sign() < 0 and (p + 1).sign() > 0:
                assert act(s, i, k) >= 0
            t = act(s, i, k)
            if t >= 0:
                assert s.roots[t] == apply_reflection(B, i, r)
    # canonical order: simple roots first, then by height
    assert all(s.roots[i] == tuple(1 if j == i else 0 for j in range(n)) for i in range(n))
    heights = [float(sum(r, r[0].field.zero)) for r in s.roots[n:]]
    assert heights == sorted(heights)


def test_invariants_on_random_set(random_diagrams):
    for d in random_diagrams:
        _check_invariants(small_roots(d))


def test_minimality():
    # removing a non-simple root breaks closure
    for d in (M13_4, CoxeterDiagram.from_edges(3, [(0, 1, INF), (1, 2, 5), (0, 2, 3)])):
        s = small_roots(d)
        for drop in range(s.rank, len(s)):
            kept = set(range(len(s))) - {drop}
            broken = any(act(s, i, r) == drop for r in kept for i in range(s.rank)
                         if (inner_simple(s.form, s.roots[r], i).sign() < 0
                             and (inner_simple(s.form, s.roots[r], i) + 1).sign() > 0))
            assert broken


def test_root_cap():
    with pytest.raises(ResourceCapError) as err:
        small_roots(CoxeterDiagram.from_edges(3, [(0, 1, 5), (1, 2, 3)]), max_roots=5)
    assert err.value.cap == "sigma"


def test_deterministic():
    a, b = small_roots(M13_4), small_roots(M13_4)
    assert a.roots == b.roots and a.action == b.action


# -- stabiliser and cycling ------------------------------------------------------------

PATH4 = CoxeterDiagram.from_edges(4, [(0, 1, INF), (1, 2, INF), (2, 3, INF)])


def test_stabilizer_examples():
    s = small_roots(CoxeterDiagram.universal(3))
    assert stabilizer_roots(s, 0, 1) == []
    s = small_roots(PATH4)
    assert stabilizer_roots(s, 0, 1) == [3]
    assert stabilizer_roots(s, 1, 2) == []
    with pytest.raises(DiagramError):
        stabilizer_roots(s, 0, 2)


def test_cycle_escape_examples():
    s = small_roots(CoxeterDiagram.universal(3))
    assert cycle_escape(s, 0, 1, 2) == 1
    assert cycle_escape(s, 0, 1, 0) == 1
    assert cycle_escape(s, 0, 1, 1) == 1
    s = small_roots(PATH4)
    assert cycle_escape(s, 0, 1, 3) is FIXED
    with pytest.raises(DiagramError):
        cycle_escape(s, 0, 3, 0)


def _lemma_checks(d):
    s = small_roots(d)
    bound = 4 * len(s)
    for i, j in d.infinity_edges():
        stab = stabilizer_roots(s, i, j)
        for r in stab:
            assert in_stabilizer_span(s, i, j, r)
        for r in range(len(s)):
            if r not in stab:
                N = cycle_escape(s, i, j, r)
                assert N is not FIXED and 1 <= N <= bound


def test_stabiliser_and_cycling_random(random_diagrams):
    for d in random_diagrams:
        _lemma_checks(d)


def test_stabiliser_and_cycling_fixtures(fixture_map):
    for d in fixture_map.values():
        _lemma_checks(d)


def test_two_support_stabilised_root(random_diagrams):
    # the only stabilised root supported on {alpha_1, alpha_2} is alpha_1 + alpha_2
    for d in random_diagrams:
        _, _, order = shortlex_order(d)
        a, b = order[0], order[1]
        s = small_roots(d)
        for r in stabilizer_roots(s, a, b):
            v = s.roots[r]
            if all(v[k].is_zero() for k in range(d.rank) if k not in (a, b)):
                assert v[a] == 1 and v[b] == 1
