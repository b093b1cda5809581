import json
import random
from collections import deque

import pytest

from coxgrowth.analysis import build, shortlex_order
from coxgrowth.automata import (FAIL, CoreGraph, accept_core, build_geo, build_shortlex,
                                dump_json, export_dot, period, run, strongly_connected)
from coxgrowth.diagram import INF, CoxeterDiagram
from coxgrowth.errors import ResourceCapError
from coxgrowth.growth import count_words
from coxgrowth.roots import small_roots

UNIVERSAL3 = CoxeterDiagram.universal(3)
DIHEDRAL = CoxeterDiagram.universal(2)
GOLDEN = CoxeterDiagram.from_edges(3, [(0, 1, INF), (1, 2, INF)])


def test_geo_universal():
    a = build_geo(small_roots(UNIVERSAL3))
    assert a.states == ((), (0,), (1,), (2,))
    for i in range(3):
        assert a.trans[0][i] == i + 1
        for j in range(3):
            assert a.trans[i + 1][j] == (FAIL if i == j else j + 1)


def test_geo_dihedral():
    a = build_geo(small_roots(DIHEDRAL))
    assert len(a) == 3
    assert a.trans[1] == (FAIL, 2) and a.trans[2] == (1, FAIL)
    assert count_words(a, 5) == [1, 2, 2, 2, 2, 2]


def test_geo_golden_commuting_state():
    a = build_geo(small_roots(GOLDEN))
    k = a.trans[a.trans[0][0]][2]
    assert a.states[k] == (0, 2)
    assert a.trans[k][0] == FAIL and a.trans[k][2] == FAIL


def test_shortlex_examples():
    assert count_words(build_shortlex(small_roots(UNIVERSAL3)), 6) == [1, 3, 6, 12, 24, 48, 96]
    assert count_words(build_shortlex(small_roots(DIHEDRAL)), 4) == [1, 2, 2, 2, 2]
    sl = count_words(build_shortlex(small_roots(GOLDEN)), 4)
    geo = count_words(build_geo(small_roots(GOLDEN)), 4)
    assert sl[2] == geo[2] - 1
    # s1 s3 is the shortlex representative, s3 s1 is not
    a = build_shortlex(small_roots(GOLDEN))
    assert run(a, [0, 2]) != FAIL and run(a, [2, 0]) == FAIL


def test_shortlex_bad_order():
    with pytest.raises(ValueError):
        build_shortlex(small_roots(GOLDEN), order=(0, 0, 1))


def test_run():
    a = build_geo(small_roots(UNIVERSAL3))
    assert run(a, []) == 0
    assert run(a, [0, 0]) == FAIL
    assert run(a, [0, 0, 1]) == FAIL
    assert run(a, [0, 1, 0]) == 1
    with pytest.raises(IndexError):
        run(a, [5])


def test_state_cap():
    with pytest.raises(ResourceCapError) as err:
        build_geo(small_roots(GOLDEN), max_states=2)
    assert err.value.cap == "states"


def test_core_examples():
    g = accept_core(build_geo(small_roots(UNIVERSAL3)))
    assert len(g) == 3 and g.edge_count() == 6
    assert strongly_connected(g)[0]
    assert period(g) == 1
    g = accept_core(build_geo(small_roots(DIHEDRAL)))
    assert len(g) == 2 and g.edge_count() == 2
    assert strongly_connected(g)[0]
    assert period(g) == 2


def test_scc_and_period_unit_graphs():
    two = CoreGraph.from_edges(4, [(0, 1), (1, 0), (2, 3), (3, 2), (1, 2)])
    ok, comps = strongly_connected(two)
    assert not ok and comps == [[0, 1], [2, 3]]
    with pytest.raises(ValueError):
        period(two)
    four = CoreGraph.from_edges(4, [(0, 1), (1, 2), (2, 3), (3, 0)])
    assert period(four) == 4
    mixed = CoreGraph.from_edges(3, [(0, 1), (1, 0), (1, 2), (2, 0)])
    assert period(mixed) == 1


def test_core_node_count(fixture_map):
    for d in fixture_map.values():
        _, _, _, _, sl, geo = build(d)
        for a in (sl, geo):
            assert len(accept_core(a)) == len(a) - 1


def test_export_dot():
    a = build_geo(small_roots(UNIVERSAL3))
    dot = export_dot(a)
    assert dot.count("[label=\"{") == 4
    assert dot == export_dot(build_geo(small_roots(UNIVERSAL3)))
    assert "fail" not in dot.lower()
    empty = type(a)(a.kind, 0, ((),), ((),), (), a.roots)
    with pytest.raises(ValueError):
        export_dot(empty)


def test_json_dump():
    a = build_shortlex(small_roots(GOLDEN))
    data = json.loads(dump_json(a))
    assert data["kind"] == "shortlex" and data["alphabet"] == 3
    assert len(data["states"]) == len(data["transitions"]) == len(a)


def _structural_invariants(a):
    for k, st in enumerate(a.states):
        if k:
            assert any(r < a.n for r in st)  # contains a simple root
        for i in range(a.n):
            assert (a.trans[k][i] == FAIL) == (i in st)
    seen = {0}
    queue = deque([0])
    while queue:
        u = queue.popleft()
        for t in a.trans[u]:
            if t != FAIL and t not in seen:
                seen.add(t)
                queue.append(t)
    assert len(seen) == len(a)


def test_structure_random(random_diagrams):
    for d in random_diagrams:
        _, _, _, _, sl, geo = build(d)
        _structural_invariants(sl)
        _structural_invariants(geo)


def test_shortlex_le_geo(random_diagrams, fixture_map):
    for d in list(random_diagrams) + list(fixture_map.values()):
        _, _, _, _, sl, geo = build(d)
        assert all(x <= y for x, y in zip(count_words(sl, 10), count_words(geo, 10)))


def test_shortlex_order_invariance(random_diagrams):
    rng = random.Random(11)
    for d in random_diagrams[:10]:
        s = small_roots(d)
        base = count_words(build_shortlex(s), 10)
        for _ in range(3):
            order = list(range(d.rank))
            rng.shuffle(order)
            assert count_words(build_shortlex(s, order), 10) == base


def test_deterministic_rebuild():
    d = CoxeterDiagram.from_edges(4, [(0, 1, INF), (1, 2, INF), (2, 3, INF), (0, 2, 3), (1, 3, 4),
                                      (0, 3, 5)])
    a, b = build(d), build(d)
    for x, y in zip(a[4:], b[4:]):
        assert x.states == y.states and x.trans == y.trans


# -- lemma suites -----------------------------------------------------------------------

def hiking_violations(d, a):
    bad = []
    for D in range(len(a)):
        for i in range(a.n):
            Dp = a.trans[D][i]
            if Dp == FAIL:
                continue
            for j in range(a.n):
                if j != i and d.label(i, j) == INF:
                    t = a.trans[Dp][j]
                    if t == FAIL or t == Dp:
                        bad.append((D, i, j))
    return bad


def hydra_violations(a, first):
    target = a.trans[0][first]
    assert a.states[target] == (first,)
    bad = []
    for st in range(1, len(a)):
        seen = {st}
        queue = deque([st])
        while queue:
            u = queue.popleft()
            for t in a.trans[u]:
                if t != FAIL and t not in seen:
                    seen.add(t)
                    queue.append(t)
        if target not in seen:
            bad.append(st)
    return bad


def test_hiking(random_diagrams, fixture_map):
    for d in list(random_diagrams) + list(fixture_map.values()):
        _, _, _, _, sl, geo = build(d)
        assert hiking_violations(d, sl) == []
        assert hiking_violations(d, geo) == []


def test_hydra_and_gcd(random_diagrams, fixture_map):
    for d in list(random_diagrams) + list(fixture_map.values()):
        tree, _, order, _, sl, geo = build(d)
        if not tree:
            continue
        for a in (sl, geo):
            assert hydra_violations(a, order[0]) == []
            core = accept_core(a)
            assert strongly_connected(core)[0]
            assert period(core) == 1


def test_hydra_uses_admissible_first_vertex():
    # the vertex labelled 1 is not vertex 0 here
    d = CoxeterDiagram.from_edges(4, [(2, 0, INF), (2, 1, INF), (2, 3, INF), (0, 1, 3), (0, 3, 4)])
    tree, perm, order = shortlex_order(d)
    assert tree and order[0] == perm.index(0)
    _, _, _, _, sl, geo = build(d)
    assert hydra_violations(geo, order[0]) == []
