"""ShortLex and Geo automata over subsets of the small roots.

States are stored as sorted tuples of root indices.  State 0 is the start
state (the empty set); the fail state is not materialised and transitions
into it are recorded as ``FAIL``.
"""

from __future__ import annotations

import json
from collections import deque
from dataclasses import dataclass
from math import gcd

import numpy as np
from scipy.sparse import csr_matrix
from scipy.sparse.csgraph import connected_components

from .errors import ResourceCapError
from .roots import SmallRootSet

FAIL = -1
SHORTLEX = "shortlex"
GEO = "geo"
DEFAULT_MAX_STATES = 1_000_000


@dataclass(frozen=True, eq=False)
class Automaton:
    kind: str
    n: int
    states: tuple  # states[k] is a sorted tuple of root indices
    trans: tuple  # trans[k][letter] is a state index or FAIL
    order: tuple  # generator priority order (ShortLex); identity for Geo
    roots: SmallRootSet

    def __len__(self):
        return len(self.states)

    def to_json(self):
        return {
            "kind": self.kind,
            "alphabet": self.n,
            "order": [i + 1 for i in self.order],
            "states": [list(s) for s in self.states],
            "transitions": [list(row) for row in self.trans],
        }


def _bits(mask):
    while mask:
        low = mask & -mask
        yield low.bit_length() - 1
        mask ^= low


def _build(s: SmallRootSet, kind, order, max_states):
    n = s.rank
    if n < 1:
        raise ValueError("empty alphabet")
    images = [[1 << t if t >= 0 else 0 for t in s.action[i]] for i in range(n)]
    extra = [0] * n
    if kind == SHORTLEX:
        pos = {g: k for k, g in enumerate(order)}
        for i in range(n):
            for j in range(n):
                if pos[j] < pos[i]:
                    extra[i] |= images[i][j]

    index = {0: 0}
    masks = [0]
    trans = []
    queue = deque([0])
    while queue:
        D = queue.popleft()
        row = []
        for i in range(n):
            if D >> i & 1:
                row.append(FAIL)
                continue
            img = images[i]
            new = (1 << i) | extra[i]
            for r in _bits(D):
                new |= img[r]
            k = index.get(new)
            if k is None:
                k = index[new] = len(masks)
                if k >= max_states:
                    raise ResourceCapError("states", max_states, f"{kind} automaton too large")
                masks.append(new)
                queue.append(new)
            row.append(k)
        trans.append(tuple(row))
    states = tuple(tuple(_bits(m)) for m in masks)
    return Automaton(kind, n, states, tuple(trans), tuple(order), s)


def build_geo(s: SmallRootSet, max_states=DEFAULT_MAX_STATES) -> Automaton:
    """delta(D, s_i) = {alpha_i} u (sigma_i(D) n Sigma), failing when alpha_i in D."""
    return _build(s, GEO, tuple(range(s.rank)), max_states)


def build_shortlex(s: SmallRootSet, order=None, max_states=DEFAULT_MAX_STATES) -> Automaton:
    """As Geo, plus sigma_i(alpha_j) for every j earlier than i in ``order``."""
    order = tuple(range(s.rank)) if order is None else tuple(order)
    if sorted(order) != list(range(s.rank)):
        raise ValueError("order must be a permutation of the generators")
    return _build(s, SHORTLEX, order, max_states)


def run(a: Automaton, word, state=0):
    for letter in word:
        if state == FAIL:
            return FAIL
        if not 0 <= letter < a.n:
            raise IndexError(f"letter {letter} out of range")
        state = a.trans[state][letter]
    return state


@dataclass(frozen=True)
class CoreGraph:
    """Induced graph on the non-start states; node k is automaton state k + 1.

    ``succ[u]`` lists ``(v, multiplicity)`` pairs.
    """

    succ: tuple

    def __len__(self):
        return len(self.succ)

    @classmethod
    def from_edges(cls, size, edges):
        succ = [dict() for _ in range(size)]
        for u, v in edges:
            succ[u][v] = succ[u].get(v, 0) + 1
        return cls(tuple(tuple(sorted(d.items())) for d in succ))

    def edge_count(self):
        return sum(m for row in self.succ for _, m in row)

    def sparse(self):
        rows, cols, vals = [], [], []
        for u, row in enumerate(self.succ):
            for v, m in row:
                rows.append(u)
                cols.append(v)
                vals.append(m)
        size = len(self.succ)
        return csr_matrix((np.array(vals, dtype=np.int64), (rows, cols)), shape=(size, size))


def accept_core(a: Automaton) -> CoreGraph:
    edges = []
    for k in range(1, len(a.states)):
        for t in a.trans[k]:
            if t != FAIL:
                edges.append((k - 1, t - 1))
    return CoreGraph.from_edges(len(a.states) - 1, edges)


def strongly_connected(g: CoreGraph):
    """Return ``(is_single_component, components)``; components are sorted node lists."""
    if len(g) == 0:
        return False, []
    count, labels = connected_components(g.sparse(), directed=True, connection="strong")
    comps = [[] for _ in range(count)]
    for v, c in enumerate(labels):
        comps[c].append(v)
    comps.sort()
    return count == 1, comps


def period(g: CoreGraph, nodes=None):
    """gcd of cycle lengths of a strongly connected graph (or of the sub-graph on ``nodes``)."""
    if nodes is None:
        ok, _ = strongly_connected(g)
        if not ok:
            raise ValueError("period is only defined for strongly connected graphs")
        nodes = range(len(g))
    nodes = set(nodes)
    start = min(nodes)
    level = {start: 0}
    queue = deque([start])
    p = 0
    while queue:
        u = queue.popleft()
        for v, _ in g.succ[u]:
            if v not in nodes:
                continue
            if v not in level:
                level[v] = level[u] + 1
                queue.append(v)
    for u in nodes:
        for v, _ in g.succ[u]:
            if v in nodes:
                p = gcd(p, level[u] + 1 - level[v])
    return p


def state_label(a: Automaton, k):
    if k == 0:
        return "{}"
    return "{" + ", ".join(f"r{r + 1}" for r in a.states[k]) + "}"


def export_dot(a: Automaton) -> str:
    if a.n < 1:
        raise ValueError("empty alphabet")
    lines = [f"digraph {a.kind} {{", "  rankdir=LR;", '  node [shape=box];']
    for k in range(len(a.states)):
        shape = ", shape=doublecircle" if k == 0 else ""
        lines.append(f'  q{k} [label="{state_label(a, k)}"{shape}];')
    for k, row in enumerate(a.trans):
        for letter, t in enumerate(row):
            if t != FAIL:
                lines.append(f'  q{k} -> q{t} [label="s{letter + 1}"];')
    lines.append("}")
    return "\n".join(lines) + "\n"


def dump_json(a: Automaton) -> str:
    return json.dumps(a.to_json(), sort_keys=True)
