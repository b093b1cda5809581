"""Coxeter diagrams and geometric (polytope) diagrams.

Vertices are 0-based internally; the text format and all user-facing output
use 1-based indices.  The label ``INF`` stands for m = infinity.
"""

from __future__ import annotations

import math
import random
from collections import deque
from dataclasses import dataclass
from itertools import combinations

from .errors import DiagramError, DisconnectedDiagramError

INF = math.inf

BOLD = "bold"
DASHED = "dashed"


def _label_str(m):
    return "inf" if m == INF else str(m)


@dataclass(frozen=True)
class CoxeterDiagram:
    rank: int
    labels: tuple  # symmetric rank x rank, diagonal 1

    def __post_init__(self):
        n = self.rank
        if n < 1:
            raise DiagramError("rank must be at least 1")
        if len(self.labels) != n or any(len(row) != n for row in self.labels):
            raise DiagramError("label matrix has the wrong shape")
        for i in range(n):
            if self.labels[i][i] != 1:
                raise DiagramError(f"diagonal label m[{i + 1}][{i + 1}] must be 1")
            for j in range(i + 1, n):
                m = self.labels[i][j]
                if m != self.labels[j][i]:
                    raise DiagramError(f"labels of {i + 1},{j + 1} are not symmetric")
                if not (m == INF or (isinstance(m, int) and m >= 2)):
                    raise DiagramError(f"label {m!r} of {i + 1},{j + 1} must be >= 2 or inf")

    @classmethod
    def from_edges(cls, rank, edges):
        """Build from ``(i, j, m)`` triples with 0-based vertices; other pairs get 2."""
        labels = [[1 if i == j else 2 for j in range(rank)] for i in range(rank)]
        for i, j, m in edges:
            labels[i][j] = labels[j][i] = m
        return cls(rank, tuple(tuple(row) for row in labels))

    @classmethod
    def universal(cls, rank):
        return cls.from_edges(rank, [(i, j, INF) for i, j in combinations(range(rank), 2)])

    def label(self, i, j):
        return self.labels[i][j]

    def pairs(self):
        return combinations(range(self.rank), 2)

    def infinity_edges(self):
        return [(i, j) for i, j in self.pairs() if self.labels[i][j] == INF]

    def finite_labels(self):
        """Sorted distinct finite off-diagonal labels."""
        return sorted({self.labels[i][j] for i, j in self.pairs() if self.labels[i][j] != INF})

    def is_free_product(self):
        """True when every pair is labelled infinity (a free product of Z/2's)."""
        return all(self.labels[i][j] == INF for i, j in self.pairs())

    def is_connected(self):
        # Diagram edges are the pairs with m >= 3.
        return _components(self.rank, [(i, j) for i, j in self.pairs() if self.labels[i][j] != 2])[0] == 1

    def require_connected(self):
        if not self.is_connected():
            raise DisconnectedDiagramError(
                "diagram is disconnected; direct products are not supported")
        return self

    def relabel(self, perm):
        """Return the diagram with old vertex ``v`` renamed ``perm[v]``."""
        inv = [0] * self.rank
        for old, new in enumerate(perm):
            inv[new] = old
        labels = tuple(tuple(self.labels[inv[a]][inv[b]] for b in range(self.rank))
                       for a in range(self.rank))
        return CoxeterDiagram(self.rank, labels)

    def to_text(self):
        lines = [f"rank {self.rank}"]
        for i, j in self.pairs():
            if self.labels[i][j] != 2:
                lines.append(f"edge {i + 1} {j + 1} {_label_str(self.labels[i][j])}")
        return "\n".join(lines) + "\n"

    def to_dot(self, name="coxeter"):
        lines = [f"graph {name} {{"]
        for v in range(self.rank):
            lines.append(f'  v{v + 1} [label="{v + 1}"];')
        for i, j in self.pairs():
            m = self.labels[i][j]
            if m == 2:
                continue
            attr = ' [label="inf", style=bold]' if m == INF else (
                "" if m == 3 else f' [label="{m}"]')
            lines.append(f"  v{i + 1} -- v{j + 1}{attr};")
        lines.append("}")
        return "\n".join(lines) + "\n"


@dataclass(frozen=True)
class GeometricDiagram:
    """Diagram of a hyperbolic Coxeter polytope.

    ``edges`` holds ``(i, j, kind)`` with ``i < j`` and ``kind`` either an
    integer angle label ``m`` (dihedral angle pi/m) or ``BOLD``/``DASHED``.
    """

    rank: int
    edges: tuple

    def __post_init__(self):
        if self.rank < 1:
            raise DiagramError("rank must be at least 1")
        seen = set()
        for i, j, kind in self.edges:
            if i == j:
                raise DiagramError(f"self-edge at vertex {i + 1}")
            if not (0 <= i < self.rank and 0 <= j < self.rank):
                raise DiagramError(f"vertex index out of range in edge {i + 1},{j + 1}")
            key = frozenset((i, j))
            if key in seen:
                raise DiagramError(f"duplicate edge {i + 1},{j + 1}")
            seen.add(key)
            if kind not in (BOLD, DASHED) and not (isinstance(kind, int) and kind >= 2):
                raise DiagramError(f"bad geometric edge kind {kind!r}")

    def ultraparallel_edges(self):
        """Bold and dashed edges, i.e. the pairs that become infinity."""
        return [(i, j) for i, j, kind in self.edges if kind in (BOLD, DASHED)]

    def ultraparallel_connected(self):
        """Whether the bold and dashed edges form a connected spanning subgraph."""
        return _components(self.rank, self.ultraparallel_edges())[0] == 1

    def to_dot(self, name="polytope"):
        lines = [f"graph {name} {{"]
        for v in range(self.rank):
            lines.append(f'  v{v + 1} [label="{v + 1}"];')
        for i, j, kind in sorted(self.edges, key=lambda e: (e[0], e[1])):
            if kind == BOLD:
                attr = " [style=bold, penwidth=3]"
            elif kind == DASHED:
                attr = " [style=dashed]"
            elif kind == 2:
                continue
            else:
                attr = "" if kind == 3 else f' [label="{kind}"]'
            lines.append(f"  v{i + 1} -- v{j + 1}{attr};")
        lines.append("}")
        return "\n".join(lines) + "\n"


def to_coxeter(g: GeometricDiagram) -> CoxeterDiagram:
    edges = [(i, j, INF if kind in (BOLD, DASHED) else kind) for i, j, kind in g.edges]
    return CoxeterDiagram.from_edges(g.rank, edges)


def _parse_label(tok, lineno):
    if tok.lower() in ("inf", "oo", "infinity", "∞"):
        return INF
    try:
        m = int(tok)
    except ValueError:
        raise DiagramError(f"expected an integer label or 'inf', got {tok!r}", lineno) from None
    if m < 2:
        raise DiagramError(f"label {m} is less than 2", lineno)
    return m


def parse_diagram(text: str):
    """Parse the line-oriented diagram format.

    Returns a :class:`CoxeterDiagram` for ``edge`` files and a
    :class:`GeometricDiagram` for ``gedge`` files.
    """
    rank = None
    kind = None
    edges = []
    seen = {}
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.strip()
        if not line or line.startswith("#"):
            continue
        toks = line.split()
        head = toks[0].lower()
        if rank is None:
            if head != "rank" or len(toks) != 2:
                raise DiagramError("first line must be 'rank <n>'", lineno)
            try:
                rank = int(toks[1])
            except ValueError:
                raise DiagramError(f"bad rank {toks[1]!r}", lineno) from None
            if rank < 1:
                raise DiagramError("rank must be at least 1", lineno)
            continue
        if head not in ("edge", "gedge"):
            raise DiagramError(f"unknown directive {toks[0]!r}", lineno)
        if kind is None:
            kind = head
        elif kind != head:
            raise DiagramError("a file may not mix 'edge' and 'gedge' lines", lineno)
        if head == "gedge" and len(toks) == 5 and toks[3].lower() == "angle":
            toks = toks[:3] + toks[4:]
        if len(toks) != 4:
            raise DiagramError(f"expected '{head} <i> <j> <label>'", lineno)
        try:
            i, j = int(toks[1]) - 1, int(toks[2]) - 1
        except ValueError:
            raise DiagramError("vertex indices must be integers", lineno) from None
        if not (0 <= i < rank and 0 <= j < rank):
            raise DiagramError(f"vertex index out of range 1..{rank}", lineno)
        if i == j:
            raise DiagramError("self-edges are not allowed", lineno)
        if i > j:
            i, j = j, i
        if (i, j) in seen:
            raise DiagramError(f"duplicate edge {i + 1} {j + 1} (first on line {seen[i, j]})", lineno)
        seen[i, j] = lineno
        tok = toks[3].lower()
        if head == "gedge" and tok in (BOLD, DASHED):
            label = tok
        else:
            label = _parse_label(toks[3], lineno)
            if head == "gedge" and label == INF:
                raise DiagramError("geometric edges use 'bold' or 'dashed', not inf", lineno)
        edges.append((i, j, label))
    if rank is None:
        raise DiagramError("missing 'rank <n>' header")
    if kind == "gedge":
        return GeometricDiagram(rank, tuple(edges))
    return CoxeterDiagram.from_edges(rank, edges)


def as_coxeter(d) -> CoxeterDiagram:
    return to_coxeter(d) if isinstance(d, GeometricDiagram) else d


def _components(n, edges):
    adj = [[] for _ in range(n)]
    for i, j in edges:
        adj[i].append(j)
        adj[j].append(i)
    comp = [-1] * n
    count = 0
    for s in range(n):
        if comp[s] >= 0:
            continue
        comp[s] = count
        queue = deque([s])
        while queue:
            u = queue.popleft()
            for v in adj[u]:
                if comp[v] < 0:
                    comp[v] = count
                    queue.append(v)
        count += 1
    return count, comp


@dataclass(frozen=True)
class SpanningTree:
    root: int
    parent: tuple  # parent[root] is None
    edges: tuple  # sorted (i, j) pairs, i < j

    def neighbours(self, v):
        return sorted({j for i, j in self.edges if i == v} | {i for i, j in self.edges if j == v})

    def leaves(self):
        return [v for v in range(len(self.parent)) if len(self.neighbours(v)) == 1]


@dataclass(frozen=True)
class NotSpanned:
    reason: str

    def __bool__(self):
        return False


def infinity_spanned(d: CoxeterDiagram):
    """Return an infinity-labelled spanning tree, or :class:`NotSpanned`.

    The tree is the BFS tree over infinity-edges rooted at the lowest-index
    vertex of the largest component of the infinity-subgraph.
    """
    if d.rank <= 2:
        return NotSpanned("rank <= 2 is excluded (infinite dihedral is the trivial case)")
    inf_edges = d.infinity_edges()
    count, _ = _components(d.rank, inf_edges)
    if count != 1:
        return NotSpanned(f"infinity-subgraph has {count} components")
    # A spanning tree exists, so the largest component is everything.
    root = 0
    parent = [None] * d.rank
    visited = [False] * d.rank
    visited[root] = True
    queue = deque([root])
    tree = []
    while queue:
        u = queue.popleft()
        for v in range(d.rank):
            if v != u and not visited[v] and d.labels[u][v] == INF:
                visited[v] = True
                parent[v] = u
                tree.append((min(u, v), max(u, v)))
                queue.append(v)
    return SpanningTree(root, tuple(parent), tuple(sorted(tree)))


def admissible_labelling(d: CoxeterDiagram, t: SpanningTree):
    """Renumber vertices so that labels increase along every path from vertex 1 to a leaf.

    Returns ``perm`` with ``perm[old] = new`` (0-based).  The initial path
    1-2-3 is the lexicographically least tree path ``(a, b, c)``; remaining
    vertices are peeled off as leaves of the tree rooted at ``a`` and
    numbered downwards from n, higher vertex indices first.
    """
    n = d.rank
    if n < 3:
        raise DiagramError("admissible labelling needs rank >= 3")
    for i, j in t.edges:
        if d.labels[i][j] != INF:
            raise DiagramError(f"tree edge {i + 1},{j + 1} is not labelled inf")
    adj = {v: t.neighbours(v) for v in range(n)}
    a, b, c = min((a, b, c) for b in range(n) for a in adj[b] for c in adj[b] if a != c)

    # Orient the tree away from a.
    children = {v: [] for v in range(n)}
    seen = {a}
    queue = deque([a])
    while queue:
        u = queue.popleft()
        for v in adj[u]:
            if v not in seen:
                seen.add(v)
                children[u].append(v)
                queue.append(v)

    perm = [None] * n
    perm[a], perm[b], perm[c] = 0, 1, 2
    done = {a, b, c}
    next_label = n - 1
    while next_label > 2:
        boundary = sorted((v for v in range(n) if v not in done
                           and all(ch in done for ch in children[v])), reverse=True)
        for v in boundary:
            perm[v] = next_label
            next_label -= 1
        done.update(boundary)
    return tuple(perm)


def relabel_tree(t: SpanningTree, perm) -> SpanningTree:
    n = len(t.parent)
    parent = [None] * n
    for v, p in enumerate(t.parent):
        if p is not None:
            parent[perm[v]] = perm[p]
    edges = tuple(sorted((min(perm[i], perm[j]), max(perm[i], perm[j])) for i, j in t.edges))
    return SpanningTree(perm[t.root], tuple(parent), edges)


def increasing_from_first(t: SpanningTree) -> bool:
    """Check that every tree path from vertex 0 to a leaf has increasing labels,
    and that 0-1 and 1-2 are tree edges."""
    n = len(t.parent)
    edges = set(t.edges)
    if (0, 1) not in edges or (1, 2) not in edges:
        return False
    adj = {v: t.neighbours(v) for v in range(n)}
    stack = [(0, None)]
    while stack:
        u, prev = stack.pop()
        for v in adj[u]:
            if v == prev:
                continue
            if v < u:
                return False
            stack.append((v, u))
    return True


def random_spanned_diagram(rng: random.Random, rank, finite_labels=(2, 3, 4, 5), inf_weight=1):
    """A random infinity-spanned diagram: random infinity tree plus random chords.

    Non-tree pairs draw their label uniformly from ``finite_labels`` plus
    ``inf_weight`` copies of infinity.
    """
    if rank < 3:
        raise ValueError("infinity-spanned diagrams have rank >= 3")
    order = list(range(rank))
    rng.shuffle(order)
    edges = {}
    for k in range(1, rank):
        u, v = order[k], order[rng.randrange(k)]
        edges[min(u, v), max(u, v)] = INF
    choices = list(finite_labels) + [INF] * inf_weight
    for i, j in combinations(range(rank), 2):
        if (i, j) not in edges:
            edges[i, j] = rng.choice(choices)
    return CoxeterDiagram.from_edges(rank, [(i, j, m) for (i, j), m in edges.items()])
