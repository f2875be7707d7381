"""Simplicial graphs, the domination order and the graph properties it decides.

Vertices carry a fixed total order (the order they were given in).  Internally
adjacency is a tuple of integer bitmasks, one per vertex, so the exhaustive
small-graph checks stay cheap.
"""
from __future__ import annotations

import heapq
from collections import deque
from dataclasses import dataclass
from typing import Hashable, Iterable, Iterator, Sequence

__all__ = [
    "Graph",
    "GraphError",
    "PropertyViolation",
    "DominanceData",
    "PropertyReport",
    "Decomposition",
    "neighborhoods",
    "compute_domination",
    "check_properties",
    "decompose",
    "components_minus_star",
    "find_indicability_witness",
    "check_tree_criterion",
    "poison_witness",
    "discrete",
    "complete",
    "path",
    "disjoint_union",
    "join",
    "all_graphs",
    "prufer_trees",
]


class GraphError(ValueError):
    """Malformed graph or unknown vertex."""


class PropertyViolation(ValueError):
    """Raised when an operation needs a graph property that does not hold."""


def _bits(mask: int) -> Iterator[int]:
    while mask:
        low = mask & -mask
        yield low.bit_length() - 1
        mask ^= low


class Graph:
    """Finite simplicial graph with an ordered vertex list.

    Parameters
    ----------
    vertices : sequence of hashable
        Vertex identifiers; their order is the basis order used everywhere.
    edges : iterable of pairs
        Undirected edges.  Self-loops and unknown endpoints are rejected.
    """

    __slots__ = ("vertices", "index", "adj", "_hash", "_nf")

    def __init__(self, vertices: Sequence[Hashable], edges: Iterable[tuple] = ()):
        vertices = tuple(vertices)
        index = {}
        for i, v in enumerate(vertices):
            if v in index:
                raise GraphError(f"duplicate vertex {v!r}")
            index[v] = i
        adj = [0] * len(vertices)
        for e in edges:
            u, v = e
            if u not in index or v not in index:
                raise GraphError(f"unknown endpoint in edge {u!r} {v!r}")
            if u == v:
                raise GraphError(f"self-loop at {u!r}")
            i, j = index[u], index[v]
            adj[i] |= 1 << j
            adj[j] |= 1 << i
        self.vertices = vertices
        self.index = index
        self.adj = tuple(adj)
        self._hash = None
        self._nf = None

    @classmethod
    def from_masks(cls, masks: Sequence[int], vertices: Sequence[Hashable] | None = None) -> "Graph":
        """Build directly from adjacency bitmasks (no validation beyond symmetry)."""
        g = cls.__new__(cls)
        n = len(masks)
        g.vertices = tuple(range(n)) if vertices is None else tuple(vertices)
        g.index = {v: i for i, v in enumerate(g.vertices)}
        g.adj = tuple(masks)
        g._hash = None
        g._nf = None
        return g

    def __len__(self) -> int:
        return len(self.vertices)

    @property
    def n(self) -> int:
        return len(self.vertices)

    @property
    def full_mask(self) -> int:
        return (1 << len(self.vertices)) - 1

    def edges(self) -> list[tuple]:
        out = []
        for i, m in enumerate(self.adj):
            for j in _bits(m >> (i + 1) << (i + 1)):
                out.append((self.vertices[i], self.vertices[j]))
        return out

    def idx(self, v) -> int:
        try:
            return self.index[v]
        except KeyError:
            raise GraphError(f"unknown vertex {v!r}") from None

    def adjacent(self, u, v) -> bool:
        return bool(self.adj[self.idx(u)] >> self.idx(v) & 1)

    def names(self, mask: int) -> frozenset:
        return frozenset(self.vertices[i] for i in _bits(mask))

    def mask(self, vs: Iterable) -> int:
        m = 0
        for v in vs:
            m |= 1 << self.idx(v)
        return m

    def degree(self, v) -> int:
        return bin(self.adj[self.idx(v)]).count("1")

    def __eq__(self, other):
        if not isinstance(other, Graph):
            return NotImplemented
        return self.vertices == other.vertices and self.adj == other.adj

    def __hash__(self):
        if self._hash is None:
            self._hash = hash((self.vertices, self.adj))
        return self._hash

    def __repr__(self):
        return f"Graph(vertices={list(self.vertices)!r}, edges={self.edges()!r})"


# ---------------------------------------------------------------------------
# constructors for the usual fixtures

def discrete(n: int, prefix: str = "v") -> Graph:
    return Graph([f"{prefix}{i}" for i in range(1, n + 1)])


def complete(n: int, prefix: str = "v") -> Graph:
    vs = [f"{prefix}{i}" for i in range(1, n + 1)]
    return Graph(vs, [(a, b) for k, a in enumerate(vs) for b in vs[k + 1:]])


def path(n: int, prefix: str = "v") -> Graph:
    vs = [f"{prefix}{i}" for i in range(1, n + 1)]
    return Graph(vs, list(zip(vs, vs[1:])))


def disjoint_union(*graphs: Graph) -> Graph:
    vs, es = [], []
    for g in graphs:
        vs.extend(g.vertices)
        es.extend(g.edges())
    return Graph(vs, es)


def join(*graphs: Graph) -> Graph:
    """Disjoint union plus every edge between different pieces."""
    vs, es = [], []
    for k, g in enumerate(graphs):
        es.extend(g.edges())
        for h in graphs[:k]:
            es.extend((a, b) for a in h.vertices for b in g.vertices)
        vs.extend(g.vertices)
    return Graph(vs, es)


def all_graphs(n: int) -> Iterator[Graph]:
    """Every labeled graph on vertices 0..n-1 (2^(n choose 2) of them)."""
    pairs = [(i, j) for i in range(n) for j in range(i + 1, n)]
    for code in range(1 << len(pairs)):
        adj = [0] * n
        for k, (i, j) in enumerate(pairs):
            if code >> k & 1:
                adj[i] |= 1 << j
                adj[j] |= 1 << i
        yield Graph.from_masks(adj)


def prufer_trees(n: int) -> Iterator[Graph]:
    """Every labeled tree on vertices 0..n-1, via Prüfer sequences."""
    from itertools import product

    if n == 1:
        yield Graph.from_masks([0])
        return
    if n == 2:
        yield Graph.from_masks([2, 1])
        return
    for seq in product(range(n), repeat=n - 2):
        degree = [1] * n
        for x in seq:
            degree[x] += 1
        adj = [0] * n
        leaves = [i for i in range(n) if degree[i] == 1]
        heapq.heapify(leaves)
        for x in seq:
            leaf = heapq.heappop(leaves)
            adj[leaf] |= 1 << x
            adj[x] |= 1 << leaf
            degree[x] -= 1
            if degree[x] == 1:
                heapq.heappush(leaves, x)
        u, v = heapq.heappop(leaves), heapq.heappop(leaves)
        adj[u] |= 1 << v
        adj[v] |= 1 << u
        yield Graph.from_masks(adj)


# ---------------------------------------------------------------------------
# links, stars, domination

def neighborhoods(g: Graph, v) -> tuple[frozenset, frozenset]:
    """Return ``(link, star)`` of ``v``."""
    i = g.idx(v)
    return g.names(g.adj[i]), g.names(g.adj[i] | 1 << i)


def leq_masks(adj: Sequence[int]) -> list[int]:
    """``out[i]`` has bit ``j`` set iff ``lk(i)`` is contained in ``st(j)``."""
    n = len(adj)
    stars = [a | 1 << j for j, a in enumerate(adj)]
    out = []
    for a in adj:
        m = 0
        for j in range(n):
            if not a & ~stars[j]:
                m |= 1 << j
        out.append(m)
    return out


@dataclass(frozen=True)
class DominanceData:
    """The domination preorder together with its classes and class digraph.

    ``classes`` is already in ascending order: an arrow ``j -> i`` (class
    positions) implies ``j <= i``.  ``arrows`` contains every self-loop.
    """

    graph: Graph
    leq_mask: tuple[int, ...]
    classes: tuple[frozenset, ...]
    class_masks: tuple[int, ...]
    class_of: tuple[int, ...]
    arrows: frozenset

    @property
    def class_order(self) -> tuple[frozenset, ...]:
        return self.classes

    def leq(self, v, w) -> bool:
        g = self.graph
        return bool(self.leq_mask[g.idx(v)] >> g.idx(w) & 1)

    def equivalent(self, v, w) -> bool:
        return self.leq(v, w) and self.leq(w, v)

    def class_sizes(self) -> tuple[int, ...]:
        return tuple(len(c) for c in self.classes)


def compute_domination(g: Graph) -> DominanceData:
    n = g.n
    leq = leq_masks(g.adj)
    # classes: i ~ j iff both directions hold
    geq = [0] * n
    for i in range(n):
        for j in _bits(leq[i]):
            geq[j] |= 1 << i
    class_id = [-1] * n
    raw = []
    for i in range(n):
        if class_id[i] < 0:
            members = leq[i] & geq[i]
            for j in _bits(members):
                class_id[j] = len(raw)
            raw.append(members)
    k = len(raw)
    reps = [(m & -m).bit_length() - 1 for m in raw]
    succ = [set() for _ in range(k)]
    for a in range(k):
        for b in range(k):
            if a != b and leq[reps[a]] >> reps[b] & 1:
                succ[a].add(b)
    indeg = [0] * k
    for a in range(k):
        for b in succ[a]:
            indeg[b] += 1
    # raw classes are numbered by least member, so the heap breaks ties that way
    heap = [a for a in range(k) if indeg[a] == 0]
    heapq.heapify(heap)
    order = []
    while heap:
        a = heapq.heappop(heap)
        order.append(a)
        for b in succ[a]:
            indeg[b] -= 1
            if indeg[b] == 0:
                heapq.heappush(heap, b)
    pos = {a: p for p, a in enumerate(order)}
    arrows = {(p, p) for p in range(k)}
    for a in range(k):
        for b in succ[a]:
            arrows.add((pos[a], pos[b]))
    class_masks = tuple(raw[a] for a in order)
    return DominanceData(
        graph=g,
        leq_mask=tuple(leq),
        classes=tuple(g.names(m) for m in class_masks),
        class_masks=class_masks,
        class_of=tuple(pos[class_id[i]] for i in range(n)),
        arrows=frozenset(arrows),
    )


# ---------------------------------------------------------------------------
# properties

@dataclass(frozen=True)
class PropertyReport:
    b1: bool
    b2: bool
    nl: bool
    nl_witness: tuple | None = None
    b2_failure_witness: tuple | None = None

    @property
    def b(self) -> bool:
        return self.b1 and self.b2


def _b1(adj: Sequence[int], leq: Sequence[int]) -> bool:
    n = len(adj)
    for i in range(n):
        non_adj = ~adj[i] & ((1 << n) - 1) & ~(1 << i)
        # every non-neighbour j must satisfy i <= j and j <= i
        if non_adj & ~leq[i]:
            return False
        for j in _bits(non_adj):
            if not leq[j] >> i & 1:
                return False
    return True


def _b2_failure(adj: Sequence[int], leq: Sequence[int]) -> tuple[int, int] | None:
    n = len(adj)
    geq = [0] * n
    for i in range(n):
        for j in _bits(leq[i]):
            geq[j] |= 1 << i
    for i in range(n):
        for j in _bits(leq[i] & ~(1 << i)):
            if not leq[i] & geq[j] & ~(1 << i | 1 << j):
                return i, j
    return None


def _poison_indices(adj: Sequence[int]) -> tuple[int, int, int] | None:
    """First ``(v1, v2, v3)`` with pairwise non-adjacent vertices and v3 <= v1, v2.

    For non-adjacent ``v1, v3`` the condition ``v3 <= v1`` is ``lk(v3) ⊆ lk(v1)``,
    so the candidates for ``v1`` are the common neighbours of ``lk(v3)`` outside
    ``st(v3)``.  This keeps the search near-linear on sparse graphs.
    """
    n = len(adj)
    full = (1 << n) - 1
    best = None
    for k in range(n):
        cand = full
        for x in _bits(adj[k]):
            cand &= adj[x]
        cand &= ~(adj[k] | 1 << k)
        if cand & (cand - 1) == 0:
            continue
        for a in _bits(cand):
            rest = cand & ~adj[a] & ~((1 << (a + 1)) - 1)
            if rest:
                hit = (a, (rest & -rest).bit_length() - 1, k)
                if best is None or hit < best:
                    best = hit
                break
    return best


def poison_witness(g: Graph) -> tuple | None:
    """Triple ``(v1, v2, v3)`` certifying property (NL), or ``None``."""
    hit = _poison_indices(g.adj)
    if hit is None:
        return None
    return tuple(g.vertices[i] for i in hit)


def check_properties(g: Graph) -> PropertyReport:
    leq = leq_masks(g.adj)
    fail = _b2_failure(g.adj, leq)
    nl = poison_witness(g)
    return PropertyReport(
        b1=_b1(g.adj, leq),
        b2=fail is None,
        nl=nl is not None,
        nl_witness=nl,
        b2_failure_witness=None if fail is None else (g.vertices[fail[0]], g.vertices[fail[1]]),
    )


@dataclass(frozen=True)
class Decomposition:
    """``A_Γ ≅ F_{n_1} × … × F_{n_k} × Z^a``."""

    free_ranks: tuple[int, ...]
    abelian_rank: int


def decompose(g: Graph) -> Decomposition:
    rep = check_properties(g)
    if not rep.b1:
        raise PropertyViolation("graph fails (B1): some non-adjacent pair is not equivalent")
    if not rep.b2:
        v, w = rep.b2_failure_witness
        raise PropertyViolation(f"graph fails (B2): no intermediate vertex for {v!r} <= {w!r}")
    dom = compute_domination(g)
    free, abelian = [], 0
    for m in dom.class_masks:
        size = bin(m).count("1")
        edgeless = all(not (g.adj[i] & m) for i in _bits(m))
        if size > 1 and edgeless:
            free.append(size)
        else:
            abelian += size
    return Decomposition(free_ranks=tuple(sorted(free)), abelian_rank=abelian)


# ---------------------------------------------------------------------------
# components, indicability, trees

def _components(adj: Sequence[int], mask: int) -> list[int]:
    comps = []
    while mask:
        start = mask & -mask
        comp = frontier = start
        while frontier:
            nxt = 0
            for i in _bits(frontier):
                nxt |= adj[i]
            frontier = nxt & mask & ~comp
            comp |= frontier
        comps.append(comp)
        mask &= ~comp
    return comps


def component_masks(g: Graph, i: int) -> list[int]:
    """Components of Γ − st(v_i) as bitmasks, ordered by least vertex."""
    return _components(g.adj, g.full_mask & ~(g.adj[i] | 1 << i))


def components_minus_star(g: Graph, v) -> list[frozenset]:
    return [g.names(m) for m in component_masks(g, g.idx(v))]


def find_indicability_witness(g: Graph) -> tuple | None:
    """First ``(w, Y, Z)`` with ``w`` minimal and Y ≠ Z components of Γ − st(w).

    Minimal means no vertex other than ``w`` itself is dominated by ``w``'s
    order, i.e. no ``v != w`` with ``v <= w``.
    """
    leq = leq_masks(g.adj)
    n = g.n
    for i in range(n):
        if any(leq[j] >> i & 1 for j in range(n) if j != i):
            continue
        comps = component_masks(g, i)
        if len(comps) >= 2:
            return g.vertices[i], g.names(comps[0]), g.names(comps[1])
    return None


def _is_tree(g: Graph) -> bool:
    n = g.n
    if n == 0:
        return False
    edges = sum(bin(a).count("1") for a in g.adj) // 2
    return edges == n - 1 and len(_components(g.adj, g.full_mask)) == 1


def check_tree_criterion(g: Graph, leaf_aware: bool = False):
    """A vertex at distance at least 3 from every leaf of the tree ``g``.

    The single-vertex tree has no leaves; it returns ``None`` there because
    Γ − st(v) is empty.

    With ``leaf_aware=True`` a leaf ``w`` also qualifies when no *other* leaf
    lies within distance 2 and its neighbour has degree at least 3.  Such a
    leaf is minimal with Γ − st(w) disconnected, but sits at distance 0 from
    itself, so the plain distance rule misses it (first on six vertices).
    """
    if not _is_tree(g):
        raise GraphError("graph is not a connected tree")
    n = g.n
    leaves = [i for i in range(n) if bin(g.adj[i]).count("1") == 1]
    if not leaves:
        return None
    # multi-source BFS from all leaves
    dist = [-1] * n
    queue = deque(leaves)
    for i in leaves:
        dist[i] = 0
    while queue:
        i = queue.popleft()
        for j in _bits(g.adj[i]):
            if dist[j] < 0:
                dist[j] = dist[i] + 1
                queue.append(j)
    for i in range(n):
        if dist[i] >= 3:
            return g.vertices[i]
    if leaf_aware:
        for i in leaves:
            x = g.adj[i].bit_length() - 1
            if bin(g.adj[x]).count("1") < 3:
                continue
            # other leaves within distance 2 of i are exactly leaves adjacent to x
            if not any(j != i for j in leaves if g.adj[x] >> j & 1):
                return g.vertices[i]
    return None
