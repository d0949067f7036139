"""Graph types and constructors.

Both graph kinds store one bitmask per vertex. ``UndirectedGraph.adj[v]`` is
the neighbor mask of v; ``Dag.parents[v]`` is the mask of u with an arc
u -> v. Instances are frozen and hashable, so they can be shared freely
across threads and used as dict keys.
"""

from __future__ import annotations

import json
from dataclasses import dataclass
from functools import lru_cache
from itertools import combinations
from typing import Iterator, NamedTuple, Union

from .bits import full_mask, iter_bits, iter_pairs, pair_index

MAX_GRAPH_N = 64


@dataclass(frozen=True)
class UndirectedGraph:
    n: int
    adj: tuple[int, ...]

    def __post_init__(self) -> None:
        if not 1 <= self.n <= MAX_GRAPH_N:
            raise ValueError(f"n={self.n} outside 1..{MAX_GRAPH_N}")
        if len(self.adj) != self.n:
            raise ValueError("adjacency length != n")
        for v, mask in enumerate(self.adj):
            if mask < 0 or mask >> self.n:
                raise ValueError(f"adjacency of {v} has out-of-range bits")
            if mask >> v & 1:
                raise ValueError(f"self-loop at {v}")
            for w in iter_bits(mask):
                if not self.adj[w] >> v & 1:
                    raise ValueError(f"edge {{{v},{w}}} not symmetric")

    def has_edge(self, u: int, v: int) -> bool:
        return bool(self.adj[u] >> v & 1)

    def edges(self) -> Iterator[tuple[int, int]]:
        for u, v in iter_pairs(self.n):
            if self.adj[u] >> v & 1:
                yield u, v

    @property
    def edge_count(self) -> int:
        return sum(m.bit_count() for m in self.adj) // 2

    def edge_bits(self) -> int:
        """Edges packed into an int, bit position = pair_index."""
        bits = 0
        for u, v in self.edges():
            bits |= 1 << pair_index(self.n, u, v)
        return bits


@dataclass(frozen=True)
class Dag:
    n: int
    parents: tuple[int, ...]

    def __post_init__(self) -> None:
        if not 1 <= self.n <= MAX_GRAPH_N:
            raise ValueError(f"n={self.n} outside 1..{MAX_GRAPH_N}")
        if len(self.parents) != self.n:
            raise ValueError("parents length != n")
        for v, mask in enumerate(self.parents):
            if mask < 0 or mask >> self.n:
                raise ValueError(f"parents of {v} have out-of-range bits")
            if mask >> v & 1:
                raise ValueError(f"self-loop at {v}")
        if not _is_acyclic(self.n, self.parents):
            raise ValueError("arc set has a directed cycle")

    def has_arc(self, u: int, v: int) -> bool:
        return bool(self.parents[v] >> u & 1)

    def arcs(self) -> Iterator[tuple[int, int]]:
        for v in range(self.n):
            for u in iter_bits(self.parents[v]):
                yield u, v

    @property
    def arc_count(self) -> int:
        return sum(m.bit_count() for m in self.parents)

    def children_masks(self) -> tuple[int, ...]:
        ch = [0] * self.n
        for v in range(self.n):
            for u in iter_bits(self.parents[v]):
                ch[u] |= 1 << v
        return tuple(ch)


Graph = Union[UndirectedGraph, Dag]


class MecKey(NamedTuple):
    """Identifies a Markov equivalence class.

    ``edge_bits`` is the skeleton in pair_index packing; ``vstructs`` holds
    triples (u, c, w) with u < w, arcs u -> c <- w, and u, w non-adjacent.
    """

    n: int
    edge_bits: int
    vstructs: frozenset


def _is_acyclic(n: int, parents: tuple[int, ...]) -> bool:
    # Kahn: repeatedly drop vertices with no remaining parents.
    alive = full_mask(n)
    changed = True
    while alive and changed:
        changed = False
        for v in iter_bits(alive):
            if parents[v] & alive == 0:
                alive &= ~(1 << v)
                changed = True
    return alive == 0


def make_undirected(n: int, edges) -> UndirectedGraph:
    adj = [0] * n
    for u, v in edges:
        if u == v:
            raise ValueError(f"self-loop at {u}")
        if not (0 <= u < n and 0 <= v < n):
            raise ValueError(f"edge ({u},{v}) out of range for n={n}")
        if adj[u] >> v & 1:
            raise ValueError(f"duplicate edge {{{u},{v}}}")
        adj[u] |= 1 << v
        adj[v] |= 1 << u
    return UndirectedGraph(n, tuple(adj))


def undirected_from_edge_bits(n: int, bits: int) -> UndirectedGraph:
    adj = [0] * n
    for i, (u, v) in enumerate(iter_pairs(n)):
        if bits >> i & 1:
            adj[u] |= 1 << v
            adj[v] |= 1 << u
    return UndirectedGraph(n, tuple(adj))


def make_dag(n: int, arcs) -> Dag:
    parents = [0] * n
    for u, v in arcs:
        if u == v:
            raise ValueError(f"self-loop at {u}")
        if not (0 <= u < n and 0 <= v < n):
            raise ValueError(f"arc ({u},{v}) out of range for n={n}")
        if parents[v] >> u & 1:
            raise ValueError(f"duplicate arc ({u},{v})")
        parents[v] |= 1 << u
    return Dag(n, tuple(parents))


def make_chain_undirected(n: int) -> UndirectedGraph:
    """Path graph 0 - 1 - ... - n-1."""
    if n < 1:
        raise ValueError("chain needs n >= 1")
    return make_undirected(n, [(i, i + 1) for i in range(n - 1)])


def make_chain_dag(order, arc_directions) -> Dag:
    """Orient the path over ``order``.

    Direction bit i = 1 puts the arc order[i] -> order[i+1], else reversed.
    Any orientation of a path is acyclic.
    """
    order = tuple(order)
    n = len(order)
    if sorted(order) != list(range(n)):
        raise ValueError("order must be a permutation of 0..n-1")
    dirs = tuple(arc_directions)
    if len(dirs) != n - 1:
        raise ValueError("need n-1 direction bits")
    arcs = []
    for i, d in enumerate(dirs):
        a, b = order[i], order[i + 1]
        arcs.append((a, b) if d else (b, a))
    return make_dag(n, arcs)


def named_graph(kind: str, n: int, r: int | None = None) -> Graph:
    """Construct one of the stock example graphs.

    DAG kinds: ``empty_dag``, ``d1`` (two roots into a fork vertex, then a
    directed path), ``cliques`` (r disjoint complete DAGs, needs r), and
    ``complete_dag``. Undirected kinds: ``hub_g1`` (vertices 0 and 1 adjacent
    to everything except each other) and ``hub_g2`` (hub_g1 plus edge {0,1}).
    """
    if n < 3:
        raise ValueError("named graphs need n >= 3")
    if kind == "empty_dag":
        return make_dag(n, [])
    if kind == "d1":
        arcs = [(0, 2), (1, 2)] + [(i, i + 1) for i in range(2, n - 1)]
        return make_dag(n, arcs)
    if kind == "cliques":
        if r is None or r < 2 or n % r:
            raise ValueError("cliques needs r >= 2 dividing n")
        size = n // r
        arcs = []
        for b in range(r):
            block = range(b * size, (b + 1) * size)
            arcs += [(u, v) for u, v in combinations(block, 2)]
        return make_dag(n, arcs)
    if kind == "complete_dag":
        return make_dag(n, [(u, v) for u, v in combinations(range(n), 2)])
    if kind in ("hub_g1", "hub_g2"):
        edges = [(0, w) for w in range(2, n)] + [(1, w) for w in range(2, n)]
        if kind == "hub_g2":
            edges.append((0, 1))
        return make_undirected(n, edges)
    raise ValueError(f"unknown graph kind {kind!r}")


def skeleton(d: Dag) -> UndirectedGraph:
    adj = [0] * d.n
    for v in range(d.n):
        pm = d.parents[v]
        adj[v] |= pm
        for u in iter_bits(pm):
            adj[u] |= 1 << v
    return UndirectedGraph(d.n, tuple(adj))


def moral_graph(d: Dag) -> UndirectedGraph:
    """Skeleton plus an edge between every two parents of a common child."""
    adj = list(skeleton(d).adj)
    for v in range(d.n):
        pm = d.parents[v]
        for u in iter_bits(pm):
            adj[u] |= pm & ~(1 << u)
    return UndirectedGraph(d.n, tuple(adj))


def v_structures(d: Dag) -> frozenset:
    """Triples (u, c, w), u < w, with arcs into c and u, w non-adjacent."""
    out = set()
    skel = skeleton(d)
    for c in range(d.n):
        for u, w in combinations(list(iter_bits(d.parents[c])), 2):
            if not skel.has_edge(u, w):
                out.add((u, c, w))
    return frozenset(out)


@lru_cache(maxsize=1 << 16)
def mec_key(d: Dag) -> MecKey:
    return MecKey(d.n, skeleton(d).edge_bits(), v_structures(d))


def markov_equivalent(d1: Dag, d2: Dag) -> bool:
    if d1.n != d2.n:
        raise ValueError("vertex counts differ")
    return mec_key(d1) == mec_key(d2)


def chain_order(g: UndirectedGraph) -> tuple[int, ...]:
    """Vertex order along a path graph, lower-id endpoint first.

    Rejects graphs whose skeleton is not a single path over all vertices.
    """
    n = g.n
    if n == 1:
        return (0,)
    degs = [m.bit_count() for m in g.adj]
    ends = [v for v in range(n) if degs[v] == 1]
    if len(ends) != 2 or any(d > 2 for d in degs) or g.edge_count != n - 1:
        raise ValueError("not a chain")
    order = [min(ends)]
    prev = -1
    while len(order) < n:
        cur = order[-1]
        nxt_mask = g.adj[cur] & ~(1 << prev if prev >= 0 else 0)
        if not nxt_mask:
            raise ValueError("not a chain")
        prev, cur = cur, nxt_mask.bit_length() - 1
        order.append(cur)
    if sorted(order) != list(range(n)):
        raise ValueError("not a chain")
    return tuple(order)


def _pair_connectivity(g: UndirectedGraph, u: int, v: int) -> int:
    """Max internally-vertex-disjoint u-v paths with >= 1 internal vertex.

    Unit-capacity max flow on the vertex-split graph; source is u's out
    node and sink is v's in node, and the direct edge {u,v} is dropped so
    only paths with an internal vertex count.
    """
    n = g.n
    # node ids: w = in-node of w, w + n = out-node of w
    nbr: dict[int, set[int]] = {}
    cap: dict[tuple[int, int], int] = {}

    def add(a: int, b: int) -> None:
        nbr.setdefault(a, set()).add(b)
        nbr.setdefault(b, set()).add(a)
        cap[(a, b)] = cap.get((a, b), 0) + 1
        cap.setdefault((b, a), 0)

    for w in range(n):
        if w != u and w != v:
            add(w, w + n)
    for a, b in g.edges():
        if {a, b} == {u, v}:
            continue
        add(a + n, b)
        add(b + n, a)
    src, snk = u + n, v
    flow = 0
    while True:
        # BFS for an augmenting path in the residual graph
        parent = {src: src}
        queue = [src]
        while queue and snk not in parent:
            cur = queue.pop(0)
            for nxt in nbr.get(cur, ()):
                if nxt not in parent and cap.get((cur, nxt), 0) > 0:
                    parent[nxt] = cur
                    queue.append(nxt)
        if snk not in parent:
            return flow
        node = snk
        while node != src:
            prv = parent[node]
            cap[(prv, node)] -= 1
            cap[(node, prv)] += 1
            node = prv
        flow += 1


def max_pairwise_connectivity(g: UndirectedGraph) -> int:
    """Max over vertex pairs of internally-disjoint connecting paths."""
    if g.n < 2:
        return 0
    return max(_pair_connectivity(g, u, v) for u, v in iter_pairs(g.n))


def graph_to_json(g: Graph) -> dict:
    if isinstance(g, UndirectedGraph):
        return {"n": g.n, "edges": [[u, v] for u, v in g.edges()]}
    return {"n": g.n, "arcs": [[u, v] for u, v in g.arcs()]}


def graph_from_json(data: dict) -> Graph:
    """Parse a graph dict; the edges/arcs key picks the kind."""
    n = data.get("n")
    if not isinstance(n, int) or n < 1:
        raise ValueError("graph JSON needs a positive integer 'n'")
    if ("edges" in data) == ("arcs" in data):
        raise ValueError("graph JSON needs exactly one of 'edges'/'arcs'")
    if "edges" in data:
        return make_undirected(n, [tuple(e) for e in data["edges"]])
    return make_dag(n, [tuple(a) for a in data["arcs"]])


def load_graph(path) -> Graph:
    with open(path, "r", encoding="utf-8") as fh:
        return graph_from_json(json.load(fh))


def save_graph(g: Graph, path) -> None:
    with open(path, "w", encoding="utf-8") as fh:
        json.dump(graph_to_json(g), fh, indent=2)
        fh.write("\n")
