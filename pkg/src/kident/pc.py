"""PC algorithm over a complete answer table.

The pipeline is the classic constraint-based one: adjacency search with
growing conditioning sets drawn from current neighborhoods, v-structure
orientation from the recorded separating sets, Meek rules R1-R4 to a
fixpoint, then extension to a DAG by repeatedly consuming an eligible
sink. On tables no graph could have produced, any stage may raise
PcFailure; callers that probe corrupted tables treat that as "this
candidate does not exist" rather than an error.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache
from itertools import combinations

from .bits import full_mask, iter_bits, iter_pairs, pair_index
from .graphs import Dag, UndirectedGraph, v_structures
from .tables import AnswerTable, table_size


class PcFailure(RuntimeError):
    """The table cannot be explained by any DAG along this code path."""


@dataclass(frozen=True)
class Cpdag:
    """Partially directed graph: parent masks for arcs, symmetric masks
    for the still-undirected edges. The two edge sets are disjoint."""

    n: int
    dpa: tuple[int, ...]
    und: tuple[int, ...]

    def __post_init__(self) -> None:
        if len(self.dpa) != self.n or len(self.und) != self.n:
            raise ValueError("mask length != n")
        dch = [0] * self.n
        for v in range(self.n):
            if self.und[v] >> v & 1 or self.dpa[v] >> v & 1:
                raise ValueError(f"self-loop at {v}")
            for u in iter_bits(self.dpa[v]):
                dch[u] |= 1 << v
            for u in iter_bits(self.und[v]):
                if not self.und[u] >> v & 1:
                    raise ValueError("undirected part not symmetric")
        for v in range(self.n):
            if self.und[v] & (self.dpa[v] | dch[v]):
                raise ValueError("edge both directed and undirected")

    def children_masks(self) -> tuple[int, ...]:
        dch = [0] * self.n
        for v in range(self.n):
            for u in iter_bits(self.dpa[v]):
                dch[u] |= 1 << v
        return tuple(dch)


@lru_cache(maxsize=8)
def _rank_weights(n: int):
    """Per pair (u, v): weight[w] = rank bit of w in sets over V \\ {u,v}."""
    out = {}
    for u, v in iter_pairs(n):
        weights = [0] * n
        t = 0
        for w in range(n):
            if w == u or w == v:
                continue
            weights[w] = 1 << t
            t += 1
        out[(u, v)] = weights
    return out


def _skeleton_search(n: int, bits: int):
    """PC adjacency phase on raw table bits.

    Returns (adjacency masks, sepsets) where sepsets maps each removed
    pair (u, v), u < v, to the separating conditioning mask found.
    """
    weights = _rank_weights(n)
    shift = n - 2
    base = {}
    for u, v in iter_pairs(n):
        base[(u, v)] = pair_index(n, u, v) << shift

    adj = [full_mask(n) & ~(1 << v) for v in range(n)]
    sepsets: dict[tuple[int, int], int] = {}

    def dependent(u: int, v: int, s_mask: int) -> bool:
        p = (u, v) if u < v else (v, u)
        w = weights[p]
        rank = 0
        for x in iter_bits(s_mask):
            rank |= w[x]
        return bool(bits >> (base[p] + rank) & 1)

    ell = 0
    while True:
        room = False
        for u, v in iter_pairs(n):
            if not adj[u] >> v & 1:
                continue
            removed = False
            for a, b in ((u, v), (v, u)):
                nbrs = [x for x in iter_bits(adj[a]) if x != b]
                if len(nbrs) < ell:
                    continue
                if len(nbrs) > ell:
                    room = True
                for combo in combinations(nbrs, ell):
                    s_mask = 0
                    for x in combo:
                        s_mask |= 1 << x
                    if not dependent(u, v, s_mask):
                        adj[u] &= ~(1 << v)
                        adj[v] &= ~(1 << u)
                        sepsets[(u, v)] = s_mask
                        removed = True
                        break
                if removed:
                    break
        if not room:
            break
        ell += 1
    return adj, sepsets


def pc_skeleton(t: AnswerTable):
    """Adjacency search; returns the skeleton and the separating sets."""
    adj, sepsets = _skeleton_search(t.n, t.bits)
    return UndirectedGraph(t.n, tuple(adj)), sepsets


def _orient(n: int, adj, sepsets) -> Cpdag:
    und = list(adj)
    dpa = [0] * n
    dch = [0] * n

    def direct(a: int, b: int) -> bool:
        # orient a -> b; report whether anything changed
        if und[a] >> b & 1:
            und[a] &= ~(1 << b)
            und[b] &= ~(1 << a)
            dpa[b] |= 1 << a
            dch[a] |= 1 << b
            return True
        if dpa[b] >> a & 1:
            return False
        raise PcFailure(f"conflicting orientations on edge {{{a},{b}}}")

    # v-structures: u - c - v with u, v non-adjacent and c outside their
    # separating set becomes u -> c <- v
    for u, v in iter_pairs(n):
        if adj[u] >> v & 1:
            continue
        sep = sepsets.get((u, v))
        if sep is None:
            raise PcFailure(f"no separating set recorded for ({u},{v})")
        for c in iter_bits(adj[u] & adj[v]):
            if not sep >> c & 1:
                direct(u, c)
                direct(v, c)

    changed = True
    while changed:
        changed = False
        # R1: a -> b - c with a, c non-adjacent gives b -> c
        for b in range(n):
            for a in iter_bits(dpa[b]):
                for c in iter_bits(und[b]):
                    if not (und[a] | dpa[a] | dch[a]) >> c & 1:
                        changed |= direct(b, c)
        # R2: a -> b -> c with a - c gives a -> c
        for a in range(n):
            for c in iter_bits(und[a]):
                if dch[a] & dpa[c]:
                    changed |= direct(a, c)
        # R3: a - d, a - b, a - c, b -> d, c -> d, b, c non-adjacent
        # gives a -> d
        for a in range(n):
            for d in iter_bits(und[a]):
                into_d = dpa[d] & und[a]
                hit = False
                for b, c in combinations(list(iter_bits(into_d)), 2):
                    if not (und[b] | dpa[b] | dch[b]) >> c & 1:
                        hit = True
                        break
                if hit:
                    changed |= direct(a, d)
        # R4: a - b, b -> c, c -> d, a - d, with c adjacent to a,
        # gives a -> d
        for a in range(n):
            adj_a = und[a] | dpa[a] | dch[a]
            for d in iter_bits(und[a]):
                hit = False
                for c in iter_bits(dpa[d] & adj_a):
                    if dpa[c] & und[a] & ~(1 << d):
                        hit = True
                        break
                if hit:
                    changed |= direct(a, d)
    return Cpdag(n, tuple(dpa), tuple(und))


def pc_orient(skel: UndirectedGraph, sepsets) -> Cpdag:
    """Orient v-structures, then close under Meek rules R1-R4."""
    return _orient(skel.n, list(skel.adj), sepsets)


def cpdag_to_dag(c: Cpdag) -> Dag:
    """Extend to a DAG with the same skeleton and v-structures.

    Repeatedly consumes a vertex with no outgoing arcs whose undirected
    neighbors are adjacent to all of its other neighbors, orienting its
    undirected edges inward. Raises PcFailure if no such vertex exists or
    the extension changes the v-structure set.
    """
    n = c.n
    dch = list(c.children_masks())
    parents = list(c.dpa)
    alive = full_mask(n)

    def adj_mask(x: int) -> int:
        return (c.und[x] | c.dpa[x] | dch[x]) & alive

    while alive:
        found = -1
        for x in iter_bits(alive):
            if dch[x] & alive:
                continue
            nb_und = c.und[x] & alive
            nb_all = adj_mask(x)
            ok = True
            for y in iter_bits(nb_und):
                others = nb_all & ~(1 << y)
                if others & ~(adj_mask(y) | (1 << y)):
                    ok = False
                    break
            if ok:
                found = x
                break
        if found < 0:
            raise PcFailure("partially directed graph is not extendable")
        parents[found] |= c.und[found] & alive
        alive &= ~(1 << found)

    try:
        result = Dag(n, tuple(parents))
    except ValueError as exc:
        raise PcFailure(f"extension is cyclic: {exc}") from exc
    full_dch = c.children_masks()
    implied = set()
    for v in range(n):
        for u, w in combinations(list(iter_bits(c.dpa[v])), 2):
            if not (c.und[u] | c.dpa[u] | full_dch[u]) >> w & 1:
                implied.add((u, v, w))
    if v_structures(result) != frozenset(implied):
        raise PcFailure("extension changed the v-structure set")
    return result


def pc(t: AnswerTable) -> Dag:
    """Full pipeline: skeleton, orientation, extension."""
    skel, sepsets = pc_skeleton(t)
    cpdag = pc_orient(skel, sepsets)
    return cpdag_to_dag(cpdag)
