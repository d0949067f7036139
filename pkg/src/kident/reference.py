"""Brute-force reference implementations.

Everything here exists to cross-check the production algorithms with an
independent method: separation by explicit path enumeration, d-separation
by applying the blocking rules to every skeleton path, and connectivity by
exhaustive packing of internally-disjoint path families. All entry points
are gated to small n; they are test oracles, not production code paths.
"""

from __future__ import annotations

from .bits import iter_bits
from .graphs import Dag, UndirectedGraph, skeleton
from .separation import _check_query, descendants

_MAX_N = 8


def _check_small(n: int) -> None:
    if n > _MAX_N:
        raise ValueError(f"brute-force reference limited to n <= {_MAX_N}")


def _simple_paths(adj, u: int, v: int):
    """All simple u-v paths as vertex tuples, DFS order."""
    out = []
    stack = [(u, 1 << u, (u,))]
    while stack:
        cur, seen, path = stack.pop()
        for w in iter_bits(adj[cur]):
            if w == v:
                out.append(path + (v,))
            elif not seen >> w & 1:
                stack.append((w, seen | 1 << w, path + (w,)))
    return out


def separates_by_paths(g: UndirectedGraph, u: int, v: int, s_mask: int) -> bool:
    """Separation decided by checking every simple path individually."""
    _check_small(g.n)
    _check_query(g.n, u, v, s_mask)
    for path in _simple_paths(g.adj, u, v):
        if all(not s_mask >> w & 1 for w in path[1:-1]):
            return False
    return True


def d_separates_by_paths(d: Dag, u: int, v: int, s_mask: int) -> bool:
    """d-separation decided by applying the blocking rules per path."""
    _check_small(d.n)
    _check_query(d.n, u, v, s_mask)
    adj = skeleton(d).adj
    desc = [descendants(d, w) for w in range(d.n)]
    for path in _simple_paths(adj, u, v):
        blocked = False
        for t in range(1, len(path) - 1):
            w = path[t]
            is_collider = (
                d.parents[w] >> path[t - 1] & 1 and d.parents[w] >> path[t + 1] & 1
            )
            if is_collider:
                if (desc[w] | 1 << w) & s_mask == 0:
                    blocked = True
                    break
            elif s_mask >> w & 1:
                blocked = True
                break
        if not blocked:
            return False
    return True


def pair_connectivity_by_packing(g: UndirectedGraph, u: int, v: int) -> int:
    """Largest family of u-v paths with pairwise-disjoint internal vertices.

    Only paths with at least one internal vertex qualify. Exhaustive
    branch-and-bound over the path list.
    """
    _check_small(g.n)
    masks = []
    for path in _simple_paths(g.adj, u, v):
        if len(path) > 2:
            m = 0
            for w in path[1:-1]:
                m |= 1 << w
            masks.append(m)
    masks.sort(key=lambda m: m.bit_count())

    def best(i: int, used: int) -> int:
        top = 0
        for j in range(i, len(masks)):
            if masks[j] & used == 0:
                top = max(top, 1 + best(j + 1, used | masks[j]))
        return top

    return best(0, 0)


def max_pairwise_connectivity_by_packing(g: UndirectedGraph) -> int:
    _check_small(g.n)
    if g.n < 2:
        return 0
    return max(
        pair_connectivity_by_packing(g, u, v)
        for u in range(g.n)
        for v in range(u + 1, g.n)
    )
