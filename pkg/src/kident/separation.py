"""Separation tests for undirected graphs and DAGs.

The DAG test works on the moral graph of the ancestral closure of
{u, v} | S: u and v are d-separated by S exactly when S separates them
there. An independent path-enumeration implementation lives in
``kident.reference`` and is used by the tests to cross-check this one.
"""

from __future__ import annotations

from .bits import iter_bits
from .graphs import Dag, UndirectedGraph, chain_order, skeleton


def _check_query(n: int, u: int, v: int, s_mask: int) -> None:
    if u == v:
        raise ValueError("u and v must differ")
    if not (0 <= u < n and 0 <= v < n):
        raise ValueError(f"vertices ({u},{v}) out of range for n={n}")
    if s_mask < 0 or s_mask >> n:
        raise ValueError("conditioning set has out-of-range bits")
    if s_mask >> u & 1 or s_mask >> v & 1:
        raise ValueError("conditioning set must avoid u and v")


def _reaches(adj, u: int, v: int, avoid: int) -> bool:
    """True if v is reachable from u without entering ``avoid`` vertices."""
    seen = 1 << u
    frontier = seen
    target = 1 << v
    while frontier:
        nxt = 0
        for w in iter_bits(frontier):
            nxt |= adj[w]
        nxt &= ~seen & ~avoid
        if nxt & target:
            return True
        seen |= nxt
        frontier = nxt
    return False


def separates(g: UndirectedGraph, u: int, v: int, s_mask: int) -> bool:
    """True iff deleting S puts u and v in different components."""
    _check_query(g.n, u, v, s_mask)
    return not _reaches(g.adj, u, v, s_mask)


def ancestors(d: Dag, seed_mask: int) -> int:
    """Closure of the seed set under parents, including the seed itself."""
    mask = seed_mask
    while True:
        grown = mask
        for w in iter_bits(mask):
            grown |= d.parents[w]
        if grown == mask:
            return mask
        mask = grown


def descendants(d: Dag, v: int) -> int:
    """All vertices reachable from v by a directed path, excluding v."""
    children = d.children_masks()
    mask = 1 << v
    while True:
        grown = mask
        for w in iter_bits(mask):
            grown |= children[w]
        if grown == mask:
            return mask & ~(1 << v)
        mask = grown


def d_separates(d: Dag, u: int, v: int, s_mask: int) -> bool:
    """True iff S blocks every u-v path under the DAG blocking rules."""
    _check_query(d.n, u, v, s_mask)
    anc = ancestors(d, (1 << u) | (1 << v) | s_mask)
    # moral adjacency restricted to the ancestral set, built inline to
    # avoid constructing intermediate graph objects in hot loops
    madj = [0] * d.n
    for w in iter_bits(anc):
        pm = d.parents[w] & anc
        madj[w] |= pm
        for x in iter_bits(pm):
            madj[x] |= (pm & ~(1 << x)) | (1 << w)
    return not _reaches(madj, u, v, s_mask)


def chain_d_connected(d: Dag, i: int, j: int, z_mask: int) -> bool:
    """Closed-form d-connection test for DAGs whose skeleton is a path.

    On the unique i-j path, Z must contain every collider and no other
    internal vertex; those are exactly the d-connecting conditioning sets.
    """
    _check_query(d.n, i, j, z_mask)
    order = chain_order(skeleton(d))  # raises if not a chain
    pos = {v: t for t, v in enumerate(order)}
    lo, hi = sorted((pos[i], pos[j]))
    internal = 0
    colliders = 0
    for t in range(lo + 1, hi):
        w = order[t]
        internal |= 1 << w
        if d.parents[w] >> order[t - 1] & 1 and d.parents[w] >> order[t + 1] & 1:
            colliders |= 1 << w
    return z_mask & internal == colliders
