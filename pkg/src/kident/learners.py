"""The two bounded-error structure learners.

Markov-network learning searches the edge-Hamming ball of radius k around
the graph read off the full-conditioning answers; every graph within
table distance k of the input lies in that ball, because each toggled
edge flips its own full-conditioning query. Bayesian-network learning
enumerates answer-flip sets of size at most k, runs PC on each repaired
table, and keeps the candidate only when its own table reproduces the
repaired one exactly. Brute-force reference solvers sweep every graph or
MEC and exist to cross-check the fast paths.
"""

from __future__ import annotations

from dataclasses import dataclass
from itertools import combinations
from typing import Optional

from .bits import pair_count
from .graphs import Dag, Graph, MecKey, UndirectedGraph, mec_key, undirected_from_edge_bits
from .identify import mec_catalog, undirected_tables
from .pc import PcFailure, pc
from .tables import AnswerTable, _markov_bits, table_of_bayes, table_size

DEFAULT_MAX_WITNESSES = 16

STATUS_UNIQUE = "unique"
STATUS_NONE = "none"
STATUS_NOT_UNIQUE = "not_unique"


@dataclass(frozen=True)
class LearnResult:
    """Solver outcome: the unique answer, no answer, or several."""

    status: str
    graph: Optional[Graph] = None
    witnesses: tuple = ()
    distance: Optional[int] = None


def _classify(hits: list, max_witnesses: int) -> LearnResult:
    # hits: (distance, graph) in encounter order
    if not hits:
        return LearnResult(STATUS_NONE)
    if len(hits) == 1:
        dist, graph = hits[0]
        return LearnResult(STATUS_UNIQUE, graph, (graph,), dist)
    witnesses = tuple(g for _, g in hits[:max_witnesses])
    return LearnResult(
        STATUS_NOT_UNIQUE,
        None,
        witnesses,
        min(d for d, _ in hits),
    )


def initial_graph(t: AnswerTable) -> UndirectedGraph:
    """Edge {u,v} iff u, v stay dependent given all other vertices."""
    n = t.n
    shift = n - 2
    bits = 0
    full_rank = (1 << shift) - 1
    for pidx in range(pair_count(n)):
        if t.bits >> ((pidx << shift) + full_rank) & 1:
            bits |= 1 << pidx
    return undirected_from_edge_bits(n, bits)


def solve_mnsl(
    t: AnswerTable, k: int, max_witnesses: int = DEFAULT_MAX_WITNESSES
) -> LearnResult:
    """Find the undirected graphs within table distance k of t."""
    if k < 0:
        raise ValueError("k must be >= 0")
    n = t.n
    start_bits = initial_graph(t).edge_bits()
    npairs = pair_count(n)
    hits = []
    for size in range(min(k, npairs) + 1):
        for combo in combinations(range(npairs), size):
            toggles = 0
            for i in combo:
                toggles |= 1 << i
            g = undirected_from_edge_bits(n, start_bits ^ toggles)
            dist = (_markov_bits(n, g.adj) ^ t.bits).bit_count()
            if dist <= k:
                hits.append((dist, g))
    return _classify(hits, max_witnesses)


def brute_force_mnsl(
    t: AnswerTable, k: int, max_witnesses: int = DEFAULT_MAX_WITNESSES
) -> LearnResult:
    """Reference sweep over every undirected graph."""
    if k < 0:
        raise ValueError("k must be >= 0")
    hits = []
    for em, bits in enumerate(undirected_tables(t.n)):
        dist = (bits ^ t.bits).bit_count()
        if dist <= k:
            hits.append((dist, undirected_from_edge_bits(t.n, em)))
    return _classify(hits, max_witnesses)


# Answer tables by MEC; Markov-equivalent DAGs share a table, so the key
# is the class, not the DAG. Bounded by the MEC count at the small n
# this package enumerates.
_MEC_TABLE_CACHE: dict[MecKey, int] = {}


def _mec_table_bits(d: Dag) -> tuple[MecKey, int]:
    key = mec_key(d)
    bits = _MEC_TABLE_CACHE.get(key)
    if bits is None:
        bits = table_of_bayes(d).bits
        _MEC_TABLE_CACHE[key] = bits
    return key, bits


def solve_bnsl(
    t: AnswerTable, k: int, max_witnesses: int = DEFAULT_MAX_WITNESSES
) -> LearnResult:
    """Find the MECs within table distance k of t via answer repair.

    For every flip set F with |F| <= k, run PC on the repaired table and
    accept the resulting DAG only if its own table equals the repaired
    one; the accepted MEC then sits at distance exactly |F| from t.
    """
    if k < 0:
        raise ValueError("k must be >= 0")
    size = table_size(t.n)
    found: dict[MecKey, tuple[int, Dag]] = {}
    for fsize in range(min(k, size) + 1):
        for combo in combinations(range(size), fsize):
            flip_mask = 0
            for i in combo:
                flip_mask |= 1 << i
            repaired = AnswerTable(t.n, t.bits ^ flip_mask)
            try:
                cand = pc(repaired)
            except PcFailure:
                continue
            key, bits = _mec_table_bits(cand)
            if bits == repaired.bits and key not in found:
                found[key] = (fsize, cand)
    hits = [(dist, dag) for dist, dag in found.values()]
    return _classify(hits, max_witnesses)


def brute_force_bnsl(
    t: AnswerTable, k: int, max_witnesses: int = DEFAULT_MAX_WITNESSES
) -> LearnResult:
    """Reference sweep over every MEC representative."""
    if k < 0:
        raise ValueError("k must be >= 0")
    cat = mec_catalog(t.n)
    hits = []
    for i, bits in enumerate(cat.tables):
        dist = (bits ^ t.bits).bit_count()
        if dist <= k:
            hits.append((dist, Dag(t.n, cat.reps[i])))
    return _classify(hits, max_witnesses)
