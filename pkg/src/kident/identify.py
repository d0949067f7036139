"""Enumeration, nearest-neighbor distances, and identifiability bounds.

A graph or MEC is k-identifiable when every other candidate's answer
table is at Hamming distance at least 2k+1, so the largest safe k for a
nearest-neighbor distance d is floor((d-1)/2). Everything here runs at
desk scale: full graph enumeration up to n=6, full MEC sweeps up to n=5.
"""

from __future__ import annotations

from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from fractions import Fraction
from functools import lru_cache
from itertools import permutations
from typing import Iterable, Iterator, NamedTuple

from .bits import iter_pairs, pair_count
from .graphs import (
    Dag,
    Graph,
    MecKey,
    UndirectedGraph,
    make_chain_dag,
    make_chain_undirected,
    make_undirected,
    chain_order,
    max_pairwise_connectivity,
    mec_key,
    skeleton,
    undirected_from_edge_bits,
)
from .tables import AnswerTable, _bayes_bits, _markov_bits, table_of_bayes

MAX_ENUM_N = 6
MAX_MEC_SWEEP_N = 5


@dataclass(frozen=True)
class NearestResult:
    """Distance to the closest non-equivalent candidate plus a witness.

    ``ties`` lists every witness achieving the distance when the caller
    asked for them, else just the first one in enumeration order.
    """

    distance: int
    witness: Graph
    ties: tuple = ()

    def __post_init__(self) -> None:
        if self.distance < 1:
            raise ValueError("nearest distance must be >= 1")


def _check_enum_n(n: int, limit: int = MAX_ENUM_N) -> None:
    if not 2 <= n <= limit:
        raise ValueError(f"enumeration limited to 2 <= n <= {limit}")


def enumerate_undirected(n: int) -> Iterator[UndirectedGraph]:
    """All 2^C(n,2) undirected graphs, in edge-bit order."""
    _check_enum_n(n)
    for bits in range(1 << pair_count(n)):
        yield undirected_from_edge_bits(n, bits)


@lru_cache(maxsize=4)
def _all_dag_parents(n: int) -> tuple:
    """Parent-mask tuples of every labeled DAG on n vertices.

    Depth-first over vertex pairs with three choices each (no arc, u->v,
    v->u), pruning cycles via an incrementally maintained reachability
    closure.
    """
    _check_enum_n(n)
    pairs = list(iter_pairs(n))
    out: list[tuple[int, ...]] = []

    def rec(i: int, parents: list[int], reach: list[int]) -> None:
        # reach[x] = vertices reachable from x by directed paths
        if i == len(pairs):
            out.append(tuple(parents))
            return
        u, v = pairs[i]
        rec(i + 1, parents, reach)
        for a, b in ((u, v), (v, u)):  # arc a -> b
            if reach[b] >> a & 1:
                continue  # b already reaches a: adding a->b closes a cycle
            parents2 = list(parents)
            parents2[b] |= 1 << a
            reach2 = list(reach)
            grow = reach[b] | 1 << b
            for x in range(n):
                if x == a or reach2[x] >> a & 1:
                    reach2[x] |= grow
            rec(i + 1, parents2, reach2)

    rec(0, [0] * n, [0] * n)
    return tuple(out)


def enumerate_dags(n: int) -> Iterator[Dag]:
    """Every labeled DAG on n vertices exactly once, deterministic order."""
    _check_enum_n(n)
    for parents in _all_dag_parents(n):
        yield Dag(n, parents)


class MecCatalog(NamedTuple):
    """One representative DAG and its answer table per MEC."""

    n: int
    keys: tuple
    reps: tuple
    tables: tuple
    index: dict


@lru_cache(maxsize=4)
def _mec_reps(n: int) -> tuple:
    """(MecKey, representative parent masks) per MEC, first-found order."""
    seen: dict[MecKey, tuple[int, ...]] = {}
    for parents in _all_dag_parents(n):
        key = mec_key(Dag(n, parents))
        if key not in seen:
            seen[key] = parents
    return tuple(seen.items())


def enumerate_mecs(n: int) -> Iterator[tuple[MecKey, Dag]]:
    """One (key, representative) pair per Markov equivalence class."""
    _check_enum_n(n)
    for key, parents in _mec_reps(n):
        yield key, Dag(n, parents)


def _parallel_map(fn, items, threads: int) -> list:
    if threads <= 1:
        return [fn(x) for x in items]
    with ThreadPoolExecutor(max_workers=threads) as pool:
        return list(pool.map(fn, items))


_CATALOGS: dict[int, MecCatalog] = {}


def mec_catalog(n: int, threads: int = 1) -> MecCatalog:
    """Build (or reuse) the per-MEC table catalog for n vertices."""
    _check_enum_n(n)
    got = _CATALOGS.get(n)
    if got is None:
        reps = _mec_reps(n)
        tables = _parallel_map(lambda kp: _bayes_bits(n, kp[1]), reps, threads)
        keys = tuple(k for k, _ in reps)
        got = MecCatalog(
            n=n,
            keys=keys,
            reps=tuple(p for _, p in reps),
            tables=tuple(tables),
            index={k: i for i, k in enumerate(keys)},
        )
        _CATALOGS[n] = got
    return got


@lru_cache(maxsize=4)
def undirected_tables(n: int) -> tuple:
    """Answer-table bits of every undirected graph, indexed by edge bits."""
    _check_enum_n(n)
    return tuple(
        _markov_bits(n, undirected_from_edge_bits(n, bits).adj)
        for bits in range(1 << pair_count(n))
    )


def nearest_mn(g: UndirectedGraph, all_ties: bool = False) -> NearestResult:
    """Closest other undirected graph by table distance, full sweep."""
    _check_enum_n(g.n)
    tables = undirected_tables(g.n)
    own_bits = g.edge_bits()
    own = tables[own_bits]
    best = None
    best_em = None
    for em, t in enumerate(tables):
        if em == own_bits:
            continue
        d = (own ^ t).bit_count()
        if best is None or d < best:
            best, best_em = d, em
    ties: tuple = ()
    if all_ties:
        ties = tuple(
            undirected_from_edge_bits(g.n, em)
            for em, t in enumerate(tables)
            if em != own_bits and (own ^ t).bit_count() == best
        )
    return NearestResult(best, undirected_from_edge_bits(g.n, best_em), ties)


def nearest_bn(d: Dag, all_ties: bool = False) -> NearestResult:
    """Closest non-equivalent MEC by table distance, full MEC sweep."""
    _check_enum_n(d.n, MAX_MEC_SWEEP_N)
    cat = mec_catalog(d.n)
    own_key = mec_key(d)
    own = cat.tables[cat.index[own_key]] if own_key in cat.index else None
    if own is None:
        raise ValueError("DAG not found in MEC catalog")
    best = None
    best_i = None
    for i, t in enumerate(cat.tables):
        if cat.keys[i] == own_key:
            continue
        dist = (own ^ t).bit_count()
        if best is None or dist < best:
            best, best_i = dist, i
    ties = ()
    if all_ties:
        ties = tuple(
            Dag(d.n, cat.reps[i])
            for i, t in enumerate(cat.tables)
            if cat.keys[i] != own_key and (own ^ t).bit_count() == best
        )
    return NearestResult(best, Dag(d.n, cat.reps[best_i]), ties)


def max_identifiable_k(nearest_distance: int) -> int:
    """Largest k with 2k+1 <= the nearest-neighbor distance."""
    if nearest_distance < 1:
        raise ValueError("distance must be >= 1")
    return (nearest_distance - 1) // 2


def kappa_identifiability_bound(g: UndirectedGraph) -> int:
    """Guaranteed identifiability level from the connectivity parameter.

    Returns 2^(n - kappa - 3) - 1, or 0 when the exponent is negative
    (no guarantee).
    """
    exponent = g.n - max_pairwise_connectivity(g) - 3
    return (1 << exponent) - 1 if exponent >= 0 else 0


# -- chain closed forms ------------------------------------------------------


def chain_mn_nearest_closed_form(n: int) -> NearestResult:
    """Nearest neighbor of the undirected chain: distance 2^(n-2) - 1.

    The witness adds the edge between leaf 0 and the vertex two steps
    down the path.
    """
    if n < 3:
        raise ValueError("chain closed form needs n >= 3")
    witness = make_undirected(
        n, [(i, i + 1) for i in range(n - 1)] + [(0, 2)]
    )
    return NearestResult((1 << (n - 2)) - 1, witness)


def path_colliders(d: Dag) -> frozenset:
    """Vertices of a chain DAG with both path arcs pointing in."""
    order = chain_order(skeleton(d))
    out = set()
    for t in range(1, d.n - 1):
        w = order[t]
        if d.parents[w] >> order[t - 1] & 1 and d.parents[w] >> order[t + 1] & 1:
            out.add(w)
    return frozenset(out)


def chain_swap_witness(d: Dag) -> Dag:
    """Chain DAG over the order with its first two vertices swapped.

    Arc directions are chosen so the colliders are exactly the original
    ones minus (possibly) the old second vertex; this realizes the
    closest chain-family MEC.
    """
    order = chain_order(skeleton(d))
    target = path_colliders(d) - {order[1]}
    swapped = (order[1], order[0]) + order[2:]
    dirs = [0 if swapped[i] in target else 1 for i in range(d.n - 1)]
    return make_chain_dag(swapped, dirs)


def chain_bn_nearest_in_family(d: Dag) -> NearestResult:
    """Closest chain-skeleton MEC to a chain DAG: distance 2^(n-1) - 2."""
    if d.n < 3:
        raise ValueError("chain closed form needs n >= 3")
    chain_order(skeleton(d))  # raises on non-chain input
    return NearestResult((1 << (d.n - 1)) - 2, chain_swap_witness(d))


def all_chain_dags(n: int) -> Iterator[Dag]:
    """Every DAG whose skeleton is a path over all n vertices, once each."""
    _check_enum_n(n)
    seen = set()
    for order in permutations(range(n)):
        for dm in range(1 << (n - 1)):
            d = make_chain_dag(order, [dm >> i & 1 for i in range(n - 1)])
            if d.parents not in seen:
                seen.add(d.parents)
                yield d


def closest_in_family(d: Dag, family: Iterable[Dag]) -> NearestResult:
    """Minimum table distance to a family member not equivalent to d."""
    own_key = mec_key(d)
    own = table_of_bayes(d).bits
    best = None
    witness = None
    for cand in family:
        if mec_key(cand) == own_key:
            continue
        dist = (own ^ _bayes_bits(cand.n, cand.parents)).bit_count()
        if best is None or dist < best:
            best, witness = dist, cand
    if best is None:
        raise ValueError("family contains no graph outside d's MEC")
    return NearestResult(best, witness)


# -- survey statistics -------------------------------------------------------


@dataclass(frozen=True)
class StatsRow:
    edges: int
    mec_count: int
    dmin: int
    mean: Fraction
    dmax: int

    @property
    def mean_rounded(self) -> float:
        return round(float(self.mean), 1)


def _nearest_all(tables, threads: int = 1) -> list[int]:
    """Nearest-neighbor distance for every table in one pairwise sweep."""
    count = len(tables)
    big = 1 << 62

    def sweep(rows) -> list[int]:
        best = [big] * count
        for i in rows:
            ti = tables[i]
            bi = best[i]
            for j in range(i + 1, count):
                dist = (ti ^ tables[j]).bit_count()
                if dist < bi:
                    bi = dist
                if dist < best[j]:
                    best[j] = dist
            best[i] = bi
        return best

    if threads <= 1:
        return sweep(range(count))
    chunks = [range(start, count, threads) for start in range(threads)]
    results = _parallel_map(sweep, chunks, threads)
    return [min(r[i] for r in results) for i in range(count)]


def mec_distance_stats(n: int, threads: int = 1) -> list[StatsRow]:
    """Nearest-distance min/mean/max of all MECs, grouped by edge count."""
    _check_enum_n(n, MAX_MEC_SWEEP_N)
    cat = mec_catalog(n, threads)
    nearest = _nearest_all(cat.tables, threads)
    groups: dict[int, list[int]] = {}
    for key, dist in zip(cat.keys, nearest):
        groups.setdefault(key.edge_bits.bit_count(), []).append(dist)
    rows = []
    for edges in sorted(groups):
        ds = groups[edges]
        rows.append(
            StatsRow(
                edges=edges,
                mec_count=len(ds),
                dmin=min(ds),
                mean=Fraction(sum(ds), len(ds)),
                dmax=max(ds),
            )
        )
    return rows


# -- single-edge-neighbor conjecture -----------------------------------------


@dataclass(frozen=True)
class SingleEdgeReport:
    """Does a nearest witness always sit one edge operation away?"""

    mode: str
    n: int
    total: int
    satisfied: int
    counterexamples: tuple = field(default=())

    @property
    def holds(self) -> bool:
        return not self.counterexamples


def _dag_edge_ops(n: int, parents) -> Iterator[tuple[int, ...]]:
    """All DAGs one arc addition, removal, or reversal away."""
    for u, v in iter_pairs(n):
        has_uv = parents[v] >> u & 1
        has_vu = parents[u] >> v & 1
        if has_uv or has_vu:
            a, b = (u, v) if has_uv else (v, u)
            removed = list(parents)
            removed[b] &= ~(1 << a)
            yield tuple(removed)
            reversed_ = list(removed)
            reversed_[a] |= 1 << b
            try:
                Dag(n, tuple(reversed_))
            except ValueError:
                pass
            else:
                yield tuple(reversed_)
        else:
            for a, b in ((u, v), (v, u)):
                added = list(parents)
                added[b] |= 1 << a
                try:
                    Dag(n, tuple(added))
                except ValueError:
                    continue
                yield tuple(added)


def single_edge_neighbor_report(n: int, mode: str) -> SingleEdgeReport:
    """Check every graph (mn) or MEC (bn) for a one-edge nearest witness."""
    if mode == "mn":
        _check_enum_n(n)
        tables = undirected_tables(n)
        counter = []
        satisfied = 0
        for em, own in enumerate(tables):
            dmin = min(
                (own ^ t).bit_count() for em2, t in enumerate(tables) if em2 != em
            )
            toggle_min = min(
                (own ^ tables[em ^ (1 << i)]).bit_count()
                for i in range(pair_count(n))
            )
            if toggle_min == dmin:
                satisfied += 1
            else:
                counter.append((undirected_from_edge_bits(n, em), dmin, toggle_min))
        return SingleEdgeReport("mn", n, len(tables), satisfied, tuple(counter))
    if mode == "bn":
        _check_enum_n(n, MAX_MEC_SWEEP_N)
        cat = mec_catalog(n)
        nearest = _nearest_all(cat.tables)
        members: dict[MecKey, list] = {}
        for parents in _all_dag_parents(n):
            members.setdefault(mec_key(Dag(n, parents)), []).append(parents)
        counter = []
        satisfied = 0
        for i, own in enumerate(cat.tables):
            dmin = nearest[i]
            found = False
            best_seen = None
            # a single-edge witness may exist for any member of the MEC,
            # not just the chosen representative
            for parents in members[cat.keys[i]]:
                for cand in _dag_edge_ops(n, parents):
                    j = cat.index[mec_key(Dag(n, cand))]
                    if j == i:
                        continue
                    dist = (own ^ cat.tables[j]).bit_count()
                    if best_seen is None or dist < best_seen:
                        best_seen = dist
                    if dist == dmin:
                        found = True
                        break
                if found:
                    break
            if found:
                satisfied += 1
            else:
                counter.append((Dag(n, cat.reps[i]), dmin, best_seen))
        return SingleEdgeReport("bn", n, len(cat.tables), satisfied, tuple(counter))
    raise ValueError(f"mode must be 'mn' or 'bn', got {mode!r}")
