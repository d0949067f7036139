"""Complete answer tables and distances between them.

An answer table records the outcome of every conditional-independence
query a graph can be asked: one bit per (u, v, S) with u < v and
S a subset of the other n-2 vertices, so C(n,2) * 2^(n-2) bits total.
Bit value 1 means dependent (connected / d-connected), 0 independent.

Canonical index order: pairs (u, v) lexicographic, then conditioning sets
by rank, where rank bit t stands for the t-th smallest vertex outside
{u, v}. Tables are stored as arbitrary-precision ints in that order, so
the distance between two tables is one XOR and a popcount.
"""

from __future__ import annotations

import csv
from dataclasses import dataclass
from functools import lru_cache
from typing import Iterable, NamedTuple

from .bits import (
    full_mask,
    iter_bits,
    iter_pairs,
    pair_count,
    pair_from_index,
    pair_index,
)
from .graphs import Dag, UndirectedGraph
from .separation import _check_query, d_separates, separates

MAX_TABLE_N = 24
_LAYOUT_CACHE_MAX_N = 12


class QueryKey(NamedTuple):
    """One CI query: pair (u, v) with u < v, conditioning set as a mask."""

    u: int
    v: int
    cond: int


def table_size(n: int) -> int:
    if n < 2:
        raise ValueError("tables need n >= 2")
    return pair_count(n) << (n - 2)


def _check_table_n(n: int) -> None:
    if n > MAX_TABLE_N:
        raise ValueError(f"table operations limited to n <= {MAX_TABLE_N}")
    table_size(n)


def cond_rank(n: int, u: int, v: int, s_mask: int) -> int:
    """Compress S to a rank over the n-2 vertices outside {u, v}."""
    rank = 0
    t = 0
    for w in range(n):
        if w == u or w == v:
            continue
        if s_mask >> w & 1:
            rank |= 1 << t
        t += 1
    return rank


def cond_unrank(n: int, u: int, v: int, rank: int) -> int:
    """Inverse of cond_rank."""
    s_mask = 0
    t = 0
    for w in range(n):
        if w == u or w == v:
            continue
        if rank >> t & 1:
            s_mask |= 1 << w
        t += 1
    return s_mask


def query_index(n: int, key: QueryKey) -> int:
    u, v, cond = key
    _check_query(n, u, v, cond)
    if u > v:
        u, v = v, u
    return (pair_index(n, u, v) << (n - 2)) + cond_rank(n, u, v, cond)


def query_key(n: int, index: int) -> QueryKey:
    if not 0 <= index < table_size(n):
        raise ValueError(f"query index {index} out of range for n={n}")
    pidx, rank = divmod(index, 1 << (n - 2))
    u, v = pair_from_index(n, pidx)
    return QueryKey(u, v, cond_unrank(n, u, v, rank))


@dataclass(frozen=True)
class AnswerTable:
    n: int
    bits: int

    def __post_init__(self) -> None:
        _check_table_n(self.n)
        if self.bits < 0 or self.bits >> table_size(self.n):
            raise ValueError("table bits out of range")

    @property
    def size(self) -> int:
        return table_size(self.n)

    def get(self, index: int) -> int:
        if not 0 <= index < self.size:
            raise ValueError(f"index {index} out of range")
        return self.bits >> index & 1

    def get_key(self, key: QueryKey) -> int:
        return self.bits >> query_index(self.n, key) & 1


@lru_cache(maxsize=8)
def _s_major_layout(n: int):
    """For each full-vertex mask S, the (u, v, index) of queries it serves."""
    layout = [[] for _ in range(1 << n)]
    shift = n - 2
    for pidx, (u, v) in enumerate(iter_pairs(n)):
        base = pidx << shift
        for rank in range(1 << shift):
            s_mask = cond_unrank(n, u, v, rank)
            layout[s_mask].append((u, v, base + rank))
    return layout


@lru_cache(maxsize=8)
def _pair_cond_masks(n: int):
    """Per pair, the conditioning masks in rank order."""
    out = []
    for u, v in iter_pairs(n):
        out.append((u, v, [cond_unrank(n, u, v, r) for r in range(1 << (n - 2))]))
    return out


@lru_cache(maxsize=1 << 16)
def _markov_bits(n: int, adj) -> int:
    """Answer-table bits for an undirected graph given as adjacency masks."""
    if n == 2:
        return adj[0] >> 1 & 1
    bits = 0
    if n <= _LAYOUT_CACHE_MAX_N:
        layout = _s_major_layout(n)
        universe = full_mask(n)
        where = [0] * n
        for s_mask in range(1 << n):
            entries = layout[s_mask]
            if not entries:
                continue
            # label components of the graph minus S once, serve all pairs
            alive = universe & ~s_mask
            rest = alive
            label = 0
            while rest:
                label += 1
                comp = rest & -rest
                frontier = comp
                while frontier:
                    nxt = 0
                    for w in iter_bits(frontier):
                        nxt |= adj[w]
                    nxt &= alive & ~comp
                    comp |= nxt
                    frontier = nxt
                for w in iter_bits(comp):
                    where[w] = label
                rest &= ~comp
            for u, v, idx in entries:
                if where[u] == where[v]:
                    bits |= 1 << idx
        return bits
    g = UndirectedGraph(n, tuple(adj))
    for u, v, masks in _pair_cond_masks(n):
        base = pair_index(n, u, v) << (n - 2)
        for rank, s_mask in enumerate(masks):
            if not separates(g, u, v, s_mask):
                bits |= 1 << (base + rank)
    return bits


@lru_cache(maxsize=1 << 16)
def _bayes_bits(n: int, parents) -> int:
    """Answer-table bits for a DAG given as parent masks."""
    d = Dag(n, tuple(parents))
    if n == 2:
        return 1 if (parents[0] | parents[1]) else 0
    bits = 0
    for u, v, masks in _pair_cond_masks(n):
        base = pair_index(n, u, v) << (n - 2)
        for rank, s_mask in enumerate(masks):
            if not d_separates(d, u, v, s_mask):
                bits |= 1 << (base + rank)
    return bits


def table_of_markov(g: UndirectedGraph) -> AnswerTable:
    """Bit 1 at (u, v, S) iff S fails to separate u and v in g."""
    _check_table_n(g.n)
    return AnswerTable(g.n, _markov_bits(g.n, g.adj))


def table_of_bayes(d: Dag) -> AnswerTable:
    """Bit 1 at (u, v, S) iff u and v are d-connected given S in d."""
    _check_table_n(d.n)
    return AnswerTable(d.n, _bayes_bits(d.n, d.parents))


def table_distance(t1: AnswerTable, t2: AnswerTable) -> int:
    if t1.n != t2.n:
        raise ValueError("tables have different n")
    return (t1.bits ^ t2.bits).bit_count()


def apply_flips(t: AnswerTable, indices: Iterable[int]) -> AnswerTable:
    """Copy of t with exactly the given distinct bits toggled."""
    idxs = list(indices)
    if len(set(idxs)) != len(idxs):
        raise ValueError("flip indices must be distinct")
    mask = 0
    for i in idxs:
        if not 0 <= i < t.size:
            raise ValueError(f"flip index {i} out of range")
        mask |= 1 << i
    return AnswerTable(t.n, t.bits ^ mask)


# -- serialization -----------------------------------------------------------

CSV_HEADER = ["u", "v", "cond_mask", "answer"]


def table_to_csv(t: AnswerTable, path) -> None:
    """Write the table in canonical order; cond_mask is the compressed rank."""
    with open(path, "w", encoding="utf-8", newline="") as fh:
        writer = csv.writer(fh)
        writer.writerow(CSV_HEADER)
        shift = t.n - 2
        for pidx, (u, v) in enumerate(iter_pairs(t.n)):
            base = pidx << shift
            for rank in range(1 << shift):
                writer.writerow([u, v, rank, t.bits >> (base + rank) & 1])


def table_from_csv(path) -> AnswerTable:
    """Read a table CSV; rows may be in any order but must be complete."""
    with open(path, "r", encoding="utf-8", newline="") as fh:
        reader = csv.reader(fh)
        header = next(reader, None)
        if header != CSV_HEADER:
            raise ValueError(f"bad table CSV header: {header}")
        rows = [(int(u), int(v), int(r), int(a)) for u, v, r, a in reader]
    if not rows:
        raise ValueError("empty table CSV")
    n = max(max(u, v) for u, v, _, _ in rows) + 1
    _check_table_n(n)
    shift = n - 2
    seen = set()
    bits = 0
    for u, v, rank, answer in rows:
        if not 0 <= u < v < n or not 0 <= rank < 1 << shift:
            raise ValueError(f"bad row ({u},{v},{rank})")
        if answer not in (0, 1):
            raise ValueError(f"answer must be 0/1, got {answer}")
        idx = (pair_index(n, u, v) << shift) + rank
        if idx in seen:
            raise ValueError(f"duplicate row ({u},{v},{rank})")
        seen.add(idx)
        bits |= answer << idx
    if len(seen) != table_size(n):
        raise ValueError(f"expected {table_size(n)} rows, got {len(seen)}")
    return AnswerTable(n, bits)


def table_to_binary(t: AnswerTable) -> bytes:
    """8-byte little-endian bit length, then packed bits, LSB first."""
    payload = t.bits.to_bytes((t.size + 7) // 8, "little")
    return t.size.to_bytes(8, "little") + payload


def table_from_binary(data: bytes) -> AnswerTable:
    if len(data) < 8:
        raise ValueError("truncated table blob")
    length = int.from_bytes(data[:8], "little")
    for n in range(2, MAX_TABLE_N + 1):
        if table_size(n) == length:
            break
    else:
        raise ValueError(f"bit length {length} matches no vertex count")
    payload = data[8:]
    if len(payload) != (length + 7) // 8:
        raise ValueError("payload length mismatch")
    bits = int.from_bytes(payload, "little")
    if bits >> length:
        raise ValueError("padding bits must be zero")
    return AnswerTable(n, bits)


def save_table(t: AnswerTable, path) -> None:
    """Write CSV if the path ends in .csv, else the binary format."""
    if str(path).endswith(".csv"):
        table_to_csv(t, path)
    else:
        with open(path, "wb") as fh:
            fh.write(table_to_binary(t))


def load_table(path) -> AnswerTable:
    if str(path).endswith(".csv"):
        return table_from_csv(path)
    with open(path, "rb") as fh:
        return table_from_binary(fh.read())
