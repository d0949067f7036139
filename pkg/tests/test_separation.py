"""Separation and d-separation tests, including brute-force cross-checks."""

import random

import pytest

from kident.graphs import (
    Dag,
    make_chain_dag,
    make_chain_undirected,
    make_dag,
    make_undirected,
    named_graph,
    undirected_from_edge_bits,
)
from kident.identify import all_chain_dags, enumerate_dags
from kident.reference import d_separates_by_paths, separates_by_paths
from kident.separation import (
    ancestors,
    chain_d_connected,
    d_separates,
    descendants,
    separates,
)


def all_queries(n, u, v):
    """Every conditioning mask over V minus {u, v}."""
    free = [w for w in range(n) if w not in (u, v)]
    for bits in range(1 << len(free)):
        s = 0
        for t, w in enumerate(free):
            if bits >> t & 1:
                s |= 1 << w
        yield s


class TestSeparates:
    def test_chain_blocked_by_middle(self):
        g = make_chain_undirected(3)
        assert separates(g, 0, 2, 0b010)
        assert not separates(g, 0, 2, 0)

    def test_adjacent_never_separated(self):
        g = make_undirected(4, [(0, 1), (1, 2), (2, 3), (0, 3)])
        for s in all_queries(4, 0, 1):
            assert not separates(g, 0, 1, s)

    def test_query_validation(self):
        g = make_chain_undirected(3)
        with pytest.raises(ValueError):
            separates(g, 1, 1, 0)
        with pytest.raises(ValueError):
            separates(g, 0, 2, 0b001)  # S contains u
        with pytest.raises(ValueError):
            separates(g, 0, 2, 1 << 3)

    def test_monotone_in_conditioning_set(self):
        # supersets of a separator still separate
        rng = random.Random(13)
        for _ in range(200):
            n = rng.randint(3, 8)
            g = undirected_from_edge_bits(n, rng.getrandbits(n * (n - 1) // 2))
            u, v = sorted(rng.sample(range(n), 2))
            free = [w for w in range(n) if w not in (u, v)]
            s = sum(1 << w for w in free if rng.random() < 0.5)
            extra = sum(1 << w for w in free if rng.random() < 0.5)
            if separates(g, u, v, s):
                assert separates(g, u, v, s | extra)

    def test_agrees_with_path_enumeration(self):
        for n in (2, 3, 4):
            for bits in range(1 << (n * (n - 1) // 2)):
                g = undirected_from_edge_bits(n, bits)
                for u in range(n):
                    for v in range(u + 1, n):
                        for s in all_queries(n, u, v):
                            assert separates(g, u, v, s) == separates_by_paths(g, u, v, s)


class TestAncestry:
    def test_descendants_chain(self):
        d = make_dag(3, [(0, 1), (1, 2)])
        assert descendants(d, 0) == 0b110
        assert descendants(d, 2) == 0

    def test_descendants_collider_center_is_sink(self):
        d = make_dag(3, [(0, 1), (2, 1)])
        assert descendants(d, 1) == 0

    def test_descendants_empty_dag(self):
        d = named_graph("empty_dag", 4)
        assert all(descendants(d, v) == 0 for v in range(4))

    def test_ancestors_closure(self):
        d = make_dag(4, [(0, 1), (1, 2), (3, 2)])
        assert ancestors(d, 0b100) == 0b1111  # 2's ancestors: 0, 1, 3
        assert ancestors(d, 0b001) == 0b001


class TestDSeparates:
    def test_collider_rules(self):
        d = make_dag(3, [(0, 1), (2, 1)])
        assert d_separates(d, 0, 2, 0)
        assert not d_separates(d, 0, 2, 0b010)

    def test_collider_descendant_opens_path(self):
        d = make_dag(4, [(0, 1), (2, 1), (1, 3)])
        assert d_separates(d, 0, 2, 0)
        assert not d_separates(d, 0, 2, 0b1000)  # conditioning on 1's child

    def test_chain_blocked(self):
        d = make_dag(3, [(0, 1), (1, 2)])
        assert d_separates(d, 0, 2, 0b010)
        assert not d_separates(d, 0, 2, 0)

    def test_d1_roots_marginally_independent(self):
        for n in (4, 5):
            assert d_separates(named_graph("d1", n), 0, 1, 0)

    def test_adjacent_never_d_separated(self):
        d = named_graph("d1", 4)
        for s in all_queries(4, 0, 2):
            assert not d_separates(d, 0, 2, s)

    def test_query_validation(self):
        d = make_dag(3, [(0, 1)])
        with pytest.raises(ValueError):
            d_separates(d, 0, 0, 0)
        with pytest.raises(ValueError):
            d_separates(d, 0, 1, 0b010)

    def test_agrees_with_path_enumeration_exhaustive(self):
        # every DAG up to n=4, every query
        for n in (2, 3, 4):
            for d in enumerate_dags(n):
                for u in range(n):
                    for v in range(u + 1, n):
                        for s in all_queries(n, u, v):
                            assert d_separates(d, u, v, s) == d_separates_by_paths(
                                d, u, v, s
                            )

    def test_agrees_with_path_enumeration_random_n6(self):
        rng = random.Random(11)
        for _ in range(150):
            n = 6
            parents = [0] * n
            order = list(range(n))
            rng.shuffle(order)
            for i in range(n):
                for j in range(i):
                    if rng.random() < 0.4:
                        parents[order[i]] |= 1 << order[j]
            d = Dag(n, tuple(parents))
            u, v = sorted(rng.sample(range(n), 2))
            s = sum(
                1 << w for w in range(n) if w not in (u, v) and rng.random() < 0.5
            )
            assert d_separates(d, u, v, s) == d_separates_by_paths(d, u, v, s)


class TestChainDConnected:
    def test_collider_needs_exactly_the_collider(self):
        d = make_chain_dag((0, 1, 2), (1, 0))
        assert chain_d_connected(d, 0, 2, 0b010)
        assert not chain_d_connected(d, 0, 2, 0)

    def test_forward_chain_connected_marginally(self):
        d = make_chain_dag((0, 1, 2, 3), (1, 1, 1))
        assert chain_d_connected(d, 0, 3, 0)
        assert not chain_d_connected(d, 0, 3, 0b0010)

    def test_rejects_non_chain(self):
        with pytest.raises(ValueError):
            chain_d_connected(named_graph("d1", 4), 0, 1, 0)

    @pytest.mark.parametrize("n", [3, 4, 5])
    def test_complements_d_separates_on_all_chain_dags(self, n):
        for d in all_chain_dags(n):
            for u in range(n):
                for v in range(u + 1, n):
                    for s in all_queries(n, u, v):
                        assert chain_d_connected(d, u, v, s) == (
                            not d_separates(d, u, v, s)
                        )


class TestReferenceGate:
    def test_large_n_rejected(self):
        g = make_chain_undirected(9)
        with pytest.raises(ValueError):
            separates_by_paths(g, 0, 8, 0)
        d = make_chain_dag(range(9), [1] * 8)
        with pytest.raises(ValueError):
            d_separates_by_paths(d, 0, 8, 0)
