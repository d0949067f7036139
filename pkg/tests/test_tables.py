"""Answer-table construction, indexing, distance, and serialization tests."""

import random
from itertools import combinations

import pytest

from kident.graphs import (
    make_chain_undirected,
    make_dag,
    make_undirected,
    max_pairwise_connectivity,
    named_graph,
    undirected_from_edge_bits,
)
from kident.identify import enumerate_mecs, enumerate_undirected
from kident.separation import d_separates, separates
from kident.tables import (
    AnswerTable,
    QueryKey,
    apply_flips,
    cond_rank,
    cond_unrank,
    load_table,
    query_index,
    query_key,
    save_table,
    table_distance,
    table_from_binary,
    table_from_csv,
    table_of_bayes,
    table_of_markov,
    table_size,
    table_to_binary,
    table_to_csv,
)


def complete_graph(n):
    return make_undirected(n, list(combinations(range(n), 2)))


def random_table(rng, n):
    return AnswerTable(n, rng.getrandbits(table_size(n)))


class TestIndexing:
    def test_table_size(self):
        assert table_size(2) == 1
        assert table_size(3) == 6
        assert table_size(4) == 24
        assert table_size(5) == 80

    def test_first_key_is_marginal_01(self):
        assert query_index(3, QueryKey(0, 1, 0)) == 0
        assert query_key(3, 0) == QueryKey(0, 1, 0)

    def test_cond_rank_skips_endpoints(self):
        # free vertices for (0, 2) at n=4 are 1 and 3, in that bit order
        assert cond_rank(4, 0, 2, 0b0010) == 1
        assert cond_rank(4, 0, 2, 0b1000) == 2
        assert cond_unrank(4, 0, 2, 3) == 0b1010

    def test_known_index(self):
        assert query_index(4, QueryKey(1, 3, 0b0101)) == 19

    def test_unordered_pair_accepted(self):
        assert query_index(4, QueryKey(3, 1, 0b0101)) == 19

    @pytest.mark.parametrize("n", [3, 4, 5])
    def test_bijection(self, n):
        seen = set()
        for i in range(table_size(n)):
            k = query_key(n, i)
            assert k.u < k.v
            assert query_index(n, k) == i
            seen.add(k)
        assert len(seen) == table_size(n)

    def test_out_of_range_rejected(self):
        with pytest.raises(ValueError):
            query_key(3, 6)
        with pytest.raises(ValueError):
            query_index(3, QueryKey(0, 1, 0b010))  # cond contains v


class TestAnswerTable:
    def test_bits_bounds(self):
        AnswerTable(3, (1 << 6) - 1)
        with pytest.raises(ValueError):
            AnswerTable(3, 1 << 6)
        with pytest.raises(ValueError):
            AnswerTable(3, -1)

    def test_get(self):
        t = AnswerTable(3, 0b000101)
        assert [t.get(i) for i in range(6)] == [1, 0, 1, 0, 0, 0]
        with pytest.raises(ValueError):
            t.get(6)

    def test_get_key_matches_get(self):
        t = table_of_bayes(named_graph("d1", 4))
        for i in range(t.size):
            assert t.get(i) == t.get_key(query_key(4, i))


class TestTableOfMarkov:
    def test_empty_all_zero(self):
        assert table_of_markov(make_undirected(3, [])).bits == 0

    def test_complete_all_one(self):
        t = table_of_markov(complete_graph(4))
        assert t.bits == (1 << 24) - 1

    def test_chain3_single_zero(self):
        # only (0, 2, {1}) is separated
        t = table_of_markov(make_chain_undirected(3))
        assert t.bits == 0b110111
        assert t.get_key(QueryKey(0, 2, 0b010)) == 0

    def test_matches_separates_pointwise(self):
        rng = random.Random(3)
        for _ in range(20):
            n = rng.randint(3, 5)
            g = undirected_from_edge_bits(n, rng.getrandbits(n * (n - 1) // 2))
            t = table_of_markov(g)
            for i in range(t.size):
                u, v, s = query_key(n, i)
                assert t.get(i) == (0 if separates(g, u, v, s) else 1)

    def test_s_major_fill_matches_direct_evaluation(self):
        # the fast fill labels components once per conditioning set; check
        # it against a plain per-query loop
        from kident.tables import _markov_bits, _pair_cond_masks
        from kident.bits import pair_index

        rng = random.Random(9)
        n = 6
        for _ in range(5):
            g = undirected_from_edge_bits(n, rng.getrandbits(15))
            slow = 0
            for u, v, masks in _pair_cond_masks(n):
                base = pair_index(n, u, v) << (n - 2)
                for rank, s in enumerate(masks):
                    if not separates(g, u, v, s):
                        slow |= 1 << (base + rank)
            assert _markov_bits(n, g.adj) == slow


class TestTableOfBayes:
    def test_empty_all_zero(self):
        assert table_of_bayes(named_graph("empty_dag", 3)).bits == 0

    def test_collider_bits(self):
        t = table_of_bayes(make_dag(3, [(0, 1), (2, 1)]))
        assert t.bits == 0b111011
        assert t.get_key(QueryKey(0, 2, 0)) == 0
        assert t.get_key(QueryKey(0, 2, 0b010)) == 1

    def test_directed_chain_equals_undirected_chain(self):
        t1 = table_of_bayes(make_dag(3, [(0, 1), (1, 2)]))
        t2 = table_of_markov(make_chain_undirected(3))
        assert t1.bits == t2.bits == 0b110111

    def test_markov_equivalent_dags_share_table(self):
        a = make_dag(4, [(0, 1), (1, 2), (2, 3)])
        b = make_dag(4, [(1, 0), (2, 1), (3, 2)])
        assert table_of_bayes(a).bits == table_of_bayes(b).bits

    def test_matches_d_separates_pointwise(self):
        d = named_graph("d1", 5)
        t = table_of_bayes(d)
        for i in range(t.size):
            u, v, s = query_key(5, i)
            assert t.get(i) == (0 if d_separates(d, u, v, s) else 1)


class TestDistance:
    def test_identity(self):
        t = table_of_bayes(named_graph("d1", 4))
        assert table_distance(t, t) == 0

    def test_complete_minus_edge_is_one(self):
        k4 = table_of_markov(complete_graph(4))
        minus = table_of_markov(make_undirected(4, [(0, 1), (0, 2), (0, 3), (1, 2), (1, 3)]))
        assert table_distance(k4, minus) == 1

    def test_d1_vs_dprime_is_one(self):
        for n in (4, 5):
            d1 = named_graph("d1", n)
            dprime = make_dag(n, list(d1.arcs()) + [(0, 1)])
            assert table_distance(table_of_bayes(d1), table_of_bayes(dprime)) == 1

    def test_mismatched_n_rejected(self):
        with pytest.raises(ValueError):
            table_distance(AnswerTable(3, 0), AnswerTable(4, 0))

    def test_metric_properties(self):
        rng = random.Random(17)
        for _ in range(100):
            a, b, c = (random_table(rng, 4) for _ in range(3))
            dab = table_distance(a, b)
            assert dab == table_distance(b, a)
            assert (dab == 0) == (a.bits == b.bits)
            assert table_distance(a, c) <= dab + table_distance(b, c)

    def test_distinct_graphs_distinct_tables(self):
        tables = {table_of_markov(g).bits for g in enumerate_undirected(4)}
        assert len(tables) == 64

    def test_distinct_mecs_distinct_tables(self):
        tables = {table_of_bayes(rep).bits for _, rep in enumerate_mecs(4)}
        assert len(tables) == 185

    def test_kappa_lower_bound_n4_exhaustive(self):
        # any two distinct graphs differ in at least 2^(n-2-kappa) bits,
        # with kappa taken from either side of the pair
        graphs = list(enumerate_undirected(4))
        tabs = [table_of_markov(g).bits for g in graphs]
        kappas = [max_pairwise_connectivity(g) for g in graphs]
        for i in range(len(graphs)):
            for j in range(i + 1, len(graphs)):
                d = (tabs[i] ^ tabs[j]).bit_count()
                assert d >= 1 << (4 - 2 - kappas[i])
                assert d >= 1 << (4 - 2 - kappas[j])


class TestFlips:
    def test_empty_flip_identity(self):
        t = table_of_markov(make_chain_undirected(4))
        assert apply_flips(t, []).bits == t.bits

    def test_flip_involution(self):
        t = table_of_markov(make_chain_undirected(4))
        assert apply_flips(apply_flips(t, [5]), [5]).bits == t.bits

    def test_flip_count_is_distance(self):
        t = table_of_markov(make_chain_undirected(5))
        flipped = apply_flips(t, [0, 7, 41])
        assert table_distance(t, flipped) == 3

    def test_duplicates_rejected(self):
        t = AnswerTable(3, 0)
        with pytest.raises(ValueError):
            apply_flips(t, [1, 1])

    def test_out_of_range_rejected(self):
        t = AnswerTable(3, 0)
        with pytest.raises(ValueError):
            apply_flips(t, [6])


class TestSerialization:
    def test_csv_round_trip(self, tmp_path):
        t = table_of_bayes(named_graph("d1", 5))
        path = tmp_path / "t.csv"
        table_to_csv(t, path)
        assert table_from_csv(path) == t

    def test_csv_any_row_order(self, tmp_path):
        t = table_of_markov(make_chain_undirected(4))
        path = tmp_path / "t.csv"
        table_to_csv(t, path)
        lines = path.read_text().strip().splitlines()
        rng = random.Random(1)
        body = lines[1:]
        rng.shuffle(body)
        path.write_text("\n".join([lines[0]] + body) + "\n")
        assert table_from_csv(path) == t

    def test_csv_rejects_bad_input(self, tmp_path):
        t = table_of_markov(make_chain_undirected(3))
        path = tmp_path / "t.csv"
        table_to_csv(t, path)
        lines = path.read_text().strip().splitlines()
        # missing row
        path.write_text("\n".join(lines[:-1]) + "\n")
        with pytest.raises(ValueError):
            table_from_csv(path)
        # duplicate row
        path.write_text("\n".join(lines + [lines[-1]]) + "\n")
        with pytest.raises(ValueError):
            table_from_csv(path)
        # bad header
        path.write_text("\n".join(["a,b,c,d"] + lines[1:]) + "\n")
        with pytest.raises(ValueError):
            table_from_csv(path)
        # bad answer value
        path.write_text("\n".join(lines[:-1] + [lines[-1][:-1] + "2"]) + "\n")
        with pytest.raises(ValueError):
            table_from_csv(path)

    def test_binary_round_trip(self):
        rng = random.Random(23)
        for n in (2, 3, 4, 5, 6):
            t = random_table(rng, n)
            blob = table_to_binary(t)
            assert int.from_bytes(blob[:8], "little") == table_size(n)
            assert table_from_binary(blob) == t

    def test_binary_rejects_garbage(self):
        with pytest.raises(ValueError):
            table_from_binary(b"\x01\x02")  # truncated
        with pytest.raises(ValueError):
            table_from_binary((7).to_bytes(8, "little") + b"\x00")  # bad length
        good = table_to_binary(AnswerTable(3, 0))
        with pytest.raises(ValueError):
            table_from_binary(good + b"\x00")  # trailing bytes
        with pytest.raises(ValueError):
            table_from_binary((6).to_bytes(8, "little") + b"\xff")  # dirty padding

    def test_save_load_dispatch_on_extension(self, tmp_path):
        t = table_of_markov(make_chain_undirected(4))
        csv_path = tmp_path / "t.csv"
        bin_path = tmp_path / "t.bin"
        save_table(t, csv_path)
        save_table(t, bin_path)
        assert load_table(csv_path) == t
        assert load_table(bin_path) == t
        assert csv_path.read_text().startswith("u,v,cond_mask,answer")
