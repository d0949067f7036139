"""Skeleton recovery, orientation, extension, and failure behavior."""

import random

import pytest

from kident.graphs import (
    Dag,
    make_chain_dag,
    make_chain_undirected,
    make_undirected,
    markov_equivalent,
    named_graph,
    skeleton,
    v_structures,
)
from kident.identify import enumerate_dags, mec_catalog
from kident.pc import Cpdag, PcFailure, cpdag_to_dag, pc, pc_orient, pc_skeleton
from kident.tables import AnswerTable, table_of_bayes, table_of_markov, table_size


def collider3() -> Dag:
    return make_chain_dag((0, 1, 2), (1, 0))


class TestSkeleton:
    def test_collider_skeleton_and_sepset(self):
        skel, sepsets = pc_skeleton(table_of_bayes(collider3()))
        assert sorted(skel.edges()) == [(0, 1), (1, 2)]
        # the roots separate marginally, so the recorded set is empty
        assert sepsets == {(0, 2): 0}

    def test_chain_sepset_is_middle_vertex(self):
        skel, sepsets = pc_skeleton(table_of_markov(make_chain_undirected(3)))
        assert sorted(skel.edges()) == [(0, 1), (1, 2)]
        assert sepsets == {(0, 2): 0b010}

    def test_empty_table(self):
        skel, sepsets = pc_skeleton(AnswerTable(4, 0))
        assert skel.edge_count == 0
        assert set(sepsets) == {(u, v) for u in range(4) for v in range(u + 1, 4)}
        assert all(mask == 0 for mask in sepsets.values())

    def test_full_table(self):
        skel, sepsets = pc_skeleton(AnswerTable(4, (1 << table_size(4)) - 1))
        assert skel.edge_count == 6
        assert sepsets == {}

    def test_skeleton_matches_source_dag(self):
        for d in enumerate_dags(4):
            skel, _ = pc_skeleton(table_of_bayes(d))
            assert skel == skeleton(d)


class TestOrient:
    def test_collider_fully_oriented(self):
        c = pc_orient(*pc_skeleton(table_of_bayes(collider3())))
        assert c.dpa == (0, 0b101, 0)
        assert c.und == (0, 0, 0)

    def test_chain_stays_undirected(self):
        c = pc_orient(*pc_skeleton(table_of_markov(make_chain_undirected(3))))
        assert c.dpa == (0, 0, 0)
        assert c.und == (0b010, 0b101, 0b010)

    def test_meek_r1_propagates_past_collider(self):
        # 0 -> 2 <- 1 with tail 2 - 3: the tail must point away
        c = pc_orient(*pc_skeleton(table_of_bayes(named_graph("d1", 4))))
        assert c.dpa == (0, 0, 0b0011, 0b0100)
        assert c.und == (0, 0, 0, 0)

    def test_missing_sepset_raises(self):
        skel = make_undirected(3, [(0, 1)])
        with pytest.raises(PcFailure):
            pc_orient(skel, {})


class TestCpdagValidation:
    def test_self_loop_rejected(self):
        with pytest.raises(ValueError):
            Cpdag(2, (0b01, 0), (0, 0))

    def test_asymmetric_undirected_rejected(self):
        with pytest.raises(ValueError):
            Cpdag(2, (0, 0), (0b10, 0))

    def test_edge_in_both_parts_rejected(self):
        with pytest.raises(ValueError):
            Cpdag(2, (0, 0b01), (0b10, 0b01))

    def test_children_masks(self):
        c = Cpdag(3, (0, 0b101, 0), (0, 0, 0))
        assert c.children_masks() == (0b010, 0, 0b010)


class TestExtension:
    def test_chain_cpdag_extends_to_equivalent_dag(self):
        t = table_of_markov(make_chain_undirected(4))
        d = pc(AnswerTable(4, t.bits))
        assert skeleton(d) == make_chain_undirected(4)
        assert v_structures(d) == frozenset()

    def test_four_cycle_not_extendable(self):
        # separation pattern of a chordless cycle fits no DAG
        c4 = make_undirected(4, [(0, 1), (1, 2), (2, 3), (0, 3)])
        with pytest.raises(PcFailure):
            pc(table_of_markov(c4))

    def test_complete_table(self):
        d = pc(AnswerTable(3, (1 << 6) - 1))
        assert d.arc_count == 3


class TestPipeline:
    def test_recovers_all_dags_n3(self):
        for d in enumerate_dags(3):
            assert markov_equivalent(pc(table_of_bayes(d)), d)

    def test_recovers_all_mecs_n4(self):
        cat = mec_catalog(4)
        for i, bits in enumerate(cat.tables):
            got = pc(AnswerTable(4, bits))
            assert markov_equivalent(got, Dag(4, cat.reps[i]))

    def test_corrupted_tables_fail_cleanly(self):
        # a flipped bit may or may not still look like a DAG, but the
        # pipeline must answer with a Dag or PcFailure, nothing else
        rng = random.Random(11)
        dags = list(enumerate_dags(4))
        outcomes = set()
        for _ in range(300):
            d = rng.choice(dags)
            bits = table_of_bayes(d).bits ^ (1 << rng.randrange(table_size(4)))
            try:
                got = pc(AnswerTable(4, bits))
            except PcFailure:
                outcomes.add("fail")
            else:
                assert isinstance(got, Dag)
                outcomes.add("dag")
        assert outcomes == {"fail", "dag"}
