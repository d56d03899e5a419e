import math
import random

import pytest
from hypothesis import given, settings

from entagg import (
    FeatureAllocation,
    InputError,
    IntersectionCache,
    Partitioning,
    SampleSet,
    entropy_agglomeration,
    expected_projection_entropy,
    leaf_order,
)
from entagg.agglomeration import Dendrogram, MergeStep, dendrogram_from_merges
from entagg.partitions import GroundSet

from conftest import sample_sets
from oracles import brute_force_ea

E3_MERGES = [
    (1, 3, 8, 0.0),
    (8, 6, 9, 0.0),
    (4, 5, 10, 0.0),
    (9, 7, 11, 0.187445),
    (11, 2, 12, 0.391138),
    (12, 10, 13, 0.877654),
]


def members_sequence(d: Dendrogram):
    sets = d.subtrees()
    return [(sets[s.left - 1], sets[s.right - 1], s.height) for s in d.steps]


class TestGoldens:
    def test_e3(self, e3):
        d = entropy_agglomeration(e3)
        got = [(s.left, s.right, s.merged, round(s.height, 6)) for s in d.steps]
        assert got == E3_MERGES

    def test_e3_zero_subtrees(self, e3):
        d = entropy_agglomeration(e3)
        zero = [d.members(s.merged) for s in d.steps if s.height == 0.0]
        assert frozenset({4, 5}) in zero
        assert frozenset({1, 3}) in zero
        assert frozenset({1, 3, 6}) in zero
        # {1,3,6} exists before any positive merge touches it
        first_positive = next(j for j, s in enumerate(d.steps) if s.height > 0)
        assert d.members(d.steps[first_positive].left) == frozenset({1, 3, 6})

    def test_two_blocks(self):
        s = SampleSet((Partitioning(((1, 2), (3, 4))),))
        d = entropy_agglomeration(s)
        assert [(x.left, x.right, x.height) for x in d.steps[:2]] == [(1, 2, 0.0), (3, 4, 0.0)]
        assert math.isclose(d.steps[2].height, math.log(2), rel_tol=1e-15)

    def test_two_elements(self, e3):
        s = SampleSet.of_partitionings([[[1], [2]], [[1, 2]]])
        d = entropy_agglomeration(s)
        assert len(d.steps) == 1
        assert d.steps[0].height == expected_projection_entropy(s, {1, 2})
        assert leaf_order(d) == [1, 2]

    def test_one_element_rejected(self):
        with pytest.raises(InputError):
            entropy_agglomeration(SampleSet((Partitioning(((1,),)),)))

    def test_heights_are_merge_entropies(self, e3):
        # heights need not be monotone; each is the entropy of its merged subset
        d = entropy_agglomeration(e3)
        for s in d.steps:
            assert s.height == expected_projection_entropy(e3, d.members(s.merged))


class TestCache:
    def test_candidate_examples(self, e3):
        c = IntersectionCache(e3)
        assert c.candidate_entropy(4, 5) == 0.0
        assert round(c.candidate_entropy(1, 2), 4) == 0.4621
        assert c.evaluations == 2

    def test_merge_counts(self, e3):
        c = IntersectionCache(e3)
        sid = c.merge(1, 3)
        assert sid == 8
        assert all(list(m.values()) == [2] for m in c.counts[sid])
        assert c.active == [2, 4, 5, 6, 7, 8]

    def test_merge_everything(self, e3):
        c = IntersectionCache(e3)
        sid = 1
        for e in range(2, 8):
            sid = c.merge(sid, e)
        for z, m in zip(e3, c.counts[sid]):
            assert sorted(m.values()) == sorted(z.block_sizes)

    def test_inactive(self, e3):
        c = IntersectionCache(e3)
        c.merge(1, 2)
        with pytest.raises(KeyError):
            c.candidate_entropy(1, 3)
        with pytest.raises(KeyError):
            c.merge(2, 3)
        with pytest.raises(KeyError):
            c.candidate_entropy(3, 3)

    @settings(max_examples=100)
    @given(sample_sets(min_n=3))
    def test_candidates_match_direct(self, s):
        c = IntersectionCache(s)
        rnd = random.Random(s.n * 31 + len(s))
        while len(c.members) > 1:
            ids = c.active
            for a in ids:
                for b in ids:
                    if a < b:
                        direct = expected_projection_entropy(s, c.members[a] | c.members[b])
                        assert c.candidate_entropy(a, b) == direct
            a, b = rnd.sample(ids, 2)
            sid = c.merge(a, b)
            if s.kind == "partitioning":
                assert all(sum(m.values()) == c.size(sid) for m in c.counts[sid])


class TestOracle:
    @settings(max_examples=150)
    @given(sample_sets())
    def test_brute_force_equivalence(self, s):
        d = entropy_agglomeration(s, check_greedy=True)
        expected = brute_force_ea([z.blocks for z in s], s.n)
        assert members_sequence(d) == expected

    def test_deterministic(self):
        rnd = random.Random(5)
        samples = [[rnd.randrange(4) for _ in range(12)] for _ in range(6)]
        s = SampleSet(tuple(Partitioning.from_labels(l) for l in samples))
        assert entropy_agglomeration(s) == entropy_agglomeration(s)

    def test_feature_allocations(self):
        s = SampleSet(
            tuple(FeatureAllocation(b, 5) for b in [((1, 2, 3),), ((1, 2),), ((4, 5),), ((3, 4, 5),)])
        )
        d = entropy_agglomeration(s, check_greedy=True)
        assert members_sequence(d) == brute_force_ea([z.blocks for z in s], 5)

    def test_zero_height_closure(self):
        rnd = random.Random(11)
        group = {2, 5, 9, 10}
        samples = []
        for _ in range(8):
            labels = [rnd.randrange(5) for _ in range(12)]
            for e in group:
                labels[e - 1] = labels[1]
            samples.append(Partitioning.from_labels(labels))
        d = entropy_agglomeration(SampleSet(tuple(samples)))
        # the group is completed before any of its members enters a positive merge
        for s in d.steps:
            m = d.members(s.merged)
            if m & group and not m <= group:
                assert group <= m
                assert any(d.members(c) == frozenset(group) for c in (s.left, s.right))
                break

    def test_evaluations_quadratic(self):
        rnd = random.Random(2)
        n = 100
        samples = [Partitioning.from_labels([rnd.randrange(8) for _ in range(n)]) for _ in range(5)]
        s = SampleSet(tuple(samples))
        cache = IntersectionCache(s)
        entropy_agglomeration(s, cache=cache)
        # initial scan plus one pass over the active subsets per merge
        assert cache.evaluations == n * (n - 1) // 2 + sum(n - 1 - j for j in range(1, n))
        assert cache.evaluations <= n * n


class TestDendrogram:
    def test_leaf_order_e3(self, e3):
        order = leaf_order(entropy_agglomeration(e3))
        assert sorted(order) == list(range(1, 8))
        pos = {e: i for i, e in enumerate(order)}
        assert abs(pos[4] - pos[5]) == 1
        assert max(pos[e] for e in (1, 3, 6)) - min(pos[e] for e in (1, 3, 6)) == 2
        assert order == [1, 3, 6, 7, 2, 4, 5]

    def test_validation(self):
        g = GroundSet(3)
        with pytest.raises(InputError):
            Dendrogram(g, (MergeStep(1, 2, 4, 0.0),))
        with pytest.raises(InputError):
            dendrogram_from_merges(g, [(1, 2, 0.0), (1, 3, 0.0)])
        d = dendrogram_from_merges(g, [(1, 2, 0.0), (4, 3, 1.0)])
        assert d.root == 5
        assert d.members(5) == frozenset({1, 2, 3})
        assert d.children(3) is None
        assert d.height(5) == 1.0
