"""Entropy agglomeration (EA).

Starting from singletons, repeatedly merge the two subsets whose union has
the lowest expected projection entropy over the sample set, until one
subset remains. The merge sequence, with the entropy of each merge as its
height, is the dendrogram.

Candidate entropies are computed from an :class:`IntersectionCache` that
keeps, for every active subset and every sample, how many of the subset's
elements fall into each block. Merging two subsets adds their count maps,
so an iteration touches only the pairs involving the new subset.
"""

from __future__ import annotations

import heapq
import math
from dataclasses import dataclass
from typing import Sequence

from .entropy import size_entropy
from .errors import InputError
from .partitions import GroundSet, SampleSet

TIE_EPS = 1e-12


@dataclass(frozen=True)
class MergeStep:
    left: int
    right: int
    merged: int
    height: float


@dataclass(frozen=True)
class Dendrogram:
    """Binary merge tree. Leaf ids are the elements ``1..n``; the ``j``-th
    merge creates node ``n + j``."""

    ground: GroundSet
    steps: tuple[MergeStep, ...]

    def __post_init__(self):
        n = self.ground.n
        if len(self.steps) != n - 1:
            raise InputError(f"{n} leaves need {n - 1} merges, got {len(self.steps)}")
        used: set[int] = set()
        for j, s in enumerate(self.steps, start=1):
            if s.merged != n + j:
                raise InputError(f"merge {j} must create node {n + j}, got {s.merged}")
            for child in (s.left, s.right):
                if not 1 <= child < s.merged or child in used:
                    raise InputError(f"merge {j} has invalid child {child}")
                used.add(child)

    @property
    def n(self) -> int:
        return self.ground.n

    @property
    def leaves(self) -> tuple[int, ...]:
        return self.ground.elements

    @property
    def root(self) -> int:
        return 2 * self.n - 1 if self.n > 1 else 1

    def children(self, node: int) -> tuple[int, int] | None:
        if node <= self.n:
            return None
        s = self.steps[node - self.n - 1]
        return s.left, s.right

    def height(self, node: int) -> float:
        if node <= self.n:
            return 0.0
        return self.steps[node - self.n - 1].height

    def members(self, node: int) -> frozenset[int]:
        out: list[int] = []
        stack = [node]
        while stack:
            v = stack.pop()
            ch = self.children(v)
            if ch is None:
                out.append(v)
            else:
                stack.extend(ch)
        return frozenset(out)

    def subtrees(self) -> list[frozenset[int]]:
        """Leaf sets of every node, leaves first, then merges in order."""
        sets = {e: frozenset((e,)) for e in self.leaves}
        for s in self.steps:
            sets[s.merged] = sets[s.left] | sets[s.right]
        return [sets[v] for v in range(1, 2 * self.n)]

    def label(self, element: int) -> str:
        return self.ground.label(element)


def leaf_order(dendrogram: Dendrogram) -> list[int]:
    """Leaves in left-to-right order (left child first)."""
    order: list[int] = []
    stack = [dendrogram.root]
    while stack:
        v = stack.pop()
        ch = dendrogram.children(v)
        if ch is None:
            order.append(v)
        else:
            stack.append(ch[1])
            stack.append(ch[0])
    return order


class IntersectionCache:
    """Per-sample block intersection counts for the active subsets.

    ``counts[sid][t]`` maps a block index of sample ``t`` to the number of
    the subset's elements in that block. Blocks are indexed by position in
    the sample's canonical block tuple, so duplicate feature-allocation
    blocks are counted separately.
    """

    def __init__(self, sample_set: SampleSet):
        self.sample_set = sample_set
        n, T = sample_set.n, len(sample_set)
        self.n = n
        self.T = T
        self.evaluations = 0
        self.members: dict[int, frozenset[int]] = {}
        self.counts: dict[int, list[dict[int, int]]] = {}
        per_element: list[list[dict[int, int]]] = [[{} for _ in range(T)] for _ in range(n)]
        for t, z in enumerate(sample_set):
            for j, block in enumerate(z.blocks):
                for e in block:
                    per_element[e - 1][t][j] = 1
        for e in range(1, n + 1):
            self.members[e] = frozenset((e,))
            self.counts[e] = per_element[e - 1]
        self.next_id = n + 1

    @property
    def active(self) -> list[int]:
        return sorted(self.members)

    def _require(self, sid: int):
        if sid not in self.members:
            raise KeyError(f"subset {sid} is not active")

    def size(self, sid: int) -> int:
        self._require(sid)
        return len(self.members[sid])

    def min_member(self, sid: int) -> int:
        return min(self.members[sid])

    def candidate_entropy(self, a: int, b: int) -> float:
        """Expected projection entropy of the union of subsets ``a`` and ``b``."""
        if a == b:
            raise KeyError("candidate pair needs two distinct subsets")
        self._require(a)
        self._require(b)
        self.evaluations += 1
        base = len(self.members[a]) + len(self.members[b])
        per_sample = []
        for ca, cb in zip(self.counts[a], self.counts[b]):
            if len(ca) < len(cb):
                ca, cb = cb, ca
            merged = dict(ca)
            for j, c in cb.items():
                merged[j] = merged.get(j, 0) + c
            per_sample.append(size_entropy(merged.values(), base))
        return math.fsum(per_sample) / self.T

    def merge(self, a: int, b: int) -> int:
        """Replace ``a`` and ``b`` by their union; returns the new subset id."""
        if a == b:
            raise KeyError("cannot merge a subset with itself")
        self._require(a)
        self._require(b)
        new_counts = []
        for ca, cb in zip(self.counts.pop(a), self.counts.pop(b)):
            if len(ca) < len(cb):
                ca, cb = cb, ca
            for j, c in cb.items():
                ca[j] = ca.get(j, 0) + c
            new_counts.append(ca)
        sid = self.next_id
        self.next_id += 1
        self.members[sid] = self.members.pop(a) | self.members.pop(b)
        self.counts[sid] = new_counts
        return sid


def _tie_key(cache: IntersectionCache, a: int, b: int) -> tuple[int, int]:
    ma, mb = cache.min_member(a), cache.min_member(b)
    return (ma, mb) if ma < mb else (mb, ma)


def _near(h: float, best: float, eps: float) -> bool:
    return h - best <= eps * max(1.0, abs(best))


def entropy_agglomeration(
    sample_set: SampleSet,
    *,
    cache: IntersectionCache | None = None,
    eps: float = TIE_EPS,
    check_greedy: bool = False,
) -> Dendrogram:
    """Run EA and return its dendrogram.

    Pairs whose entropies are within ``eps`` (relative, floored at 1) of
    the minimum count as tied; among those the pair with the smallest
    overall element wins, then the smallest element of the other subset.
    With ``check_greedy`` every step is re-checked against a full scan of
    the active pairs.
    """
    n = sample_set.n
    if n < 2:
        raise InputError("agglomeration needs at least two elements")
    if cache is None:
        cache = IntersectionCache(sample_set)
    # heap entries: (entropy, tie key, a, b); stale entries are skipped on pop
    heap: list[tuple[float, tuple[int, int], int, int]] = []
    ids = cache.active
    for i, a in enumerate(ids):
        for b in ids[i + 1 :]:
            heap.append((cache.candidate_entropy(a, b), _tie_key(cache, a, b), a, b))
    heapq.heapify(heap)
    steps = []
    while len(cache.members) > 1:
        while not (heap[0][2] in cache.members and heap[0][3] in cache.members):
            heapq.heappop(heap)
        best_h = heap[0][0]
        tied = []
        while heap and _near(heap[0][0], best_h, eps):
            entry = heapq.heappop(heap)
            if entry[2] in cache.members and entry[3] in cache.members:
                tied.append(entry)
        chosen = min(tied, key=lambda e: e[1])
        for entry in tied:
            if entry is not chosen:
                heapq.heappush(heap, entry)
        h, _, a, b = chosen
        if check_greedy:
            _assert_greedy(cache, h)
        if cache.min_member(a) > cache.min_member(b):
            a, b = b, a
        sid = cache.merge(a, b)
        steps.append(MergeStep(a, b, sid, h))
        for c in cache.active:
            if c != sid:
                heapq.heappush(heap, (cache.candidate_entropy(sid, c), _tie_key(cache, sid, c), c, sid))
    return Dendrogram(sample_set.ground, tuple(steps))


def _assert_greedy(cache: IntersectionCache, chosen: float):
    ids = cache.active
    saved = cache.evaluations
    for i, a in enumerate(ids):
        for b in ids[i + 1 :]:
            h = cache.candidate_entropy(a, b)
            if h < chosen and not _near(chosen, h, TIE_EPS):
                raise AssertionError(f"pair ({a}, {b}) has entropy {h} < chosen {chosen}")
    cache.evaluations = saved


def dendrogram_from_merges(ground: GroundSet, merges: Sequence[tuple[int, int, float]]) -> Dendrogram:
    """Build a dendrogram from ``(left, right, height)`` triples in merge order."""
    n = ground.n
    steps = tuple(MergeStep(a, b, n + j, h) for j, (a, b, h) in enumerate(merges, start=1))
    return Dendrogram(ground, steps)
