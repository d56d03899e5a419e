"""Partitionings, feature allocations, sample sets and block-size statistics.

Elements are 1-based integers. Blocks are stored as sorted tuples and a
structure's blocks are sorted lexicographically, so two structures with the
same content compare and hash equal. A projection keeps the original element
ids: its ground set is the subset it was projected onto.
"""

from __future__ import annotations

from collections import Counter
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Iterable, Sequence, Union

from .errors import InputError

Block = tuple[int, ...]

PARTITIONING = "partitioning"
FEATURE_ALLOCATION = "feature-allocation"
KINDS = (PARTITIONING, FEATURE_ALLOCATION)


def _as_block(members: Iterable[int]) -> Block:
    block = tuple(sorted(set(int(m) for m in members)))
    if not block:
        raise InputError("blocks must be non-empty")
    return block


def _as_ground(ground) -> tuple[int, ...]:
    if isinstance(ground, int):
        if ground < 1:
            raise InputError(f"ground set size must be positive, got {ground}")
        return tuple(range(1, ground + 1))
    return tuple(sorted(set(int(e) for e in ground)))


@dataclass(frozen=True)
class GroundSet:
    """The elements ``1..n`` with optional display labels."""

    n: int
    labels: tuple[str, ...] | None = None

    def __post_init__(self):
        if self.n < 1:
            raise InputError(f"ground set size must be positive, got {self.n}")
        if self.labels is not None:
            labels = tuple(str(x) for x in self.labels)
            if len(labels) != self.n:
                raise InputError(f"expected {self.n} labels, got {len(labels)}")
            object.__setattr__(self, "labels", labels)

    @property
    def elements(self) -> tuple[int, ...]:
        return tuple(range(1, self.n + 1))

    def label(self, element: int) -> str:
        if self.labels is None:
            return str(element)
        return self.labels[element - 1]


@dataclass(frozen=True)
class Partitioning:
    """Disjoint non-empty blocks covering ``ground``.

    ``ground`` defaults to the union of the blocks. Passing an int ``n``
    means ``1..n``.
    """

    blocks: tuple[Block, ...]
    ground: tuple[int, ...] = None

    kind = PARTITIONING

    def __post_init__(self):
        blocks = tuple(sorted(_as_block(b) for b in self.blocks))
        seen: set[int] = set()
        for b in blocks:
            if seen.intersection(b):
                raise InputError(f"blocks are not disjoint: {blocks}")
            seen.update(b)
        if self.ground is None:
            ground = tuple(sorted(seen))
        else:
            ground = _as_ground(self.ground)
            if set(ground) != seen:
                raise InputError(
                    f"blocks {blocks} do not cover the ground set {ground}"
                )
        if not ground:
            raise InputError("a partitioning needs at least one element")
        object.__setattr__(self, "blocks", blocks)
        object.__setattr__(self, "ground", ground)

    @property
    def n(self) -> int:
        return len(self.ground)

    @property
    def block_sizes(self) -> list[int]:
        return [len(b) for b in self.blocks]

    @classmethod
    def from_labels(cls, labels: Sequence[int], ground: Sequence[int] | None = None):
        """Build from an assignment vector: element ``ground[i]`` gets ``labels[i]``."""
        if ground is None:
            ground = range(1, len(labels) + 1)
        groups: dict[int, list[int]] = {}
        for e, z in zip(ground, labels):
            groups.setdefault(int(z), []).append(int(e))
        return cls(tuple(groups.values()), tuple(ground))


@dataclass(frozen=True)
class FeatureAllocation:
    """A multiset of non-empty blocks over ``ground``; overlap and omission allowed."""

    blocks: tuple[Block, ...]
    ground: tuple[int, ...] = field(default=None)

    kind = FEATURE_ALLOCATION

    def __post_init__(self):
        if self.ground is None:
            raise InputError("a feature allocation needs an explicit ground set")
        blocks = tuple(sorted(_as_block(b) for b in self.blocks))
        ground = _as_ground(self.ground)
        members = set(ground)
        for b in blocks:
            if not members.issuperset(b):
                raise InputError(f"block {b} is not inside the ground set")
        object.__setattr__(self, "blocks", blocks)
        object.__setattr__(self, "ground", ground)

    @property
    def n(self) -> int:
        return len(self.ground)

    @property
    def block_sizes(self) -> list[int]:
        return [len(b) for b in self.blocks]

    def multiplicities(self) -> Counter:
        return Counter(self.blocks)


Structure = Union[Partitioning, FeatureAllocation]


@dataclass(frozen=True)
class SampleSet:
    """T structures of one kind over the common ground set ``1..n``, weighted 1/T."""

    samples: tuple[Structure, ...]
    ground: GroundSet = None

    def __post_init__(self):
        samples = tuple(self.samples)
        if not samples:
            raise InputError("a sample set needs at least one sample")
        ground = self.ground
        if ground is None:
            ground = GroundSet(samples[0].n)
        kinds = {s.kind for s in samples}
        if len(kinds) != 1:
            raise InputError(f"sample set mixes kinds: {sorted(kinds)}")
        elements = ground.elements
        for t, s in enumerate(samples):
            if s.ground != elements:
                raise InputError(f"sample {t + 1} is not over the ground set 1..{ground.n}")
        object.__setattr__(self, "samples", samples)
        object.__setattr__(self, "ground", ground)

    @property
    def n(self) -> int:
        return self.ground.n

    @property
    def kind(self) -> str:
        return self.samples[0].kind

    def __len__(self) -> int:
        return len(self.samples)

    def __iter__(self):
        return iter(self.samples)

    @classmethod
    def of_partitionings(cls, block_lists, n=None, labels=None):
        """Convenience constructor from nested block lists."""
        parts = [Partitioning(tuple(b), n) for b in block_lists]
        n = n if n is not None else parts[0].n
        return cls(tuple(parts), GroundSet(n, labels))

    @classmethod
    def of_feature_allocations(cls, block_lists, n, labels=None):
        allocs = [FeatureAllocation(tuple(b), n) for b in block_lists]
        return cls(tuple(allocs), GroundSet(n, labels))


def _check_subset(structure: Structure, subset) -> frozenset[int]:
    s = frozenset(int(e) for e in subset)
    outside = s.difference(structure.ground)
    if outside:
        raise InputError(f"elements {sorted(outside)} are outside the ground set")
    return s


def project(structure: Structure, subset: Iterable[int]) -> Structure:
    """Non-empty intersections of each block with ``subset``.

    The result is over ``subset`` itself (element ids kept). Feature
    allocations keep duplicate intersections and may project to the empty
    allocation; a partitioning cannot be projected onto the empty set.
    """
    s = _check_subset(structure, subset)
    parts = [tuple(e for e in b if e in s) for b in structure.blocks]
    parts = [p for p in parts if p]
    if isinstance(structure, Partitioning):
        if not s:
            raise InputError("cannot project a partitioning onto the empty set")
        return Partitioning(tuple(parts), tuple(s))
    return FeatureAllocation(tuple(parts), tuple(s))


def cumulative_statistic(structure: Structure) -> tuple[int, ...]:
    """``phi[k-1]`` = number of blocks with at least ``k`` elements, for k = 1..n."""
    n = structure.n
    exact = [0] * (n + 2)
    for size in structure.block_sizes:
        exact[size] += 1
    phi = [0] * (n + 1)
    running = 0
    for k in range(n, 0, -1):
        running += exact[k]
        phi[k] = running
    return tuple(phi[1:])


def exact_block_size_distribution(structure: Structure, k: int) -> int:
    """Number of blocks with exactly ``k`` elements."""
    n = structure.n
    if not 1 <= k <= n:
        raise InputError(f"block size {k} outside 1..{n}")
    phi = cumulative_statistic(structure) + (0,)
    return phi[k - 1] - phi[k]


def block_count(structure: Structure) -> int:
    return len(structure.blocks)


def _check_pair(sample_set: SampleSet, a: int, b: int):
    if a == b:
        raise InputError("pairwise occurrence needs two distinct elements")
    for e in (a, b):
        if not 1 <= e <= sample_set.n:
            raise InputError(f"element {e} outside 1..{sample_set.n}")


def pairwise_occurrence(sample_set: SampleSet, a: int, b: int) -> Fraction:
    """Mean number of blocks holding both ``a`` and ``b``.

    Computed as the second cumulative statistic of the projection onto
    ``{a, b}``; for partitionings this is the co-clustering frequency.
    """
    _check_pair(sample_set, a, b)
    total = 0
    for z in sample_set:
        phi = cumulative_statistic(project(z, (a, b)))
        total += phi[1]
    return Fraction(total, len(sample_set))


def pairwise_occurrence_matrix(sample_set: SampleSet) -> list[list[Fraction]]:
    """Square matrix of pairwise occurrences indexed by element ``0..n-1``.

    The diagonal holds the mean number of blocks containing the element
    (1 for partitionings).
    """
    n, T = sample_set.n, len(sample_set)
    counts = [[0] * n for _ in range(n)]
    for z in sample_set:
        for block in z.blocks:
            for i, a in enumerate(block):
                for b in block[i:]:
                    counts[a - 1][b - 1] += 1
                    if a != b:
                        counts[b - 1][a - 1] += 1
    return [[Fraction(c, T) for c in row] for row in counts]


def mean_cumulative_statistic(sample_set: SampleSet) -> tuple[Fraction, ...]:
    n, T = sample_set.n, len(sample_set)
    sums = [0] * n
    for z in sample_set:
        for k, v in enumerate(cumulative_statistic(z)):
            sums[k] += v
    return tuple(Fraction(s, T) for s in sums)


def block_count_histogram(sample_set: SampleSet) -> dict[int, int]:
    """Number of samples having each block count, sorted by block count."""
    hist = Counter(block_count(z) for z in sample_set)
    return dict(sorted(hist.items()))


def subset_occurrence(sample_set: SampleSet, subset: Iterable[int]) -> Fraction:
    """Mean number of blocks that contain every element of ``subset``."""
    s = frozenset(subset)
    if not s:
        raise InputError("subset occurrence needs a non-empty subset")
    for e in s:
        if not 1 <= e <= sample_set.n:
            raise InputError(f"element {e} outside 1..{sample_set.n}")
    total = sum(sum(1 for b in z.blocks if s.issubset(b)) for z in sample_set)
    return Fraction(total, len(sample_set))
