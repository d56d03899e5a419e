"""Element-based entropy of partitionings and feature allocations.

Every block ``B`` gives each of its elements ``log(n / |B|)`` nats of
information, where ``n`` is the size of the ground set. Entropy is the
average of that over elements, weighted by block size. For partitionings
this is the Shannon entropy of the block-size proportions; for feature
allocations the same sum is taken over the multiset of blocks and is not
bounded by ``log n``.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Iterable, Sequence

from .cod import check_permutation
from .errors import InputError
from .partitions import SampleSet, Structure, cumulative_statistic, project, subset_occurrence

__all__ = [
    "EntropySequence",
    "per_element_information",
    "size_entropy",
    "entropy",
    "entropy_from_statistic",
    "entropy_coefficients",
    "projection_entropy",
    "expected_projection_entropy",
    "entropy_sequence",
    "subset_occurrence",
]


def per_element_information(base_n: int, block_size: int) -> float:
    """``log(base_n / block_size)``: the integral of ``1/s`` from ``block_size`` to ``base_n``."""
    if not 1 <= block_size <= base_n:
        raise InputError(f"block size {block_size} must lie in 1..{base_n}")
    return math.log(base_n / block_size)


def size_entropy(sizes: Iterable[int], base: int) -> float:
    """Weighted information of blocks with the given sizes over a base of ``base``.

    Summed with ``math.fsum`` so the result does not depend on the order of
    ``sizes``; the agglomeration cache relies on this to match direct
    evaluation bit for bit.
    """
    return math.fsum((c / base) * math.log(base / c) for c in sizes)


def entropy(structure: Structure) -> float:
    """Entropy in nats, summed over blocks (with multiplicity)."""
    return size_entropy(structure.block_sizes, structure.n)


def entropy_coefficients(n: int) -> list[float]:
    """``c[k-1]`` such that ``H = sum_k c[k-1] * phi_k`` for structures over ``n`` elements."""
    g = [0.0] + [(k / n) * math.log(n / k) for k in range(1, n + 1)]
    return [g[k] - g[k - 1] for k in range(1, n + 1)]


def entropy_from_statistic(phi: Sequence[int], n: int | None = None) -> float:
    """Entropy from the cumulative statistic, taking ``phi_{n+1} = 0``."""
    n = len(phi) if n is None else n
    padded = list(phi) + [0]
    terms = []
    for k in range(1, n + 1):
        exact = padded[k - 1] - padded[k]
        if exact:
            terms.append(exact * (k / n) * math.log(n / k))
    return math.fsum(terms)


def projection_entropy(structure: Structure, subset: Iterable[int]) -> float:
    """Entropy of the projection onto ``subset``, with base ``|subset|``.

    An empty feature-allocation projection has entropy 0.
    """
    s = frozenset(subset)
    if not s:
        raise InputError("projection entropy needs a non-empty subset")
    return size_entropy(project(structure, s).block_sizes, len(s))


def expected_projection_entropy(sample_set: SampleSet, subset: Iterable[int]) -> float:
    s = frozenset(subset)
    if not s:
        raise InputError("projection entropy needs a non-empty subset")
    values = [projection_entropy(z, s) for z in sample_set]
    return math.fsum(values) / len(values)


@dataclass(frozen=True)
class EntropySequence:
    values: tuple[float, ...]
    sigma: tuple[int, ...]

    def __getitem__(self, i: int) -> float:
        """1-based access: ``seq[i]`` is the entropy of the first ``i`` elements."""
        return self.values[i - 1]

    def __len__(self) -> int:
        return len(self.values)


def entropy_sequence(sample_set: SampleSet, sigma: Sequence[int]) -> EntropySequence:
    order = check_permutation(sigma, sample_set.n)
    values = tuple(
        expected_projection_entropy(sample_set, order[:i]) for i in range(1, len(order) + 1)
    )
    return EntropySequence(values, order)


def statistic_mass(structure: Structure) -> int:
    """Sum of the cumulative statistic; equals ``n`` for partitionings only."""
    return sum(cumulative_statistic(structure))
