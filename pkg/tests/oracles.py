"""Independent reference implementations used only by the tests.

None of these reuse the package's projection, cache or statistic code.
"""

import math
from itertools import combinations


def conjugate(sizes):
    """Conjugate of an integer partition given as block sizes (any order)."""
    sizes = sorted(sizes, reverse=True)
    if not sizes:
        return []
    return [sum(1 for s in sizes if s >= k) for k in range(1, sizes[0] + 1)]


def projected_sizes(blocks, subset):
    subset = set(subset)
    sizes = []
    for b in blocks:
        c = len(subset.intersection(b))
        if c:
            sizes.append(c)
    return sizes


def subset_entropy(blocks, subset):
    base = len(subset)
    return math.fsum((c / base) * math.log(base / c) for c in projected_sizes(blocks, subset))


def mean_subset_entropy(sample_blocks, subset):
    return math.fsum(subset_entropy(b, subset) for b in sample_blocks) / len(sample_blocks)


def brute_force_ea(sample_blocks, n, eps=1e-12):
    """EA recomputing every projection from scratch; returns [(members_a, members_b, height)].

    The pair scan applies the same tie rule as the library: entropies within
    ``eps * max(1, best)`` of the minimum tie and the lexicographically
    smallest (min element, other min element) wins.
    """
    psi = [frozenset([e]) for e in range(1, n + 1)]
    merges = []
    while len(psi) > 1:
        scored = []
        for a, b in combinations(psi, 2):
            h = mean_subset_entropy(sample_blocks, a | b)
            ma, mb = min(a), min(b)
            scored.append((h, (min(ma, mb), max(ma, mb)), a, b))
        best = min(s[0] for s in scored)
        tied = [s for s in scored if s[0] - best <= eps * max(1.0, abs(best))]
        h, _, a, b = min(tied, key=lambda s: s[1])
        if min(a) > min(b):
            a, b = b, a
        merges.append((a, b, h))
        psi = [s for s in psi if s is not a and s is not b] + [a | b]
    return merges


def enumerate_set_partitions(elements):
    elements = list(elements)
    if not elements:
        yield []
        return
    first, rest = elements[0], elements[1:]
    for part in enumerate_set_partitions(rest):
        for i in range(len(part)):
            yield part[:i] + [[first] + part[i]] + part[i + 1 :]
        yield [[first]] + part


def crp_probability(blocks, alpha, d):
    """Exchangeable partition probability function of the two-parameter CRP."""
    n = sum(len(b) for b in blocks)
    K = len(blocks)
    num = 1.0
    for j in range(1, K):
        num *= alpha + j * d
    for b in blocks:
        for j in range(1, len(b)):
            num *= j - d
    den = 1.0
    for j in range(1, n):
        den *= alpha + j
    return num / den
