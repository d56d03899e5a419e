"""Print every quantity of the three-partitioning toy example over seven elements."""

from entagg import (
    SampleSet,
    cumulative_statistic,
    entropy,
    entropy_agglomeration,
    entropy_sequence,
    expected_cod,
    leaf_order,
)
from entagg.partitions import mean_cumulative_statistic, pairwise_occurrence_matrix
from entagg.render import RenderSpec, render_dendrogram, render_matrix

SAMPLES = [
    [[1, 3, 6, 7], [2], [4, 5]],
    [[1, 3, 6], [2, 7], [4, 5]],
    [[1, 2, 3, 6, 7], [4, 5]],
]


def main() -> None:
    e3 = SampleSet.of_partitionings(SAMPLES)
    for t, z in enumerate(e3, start=1):
        print(f"Z{t}: blocks={z.blocks} phi={cumulative_statistic(z)} H={entropy(z):.6f}")
    print("mean phi:", " ".join(f"{float(v):.3f}" for v in mean_cumulative_statistic(e3)))
    for sigma in [(1, 2, 3, 4, 5, 6, 7), (1, 3, 6, 7, 2, 4, 5)]:
        print(f"\nexpected COD, sigma={sigma}")
        print(render_matrix(expected_cod(e3, sigma), precision=3), end="")
        seq = entropy_sequence(e3, sigma)
        print("entropy sequence:", " ".join(f"{h:.4f}" for h in seq.values))
    tree = entropy_agglomeration(e3)
    print("\nmerges:")
    for s in tree.steps:
        print(f"  {sorted(tree.members(s.left))} + {sorted(tree.members(s.right))} -> {s.height:.6f}")
    print("\ndendrogram (zero-height subtrees collapsed):")
    print(render_dendrogram(tree, RenderSpec("text", collapse_zero_height=True)), end="")
    order = leaf_order(tree)
    print("\npairwise occurrence in leaf order", order)
    print(render_matrix(pairwise_occurrence_matrix(e3), order, precision=3), end="")


if __name__ == "__main__":
    main()
