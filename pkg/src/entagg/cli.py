"""Command-line interface.

Exit status is 0 on success, 1 on invalid arguments or data and 2 when an
input file cannot be parsed.
"""

from __future__ import annotations

import argparse
import os
import sys
from concurrent.futures import ProcessPoolExecutor

import numpy as np

from . import io as eaio
from .agglomeration import entropy_agglomeration, leaf_order
from .cod import CrpParams, cod_matrix, crp_expected_cod, expected_cod
from .entropy import entropy_sequence
from .errors import InputError, ParseError
from .gibbs import ChainConfig, Dataset, ModelConfig, run_chain, sample_crp_batch, synthetic_clusters
from .montecarlo import mc_cod_moments
from .partitions import (
    PARTITIONING,
    SampleSet,
    block_count_histogram,
    mean_cumulative_statistic,
    pairwise_occurrence_matrix,
)
from .render import RenderSpec, format_value, render_dendrogram, render_matrix


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(1, f"{self.prog}: error: {message}\n")


def worker_count() -> int:
    """Worker cap from ``EA_THREADS``, defaulting to the available cores."""
    raw = os.environ.get("EA_THREADS")
    if raw is None or raw == "":
        return os.cpu_count() or 1
    try:
        value = int(raw)
    except ValueError:
        raise InputError(f"EA_THREADS must be a positive integer, got {raw!r}") from None
    if value < 1:
        raise InputError(f"EA_THREADS must be a positive integer, got {raw!r}")
    return value


def parse_perm(text: str) -> list[int]:
    try:
        return [int(tok) for tok in text.replace(",", " ").split()]
    except ValueError:
        raise InputError(f"permutation must list integers, got {text!r}") from None


def _emit(text: str, out):
    if out in (None, "-"):
        sys.stdout.write(text)
        sys.stdout.flush()
    else:
        with open(out, "w", encoding="utf-8", newline="") as fh:
            fh.write(text)


def _chain_job(args):
    model, chain, points = args
    return run_chain(model, chain, Dataset(points))


def cmd_synth(args):
    data, truth = synthetic_clusters(args.seed, args.per_cluster, args.spread)
    lines = ["x1,x2"] + [f"{a!r},{b!r}" for a, b in data.points.tolist()]
    _emit("\n".join(lines) + "\n", args.out)
    if args.truth_out:
        _emit("\n".join(str(k) for k in truth) + "\n", args.truth_out)
    return 0


def cmd_sample(args):
    data = eaio.read_points_csv(args.data)
    model = ModelConfig.for_dims(data.dims, args.alpha, args.d, args.prior_var, args.obs_var)
    sweeps = args.sweeps if args.sweeps is not None else args.burn_in + 450 * args.thin
    chains = [
        ChainConfig(sweeps, args.burn_in, args.thin, args.seed + c, args.init) for c in range(args.chains)
    ]
    if args.chains == 1:
        sets = [run_chain(model, chains[0], data)]
    else:
        with ProcessPoolExecutor(max_workers=min(worker_count(), args.chains)) as pool:
            sets = list(pool.map(_chain_job, [(model, c, data.points) for c in chains]))
    merged = SampleSet(tuple(z for s in sets for z in s), sets[0].ground)
    _emit(eaio.dumps_sample_set(merged), args.out)
    return 0


def cmd_agglomerate(args):
    samples = eaio.read_sample_set(args.samples)
    dendro = entropy_agglomeration(samples)
    spec = RenderSpec(args.format, args.collapse_zero, args.precision)
    _emit(render_dendrogram(dendro, spec), args.out)
    if args.order_out:
        _emit(" ".join(str(e) for e in leaf_order(dendro)) + "\n", args.order_out)
    return 0


def cmd_stats(args):
    samples = eaio.read_sample_set(args.samples)
    p = args.precision
    out = ["# mean cumulative statistic"]
    out.append(" ".join(f"{float(v):.{p}f}" for v in mean_cumulative_statistic(samples)))
    out.append("# block count histogram")
    out.extend(f"{k} {c}" for k, c in block_count_histogram(samples).items())
    out.append("# pairwise occurrence")
    order = None
    if args.order:
        order = leaf_order(entropy_agglomeration(samples))
    out.append(render_matrix(pairwise_occurrence_matrix(samples), order, precision=p).rstrip("\n"))
    if args.perm:
        perm = parse_perm(args.perm)
        if samples.kind != PARTITIONING:
            raise InputError("COD matrices need a partitioning sample set")
        cod = cod_matrix(samples.samples[0], perm) if len(samples) == 1 else expected_cod(samples, perm)
        out.append(f"# COD ({' '.join(map(str, perm))})")
        out.append(render_matrix(cod, precision=p).rstrip("\n"))
    _emit("\n".join(out) + "\n", args.out)
    return 0


def cmd_crp_cod(args):
    params = CrpParams(args.alpha, args.d)
    delta = crp_expected_cod(params, args.n)
    p = args.precision
    lines = [" ".join(format_value(v, p) for v in r) for r in delta.rows]
    status = 0
    if args.mc_check:
        rng = np.random.default_rng(args.seed)
        labels = sample_crp_batch(params, args.n, args.mc_check, rng)
        mean, se = mc_cod_moments(labels)
        exact = delta.to_array()
        mask = np.tril(np.ones_like(exact, dtype=bool))
        worst = float(np.max((np.abs(mean - exact) - 3 * se)[mask]))
        ok = worst <= 1e-12
        lines.append(
            f"# mc-check draws={args.mc_check} seed={args.seed} "
            f"max(|mc-exact|-3se)={worst:.3g} {'pass' if ok else 'FAIL'}"
        )
        status = 0 if ok else 1
    _emit("\n".join(lines) + "\n", args.out)
    return status


def cmd_entropy_seq(args):
    samples = eaio.read_sample_set(args.samples)
    seq = entropy_sequence(samples, parse_perm(args.perm))
    lines = [f"{e} {h:.{args.precision}f}" for e, h in zip(seq.sigma, seq.values)]
    _emit("\n".join(lines) + "\n", args.out)
    return 0


def cmd_incidence(args):
    samples = eaio.read_feature_allocation_incidence(args.data, args.min_membership)
    _emit(eaio.dumps_sample_set(samples), args.out)
    return 0


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="entagg", description="Entropy agglomeration of sampled partitionings.")
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)

    p = sub.add_parser("synth", help="three-cluster planar test data as CSV")
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--per-cluster", type=int, default=10)
    p.add_argument("--spread", type=float, default=0.35)
    p.add_argument("--truth-out")
    p.add_argument("--out", default="-")
    p.set_defaults(func=cmd_synth)

    p = sub.add_parser("sample", help="collapsed Gibbs sampling of partitionings")
    p.add_argument("--data", required=True, help="points CSV, '-' for stdin")
    p.add_argument("--alpha", type=float, default=0.05)
    p.add_argument("--d", type=float, default=0.0)
    p.add_argument("--prior-var", type=float, default=5.0)
    p.add_argument("--obs-var", type=float, default=0.15)
    p.add_argument("--sweeps", type=int, help="default: burn-in + 450 * thin")
    p.add_argument("--burn-in", type=int, default=100)
    p.add_argument("--thin", type=int, default=5)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--chains", type=int, default=1, help="independent chains, seeds seed..seed+chains-1")
    p.add_argument("--init", choices=("one", "singletons", "prior"), default="one")
    p.add_argument("--out", default="-")
    p.set_defaults(func=cmd_sample)

    p = sub.add_parser("agglomerate", help="run EA and render the dendrogram")
    p.add_argument("--samples", required=True)
    p.add_argument("--format", choices=("text", "newick", "svg"), default="text")
    p.add_argument("--collapse-zero", action="store_true")
    p.add_argument("--precision", type=int, default=6)
    p.add_argument("--order-out", help="write the leaf order here")
    p.add_argument("--out", default="-")
    p.set_defaults(func=cmd_agglomerate)

    p = sub.add_parser("stats", help="cumulative statistics, histogram, pairwise and COD matrices")
    p.add_argument("--samples", required=True)
    p.add_argument("--perm", help="permutation for the COD matrix, e.g. 1,3,6,7,2,4,5")
    p.add_argument("--order", action="store_true", help="order the pairwise matrix by EA leaves")
    p.add_argument("--precision", type=int, default=3)
    p.add_argument("--out", default="-")
    p.set_defaults(func=cmd_stats)

    p = sub.add_parser("crp-cod", help="closed-form expected COD matrix of a CRP")
    p.add_argument("--alpha", type=float, required=True)
    p.add_argument("--d", type=float, default=0.0)
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--mc-check", type=int, metavar="DRAWS", help="compare with DRAWS prior samples")
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--precision", type=int, default=6)
    p.add_argument("--out", default="-")
    p.set_defaults(func=cmd_crp_cod)

    p = sub.add_parser("entropy-seq", help="expected projection entropies along a permutation")
    p.add_argument("--samples", required=True)
    p.add_argument("--perm", required=True)
    p.add_argument("--precision", type=int, default=6)
    p.add_argument("--out", default="-")
    p.set_defaults(func=cmd_entropy_seq)

    p = sub.add_parser("incidence", help="0/1 incidence CSV to a feature-allocation sample set")
    p.add_argument("--data", required=True)
    p.add_argument("--min-membership", type=int, default=0)
    p.add_argument("--out", default="-")
    p.set_defaults(func=cmd_incidence)
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return exc.code if isinstance(exc.code, int) else 1
    try:
        return args.func(args)
    except ParseError as exc:
        print(f"entagg: parse error: {exc}", file=sys.stderr)
        return 2
    except InputError as exc:
        print(f"entagg: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
