"""Collapsed Gibbs sampling for an infinite mixture of isotropic Gaussians.

Assignments follow a two-parameter CRP prior, component means have an
isotropic normal prior and observations are normal around their component
mean. Means are integrated out, so the state is the assignment vector plus
per-component counts and coordinate sums.

Variances are variances (not standard deviations) throughout.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from .cod import CrpParams
from .errors import InputError
from .partitions import GroundSet, Partitioning, SampleSet

LOG_2PI = math.log(2.0 * math.pi)
NEW = "new"


@dataclass(frozen=True)
class ModelConfig:
    crp: CrpParams = field(default_factory=lambda: CrpParams(0.05, 0.0))
    prior_mean: tuple[float, ...] = (0.0, 0.0)
    prior_var: float = 5.0
    obs_var: float = 0.15

    def __post_init__(self):
        if not (self.prior_var > 0 and self.obs_var > 0):
            raise InputError("prior and observation variances must be positive")
        object.__setattr__(self, "prior_mean", tuple(float(m) for m in self.prior_mean))

    @property
    def dims(self) -> int:
        return len(self.prior_mean)

    @classmethod
    def for_dims(cls, dims: int, alpha=0.05, d=0.0, prior_var=5.0, obs_var=0.15, prior_mean=0.0):
        return cls(CrpParams(alpha, d), (prior_mean,) * dims, prior_var, obs_var)


@dataclass(frozen=True)
class ChainConfig:
    sweeps: int = 100 + 450 * 5
    burn_in: int = 100
    thin: int = 5
    seed: int = 0
    init: str = "one"  # "one", "singletons" or "prior"

    def __post_init__(self):
        if not 0 <= self.burn_in < self.sweeps:
            raise InputError("burn_in must be non-negative and below sweeps")
        if self.thin < 1:
            raise InputError("thin must be at least 1")
        if self.init not in ("one", "singletons", "prior"):
            raise InputError(f"unknown initialisation {self.init!r}")

    @property
    def kept(self) -> int:
        return len(range(self.burn_in + self.thin - 1, self.sweeps, self.thin))

    @classmethod
    def retaining(cls, samples: int, burn_in=100, thin=5, seed=0, init="one"):
        """Config that keeps exactly ``samples`` sweeps after burn-in."""
        return cls(burn_in + samples * thin, burn_in, thin, seed, init)


@dataclass
class Dataset:
    points: np.ndarray

    def __post_init__(self):
        pts = np.asarray(self.points, dtype=float)
        if pts.ndim == 1:
            pts = pts[:, None]
        if pts.ndim != 2 or pts.shape[0] < 1 or pts.shape[1] < 1:
            raise InputError("points must be a non-empty n x dims matrix")
        if not np.all(np.isfinite(pts)):
            raise InputError("points must be finite")
        self.points = pts

    @property
    def n(self) -> int:
        return self.points.shape[0]

    @property
    def dims(self) -> int:
        return self.points.shape[1]


@dataclass
class GibbsState:
    """Assignments (dense component ids ``0..K-1``) with sufficient statistics."""

    assignments: np.ndarray
    counts: np.ndarray
    sums: np.ndarray
    rng: np.random.Generator

    @property
    def n(self) -> int:
        return len(self.assignments)

    @property
    def K_plus(self) -> int:
        return int(np.count_nonzero(self.counts))

    @classmethod
    def from_assignments(cls, assignments, data: Dataset, rng: np.random.Generator):
        z = np.asarray(assignments)
        _, dense = np.unique(z, return_inverse=True)
        K = int(dense.max()) + 1
        counts = np.bincount(dense, minlength=K).astype(np.int64)
        sums = np.zeros((K, data.dims))
        np.add.at(sums, dense, data.points)
        return cls(dense.astype(np.int64), counts, sums, rng)

    def to_partitioning(self) -> Partitioning:
        return Partitioning.from_labels(self.assignments.tolist())

    def check_consistency(self, data: Dataset) -> None:
        """Raise ``AssertionError`` if counts or sums disagree with the assignments."""
        K = len(self.counts)
        if self.assignments.min() != 0 or self.assignments.max() != K - 1:
            raise AssertionError("component ids are not dense")
        if not np.array_equal(np.bincount(self.assignments, minlength=K), self.counts):
            raise AssertionError("component counts disagree with assignments")
        if np.any(self.counts == 0):
            raise AssertionError("empty component kept in state")
        sums = np.zeros_like(self.sums)
        np.add.at(sums, self.assignments, data.points)
        if not np.allclose(sums, self.sums, rtol=1e-12, atol=1e-9):
            raise AssertionError("component sums disagree with assignments")


def _predictive_params(counts, sums, config: ModelConfig):
    prior_mean = np.asarray(config.prior_mean)
    v = 1.0 / (1.0 / config.prior_var + counts / config.obs_var)
    m = v[:, None] * (prior_mean / config.prior_var + sums / config.obs_var)
    return m, v + config.obs_var


def _normal_logpdf(x, mean, var, dims):
    sq = np.sum((x - mean) ** 2, axis=-1)
    return -0.5 * (dims * (LOG_2PI + np.log(var)) + sq / var)


def log_predictive(state: GibbsState, config: ModelConfig, point, component) -> float:
    """Log density of ``point`` under a component's posterior predictive.

    ``component`` is a component id or ``"new"``. The state must already
    exclude ``point`` itself.
    """
    x = np.asarray(point, dtype=float)
    dims = config.dims
    if component == NEW:
        return float(_normal_logpdf(x, np.asarray(config.prior_mean), config.prior_var + config.obs_var, dims))
    k = int(component)
    if not 0 <= k < len(state.counts) or state.counts[k] == 0:
        raise RuntimeError(f"component {component} is empty or missing")
    m, var = _predictive_params(state.counts[k : k + 1], state.sums[k : k + 1], config)
    return float(_normal_logpdf(x, m[0], var[0], dims))


def _remove(state: GibbsState, i: int, x: np.ndarray):
    k = state.assignments[i]
    state.counts[k] -= 1
    state.sums[k] -= x
    if state.counts[k] == 0:
        last = len(state.counts) - 1
        if k != last:
            state.assignments[state.assignments == last] = k
            state.counts[k] = state.counts[last]
            state.sums[k] = state.sums[last]
        state.counts = state.counts[:last]
        state.sums = state.sums[:last]
    state.assignments[i] = -1


def _add(state: GibbsState, i: int, x: np.ndarray, k: int):
    if k == len(state.counts):
        state.counts = np.append(state.counts, 0)
        state.sums = np.vstack([state.sums, np.zeros((1, state.sums.shape[1]))])
    state.counts[k] += 1
    state.sums[k] += x
    state.assignments[i] = k


def conditional_probabilities(state: GibbsState, config: ModelConfig, x) -> np.ndarray:
    """Normalised probabilities of each existing component, then a new one.

    The state must exclude ``x``. The common ``1/(n-1+alpha)`` factor
    cancels in the normalisation and is left out.
    """
    a, d = config.crp.alpha, config.crp.d
    K = len(state.counts)
    log_new = _normal_logpdf(
        x, np.asarray(config.prior_mean), config.prior_var + config.obs_var, config.dims
    )
    if K == 0:
        return np.ones(1)
    m, var = _predictive_params(state.counts, state.sums, config)
    logw = np.empty(K + 1)
    logw[:K] = np.log(state.counts - d) + _normal_logpdf(x, m, var, config.dims)
    w_new = a + d * K
    logw[K] = math.log(w_new) + log_new if w_new > 0 else -np.inf
    logw -= logw.max()
    p = np.exp(logw)
    p /= p.sum()
    if not (np.all(np.isfinite(p)) and abs(p.sum() - 1.0) < 1e-12):
        raise FloatingPointError("conditional probabilities failed to normalise")
    return p


def gibbs_sweep(state: GibbsState, config: ModelConfig, data: Dataset) -> GibbsState:
    """Resample every assignment once, in element order. Mutates and returns ``state``."""
    pts = data.points
    for i in range(data.n):
        x = pts[i]
        _remove(state, i, x)
        p = conditional_probabilities(state, config, x)
        k = int(np.searchsorted(np.cumsum(p), state.rng.random() * p.sum(), side="right"))
        _add(state, i, x, min(k, len(p) - 1))
    return state


def sample_crp_labels(params: CrpParams, n: int, rng: np.random.Generator) -> np.ndarray:
    """Sequential CRP seating; returns block labels in order of first appearance."""
    labels = np.empty(n, dtype=np.int64)
    sizes: list[int] = []
    a, d = params.alpha, params.d
    for i in range(n):
        K = len(sizes)
        total = i + a  # equals sum of weights below
        u = rng.random() * total
        choice = K
        acc = 0.0
        for j, s in enumerate(sizes):
            acc += s - d
            if u < acc:
                choice = j
                break
        if choice == K:
            sizes.append(1)
        else:
            sizes[choice] += 1
        labels[i] = choice
    return labels


def sample_crp_prior(params: CrpParams, n: int, seed=None) -> Partitioning:
    """One draw from the CRP prior over partitionings of ``1..n``."""
    if n < 1:
        raise InputError("n must be positive")
    rng = seed if isinstance(seed, np.random.Generator) else np.random.default_rng(seed)
    return Partitioning.from_labels(sample_crp_labels(params, n, rng).tolist())


def sample_crp_batch(params: CrpParams, n: int, draws: int, rng: np.random.Generator) -> np.ndarray:
    """``draws x n`` label matrix of independent CRP draws, seated in parallel."""
    a, d = params.alpha, params.d
    labels = np.zeros((draws, n), dtype=np.int64)
    sizes = np.zeros((draws, n + 1))
    K = np.zeros(draws, dtype=np.int64)
    rows = np.arange(draws)
    for i in range(n):
        w = np.where(sizes > 0, sizes - d, 0.0)
        w[rows, K] = a + d * K
        if i == 0:
            w[:, 0] = 1.0
        cum = np.cumsum(w, axis=1)
        u = rng.random(draws) * cum[:, -1]
        choice = (cum <= u[:, None]).sum(axis=1)
        choice = np.minimum(choice, K)
        labels[:, i] = choice
        sizes[rows, choice] += 1
        K += choice == K
    return labels


def init_state(data: Dataset, config: ModelConfig, chain: ChainConfig, rng) -> GibbsState:
    if chain.init == "one":
        z = np.zeros(data.n, dtype=np.int64)
    elif chain.init == "singletons":
        z = np.arange(data.n)
    else:
        z = sample_crp_labels(config.crp, data.n, rng)
    return GibbsState.from_assignments(z, data, rng)


def run_chain(config: ModelConfig, chain: ChainConfig, data: Dataset, labels=None) -> SampleSet:
    """Run a chain and return the kept sweeps as a partitioning sample set."""
    if config.dims != data.dims:
        raise InputError(f"model has {config.dims} dims but data has {data.dims}")
    rng = np.random.default_rng(chain.seed)
    state = init_state(data, config, chain, rng)
    kept = []
    for sweep in range(chain.sweeps):
        gibbs_sweep(state, config, data)
        if sweep >= chain.burn_in and (sweep - chain.burn_in + 1) % chain.thin == 0:
            kept.append(state.to_partitioning())
    return SampleSet(tuple(kept), GroundSet(data.n, labels))


def synthetic_clusters(seed: int = 0, per_cluster: int = 10, spread: float = 0.35) -> tuple[Dataset, list[int]]:
    """Three isotropic planar clusters of ``per_cluster`` points each.

    Returns the dataset and the true cluster (0, 1, 2) of every point; points
    are ordered cluster by cluster.
    """
    rng = np.random.default_rng(seed)
    centers = np.array([[-3.0, -1.5], [3.0, -1.5], [0.0, 3.0]])
    pts = np.concatenate([c + spread * rng.standard_normal((per_cluster, 2)) for c in centers])
    truth = [k for k in range(len(centers)) for _ in range(per_cluster)]
    return Dataset(pts), truth
