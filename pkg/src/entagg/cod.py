"""Cumulative occurrence distribution (COD) matrices.

Row ``i`` of a COD matrix is the cumulative statistic of a partitioning
projected onto the first ``i`` elements of a permutation. Sample-derived
matrices are exact (``Fraction``); the closed-form CRP matrix is float.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Sequence

import numpy as np

from .errors import EquilibriumError, InputError, UnsupportedKindError
from .partitions import PARTITIONING, Partitioning, SampleSet

EQUILIBRIUM_ATOL = 1e-9


@dataclass(frozen=True)
class CrpParams:
    """Two-parameter CRP: concentration ``alpha``, discount ``d``."""

    alpha: float
    d: float = 0.0

    def __post_init__(self):
        if not (0.0 <= self.d < 1.0):
            raise InputError(f"discount must satisfy 0 <= d < 1, got {self.d}")
        if not self.alpha > -self.d:
            raise InputError(f"concentration must exceed -d, got alpha={self.alpha}")


def check_permutation(sigma: Sequence[int], n: int) -> tuple[int, ...]:
    order = tuple(int(e) for e in sigma)
    if sorted(order) != list(range(1, n + 1)):
        raise InputError(f"{order} is not a permutation of 1..{n}")
    return order


@dataclass(frozen=True)
class CodMatrix:
    """Lower-triangular matrix; ``rows[i-1]`` holds entries ``k = 1..i``."""

    rows: tuple[tuple, ...]

    def __post_init__(self):
        rows = tuple(tuple(r) for r in self.rows)
        for i, r in enumerate(rows, start=1):
            if len(r) != i:
                raise InputError(f"row {i} has {len(r)} entries, expected {i}")
        object.__setattr__(self, "rows", rows)

    @property
    def n(self) -> int:
        return len(self.rows)

    def row(self, i: int) -> tuple:
        return self.rows[i - 1]

    def entry(self, i: int, k: int):
        """Entry at 1-based ``(i, k)``; zero above the diagonal."""
        if k > i:
            return 0
        return self.rows[i - 1][k - 1]

    def row_sums(self) -> list:
        return [sum(r) for r in self.rows]

    def to_array(self) -> np.ndarray:
        out = np.zeros((self.n, self.n))
        for i, r in enumerate(self.rows):
            out[i, : i + 1] = [float(v) for v in r]
        return out

    def is_exact(self) -> bool:
        return all(isinstance(v, (int, Fraction)) for r in self.rows for v in r)


def cod_matrix(z: Partitioning, sigma: Sequence[int]) -> CodMatrix:
    """COD matrix of one partitioning under a permutation of its ground set."""
    if not isinstance(z, Partitioning):
        raise UnsupportedKindError("COD matrices are defined for partitionings")
    order = tuple(int(e) for e in sigma)
    if sorted(order) != list(z.ground):
        raise InputError(f"{order} is not a permutation of the ground set")
    block_of = {e: j for j, b in enumerate(z.blocks) for e in b}
    sizes = [0] * len(z.blocks)
    # at_least[k] = number of blocks whose current size is >= k
    at_least = [0] * (len(order) + 2)
    rows = []
    for i, e in enumerate(order, start=1):
        j = block_of[e]
        sizes[j] += 1
        at_least[sizes[j]] += 1
        rows.append(tuple(at_least[1 : i + 1]))
    return CodMatrix(tuple(rows))


def expected_cod(sample_set: SampleSet, sigma: Sequence[int]) -> CodMatrix:
    """Entrywise mean of the samples' COD matrices, in exact arithmetic."""
    if sample_set.kind != PARTITIONING:
        raise UnsupportedKindError("expected COD needs a partitioning sample set")
    order = check_permutation(sigma, sample_set.n)
    T = len(sample_set)
    sums = [[0] * i for i in range(1, sample_set.n + 1)]
    for z in sample_set:
        for acc, row in zip(sums, cod_matrix(z, order).rows):
            for k, v in enumerate(row):
                acc[k] += v
    return CodMatrix(tuple(tuple(Fraction(v, T) for v in r) for r in sums))


def _crp_table(params: CrpParams, n: int) -> np.ndarray:
    """Full ``(n+1) x (n+2)`` table of the recursion, rows ``i = 0..n``, cols ``k = 0..n+1``."""
    a, d = params.alpha, params.d
    delta = np.zeros((n + 1, n + 2))
    # row 1 is (1, 0, ...) for every admissible pair; starting there avoids 0/0 at alpha = 0
    delta[1, 1] = 1.0
    for i in range(1, n):
        prev = delta[i]
        nxt = delta[i + 1]
        nxt[1] = prev[1] + (a + d * prev[1]) / (i + a)
        k = np.arange(2, n + 2)
        nxt[2:] = prev[2:] + (k - 1 - d) * (prev[1:-1] - prev[2:]) / (i + a)
    return delta


def crp_expected_cod(params: CrpParams, n: int) -> CodMatrix:
    """Expected COD matrix of an ``n``-element CRP partitioning.

    The matrix does not depend on the permutation. Computed by the forward
    recursion over rows starting from an all-zero row 0.
    """
    if n < 1:
        raise InputError(f"n must be positive, got {n}")
    if not isinstance(params, CrpParams):
        params = CrpParams(*params)
    table = _crp_table(params, n)
    return CodMatrix(tuple(tuple(float(v) for v in table[i, 1 : i + 1]) for i in range(1, n + 1)))


def _residual_step(dense: np.ndarray, params: CrpParams, first: bool):
    """Both sides of the difference equation on the lower triangle.

    ``dense`` is indexed ``[i-1, k-1]``. Returns (row_form, column_form) with
    one fewer row. Column ``k = 1`` uses the explicit boundary: the constant
    column ``-alpha/d`` on the first step, which contributes ``alpha + d*x``,
    and a zero column on later steps, so ``d = 0`` needs no special case.
    """
    a, d = params.alpha, params.d
    r = dense.shape[0]
    i = np.arange(1, r)[:, None]
    k = np.arange(1, r)[None, :]
    lower = k <= i
    cur = dense[:-1, : r - 1]
    row_form = (dense[1:, : r - 1] - cur) * (i + a)
    left = np.zeros_like(cur)
    left[:, 1:] = cur[:, :-1]
    col_form = (left - cur) * (k - 1 - d)
    col_form[:, 0] = (a if first else 0.0) + d * cur[:, 0]
    return np.where(lower, row_form, 0.0), np.where(lower, col_form, 0.0)


def equilibrium_discrepancy(delta: CodMatrix, params: CrpParams, m_steps: int) -> list[float]:
    """Max absolute disagreement between the two residual forms at each step."""
    return _iterate_residuals(delta, params, m_steps)[1]


def _iterate_residuals(delta, params, m_steps):
    if m_steps < 0:
        raise InputError("m_steps must be non-negative")
    if m_steps >= delta.n:
        raise InputError(f"{m_steps} steps need a matrix with more than {m_steps} rows")
    dense = delta.to_array()
    gaps, where = [], []
    for step in range(m_steps):
        row_form, col_form = _residual_step(dense, params, first=step == 0)
        diff = np.abs(row_form - col_form)
        if diff.size:
            i, k = np.unravel_index(np.argmax(diff), diff.shape)
            gaps.append(float(diff[i, k]))
            where.append((int(i) + 1, int(k) + 1))
        else:
            gaps.append(0.0)
            where.append(None)
        dense = row_form
    return dense, gaps, where


def crp_residual_matrix(
    delta: CodMatrix, params: CrpParams, m_steps: int, atol: float = EQUILIBRIUM_ATOL
) -> CodMatrix:
    """Iterate the residual map ``m_steps`` times, checking both forms agree.

    Each step maps ``D`` to ``(D[i+1,k] - D[i,k]) (i + alpha)`` and checks it
    against ``(D[i,k-1] - D[i,k]) (k - 1 - d)``; one row is lost per step.
    Raises ``EquilibriumError`` when they differ by more than ``atol``,
    which means ``delta`` is not the CRP expected COD for ``params``.
    """
    if m_steps == 0:
        return delta
    dense, gaps, where = _iterate_residuals(delta, params, m_steps)
    for step, (gap, at) in enumerate(zip(gaps, where), start=1):
        if not gap <= atol:
            raise EquilibriumError(
                f"residual forms disagree by {gap:.3g} at (i, k) = {at}, step {step}",
                step=step,
                discrepancy=gap,
                where=at,
            )
    r = dense.shape[0]
    return CodMatrix(tuple(tuple(float(v) for v in dense[i, : i + 1]) for i in range(r)))


def harmonic_block_count(params: CrpParams, i: int) -> float:
    """Closed form of the first column for ``d = 0``: sum of alpha/(j+alpha), j < i."""
    if params.d != 0:
        raise InputError("the harmonic closed form holds for d = 0 only")
    return math.fsum(params.alpha / (j + params.alpha) for j in range(i))
