"""Seeded permutation test for the correlation between two aligned series.

The observed Pearson correlation is compared against the distribution
obtained by correlating one series with ``n_perm`` uniform random
permutations of the other. Each permutation is drawn from its own
counter-based substream keyed by ``(seed, index)``, so permutation ``k``
is the same bit pattern no matter how many workers evaluate the batch or
in what order — results are reproducible and order-independent by
construction.

Critical values follow the sorted-position convention: with the permuted
correlations sorted ascending, the lower 5% critical value sits at
1-indexed position ``ceil(0.05 * n_perm)`` and the upper at
``floor(0.95 * n_perm)`` (positions 500 and 9500 for the default 10000).
p-values use the add-one rule ``(count + 1) / (n_perm + 1)`` so they are
never exactly zero.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .errors import NumericError, ValidationError

__all__ = [
    "PermutationResult",
    "pearson",
    "nth_permutation",
    "perm_test",
]

TAILS = ("lower", "upper", "two")

_SUMMARY_QUANTILES = (
    ("min", 0.0),
    ("q01", 0.01),
    ("q05", 0.05),
    ("q25", 0.25),
    ("q50", 0.50),
    ("q75", 0.75),
    ("q95", 0.95),
    ("q99", 0.99),
    ("max", 1.0),
)

_MASK64 = (1 << 64) - 1


@dataclass(frozen=True)
class PermutationResult:
    """Outcome of a permutation test at the 5% level."""

    r_obs: float
    n: int
    n_perm: int
    seed: int
    tail: str
    r_sorted: np.ndarray
    r_sorted_summary: dict[str, float]
    r_crit_lower: float
    r_crit_upper: float
    p_lower: float
    p_upper: float
    p_two_sided: float
    decision_5pct: str

    def __post_init__(self):
        arr = np.asarray(self.r_sorted, dtype=float)
        arr.flags.writeable = False
        object.__setattr__(self, "r_sorted", arr)


def _unit_residual(x: np.ndarray, name: str) -> np.ndarray:
    centered = x - x.mean()
    norm = float(np.linalg.norm(centered))
    if norm == 0.0:
        raise NumericError(f"{name} is constant; correlation is undefined")
    return centered / norm


def _paired(p, j) -> tuple[np.ndarray, np.ndarray]:
    p = np.asarray(p, dtype=float)
    j = np.asarray(j, dtype=float)
    if p.ndim != 1 or j.ndim != 1:
        raise ValidationError("inputs must be one-dimensional")
    if p.shape != j.shape:
        raise ValidationError(f"length mismatch: {p.size} vs {j.size}")
    if p.size < 3:
        raise ValidationError("need at least 3 paired samples")
    if not (np.isfinite(p).all() and np.isfinite(j).all()):
        raise ValidationError("inputs must be finite")
    return p, j


def pearson(p, j) -> float:
    """Pearson correlation of two equal-length 1-d arrays."""
    p, j = _paired(p, j)
    return float(_unit_residual(p, "first input") @ _unit_residual(j, "second input"))


def nth_permutation(seed: int, index: int, n: int) -> np.ndarray:
    """The ``index``-th permutation of ``range(n)`` under a master seed.

    Backed by a counter-based generator keyed on ``(seed, index)``, so any
    single permutation can be regenerated without drawing its
    predecessors.
    """
    if n <= 0:
        raise ValidationError("permutation length must be positive")
    if index < 0:
        raise ValidationError("permutation index must be non-negative")
    key = np.array([seed & _MASK64, index & _MASK64], dtype=np.uint64)
    gen = np.random.Generator(np.random.Philox(key=key))
    return gen.permutation(n)


def perm_test(
    p,
    j,
    n_perm: int = 10000,
    seed: int = 0,
    tail: str = "two",
) -> PermutationResult:
    """Permutation test of the correlation between ``p`` and ``j``.

    ``tail`` selects the 5% decision rule: ``lower`` rejects when the
    observed correlation falls below the lower critical value, ``upper``
    when it exceeds the upper one, and ``two`` splits the level across
    both tails (2.5% each).
    """
    p, j = _paired(p, j)
    if n_perm < 100:
        raise ValidationError("n_perm must be at least 100")
    if tail not in TAILS:
        raise ValidationError(f"unknown tail {tail!r}")

    p_unit = _unit_residual(p, "first input")
    j_unit = _unit_residual(j, "second input")
    r_obs = float(p_unit @ j_unit)

    n = p.size
    r_perm = np.empty(n_perm)
    for k in range(n_perm):
        r_perm[k] = p_unit @ j_unit[nth_permutation(seed, k, n)]
    r_sorted = np.sort(r_perm)

    # 1-indexed order statistics of the ascending sort.
    lower_pos = math.ceil(0.05 * n_perm)
    upper_pos = math.floor(0.95 * n_perm)
    r_crit_lower = float(r_sorted[lower_pos - 1])
    r_crit_upper = float(r_sorted[upper_pos - 1])

    p_lower = (int(np.count_nonzero(r_perm <= r_obs)) + 1) / (n_perm + 1)
    p_upper = (int(np.count_nonzero(r_perm >= r_obs)) + 1) / (n_perm + 1)
    p_two = (int(np.count_nonzero(np.abs(r_perm) >= abs(r_obs))) + 1) / (n_perm + 1)

    if tail == "lower":
        reject = r_obs < r_crit_lower
    elif tail == "upper":
        reject = r_obs > r_crit_upper
    else:
        lo = float(r_sorted[math.ceil(0.025 * n_perm) - 1])
        hi = float(r_sorted[math.floor(0.975 * n_perm) - 1])
        reject = r_obs < lo or r_obs > hi
    summary = {
        name: float(np.quantile(r_sorted, q)) for name, q in _SUMMARY_QUANTILES
    }
    return PermutationResult(
        r_obs=r_obs,
        n=n,
        n_perm=n_perm,
        seed=seed,
        tail=tail,
        r_sorted=r_sorted,
        r_sorted_summary=summary,
        r_crit_lower=r_crit_lower,
        r_crit_upper=r_crit_upper,
        p_lower=p_lower,
        p_upper=p_upper,
        p_two_sided=p_two,
        decision_5pct="reject" if reject else "fail-to-reject",
    )
