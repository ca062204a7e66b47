"""Largest Lyapunov exponent via the Kantz neighbor-divergence method.

The series is standardized, delay-embedded, and for a sample of reference
points all embedded neighbors within a radius are followed forward in
time. The mean log distance after Delta steps,

    S(Delta) = < ln( mean_{j in U_i} |x_{i+Delta'} - x_{j+Delta'}| ) >_i

(with Delta' the last embedding coordinate advanced by Delta), grows
linearly in Delta while divergence is exponential; the slope of that
initial linear region is the largest Lyapunov exponent. Distances in the
divergence stage are between scalar future observations, not full state
vectors, following the TISEAN-family convention; neighbor search uses the
max norm in embedding space.

Exact ties (zero future distance) occur in quantized data and would put
minus infinity into the log; tied pairs are dropped at the affected step
only, and a reference whose neighbors all tie at a step sits that step
out. ``ref_counts`` records how many references contributed per step and
can therefore dip at steps dominated by ties.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .core import TimeSeries, standardize
from .errors import EpsTooSmallError, ValidationError

__all__ = ["EmbeddingParams", "DivergenceCurve", "LyapunovFit", "embed", "lyap_k", "lyap_fit"]


@dataclass(frozen=True)
class EmbeddingParams:
    """Parameters of the embedding and neighbor search.

    The defaults target monthly climate indices: a 2-d embedding with
    unit delay, a one-year temporal exclusion window, and a 0.3-sigma
    neighborhood on the standardized series. They are this toolkit's
    documented choice, not a published setting.

    References are taken evenly spaced over the valid positions by
    default; set ``random_sample`` to draw them without replacement using
    ``seed`` instead. Either way the curve is deterministic.
    """

    m: int = 2
    d: int = 1
    theiler: int = 12
    eps: float = 0.3
    n_ref: int = 200
    s: int = 12
    k_min: int = 4
    seed: int = 0
    random_sample: bool = False

    def __post_init__(self):
        if self.m < 1:
            raise ValidationError("embedding dimension m must be >= 1")
        if self.d < 1:
            raise ValidationError("delay d must be >= 1")
        if self.theiler < 0:
            raise ValidationError("theiler window must be >= 0")
        if not self.eps > 0:
            raise ValidationError("neighborhood radius eps must be > 0")
        if self.n_ref < 1:
            raise ValidationError("n_ref must be >= 1")
        if self.s < 2:
            raise ValidationError("follow steps s must be >= 2")
        if self.k_min < 1:
            raise ValidationError("k_min must be >= 1")


@dataclass(frozen=True)
class DivergenceCurve:
    """Stretching curve S(0..s-1) and per-step reference counts."""

    s_values: np.ndarray
    ref_counts: np.ndarray
    params: EmbeddingParams

    def __post_init__(self):
        for name in ("s_values", "ref_counts"):
            arr = np.asarray(getattr(self, name))
            arr = arr.copy()
            arr.flags.writeable = False
            object.__setattr__(self, name, arr)


@dataclass(frozen=True)
class LyapunovFit:
    """Fitted slope of the divergence curve over a step range."""

    lambda1: float
    fit_range: tuple[int, int]
    r_squared: float
    dt: float

    @property
    def chaos_consistent(self) -> bool:
        """Positive divergence rate with a solid linear fit.

        A numeric diagnostic only; it does not by itself establish chaos
        in the underlying system.
        """
        return self.lambda1 > 0.0 and self.r_squared >= 0.8


def embed(x, m: int, d: int) -> np.ndarray:
    """Delay-embed a scalar series into m-dimensional state vectors.

    Vector i is (x[i], x[i+d], ..., x[i+(m-1)d]); the result has
    n - (m-1)*d rows.
    """
    arr = np.asarray(x, dtype=float)
    if m < 1 or d < 1:
        raise ValidationError("embedding requires m >= 1 and d >= 1")
    count = arr.size - (m - 1) * d
    if count < 1:
        raise ValidationError(
            f"series of length {arr.size} too short to embed with m={m}, d={d}"
        )
    return np.stack([arr[c * d : c * d + count] for c in range(m)], axis=1)


def _reference_indices(n_valid: int, params: EmbeddingParams) -> np.ndarray:
    count = min(params.n_ref, n_valid)
    if params.random_sample:
        rng = np.random.default_rng(params.seed)
        idx = rng.choice(n_valid, size=count, replace=False)
    else:
        idx = np.round(np.linspace(0, n_valid - 1, num=count)).astype(np.int64)
    return np.unique(idx)


def lyap_k(ts: TimeSeries, params: EmbeddingParams) -> DivergenceCurve:
    """Compute the Kantz divergence curve of a series.

    The input is standardized internally, so ``eps`` is always in units
    of the series' standard deviation. Reference points whose
    neighborhoods hold fewer than ``k_min`` points are discarded; if none
    survives, an ``EpsTooSmallError`` reports the largest neighborhood
    found so the caller can widen the radius.
    """
    x = standardize(ts).values
    n = x.size
    offset = (params.m - 1) * params.d
    if offset + params.s >= n:
        raise ValidationError(
            f"series of length {n} too short for (m-1)*d + s = {offset + params.s}"
        )
    n_valid = n - offset - params.s + 1
    vectors = embed(x, params.m, params.d)[:n_valid]
    refs = _reference_indices(n_valid, params)
    steps = np.arange(params.s)

    contributions = []
    max_neighbors = 0
    for i in refs:
        dist = np.max(np.abs(vectors - vectors[i]), axis=1)
        mask = (dist < params.eps) & (np.abs(np.arange(n_valid) - i) > params.theiler)
        neighbors = np.nonzero(mask)[0]
        if neighbors.size > max_neighbors:
            max_neighbors = int(neighbors.size)
        if neighbors.size < params.k_min:
            continue
        future_i = x[i + offset + steps]
        future_j = x[neighbors[:, None] + offset + steps]
        gaps = np.abs(future_j - future_i)
        live = np.count_nonzero(gaps, axis=0)
        with np.errstate(divide="ignore", invalid="ignore"):
            row = np.log(gaps.sum(axis=0) / live)
        row[live == 0] = np.nan
        contributions.append(row)

    if not contributions:
        raise EpsTooSmallError(
            f"no reference point had {params.k_min} neighbors within eps="
            f"{params.eps}; largest neighborhood found held {max_neighbors}",
            max_neighbors=max_neighbors,
        )
    stacked = np.asarray(contributions)
    ref_counts = np.count_nonzero(~np.isnan(stacked), axis=0)
    with np.errstate(invalid="ignore"):
        s_values = np.nanmean(stacked, axis=0)
    s_values[ref_counts == 0] = np.nan
    return DivergenceCurve(s_values=s_values, ref_counts=ref_counts, params=params)


def lyap_fit(curve: DivergenceCurve, start: int, end: int, dt: float = 1.0) -> LyapunovFit:
    """Slope of the divergence curve over steps [start, end], per dt.

    Ordinary least squares of S(Delta) on Delta; the slope divided by the
    sampling interval is the Lyapunov exponent estimate in 1/time units.
    """
    s = curve.s_values.size
    if not 0 <= start < end < s:
        raise ValidationError(f"fit range [{start}, {end}] invalid for {s} steps")
    if end - start + 1 < 3:
        raise ValidationError("fit range must span at least 3 steps")
    if not dt > 0:
        raise ValidationError("dt must be positive")
    if np.any(curve.ref_counts[start : end + 1] == 0):
        raise ValidationError("fit range includes steps with no surviving reference")
    delta = np.arange(start, end + 1, dtype=float)
    y = curve.s_values[start : end + 1]
    slope, intercept = np.polyfit(delta, y, 1)
    fitted = intercept + slope * delta
    ssm = float(np.sum((y - np.mean(y)) ** 2))
    sse = float(np.sum((y - fitted) ** 2))
    r_squared = 1.0 - sse / ssm if ssm > 0.0 else 1.0
    return LyapunovFit(
        lambda1=float(slope / dt),
        fit_range=(start, end),
        r_squared=r_squared,
        dt=dt,
    )
