"""Seeded synthetic series used as estimator oracles.

Every generator is deterministic for a given ``GenSpec``: stochastic kinds
draw from ``numpy.random.Generator`` seeded with PCG64, so the exact output
stream is pinned by the seed and the numpy bit-generator contract. The
fractional Gaussian noise generator is exact (covariance factorization),
not spectral, so its sample paths carry no method bias; estimator
tolerances in the test suite rely on that.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache

import numpy as np

from .core import TimeSeries
from .errors import ValidationError

__all__ = ["GenSpec", "generate", "fgn_autocovariance", "FGN_MAX_LENGTH"]

KINDS = ("white", "walk", "fgn", "ar1", "logistic", "sine")

# Exact-covariance fGn builds and factors a dense n x n Toeplitz matrix;
# beyond this length use chunked/approximate methods instead.
FGN_MAX_LENGTH = 4096


@dataclass(frozen=True)
class GenSpec:
    """Recipe for one synthetic series.

    ``kind`` selects the generator; the kind-specific parameter fields are
    ignored by the other kinds. ``seed`` pins the stochastic kinds and is
    ignored by the deterministic ones (logistic, sine).
    """

    kind: str
    n: int
    seed: int = 0
    h: float | None = None        # fgn: target Hurst exponent in (0, 1)
    phi: float | None = None      # ar1: lag-1 coefficient in (-1, 1)
    r: float | None = None        # logistic: map parameter in (0, 4]
    x0: float | None = None       # logistic: initial point in (0, 1)
    period: float | None = None   # sine: samples per cycle, > 0

    def __post_init__(self):
        if self.kind not in KINDS:
            raise ValidationError(f"unknown generator kind {self.kind!r}")
        if self.n < 2:
            raise ValidationError("n must be at least 2")
        if self.kind == "fgn":
            if self.h is None or not np.isfinite(self.h) or not 0.0 < self.h < 1.0:
                raise ValidationError("fgn requires target h in (0, 1)")
            if self.n > FGN_MAX_LENGTH:
                raise ValidationError(
                    f"exact fgn is limited to n <= {FGN_MAX_LENGTH}; "
                    "generate shorter chunks and analyze them separately"
                )
        elif self.kind == "ar1":
            if self.phi is None or not np.isfinite(self.phi) or not -1.0 < self.phi < 1.0:
                raise ValidationError("ar1 requires phi in (-1, 1)")
        elif self.kind == "logistic":
            r = 4.0 if self.r is None else self.r
            x0 = 0.2 if self.x0 is None else self.x0
            if not np.isfinite(r) or not 0.0 < r <= 4.0:
                raise ValidationError("logistic requires r in (0, 4]")
            if not np.isfinite(x0) or not 0.0 < x0 < 1.0:
                raise ValidationError("logistic requires x0 in (0, 1)")
        elif self.kind == "sine":
            if self.period is None or not np.isfinite(self.period) or self.period <= 0:
                raise ValidationError("sine requires period > 0")


def fgn_autocovariance(h: float, max_lag: int) -> np.ndarray:
    """Theoretical fGn autocovariance gamma(0..max_lag) for Hurst ``h``.

    gamma(k) = ((k+1)^2H - 2 k^2H + (k-1)^2H) / 2, the stationary increment
    covariance of fractional Brownian motion with unit variance at lag 1.
    """
    k = np.arange(max_lag + 1, dtype=float)
    two_h = 2.0 * h
    return 0.5 * (np.abs(k + 1) ** two_h - 2.0 * np.abs(k) ** two_h + np.abs(k - 1) ** two_h)


@lru_cache(maxsize=4)
def _fgn_factor(h: float, n: int) -> np.ndarray:
    """Lower-triangular Cholesky factor of the n x n fGn covariance."""
    gamma = fgn_autocovariance(h, n - 1)
    idx = np.abs(np.subtract.outer(np.arange(n), np.arange(n)))
    cov = gamma[idx]
    return np.linalg.cholesky(cov)


def _white(n: int, seed: int) -> np.ndarray:
    return np.random.default_rng(seed).standard_normal(n)


def generate(spec: GenSpec) -> TimeSeries:
    """Produce the series described by ``spec``.

    Kinds:

    * ``white``  - i.i.d. standard Gaussian.
    * ``walk``   - cumulative sum of the ``white`` series for the same seed.
    * ``fgn``    - exact fractional Gaussian noise: Cholesky factor of the
      Toeplitz autocovariance applied to a Gaussian vector.
    * ``ar1``    - x[t] = phi * x[t-1] + eps[t], started from the
      stationary distribution.
    * ``logistic`` - iterates of r*x*(1-x); the output starts at the first
      iterate of x0, not x0 itself.
    * ``sine``   - sin(2*pi*t / period) for t = 0..n-1.
    """
    n = spec.n
    kind = spec.kind
    if kind == "white":
        values = _white(n, spec.seed)
    elif kind == "walk":
        values = np.cumsum(_white(n, spec.seed))
    elif kind == "fgn":
        values = _fgn_factor(spec.h, n) @ _white(n, spec.seed)
    elif kind == "ar1":
        eps = _white(n, spec.seed)
        phi = spec.phi
        values = np.empty(n)
        values[0] = eps[0] / np.sqrt(1.0 - phi * phi)
        for t in range(1, n):
            values[t] = phi * values[t - 1] + eps[t]
    elif kind == "logistic":
        r = 4.0 if spec.r is None else spec.r
        x = 0.2 if spec.x0 is None else spec.x0
        values = np.empty(n)
        for t in range(n):
            x = r * x * (1.0 - x)
            values[t] = x
    else:  # sine
        values = np.sin(2.0 * np.pi * np.arange(n) / spec.period)
    label = f"synthetic {kind} (n={n}, seed={spec.seed})"
    return TimeSeries(values=values, label=label)
