"""Estimating S_p = sum_i C(x_i, p) from magnitude-proportional samples.

If an item with magnitude ``d`` is drawn with probability ``d / W``, then

    Y = (W / d) * C(d, p)

has expectation exactly S_p. :func:`unbiased_estimate` averages ``k`` such
values, with ``k`` sized from a guess of S_p; :func:`count_stars` starts
from the largest possible S_p and halves the guess until the median of
``ell`` averages certifies it.

All logarithms are base 2.
"""

from __future__ import annotations

import dataclasses
import json
import math
import warnings
from fractions import Fraction

import numpy as np

from .errors import InvalidArgumentError
from .oracle import QueryLedger, TableColumn, WeightedOracle, as_weighted_oracle, make_rng

# samples drawn per numpy call; bounds peak memory of a median round
_CHUNK = 1 << 21


@dataclasses.dataclass
class EstimatorParams:
    """Accuracy parameters. ``epsilon`` above 1/2 is clamped to 1/2."""

    p: int
    epsilon: float
    seed: int | None = None
    k_override: int | None = None
    warnings: list = dataclasses.field(default_factory=list)

    def __post_init__(self):
        if int(self.p) != self.p or self.p < 2:
            raise InvalidArgumentError(f"p must be an integer >= 2, got {self.p}")
        self.p = int(self.p)
        if not self.epsilon > 0:
            raise InvalidArgumentError(f"epsilon must be positive, got {self.epsilon}")
        if self.epsilon > 0.5:
            msg = f"epsilon={self.epsilon} clamped to 0.5"
            self.warnings.append(msg)
            warnings.warn(msg, stacklevel=3)
            self.epsilon = 0.5
        if self.k_override is not None and self.k_override < 1:
            raise InvalidArgumentError("k_override must be >= 1")


@dataclasses.dataclass
class Round:
    """One guess-halving round: the guess, sample sizes and the median."""

    guess: float
    k: int
    ell: int
    median: float


@dataclasses.dataclass
class EstimateReport:
    estimate: float
    iterations: int
    final_guess: float
    ledger: QueryLedger
    params: EstimatorParams
    seed: int | None
    rounds: list = dataclasses.field(default_factory=list)

    @property
    def warnings(self):
        return self.params.warnings

    def to_dict(self) -> dict:
        return {
            "estimate": self.estimate,
            "p": self.params.p,
            "epsilon": self.params.epsilon,
            "seed": self.seed,
            "iterations": self.iterations,
            "final_guess": self.final_guess,
            "queries": self.ledger.as_dict(),
            "warnings": list(self.params.warnings),
        }

    def to_json(self, **kwargs) -> str:
        return json.dumps(self.to_dict(), **kwargs)


def binomial(x: int, p: int) -> int:
    """Exact C(x, p); zero when x < p."""
    if x < 0 or p < 0:
        raise InvalidArgumentError("binomial arguments must be nonnegative")
    return math.comb(x, p)


def estimator_value(d: int, W: int, p: int, exact: bool = False):
    """Y = (W/d) C(d, p) for one sample of magnitude ``d``.

    Returns a float, or a :class:`~fractions.Fraction` when ``exact``.
    """
    if d < 1:
        raise InvalidArgumentError("a zero-magnitude item cannot be sampled")
    if W < d:
        raise InvalidArgumentError(f"total weight {W} is below magnitude {d}")
    value = Fraction(W * binomial(d, p), d)
    return value if exact else float(value)


def _pth_root(x, p: int):
    if isinstance(x, int) or (isinstance(x, float) and x.is_integer() and x < 2**53):
        x = int(x)
        r = round(x ** (1.0 / p))
        for c in (r - 1, r, r + 1):
            if c >= 0 and c**p == x:
                return c
    return float(x) ** (1.0 / p)


def sample_count_k(W: int, p: int, epsilon: float, guess) -> int:
    """Samples per call: max(1, ceil(18 W / (p eps^2 guess^(1/p))))."""
    if guess < 1:
        raise InvalidArgumentError(f"guess must be >= 1, got {guess}")
    scale = Fraction(18 * W) / (p * Fraction(epsilon) ** 2)
    root = _pth_root(guess, p)
    value = scale / root if isinstance(root, int) else float(scale) / root
    return max(1, math.ceil(value))


def amplification_count_l(n: int, p: int) -> int:
    """Number of repetitions for the median: ceil(40 (log p + log log n))."""
    if n < 4:
        raise InvalidArgumentError(f"n must be >= 4 for log log n, got {n}")
    return max(1, math.ceil(40 * (math.log2(p) + math.log2(math.log2(n)))))


class _YTable:
    """Lookup of Y by magnitude, filled in exactly as magnitudes appear."""

    def __init__(self, W: int, p: int):
        self.W = W
        self.p = p
        self.values = np.zeros(1)

    def __call__(self, mags: np.ndarray) -> np.ndarray:
        top = int(mags.max()) if len(mags) else 0
        if top >= len(self.values):
            old = len(self.values)
            size = max(top + 1, 2 * old)
            grown = np.zeros(size)
            grown[:old] = self.values
            grown[old:] = [
                float(Fraction(self.W * math.comb(d, self.p), d)) for d in range(old, size)
            ]
            self.values = grown
        return self.values[mags]


def _trial_means(oracle: WeightedOracle, k: int, ell: int, rng, ytab: _YTable) -> np.ndarray:
    """Means of ``ell`` independent blocks of ``k`` Y-samples each."""
    rng = make_rng(rng)
    total = k * ell
    sums = np.zeros(ell)
    start = 0
    while start < total:
        size = min(_CHUNK, total - start)
        _, mags = oracle.sample_batch(rng, size)
        y = ytab(mags)
        # blocks are contiguous runs of k samples; sum each piece in this chunk
        first = start // k
        cuts = np.arange((first + 1) * k, start + size, k) - start
        pieces = np.add.reduceat(y, np.concatenate(([0], cuts)))
        sums[first:first + len(pieces)] += pieces
        start += size
    return sums / k


def _k_for(oracle, params, guess):
    if params.k_override is not None:
        return params.k_override
    return sample_count_k(oracle.total_weight(), params.p, params.epsilon, guess)


def unbiased_estimate(oracle: WeightedOracle, params: EstimatorParams, guess, rng=None, _ytab=None) -> float:
    """Average of ``k`` unbiased samples of S_p, ``k`` sized by ``guess``.

    If guess is within [S_p/2, 6 S_p] the result is within (1 +- eps) S_p
    with probability at least 2/3; if guess > 6 S_p the result falls below
    guess/2 with probability at least 2/3.
    """
    k = _k_for(oracle, params, guess)
    ytab = _ytab or _YTable(oracle.total_weight(), params.p)
    return float(_trial_means(oracle, k, 1, rng, ytab)[0])


def median_estimate(oracle: WeightedOracle, params: EstimatorParams, guess, ell: int, rng=None, _ytab=None) -> float:
    """Median of ``ell`` independent :func:`unbiased_estimate` results.

    An even ``ell`` is bumped to the next odd number so the median is one of
    the trial values.
    """
    if ell < 1:
        raise InvalidArgumentError(f"ell must be >= 1, got {ell}")
    ell += 1 - ell % 2
    k = _k_for(oracle, params, guess)
    ytab = _ytab or _YTable(oracle.total_weight(), params.p)
    means = np.sort(_trial_means(oracle, k, ell, rng, ytab))
    return float(means[ell // 2])


def count_stars(oracle: WeightedOracle, params: EstimatorParams, n: int | None = None, rng=None,
                initial_guess=None) -> EstimateReport:
    """(1 +- eps)-approximation of S_p with probability at least 2/3.

    The guess starts at ``oracle.star_count_ceiling(p)`` (``n C(n-1, p)`` for
    graphs) unless ``initial_guess`` is given. Each round takes the median of
    ``ell`` averages and stops once the median reaches ``(1 - eps)`` times
    the guess. If halving would push the guess below 1 the last median is
    returned, which makes the loop terminate when S_p = 0.

    ``n`` is the item count used for ``ell``; it defaults to the oracle's,
    and values below 4 are treated as 4.
    """
    n = oracle.n_items if n is None else int(n)
    if n < 1:
        raise InvalidArgumentError(f"n must be >= 1, got {n}")
    p, eps = params.p, params.epsilon
    if rng is None:
        rng = params.seed
    rng = make_rng(rng)
    before = oracle.ledger.copy()
    ceiling = oracle.star_count_ceiling(p) if initial_guess is None else initial_guess
    report = EstimateReport(0.0, 0, float(ceiling), QueryLedger(), params, params.seed)
    if ceiling < 1:
        return report

    ell = amplification_count_l(max(n, 4), p)
    ell += 1 - ell % 2
    ytab = _YTable(oracle.total_weight(), p)
    guess = float(ceiling)
    if math.isinf(guess):
        raise InvalidArgumentError("initial guess exceeds floating-point range")
    while True:
        k = _k_for(oracle, params, guess)
        z = median_estimate(oracle, params, guess, ell, rng, _ytab=ytab)
        report.rounds.append(Round(guess, k, ell, z))
        report.iterations += 1
        report.final_guess = guess
        if z >= (1 - eps) * guess or guess / 2 < 1:
            report.estimate = z
            break
        guess /= 2
    report.ledger = oracle.ledger - before
    return report


def self_join_estimate(table: TableColumn, params: EstimatorParams, rng=None) -> EstimateReport:
    """Estimate S_2 = sum C(x_i, 2) of a column from uniform row samples."""
    if params.p != 2:
        raise InvalidArgumentError(f"self-join estimation is the p=2 case, got p={params.p}")
    return count_stars(as_weighted_oracle(table), params, n=table.n, rng=rng)
