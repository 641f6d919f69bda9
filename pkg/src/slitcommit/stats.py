"""Statistical tests backing the verifier and the acceptance experiments.

Pearson goodness of fit against a tabulated screen distribution, an exact
binomial upper tail in log space, and the chi-square survival function.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np
from scipy.special import gammaincc

from .errors import BadArgs, TooFewSamples
from .optics import ScreenPdf

__all__ = [
    "GofResult",
    "chi_square_gof",
    "chi_square_upper_tail",
    "binomial_tail",
    "binomial_confint",
]

MIN_EXPECTED_PER_BIN = 5.0


@dataclass(frozen=True)
class GofResult:
    statistic: float
    dof: int
    p_value: float
    n_samples: int
    n_bins: int  # effective bins after merging

    def __post_init__(self):
        if self.statistic < 0.0 or not (0.0 <= self.p_value <= 1.0):
            raise BadArgs("invalid goodness-of-fit result")
        if self.dof != self.n_bins - 1:
            raise BadArgs("dof must equal effective bins - 1")


def _merge_low_expected(expected: np.ndarray, observed: np.ndarray):
    """Merge bins with expected count < 5 into their right neighbor.

    Scans left to right accumulating mass until each emitted bin reaches
    the floor; a trailing remainder is absorbed by the last emitted bin.
    Deterministic, so repeated verification of the same data always uses
    the same effective binning.
    """
    exp_out: list[float] = []
    obs_out: list[float] = []
    acc_e = 0.0
    acc_o = 0.0
    for e, o in zip(expected, observed):
        acc_e += float(e)
        acc_o += float(o)
        if acc_e >= MIN_EXPECTED_PER_BIN:
            exp_out.append(acc_e)
            obs_out.append(acc_o)
            acc_e = 0.0
            acc_o = 0.0
    if acc_e > 0.0 or acc_o > 0.0:
        if exp_out:
            exp_out[-1] += acc_e
            obs_out[-1] += acc_o
        else:
            exp_out.append(acc_e)
            obs_out.append(acc_o)
    return np.asarray(exp_out), np.asarray(obs_out)


def chi_square_gof(samples, pdf: ScreenPdf, n_bins: int,
                   min_samples: int = 30) -> GofResult:
    """Pearson chi-square of positions against a tabulated distribution.

    Uniform-width bins span the distribution's window; expected masses come
    from the tabulated CDF; bins whose expected count falls below 5 are
    merged rightward.  The p-value is the upper chi-square tail with
    dof = effective bins - 1 (the model is fully specified, no fitted
    parameters).
    """
    samples = np.asarray(samples, dtype=float)
    n = samples.size
    if n < min_samples:
        raise TooFewSamples(f"{n} samples < required {min_samples}")
    if n_bins < 2:
        raise BadArgs("need at least 2 bins")
    lo, hi = pdf.support
    edges = np.linspace(lo, hi, n_bins + 1)
    observed = np.histogram(np.clip(samples, lo, hi), bins=edges)[0]
    masses = np.diff(pdf.cdf_at(edges))
    expected, observed = _merge_low_expected(n * masses, observed)
    if expected.size < 2:
        raise TooFewSamples("merging left fewer than 2 usable bins")
    with np.errstate(divide="ignore", invalid="ignore"):
        terms = (observed - expected) ** 2 / expected
    statistic = float(np.sum(terms[expected > 0.0]))
    dof = expected.size - 1
    return GofResult(statistic=statistic, dof=dof,
                     p_value=chi_square_upper_tail(statistic, dof),
                     n_samples=n, n_bins=expected.size)


def chi_square_upper_tail(x: float, dof: int) -> float:
    """P[chi2(dof) >= x]: regularized upper incomplete gamma Q(dof/2, x/2)."""
    if x < 0.0 or dof < 1:
        raise BadArgs(f"x = {x}, dof = {dof}")
    return float(gammaincc(dof / 2.0, x / 2.0))


def binomial_tail(m: int, k: int, p: float) -> float:
    """Exact P[Bin(m, p) >= k] by stable log-space summation.

    Terms are accumulated as exp(log-term - log-max) so the sum neither
    overflows nor loses the leading digits, and extreme tails keep full
    relative precision down to the underflow limit of a float.
    """
    if m < 0 or k < 0 or k > m or not (0.0 <= p <= 1.0):
        raise BadArgs(f"m = {m}, k = {k}, p = {p}")
    if k == 0:
        return 1.0
    if p == 0.0:
        return 0.0
    if p == 1.0:
        return 1.0
    log_p = math.log(p)
    log_q = math.log1p(-p)
    log_terms = [
        math.lgamma(m + 1) - math.lgamma(j + 1) - math.lgamma(m - j + 1)
        + j * log_p + (m - j) * log_q
        for j in range(k, m + 1)
    ]
    peak = max(log_terms)
    if peak == -math.inf:
        return 0.0
    total = math.fsum(math.exp(t - peak) for t in log_terms)
    return min(1.0, math.exp(peak) * total)


def binomial_confint(successes: int, trials: int,
                     level: float = 0.95) -> tuple[float, float]:
    """Clopper-Pearson two-sided confidence interval for a proportion."""
    if trials < 1 or not (0 <= successes <= trials) or not (0.0 < level < 1.0):
        raise BadArgs(f"successes = {successes}, trials = {trials}")
    from scipy.stats import beta

    alpha = 1.0 - level
    lo = 0.0 if successes == 0 else float(
        beta.ppf(alpha / 2.0, successes, trials - successes + 1))
    hi = 1.0 if successes == trials else float(
        beta.ppf(1.0 - alpha / 2.0, successes + 1, trials - successes))
    return lo, hi
