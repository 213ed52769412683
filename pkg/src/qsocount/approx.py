"""Promise counters and randomized estimation.

A CountingSampler is a finite domain plus a deterministic accept predicate.
When the majority promise holds (accepted count is zero or exceeds half the
domain), uniform sampling with a Chernoff-sized sample yields a relative
(1 +/- eps) estimate of the count with confidence 1 - delta, and the
estimate is exactly zero whenever the count is zero.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Callable

import numpy as np

from .errors import ApproxError
from .propcount import Disj2SatFormula

MAX_EXHAUSTIVE_DOMAIN = 1 << 24


@dataclass(frozen=True)
class CountingSampler:
    """Finite promise counter: indices 0..domain_size-1, each accepted or
    not. promised_mr asserts that the accepted count is either zero or more
    than half the domain."""

    domain_size: int
    accept: Callable[[int], bool]
    promised_mr: bool = False

    def __post_init__(self):
        if self.domain_size < 1:
            raise ApproxError("domain size must be >= 1")


@dataclass(frozen=True)
class EstimateParams:
    epsilon: float
    delta: float
    p_lower_bound: float
    seed: int

    def __post_init__(self):
        if not (0 < self.epsilon < 1):
            raise ApproxError(f"epsilon must be in (0,1), got {self.epsilon}")
        if not (0 < self.delta < 1):
            raise ApproxError(f"delta must be in (0,1), got {self.delta}")
        if not (0 < self.p_lower_bound <= 1):
            raise ApproxError(f"p_lower_bound must be in (0,1], got {self.p_lower_bound}")
        if self.seed < 0 or self.seed >= 1 << 64:
            raise ApproxError("seed must fit in 64 bits")


@dataclass(frozen=True)
class MrCheck:
    holds: bool
    accepted: int
    domain_size: int


def sample_count(params: EstimateParams) -> int:
    """Two-sided multiplicative Chernoff sample size:
    ceil(3 ln(2/delta) / (epsilon^2 p_lower_bound))."""
    return math.ceil(
        3.0 * math.log(2.0 / params.delta) / (params.epsilon**2 * params.p_lower_bound)
    )


def estimate_fraction(sampler: CountingSampler, params: EstimateParams) -> tuple[Fraction, int]:
    """Unbiased estimate of the accepted fraction from m uniform draws with
    replacement. When the true fraction p is at least p_lower_bound,
    Pr[(1-eps) p <= estimate <= (1+eps) p] >= 1 - delta; when p is zero the
    estimate is zero with probability one."""
    m = sample_count(params)
    rng = np.random.default_rng(np.random.SeedSequence(params.seed))
    draws = rng.integers(0, sampler.domain_size, size=m)
    accepted = sum(1 for index in draws if sampler.accept(int(index)))
    return Fraction(accepted, m), m


def fpras_rp1(
    sampler: CountingSampler, epsilon: float, delta: float, seed: int
) -> Fraction:
    """Estimate the accepted count of a majority-promise sampler: scale the
    sampled fraction by the domain size, with the promise supplying the 1/2
    lower bound. Exactly zero whenever the true count is zero."""
    params = EstimateParams(epsilon, delta, 0.5, seed)
    p_hat, _ = estimate_fraction(sampler, params)
    return p_hat * sampler.domain_size


def rp_decide(sampler: CountingSampler, seed: int) -> bool:
    """One-sided decision from the estimator at eps = delta = 1/4: yes iff
    the estimate reaches 1/2. A zero counter never answers yes; a counter
    honoring the majority promise answers yes with probability >= 3/4."""
    return fpras_rp1(sampler, 0.25, 0.25, seed) >= Fraction(1, 2)


def machine_from_fp(value: int) -> CountingSampler:
    """Turn a known non-negative integer into a majority-promise sampler:
    for value in (2**(i-1), 2**i], the domain is 2**i and indices below the
    value accept, so the accepted count is exactly the value."""
    if value < 0:
        raise ApproxError("value must be >= 0")
    if value == 0:
        return CountingSampler(1, lambda _b: False, promised_mr=True)
    bits = (value - 1).bit_length()
    domain = 1 << bits
    return CountingSampler(domain, lambda b: b + 1 <= value, promised_mr=True)


def check_mr(sampler: CountingSampler) -> MrCheck:
    """Exhaustively verify the majority promise (small domains only)."""
    if sampler.domain_size > MAX_EXHAUSTIVE_DOMAIN:
        raise ApproxError(
            f"domain {sampler.domain_size} too large to enumerate "
            f"(limit {MAX_EXHAUSTIVE_DOMAIN})"
        )
    accepted = sum(1 for i in range(sampler.domain_size) if sampler.accept(i))
    holds = accepted == 0 or 2 * accepted > sampler.domain_size
    return MrCheck(holds, accepted, sampler.domain_size)


# ---------------------------------------------------------------------------
# Compositeness witnesses
# ---------------------------------------------------------------------------


def _decompose(n: int) -> tuple[int, int]:
    """n - 1 = 2**s * d with d odd."""
    d = n - 1
    s = 0
    while d % 2 == 0:
        d //= 2
        s += 1
    return s, d


def _is_strong_liar(a: int, n: int, s: int, d: int) -> bool:
    x = pow(a, d, n)
    if x == 1 or x == n - 1:
        return True
    for _ in range(s - 1):
        x = x * x % n
        if x == n - 1:
            return True
    return False


def miller_rabin_sampler(n: int) -> CountingSampler:
    """Sampler over bases 1..n-1 of an odd n >= 3, accepting the
    compositeness witnesses (index i tests base i+1). Primes yield zero
    witnesses; odd composites yield more than (n-1)/2, so the majority
    promise holds. The sampler itself never enumerates."""
    if n < 3:
        raise ApproxError(f"n must be >= 3, got {n}")
    if n % 2 == 0:
        raise ApproxError(f"n must be odd, got {n}")
    s, d = _decompose(n)
    return CountingSampler(
        n - 1, lambda i: not _is_strong_liar(i + 1, n, s, d), promised_mr=True
    )


def miller_rabin_witness_count(n: int) -> tuple[int, CountingSampler]:
    """Exact witness count of an odd n in [3, 10**6] by enumerating every
    base, plus the sampler over the same domain."""
    if n > 10**6:
        raise ApproxError(f"witness enumeration capped at n <= 10**6, got {n}")
    sampler = miller_rabin_sampler(n)
    count = sum(1 for i in range(sampler.domain_size) if sampler.accept(i))
    return count, sampler


# ---------------------------------------------------------------------------
# Sampler over propositional assignment space
# ---------------------------------------------------------------------------


def sampler_from_d2s(phi: Disj2SatFormula) -> CountingSampler:
    """Sampler over the 2**V assignments of a propositional disjunction of
    2SAT conjuncts; accepted indices are the models. Carries no majority
    promise."""
    variables = phi.variables
    width = len(variables)

    def accept(index: int) -> bool:
        true_vars = {variables[j] for j in range(width) if index >> j & 1}

        def lit_true(lit: int) -> bool:
            return (abs(lit) in true_vars) == (lit > 0)

        return any(
            all(any(lit_true(l) for l in cl) for cl in conj) for conj in phi.disjuncts
        )

    return CountingSampler(1 << width, accept, promised_mr=False)
