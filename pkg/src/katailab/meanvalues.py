"""Empirical means, the averaged-modulus seminorm, and Euler products.

The empirical side averages f(n) over n <= N with the deterministic chunked
pairwise reduction; the product side evaluates the mean-value Euler product

    prod_p (1 - 1/p) * (1 + sum_m g(p^m) / p^m)

over primes up to a cutoff, truncating the inner sum once p^-m < 1e-18 and
reporting the tail budget 2/P alongside rather than dropping it silently.
Partial-sum reports for the convergence criteria (the averaged 1 - Re(g(p)p^it)
series and the three additive series) never decide divergence; they carry an
advisory slope only.
"""

from __future__ import annotations

import math
from fractions import Fraction

import numpy as np

from .functions import ArithmeticFunction
from .reports import MeanValueReport, SeriesReport
from .sieve import FactorSieve, SieveRangeError
from .levelsets import divergence_slope
from .summation import checkpoint_sums

POWER_CUTOFF = 1e-18


def empirical_mean(fn: ArithmeticFunction, n_max: int, checkpoints,
                   sieve: FactorSieve, threads: int = 1) -> MeanValueReport:
    """Running means (1/x) sum_{n<=x} f(n) at each checkpoint."""
    if n_max > sieve.limit:
        raise SieveRangeError(f"N={n_max} exceeds sieve limit {sieve.limit}")
    checkpoints = sorted(set(int(c) for c in checkpoints) | {int(n_max)})
    values = fn.values_upto(n_max, sieve)

    sums = checkpoint_sums(lambda lo, hi: values[lo:hi], checkpoints, threads=threads)
    means = [s / c for s, c in zip(sums, checkpoints)]
    return MeanValueReport(checkpoints, means, function_spec=fn.to_json())


def seminorm_l1(fn: ArithmeticFunction, n_max: int, checkpoints,
                sieve: FactorSieve, threads: int = 1) -> MeanValueReport:
    """Running means of |f(n)| (the limsup of these is the averaged seminorm)."""
    if n_max > sieve.limit:
        raise SieveRangeError(f"N={n_max} exceeds sieve limit {sieve.limit}")
    checkpoints = sorted(set(int(c) for c in checkpoints) | {int(n_max)})
    values = np.abs(fn.values_upto(n_max, sieve))
    sums = checkpoint_sums(lambda lo, hi: values[lo:hi], checkpoints, threads=threads)
    means = [s / c for s, c in zip(sums, checkpoints)]
    return MeanValueReport(checkpoints, means,
                           function_spec={"seminorm_of": fn.to_json()})


class LocalFactorError(ValueError):
    """A local Euler factor exceeded modulus 2, indicating |g| > 1."""


def euler_product_mean(rule, prime_cutoff: int, sieve: FactorSieve | None = None):
    """Mean-value Euler product for a prime-power rule g with |g(p^m)| <= 1.

    Returns (value, tail_bound).  The inner sum over m stops once p^-m falls
    below 1e-18; the reported tail bound 2/P dominates sum_{p>P} 2/p^2.
    """
    if prime_cutoff < 2:
        raise ValueError("prime cutoff must be >= 2")
    if sieve is not None and prime_cutoff <= sieve.limit:
        primes = sieve.primes(prime_cutoff)
    else:
        primes = _primes_upto(prime_cutoff)
    g = rule.prime_power if isinstance(rule, ArithmeticFunction) else rule
    product = complex(1.0)
    for p in primes:
        p = int(p)
        terms = []
        weight, m = 1.0 / p, 1
        while weight >= POWER_CUTOFF:
            terms.append((m, g(p, m)))
            weight /= p
            m += 1
        if all(isinstance(v, (int, Fraction)) for _, v in terms):
            # exact local factor; rules with g = 1 give exactly 1 - p^-(M+1)
            inner = 1 + sum(Fraction(v, p**m) for m, v in terms)
            local = complex(float(Fraction(p - 1, p) * inner))
        else:
            # smallest terms first so the truncation budget dominates roundoff
            inner = complex(1.0)
            for m, v in reversed(terms):
                inner += complex(v) / p**m
            local = (1.0 - 1.0 / p) * inner
        if abs(local) > 2.0:
            raise LocalFactorError(
                f"local factor at p={p} has modulus {abs(local):.3f} > 2; "
                f"the rule violates |g| <= 1"
            )
        product *= local
    tail = 2.0 / prime_cutoff
    return product, tail


def _primes_upto(x: int) -> np.ndarray:
    flags = np.ones(x + 1, dtype=bool)
    flags[:2] = False
    for p in range(2, math.isqrt(x) + 1):
        if flags[p]:
            flags[p * p :: p] = False
    return np.nonzero(flags)[0].astype(np.int64)


def mean_with_product(fn: ArithmeticFunction, n_max: int, checkpoints,
                      sieve: FactorSieve, prime_cutoff: int = 100_000,
                      threads: int = 1) -> MeanValueReport:
    """Empirical means plus the Euler-product value and its discrepancy."""
    rep = empirical_mean(fn, n_max, checkpoints, sieve, threads=threads)
    product, tail = euler_product_mean(fn, prime_cutoff, sieve)
    rep.product = product
    rep.prime_cutoff = prime_cutoff
    rep.tail_bound = tail
    return rep


def halasz_series(fn: ArithmeticFunction, t: float, y: int, checkpoints,
                  sieve: FactorSieve) -> SeriesReport:
    """Partial sums of (1 - Re(g(p) p^{it})) / p over primes p <= y'.

    Terms lie in [0, 2/p], so the partial sums are nondecreasing.
    """
    if y > sieve.limit:
        raise SieveRangeError(f"y={y} exceeds sieve limit {sieve.limit}")
    checkpoints = sorted(int(c) for c in checkpoints)
    primes = sieve.primes(y)
    sums, acc, i = [], 0.0, 0
    for c in checkpoints:
        while i < primes.size and primes[i] <= c:
            p = int(primes[i])
            gp = complex(fn.prime_power(p, 1))
            if abs(gp) > 1.0 + 1e-12:
                raise ValueError(f"|g({p})| = {abs(gp):.3f} > 1: series terms "
                                 f"would leave [0, 2/p]")
            term = (1.0 - (gp * complex(math.cos(t * math.log(p)),
                                        math.sin(t * math.log(p)))).real) / p
            acc += term
            i += 1
        sums.append(acc)
    return SeriesReport(
        name=f"halasz({fn.name},t={t})", cutoffs=checkpoints, partial_sums=sums,
        slope=divergence_slope(checkpoints, sums),
    )


def three_series(a_of_p, y: int, checkpoints, sieve: FactorSieve):
    """The three convergence-criterion series of a real additive function.

    Returns SeriesReports for sum 1/p over |a(p)|>1, sum a(p)/p and
    sum a(p)^2/p over |a(p)|<=1, split applied per prime.
    """
    if y > sieve.limit:
        raise SieveRangeError(f"y={y} exceeds sieve limit {sieve.limit}")
    checkpoints = sorted(int(c) for c in checkpoints)
    primes = sieve.primes(y)
    s1, s2, s3 = [], [], []
    acc1 = acc2 = acc3 = 0.0
    i = 0
    for c in checkpoints:
        while i < primes.size and primes[i] <= c:
            p = int(primes[i])
            a = float(a_of_p(p))
            if not math.isfinite(a):
                raise ValueError(f"a(p) not finite at p={p}")
            if abs(a) > 1.0:
                acc1 += 1.0 / p
            else:
                acc2 += a / p
                acc3 += a * a / p
            i += 1
        s1.append(acc1)
        s2.append(acc2)
        s3.append(acc3)
    return (
        SeriesReport("large_values", checkpoints, s1, divergence_slope(checkpoints, s1)),
        SeriesReport("first_moment", checkpoints, s2, divergence_slope(checkpoints, s2),
                     nonnegative_terms=False),
        SeriesReport("second_moment", checkpoints, s3, divergence_slope(checkpoints, s3)),
    )


def empirical_cdf(values, thresholds):
    """F_N(x) = (1/N) #{n <= N : value_n < x} on a threshold grid."""
    values = np.sort(np.asarray(values, dtype=np.float64))
    n = values.size
    if n == 0:
        raise ValueError("empirical_cdf needs at least one value")
    thresholds = list(thresholds)
    counts = np.searchsorted(values, np.asarray(thresholds, dtype=np.float64), side="left")
    return [(float(t), int(c) / n) for t, c in zip(thresholds, counts)]
