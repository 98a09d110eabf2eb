"""Dilated correlations, orthogonality decay over level sets, and the
finite-prime-set variance bound.

The correlation test computes (1/x) sum_{n<=x} a(pn) conj(a(qn)) for distinct
primes p, q; for linear exponential sequences the geometric closed form
|sin(pi x (p-q) theta) / (x sin(pi (p-q) theta))| is attached as a reference.
Decay of (1/x)|sum 1_E(n) a(n)| is reported on a geometric grid with a fitted
log-log slope; nothing here claims an asymptotic, the profiles reproduce fixed
desk-scale numbers.

Phases a(pn) are always evaluated at the integer pn through the double-double
path, never by scaling a(n): phase accuracy is what every downstream test
hangs on.
"""

from __future__ import annotations

import math
from fractions import Fraction

import numpy as np

from . import ddmath
from .constants import Constant, as_constant
from .levelsets import LevelSet
from .reports import CorrelationReport, DecayProfile, TuranKubiliusReport
from .sieve import FactorSieve, SieveRangeError
from .summation import checkpoint_sums, fit_loglog_slope

PHASE_BUDGET = 2**40


def e_of(frac: np.ndarray) -> np.ndarray:
    """e(x) on fractional parts: cos + i sin of 2 pi x."""
    angle = 2.0 * np.pi * frac
    return np.cos(angle) + 1j * np.sin(angle)


class BoundedSequence:
    """A bounded complex sequence a(n) evaluated on int64 index arrays."""

    name = "abstract"
    bound = 1.0

    def eval_array(self, n: np.ndarray) -> np.ndarray:
        raise NotImplementedError

    def to_json(self):
        raise NotImplementedError


class LinearExponential(BoundedSequence):
    """a(n) = e(n * theta); theta a tagged constant or exact rational."""

    def __init__(self, theta):
        self.theta = as_constant(theta)
        self.name = f"e(n*{self.theta})"

    def eval_array(self, n):
        return e_of(self.theta.frac_mul(np.asarray(n, dtype=np.int64)))

    def to_json(self):
        return {"sequence": "linear_exponential", "theta": self.theta.to_json()}


class PolynomialExponential(BoundedSequence):
    """a(n) = e(c_k n^k + ... + c_1 n + c_0), phases per-monomial in dd."""

    def __init__(self, coefficients):
        # coefficients[i] multiplies n^i
        self.coefficients = [as_constant(c) for c in coefficients]
        self.name = "e(poly deg %d)" % (len(self.coefficients) - 1)

    def eval_array(self, n):
        return e_of(polynomial_frac(self.coefficients, np.asarray(n, dtype=np.int64)))

    def to_json(self):
        return {"sequence": "polynomial_exponential",
                "coefficients": [c.to_json() for c in self.coefficients]}


class ConstantSequence(BoundedSequence):
    def __init__(self, value):
        self.value = complex(value)
        self.bound = abs(self.value)
        self.name = f"const({value})"

    def eval_array(self, n):
        return np.full(np.asarray(n).shape, self.value, dtype=complex)

    def to_json(self):
        return {"sequence": "constant", "re": self.value.real, "im": self.value.imag}


class TableSequence(BoundedSequence):
    """a(n) read from an explicit table (index 1-based)."""

    def __init__(self, values, bound=None):
        self.values = np.asarray(values, dtype=complex)
        self.bound = float(np.abs(self.values).max()) if bound is None else bound
        self.name = f"table({self.values.size})"

    def eval_array(self, n):
        n = np.asarray(n, dtype=np.int64)
        if int(n.max(initial=0)) > self.values.size:
            raise SieveRangeError("table sequence indexed past its length")
        return self.values[n - 1]

    def to_json(self):
        return {"sequence": "table", "length": int(self.values.size)}


def polynomial_frac(coefficients, n: np.ndarray) -> np.ndarray:
    """{sum_i c_i n^i} with each monomial reduced separately in dd.

    Coefficients are Constants or raw (hi, lo) pairs.  Errors out once n^i
    reaches 2^80: past that the two-term representation cannot keep the
    fractional part meaningful.
    """
    n = np.asarray(n, dtype=np.int64)
    nmax = int(n.max(initial=0))
    coeff_dd = [c if isinstance(c, tuple) else c.dd for c in coefficients]
    total = np.zeros(n.shape, dtype=np.float64)
    npow = ddmath.from_float(np.ones(n.shape))
    nf = ddmath.from_float(n.astype(np.float64))
    for i, c in enumerate(coeff_dd):
        if i > 0:
            if nmax**i >= 2**80:
                raise SieveRangeError(
                    f"monomial n^{i} exceeds the 2^80 phase-precision budget "
                    f"at n={nmax}"
                )
            npow = ddmath.mul(npow, nf)
            total += ddmath.frac(ddmath.mul(npow, c))
    # constant term shifts every phase identically; include it for fidelity
    if coeff_dd:
        total += (coeff_dd[0][0] + coeff_dd[0][1]) % 1.0
    total -= np.floor(total)
    return np.where(total >= 1.0, total - 1.0, total)


def sequence_from_json(obj) -> BoundedSequence:
    tag = obj["sequence"]
    if tag == "linear_exponential":
        return LinearExponential(Constant.from_json(obj["theta"]))
    if tag == "polynomial_exponential":
        return PolynomialExponential([Constant.from_json(c) for c in obj["coefficients"]])
    if tag == "constant":
        return ConstantSequence(complex(obj["re"], obj["im"]))
    raise ValueError(f"unknown sequence spec {obj!r}")


def correlation_reference(theta: Constant, p: int, q: int, x: int) -> float:
    """|sin(pi x (p-q) theta) / (x sin(pi (p-q) theta))| via dd phases."""
    beta_num = p - q
    bx = theta.frac_mul(np.array([beta_num * x], dtype=np.int64))[0]
    b1 = theta.frac_mul(np.array([beta_num], dtype=np.int64))[0]
    denom = x * abs(math.sin(math.pi * b1))
    if denom == 0.0:
        return 1.0
    return abs(math.sin(math.pi * bx)) / denom


def katai_correlation(seq: BoundedSequence, p: int, q: int, x: int,
                      checkpoints=None, threads: int = 1) -> CorrelationReport:
    """Normalized correlations (1/x') sum_{n<=x'} a(pn) conj(a(qn))."""
    if p == q:
        raise ValueError("correlation needs distinct primes p != q")
    if isinstance(seq, LinearExponential) and x * max(p, q) > PHASE_BUDGET:
        raise SieveRangeError(
            f"x*max(p,q) = {x * max(p, q)} exceeds the 2^40 phase budget"
        )
    checkpoints = sorted(int(c) for c in checkpoints) if checkpoints else [int(x)]

    def values(lo, hi):
        n = np.arange(lo, hi, dtype=np.int64)
        return seq.eval_array(p * n) * np.conj(seq.eval_array(q * n))

    sums = checkpoint_sums(values, checkpoints, threads=threads)
    corr = [s / c for s, c in zip(sums, checkpoints)]
    refs = None
    if isinstance(seq, LinearExponential):
        refs = [correlation_reference(seq.theta, p, q, c) for c in checkpoints]
    return CorrelationReport(p, q, checkpoints, corr, refs)


def orthogonality_sum(spec: LevelSet, seq: BoundedSequence, x: int,
                      checkpoints, sieve: FactorSieve,
                      threads: int = 1) -> DecayProfile:
    """|sum_{n<=x'} 1_E(n) a(n)| / x' on the checkpoint grid, with slope."""
    if x > sieve.limit:
        raise SieveRangeError(f"x={x} exceeds sieve limit {sieve.limit}")
    checkpoints = sorted(set(int(c) for c in checkpoints) | {int(x)})
    members = spec.members_upto(x, sieve)

    def values(lo, hi):
        n = np.arange(lo, hi, dtype=np.int64)
        return seq.eval_array(n) * members[lo:hi]

    sums = checkpoint_sums(values, checkpoints, threads=threads)
    vals = [abs(s) / c for s, c in zip(sums, checkpoints)]
    return DecayProfile(checkpoints, vals, slope=fit_loglog_slope(checkpoints, vals))


def turan_kubilius_variance(prime_set, x: int, sieve: FactorSieve) -> TuranKubiliusReport:
    """Exact variance sum_{n<=x} (w(n) - m)^2 for w(n) = #{p in P : p | n}.

    m = sum 1/p and the variance are exact rationals, computed from the
    integer moment sums S1 = sum w, S2 = sum w^2 (int64-safe for every
    x <= 2^31 and |P| <= a few thousand).
    """
    primes = sorted(int(p) for p in set(prime_set))
    if not primes:
        raise ValueError("prime set must be nonempty")
    if max(primes) > x:
        raise ValueError(f"max(P) = {max(primes)} exceeds x = {x}")
    if x > sieve.limit:
        raise SieveRangeError(f"x={x} exceeds sieve limit {sieve.limit}")
    for p in primes:
        if int(sieve.spf[p]) != p:
            raise ValueError(f"{p} is not prime")

    w = np.zeros(x + 1, dtype=np.int16)
    for p in primes:
        w[p::p] += 1
    w = w[1:]
    s1 = int(w.astype(np.int64).sum())
    s2 = int((w.astype(np.int64) ** 2).sum())
    m = sum(Fraction(1, p) for p in primes)
    variance = Fraction(s2) - 2 * m * s1 + x * m * m
    return TuranKubiliusReport(x=x, primes=primes, m=m, variance=variance)
