"""Hardy-function catalog, fractional parts along level sets, Weyl sums,
star discrepancy, and the ergodic-sequence tests.

The admissible catalog covers t^c (c > 0 non-integer), polynomials with an
irrational coefficient above degree 0, log^r t (r > 2), t log t, t / log t,
and log Gamma(t).  Admissibility is enforced by construction-time parameter
windows, not by symbolic growth analysis; the two falsification modes the
experiments need (log^r with r <= 2, all-rational polynomials) are
constructible only behind an explicit negative_control flag.

Fractional parts go through the double-double layer (monomials reduced
per-monomial, budget-guarded at n^i < 2^80); floors of rational powers go
through exact integer k-th roots.  Values at n = 1 follow the germ-at-
infinity convention: every catalog variant is assigned fractional part 0 and
floor h(1) there, so sets containing 1 stay usable.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from . import ddmath
from .constants import Constant, as_constant
from .levelsets import LevelSet, first_members
from .orthogonality import e_of, polynomial_frac
from .reports import DecayProfile, DiscrepancyReport
from .sieve import FactorSieve, SieveRangeError
from .summation import fit_loglog_slope


class AdmissibilityError(ValueError):
    """Hardy-function parameters violate the required growth window."""


class HardyFunction:
    """One member of the admissible catalog, with dd-accurate evaluation.

    growth_window records where the variant sits for the floor-sequence
    tests: "sublinear" (between log^2 t and t) or "between t^k and t^(k+1)";
    None when it grows like a power of t exactly (polynomials).
    """

    def __init__(self, variant, *, c=None, coefficients=None, r=None,
                 negative_control=False):
        self.variant = variant
        self.c = c if c is None else as_constant(c)
        self.r = r if r is None else as_constant(r)
        self.coefficients = (None if coefficients is None
                             else [as_constant(x) for x in coefficients])
        self.negative_control = bool(negative_control)
        self._validate()

    def _validate(self):
        v = self.variant
        if v == "power":
            cf = float(self.c)
            if cf <= 0:
                raise AdmissibilityError("power exponent must be positive")
            if not self.c.is_irrational and self.c.value_exact.denominator == 1:
                raise AdmissibilityError(
                    "integer exponent: t^c is itself a rational polynomial, "
                    "violating the separation-from-polynomials condition"
                )
            self.growth_window = ("sublinear" if cf < 1
                                  else f"between t^{int(cf)} and t^{int(cf) + 1}")
        elif v == "polynomial":
            if self.coefficients is None or len(self.coefficients) < 2:
                raise AdmissibilityError("polynomial needs degree >= 1")
            if not any(c.is_irrational for c in self.coefficients[1:]):
                if not self.negative_control:
                    raise AdmissibilityError(
                        "no irrational coefficient above degree 0: the phase "
                        "stays within O(1) of a rational polynomial; pass "
                        "negative_control=True to build the falsification mode"
                    )
            self.growth_window = None
        elif v == "log_power":
            if float(self.r) <= 2 and not self.negative_control:
                raise AdmissibilityError(
                    "log^r t with r <= 2 does not dominate log^2 t; pass "
                    "negative_control=True to build the falsification mode"
                )
            self.growth_window = "sublinear"
        elif v in ("t_log_t", "log_gamma"):
            self.growth_window = "between t^1 and t^2"
        elif v == "t_over_log_t":
            self.growth_window = "sublinear"
        else:
            raise ValueError(f"unknown Hardy variant {v!r}")

    @property
    def admissible(self) -> bool:
        """Separation from rational polynomials exceeds log^2, by construction."""
        if self.variant == "polynomial":
            return any(c.is_irrational for c in self.coefficients[1:])
        if self.variant == "log_power":
            return float(self.r) > 2
        return True

    # -- evaluation ----------------------------------------------------------

    def _dd_values(self, t: np.ndarray):
        td = ddmath.from_float(t)
        v = self.variant
        if v == "power":
            return ddmath.pow_dd(td, self.c.dd)
        if v == "log_power":
            return ddmath.pow_dd(ddmath.log(td), self.r.dd)
        if v == "t_log_t":
            return ddmath.mul(td, ddmath.log(td))
        if v == "t_over_log_t":
            return ddmath.div(td, ddmath.log(td))
        if v == "log_gamma":
            return ddmath.log_gamma(td)
        raise AssertionError(v)

    def eval(self, t: float) -> float:
        """Point evaluation as float64; requires t >= 2 for the log variants."""
        t = float(t)
        if self.variant == "polynomial":
            return float(sum(float(c) * t**i for i, c in enumerate(self.coefficients)))
        if t < 2:
            raise ValueError("evaluate at t >= 2 (log singularities below)")
        if self.variant == "log_gamma" and t.is_integer() and t < 20:
            return math.log(math.factorial(int(t) - 1))  # exact route
        h, l = self._dd_values(np.asarray([t]))
        return float(h[0] + l[0])

    def fractional_parts(self, n: np.ndarray) -> np.ndarray:
        """{h(n)} for an int64 array; n = 1 contributes 0 by the germ convention."""
        n = np.asarray(n, dtype=np.int64)
        if self.variant == "polynomial":
            return polynomial_frac(self.coefficients, n)
        out = np.zeros(n.shape, dtype=np.float64)
        big = n >= 2
        if big.any():
            out[big] = ddmath.frac(self._dd_values(n[big].astype(np.float64)))
        return out

    def dilated_difference_parts(self, p: int, q: int, n: np.ndarray) -> np.ndarray:
        """{h(pn) - h(qn)}: the sequence behind the dilation criterion."""
        n = np.asarray(n, dtype=np.int64)
        if self.variant == "polynomial":
            # a_i ((pn)^i - (qn)^i) = (a_i (p^i - q^i)) n^i: scale each
            # coefficient exactly in dd and reuse the monomial reduction
            scaled = [ddmath.mul_f(c.dd, float(p**i - q**i))
                      for i, c in enumerate(self.coefficients)]
            return polynomial_frac(scaled, n)
        hp = self._dd_values((p * n).astype(np.float64))
        hq = self._dd_values((q * n).astype(np.float64))
        return ddmath.frac(ddmath.sub(hp, hq))

    def floor_values(self, n: np.ndarray) -> np.ndarray:
        """floor(h(n)) as exact int64; overflow-guarded at 2^62.

        Rational power exponents go through exact integer k-th roots; the
        other variants use the double-double value (exact up to its ~2^-40
        worst-case margin near an integer).
        """
        n = np.asarray(n, dtype=np.int64)
        if self.variant == "power" and not self.c.is_irrational:
            u = self.c.value_exact.numerator
            v = self.c.value_exact.denominator
            out = np.empty(n.shape, dtype=np.int64)
            for i, m in enumerate(n.ravel()):
                root = _int_root(int(m) ** u, v)
                if root >= 2**62:
                    raise SieveRangeError(
                        f"floor(h({int(m)})) = {root} overflows the 2^62 guard"
                    )
                out[i] = root
            return out
        vals = np.zeros(n.shape, dtype=np.int64)
        big = n >= 2
        if self.variant == "polynomial":
            big = n >= 1
        if big.any():
            if self.variant == "polynomial":
                h, l = _polynomial_dd(self.coefficients, n[big])
            else:
                h, l = self._dd_values(n[big].astype(np.float64))
            if np.any(h >= float(2**62)):
                bad = int(n[big][int(np.argmax(h))])
                raise SieveRangeError(f"h({bad}) overflows the 2^62 floor guard")
            fh, fl = ddmath.floor((h, l))
            vals[big] = (fh + fl).astype(np.int64)
        if self.variant == "power":
            vals[~big] = 1  # 1^c = 1
        return vals

    def to_json(self):
        out = {"hardy": self.variant}
        if self.c is not None:
            out["c"] = self.c.to_json()
        if self.r is not None:
            out["r"] = self.r.to_json()
        if self.coefficients is not None:
            out["coefficients"] = [c.to_json() for c in self.coefficients]
        if self.negative_control:
            out["negative_control"] = True
        return out

    @staticmethod
    def from_json(obj) -> "HardyFunction":
        v = obj["hardy"]
        nc = obj.get("negative_control", False)
        if v == "power":
            return power(Constant.from_json(obj["c"]))
        if v == "log_power":
            return log_power(Constant.from_json(obj["r"]), negative_control=nc)
        if v == "polynomial":
            return polynomial([Constant.from_json(c) for c in obj["coefficients"]],
                              negative_control=nc)
        return HardyFunction(v)


def _polynomial_dd(coefficients, n: np.ndarray):
    """Full dd value of the polynomial (not reduced mod 1), for floors."""
    nf = ddmath.from_float(np.asarray(n, dtype=np.int64).astype(np.float64))
    total = ddmath.from_float(np.full(nf[0].shape, float(coefficients[0])))
    npow = ddmath.from_float(np.ones(nf[0].shape))
    for c in coefficients[1:]:
        npow = ddmath.mul(npow, nf)
        total = ddmath.add(total, ddmath.mul(npow, c.dd))
    return total


def _int_root(m: int, k: int) -> int:
    """floor(m ** (1/k)) for nonnegative integer m, exact."""
    if k == 1:
        return m
    if k == 2:
        return math.isqrt(m)
    r = int(round(m ** (1.0 / k)))
    while r > 0 and r**k > m:
        r -= 1
    while (r + 1) ** k <= m:
        r += 1
    return r


def power(c) -> HardyFunction:
    return HardyFunction("power", c=c)


def polynomial(coefficients, negative_control=False) -> HardyFunction:
    return HardyFunction("polynomial", coefficients=coefficients,
                         negative_control=negative_control)


def log_power(r, negative_control=False) -> HardyFunction:
    return HardyFunction("log_power", r=r, negative_control=negative_control)


def t_log_t() -> HardyFunction:
    return HardyFunction("t_log_t")


def t_over_log_t() -> HardyFunction:
    return HardyFunction("t_over_log_t")


def log_gamma() -> HardyFunction:
    return HardyFunction("log_gamma")


# -- mod-1 sequences and their statistics ------------------------------------


@dataclass
class Mod1Sequence:
    """Fractional parts in [0,1) plus the provenance that produced them."""

    values: np.ndarray
    provenance: dict = field(default_factory=dict)

    def __post_init__(self):
        v = np.asarray(self.values, dtype=np.float64)
        if v.size and (v.min() < 0.0 or v.max() >= 1.0):
            raise ValueError("mod-1 sequence entries must lie in [0, 1)")
        self.values = v

    def __len__(self):
        return int(self.values.size)


def fractional_parts_along(h: HardyFunction, spec: LevelSet, count: int,
                           sieve: FactorSieve) -> Mod1Sequence:
    """{h(n_j)} over the first `count` members of the set."""
    members = first_members(spec, count, sieve)
    vals = h.fractional_parts(members)
    return Mod1Sequence(vals, provenance={
        "hardy": h.to_json(), "set": spec.to_json(), "count": int(count),
    })


def weyl_sum(seq: Mod1Sequence, k: int) -> complex:
    """W_N(k) = (1/N) sum_j e(k x_j); k a nonzero integer."""
    if k == 0:
        raise ValueError("Weyl sums need a nonzero frequency k")
    if len(seq) == 0:
        raise ValueError("empty sequence")
    phases = (k * seq.values) % 1.0
    return complex(e_of(phases).mean())


def star_discrepancy(seq: Mod1Sequence) -> float:
    """D*_N = max_i max(i/N - x_(i), x_(i) - (i-1)/N) over the sorted points."""
    if len(seq) == 0:
        raise ValueError("empty sequence")
    pts = np.sort(seq.values, kind="stable")
    n = pts.size
    i = np.arange(1, n + 1, dtype=np.float64)
    return float(max((i / n - pts).max(), (pts - (i - 1) / n).max()))


def ud_test(h: HardyFunction, spec: LevelSet, count: int, k_max: int,
            sieve: FactorSieve) -> DiscrepancyReport:
    """Equidistribution report for {h(n_j)}: W_N(k) for k <= k_max, and D*."""
    seq = fractional_parts_along(h, spec, count, sieve)
    weyl = [weyl_sum(seq, k) for k in range(1, k_max + 1)]
    return DiscrepancyReport(len(seq), star_discrepancy(seq), weyl,
                             provenance=seq.provenance)


def pq_dilation_check(h: HardyFunction, p: int, q: int, count: int,
                      k_max: int) -> DiscrepancyReport:
    """Equidistribution report for {h(pn) - h(qn)}, n = 1..count."""
    if p == q:
        raise ValueError("dilation check needs distinct primes p != q")
    n = np.arange(1, count + 1, dtype=np.int64)
    vals = h.dilated_difference_parts(p, q, n)
    seq = Mod1Sequence(vals, provenance={"hardy": h.to_json(), "p": p, "q": q})
    weyl = [weyl_sum(seq, k) for k in range(1, k_max + 1)]
    return DiscrepancyReport(len(seq), star_discrepancy(seq), weyl,
                             provenance=seq.provenance)


def floor_sequence(h: HardyFunction, spec: LevelSet, count: int,
                   sieve: FactorSieve) -> np.ndarray:
    """floor(h(n_j)) over the first `count` members, exact int64."""
    members = first_members(spec, count, sieve)
    return h.floor_values(members)


def ergodic_weyl_test(integers, alpha, grid=None) -> DecayProfile:
    """(1/N)|sum_{j<=N} e(m_j alpha)| over a geometric grid of prefixes."""
    integers = np.asarray(integers, dtype=np.int64)
    alpha = as_constant(alpha)
    grid = _prefix_grid(integers.size, grid)
    if alpha.kind == "rational" and alpha.value_exact.denominator == 1:
        return DecayProfile(grid, [1.0] * len(grid), slope=0.0)  # e(m * int) = 1
    z = e_of(alpha.frac_mul(integers))
    vals = [abs(z[:g].sum()) / g for g in grid]
    return DecayProfile(grid, vals, slope=fit_loglog_slope(grid, vals))


def total_ergodicity_test(spec: LevelSet, alpha, count: int, sieve: FactorSieve,
                          grid=None, negative_control=False) -> DecayProfile:
    """(1/N)|sum_{j<=N} e(n_j alpha)| over prefixes of the member sequence.

    Rational alpha is rejected (the characterization quantifies over
    irrational frequencies) unless negative_control=True, the documented
    falsification mode.
    """
    alpha = as_constant(alpha)
    if not alpha.is_irrational and not negative_control:
        raise ValueError(
            "total ergodicity is characterized by Weyl averages at irrational "
            "frequencies; rational alpha needs negative_control=True"
        )
    members = first_members(spec, count, sieve)
    grid = _prefix_grid(count, grid)
    z = e_of(alpha.frac_mul(members))
    vals = [abs(z[:g].sum()) / g for g in grid]
    return DecayProfile(grid, vals, slope=fit_loglog_slope(grid, vals))


def _prefix_grid(n: int, grid=None):
    if grid is not None:
        return sorted(int(g) for g in grid)
    out = []
    g = 100
    while g < n:
        out.append(g)
        g *= 10
    out.append(int(n))
    return out
