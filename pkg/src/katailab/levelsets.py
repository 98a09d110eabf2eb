"""Level sets of multiplicative functions: membership, enumeration, density.

Each set variant decides membership from a factorization alone, and also
provides a vectorized members_upto(x) boolean table for sieve-scale work.
Rotation and real-threshold variants return a boundary flag when the decisive
quantity lands within eps_b of an interval endpoint or threshold (the verdict
itself is always by strict comparison).

Strict inequalities with rational thresholds (abundant numbers, phi(n) < x*n
with rational x) are decided in exact integer arithmetic, so e.g. perfect
numbers are excluded exactly.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import NamedTuple

import numpy as np

from .constants import Constant, as_constant
from .functions import ArithmeticFunction, from_json as function_from_json
from .sieve import FactorSieve, SieveRangeError
from .reports import DensityReport, SeriesReport

BOUNDARY_EPS = 1e-12


class Verdict(NamedTuple):
    member: bool
    boundary: bool = False


class TruncationError(RuntimeError):
    """The sieve ran out before the requested member count was reached."""

    def __init__(self, requested, attained, limit):
        super().__init__(
            f"set has only {attained} members up to the sieve limit {limit}, "
            f"{requested} requested"
        )
        self.requested, self.attained = requested, attained


@dataclass(frozen=True)
class Interval:
    """One interval of [0,1] with open/closed end markers like "[)"."""

    lo: Constant
    hi: Constant
    closed: str = "[)"

    def __post_init__(self):
        if self.closed not in ("[)", "[]", "()", "(]"):
            raise ValueError(f"bad interval closure {self.closed!r}")
        if not (0.0 <= float(self.lo) <= 1.0 and 0.0 <= float(self.hi) <= 1.0):
            raise ValueError("interval endpoints must lie in [0, 1]")
        if float(self.lo) > float(self.hi):
            raise ValueError("interval endpoints out of order")

    def contains(self, x):
        lo, hi = float(self.lo), float(self.hi)
        left = x >= lo if self.closed[0] == "[" else x > lo
        right = x <= hi if self.closed[1] == "]" else x < hi
        return left & right if isinstance(x, np.ndarray) else (left and right)

    def to_json(self):
        return {"lo": self.lo.to_json(), "hi": self.hi.to_json(), "closed": self.closed}


class IntervalSetMod1:
    """Finite union of pairwise-disjoint intervals of the unit circle."""

    def __init__(self, intervals, eps=BOUNDARY_EPS):
        parts = []
        for iv in intervals:
            if isinstance(iv, Interval):
                parts.append(iv)
            else:
                lo, hi, *rest = iv
                closed = rest[0] if rest else "[)"
                parts.append(Interval(as_constant(lo), as_constant(hi), closed))
        parts.sort(key=lambda iv: float(iv.lo))
        for a, b in zip(parts, parts[1:]):
            if float(b.lo) < float(a.hi):
                raise ValueError("intervals overlap after normalization")
        total = sum(float(iv.hi) - float(iv.lo) for iv in parts)
        if total > 1.0 + 1e-15:
            raise ValueError("total interval length exceeds 1")
        self.intervals = parts
        self.eps = eps

    def contains(self, x):
        if isinstance(x, np.ndarray):
            out = np.zeros(x.shape, dtype=bool)
            for iv in self.intervals:
                out |= iv.contains(x)
            return out
        return any(iv.contains(x) for iv in self.intervals)

    def near_boundary(self, x):
        """Within eps of an endpoint, as a mod-1 distance."""
        xs = np.asarray(x, dtype=np.float64)
        out = np.zeros(xs.shape, dtype=bool)
        for iv in self.intervals:
            for endpoint in (float(iv.lo), float(iv.hi)):
                d = np.abs(xs - endpoint)
                d = np.minimum(d, 1.0 - d)
                out |= d < self.eps
        return out if isinstance(x, np.ndarray) else bool(out)

    @property
    def length(self):
        return sum(float(iv.hi) - float(iv.lo) for iv in self.intervals)

    def to_json(self):
        return {"intervals": [iv.to_json() for iv in self.intervals], "eps": self.eps}

    @staticmethod
    def from_json(obj):
        ivs = [
            Interval(Constant.from_json(o["lo"]), Constant.from_json(o["hi"]), o["closed"])
            for o in obj["intervals"]
        ]
        return IntervalSetMod1(ivs, obj.get("eps", BOUNDARY_EPS))


# ---------------------------------------------------------------------------


class LevelSet:
    """Base: a membership predicate decidable from a factorization."""

    name = "abstract"
    is_multiplicative_set = False

    def contains(self, n: int, sieve: FactorSieve) -> Verdict:
        raise NotImplementedError

    def members_upto(self, x: int, sieve: FactorSieve) -> np.ndarray:
        raise NotImplementedError

    def _check(self, x, sieve):
        if x > sieve.limit:
            raise SieveRangeError(f"x={x} exceeds sieve limit {sieve.limit}")

    def to_json(self):
        raise NotImplementedError

    def __repr__(self):
        import json

        return f"LevelSet({json.dumps(self.to_json(), sort_keys=True)})"


class Squarefree(LevelSet):
    name = "squarefree"
    is_multiplicative_set = True

    def contains(self, n, sieve):
        return Verdict(all(e == 1 for _, e in sieve.factorize(n)))

    def members_upto(self, x, sieve):
        self._check(x, sieve)
        return sieve.table("squarefree")[: x + 1].copy()

    def to_json(self):
        return {"variant": "squarefree"}


class KFree(LevelSet):
    is_multiplicative_set = True

    def __init__(self, k: int):
        if k < 2:
            raise ValueError("k-free needs k >= 2")
        self.k = int(k)
        self.name = f"{k}free"

    def contains(self, n, sieve):
        return Verdict(all(e < self.k for _, e in sieve.factorize(n)))

    def members_upto(self, x, sieve):
        self._check(x, sieve)
        out = np.ones(x + 1, dtype=bool)
        out[0] = False
        for p in sieve.primes(int(x ** (1.0 / self.k)) + 1):
            q = int(p) ** self.k
            if q <= x:
                out[q::q] = False
        return out

    def to_json(self):
        return {"variant": "kfree", "k": self.k}


class OmegaMod(LevelSet):
    """Residue class of omega(n) or Omega(n) modulo b."""

    def __init__(self, b: int, r: int, counted="big_omega"):
        if b < 1:
            raise ValueError("modulus must be positive")
        if counted not in ("big_omega", "small_omega"):
            raise ValueError("counted must be 'big_omega' or 'small_omega'")
        self.b, self.r, self.counted = int(b), int(r) % int(b), counted
        tag = "big_omega_mod" if counted == "big_omega" else "omega_mod"
        self.name = f"{tag}({b},{r})"

    def _count(self, n, sieve):
        f = sieve.factorize(n)
        return sum(e for _, e in f) if self.counted == "big_omega" else len(f)

    def contains(self, n, sieve):
        return Verdict(self._count(n, sieve) % self.b == self.r)

    def members_upto(self, x, sieve):
        self._check(x, sieve)
        counts = sieve.table(self.counted)[: x + 1]
        out = counts % self.b == self.r
        out[0] = False
        return out

    def to_json(self):
        return {"variant": "big_omega_mod" if self.counted == "big_omega" else "omega_mod",
                "b": self.b, "r": self.r}


class OmegaRot(LevelSet):
    """{n : alpha * omega(n) mod 1 in J} (or with Omega)."""

    def __init__(self, alpha, window: IntervalSetMod1, counted="big_omega"):
        self.alpha = as_constant(alpha)
        self.window = window
        if counted not in ("big_omega", "small_omega"):
            raise ValueError("counted must be 'big_omega' or 'small_omega'")
        self.counted = counted
        tag = "big_omega_rot" if counted == "big_omega" else "omega_rot"
        self.name = f"{tag}({self.alpha})"

    def _lut(self, kmax):
        fracs = self.alpha.frac_mul(np.arange(kmax + 1, dtype=np.int64))
        return self.window.contains(fracs), self.window.near_boundary(fracs)

    def contains(self, n, sieve):
        f = sieve.factorize(n)
        k = sum(e for _, e in f) if self.counted == "big_omega" else len(f)
        member, boundary = self._lut(k)
        return Verdict(bool(member[k]), bool(boundary[k]))

    def members_upto(self, x, sieve):
        self._check(x, sieve)
        counts = sieve.table(self.counted)[: x + 1]
        member, _ = self._lut(int(counts.max(initial=0)))
        out = member[counts]
        out[0] = False
        return out

    def boundary_upto(self, x, sieve):
        counts = sieve.table(self.counted)[: x + 1]
        _, boundary = self._lut(int(counts.max(initial=0)))
        out = boundary[counts]
        out[0] = False
        return out

    def to_json(self):
        return {
            "variant": "big_omega_rot" if self.counted == "big_omega" else "omega_rot",
            "alpha": self.alpha.to_json(),
            "window": self.window.to_json(),
        }


class Abundant(LevelSet):
    """sigma(n) > 2n, strict (perfect numbers excluded exactly)."""

    name = "abundant"

    def contains(self, n, sieve):
        sig = 1
        for p, e in sieve.factorize(n):
            sig *= (p ** (e + 1) - 1) // (p - 1)
        return Verdict(sig > 2 * n)

    def members_upto(self, x, sieve):
        self._check(x, sieve)
        sig = sieve.table("sigma")[: x + 1]
        out = sig > 2 * np.arange(x + 1, dtype=np.int64)
        out[0] = False
        return out

    def to_json(self):
        return {"variant": "abundant"}


class Deficient(LevelSet):
    """sigma(n) < 2n, strict."""

    name = "deficient"

    def contains(self, n, sieve):
        sig = 1
        for p, e in sieve.factorize(n):
            sig *= (p ** (e + 1) - 1) // (p - 1)
        return Verdict(sig < 2 * n)

    def members_upto(self, x, sieve):
        self._check(x, sieve)
        sig = sieve.table("sigma")[: x + 1]
        out = sig < 2 * np.arange(x + 1, dtype=np.int64)
        out[0] = False
        return out

    def to_json(self):
        return {"variant": "deficient"}


class PhiRatioBelow(LevelSet):
    """{n : phi(n) < x * n}; exact for rational x, flagged near real x."""

    def __init__(self, threshold):
        self.threshold = as_constant(threshold)
        t = float(self.threshold)
        if not (0.0 < t < 1.0):
            raise ValueError("threshold must lie in (0, 1)")
        self.name = f"phi_ratio_below({self.threshold})"

    def contains(self, n, sieve):
        phi = 1
        for p, e in sieve.factorize(n):
            phi *= p ** (e - 1) * (p - 1)
        if self.threshold.kind == "rational":
            v = self.threshold.value_exact
            return Verdict(phi * v.denominator < v.numerator * n)
        t = float(self.threshold)
        ratio = phi / n
        return Verdict(ratio < t, abs(ratio - t) < BOUNDARY_EPS)

    def members_upto(self, x, sieve):
        self._check(x, sieve)
        phi = sieve.table("phi")[: x + 1]
        n = np.arange(x + 1, dtype=np.int64)
        if self.threshold.kind == "rational":
            v = self.threshold.value_exact
            out = phi * v.denominator < v.numerator * n
        else:
            out = phi < float(self.threshold) * n
        out[0] = False
        return out

    def to_json(self):
        return {"variant": "phi_ratio_below", "threshold": self.threshold.to_json()}


class TauMod(LevelSet):
    """{n : tau(n) = r mod b} with gcd(b, r) = 1."""

    def __init__(self, b: int, r: int):
        if b < 1 or math.gcd(b, r) != 1:
            raise ValueError("tau_mod needs b >= 1 and gcd(b, r) = 1")
        self.b, self.r = int(b), int(r) % int(b)
        self.name = f"tau_mod({b},{r})"

    def contains(self, n, sieve):
        t = 1
        for _, e in sieve.factorize(n):
            t *= e + 1
        return Verdict(t % self.b == self.r)

    def members_upto(self, x, sieve):
        self._check(x, sieve)
        out = sieve.table("tau")[: x + 1] % self.b == self.r
        out[0] = False
        return out

    def to_json(self):
        return {"variant": "tau_mod", "b": self.b, "r": self.r}


class GenericLevel(LevelSet):
    """E(f, z): exact level set of an arithmetic function, with a tolerance.

    Default tolerance: 0 for integer-valued f (exact equality), 1e-9 in
    modulus otherwise.
    """

    def __init__(self, fn: ArithmeticFunction, target, tolerance=None):
        self.fn = fn
        self.target = target
        if tolerance is None:
            tolerance = 0.0 if fn.integer_valued else 1e-9
        self.tolerance = float(tolerance)
        self.name = f"level({fn.name},{target})"

    def contains(self, n, sieve):
        v = self.fn.eval(n, sieve)
        if self.tolerance == 0.0:
            return Verdict(v == self.target)
        dist = abs(complex(v) - complex(self.target))
        return Verdict(dist <= self.tolerance,
                       abs(dist - self.tolerance) < BOUNDARY_EPS)

    def members_upto(self, x, sieve):
        self._check(x, sieve)
        vals = self.fn.values_upto(x, sieve)
        if self.tolerance == 0.0:
            out = vals == complex(self.target) if np.iscomplexobj(vals) else vals == float(self.target)
        else:
            out = np.abs(vals - complex(self.target)) <= self.tolerance
        out[0] = False
        return out

    def to_json(self):
        t = self.target
        target = {"re": complex(t).real, "im": complex(t).imag}
        return {"variant": "generic_level", "function": self.fn.to_json(),
                "target": target, "tolerance": self.tolerance}


class Intersection(LevelSet):
    """E cap M; intersecting with a multiplicative set preserves the classes."""

    def __init__(self, left: LevelSet, right: LevelSet):
        self.left, self.right = left, right
        self.is_multiplicative_set = left.is_multiplicative_set and right.is_multiplicative_set
        self.name = f"({left.name} & {right.name})"

    def contains(self, n, sieve):
        a = self.left.contains(n, sieve)
        b = self.right.contains(n, sieve)
        return Verdict(a.member and b.member, a.boundary or b.boundary)

    def members_upto(self, x, sieve):
        return self.left.members_upto(x, sieve) & self.right.members_upto(x, sieve)

    def to_json(self):
        return {"variant": "intersection",
                "left": self.left.to_json(), "right": self.right.to_json()}


_SIMPLE = {"squarefree": Squarefree, "abundant": Abundant, "deficient": Deficient}


def from_json(obj) -> LevelSet:
    v = obj["variant"]
    if v in _SIMPLE:
        return _SIMPLE[v]()
    if v == "kfree":
        return KFree(obj["k"])
    if v in ("omega_mod", "big_omega_mod"):
        counted = "big_omega" if v == "big_omega_mod" else "small_omega"
        return OmegaMod(obj["b"], obj["r"], counted)
    if v in ("omega_rot", "big_omega_rot"):
        counted = "big_omega" if v == "big_omega_rot" else "small_omega"
        return OmegaRot(Constant.from_json(obj["alpha"]),
                        IntervalSetMod1.from_json(obj["window"]), counted)
    if v == "phi_ratio_below":
        return PhiRatioBelow(Constant.from_json(obj["threshold"]))
    if v == "tau_mod":
        return TauMod(obj["b"], obj["r"])
    if v == "generic_level":
        fn = function_from_json(obj["function"])
        t = obj["target"]
        target = t["re"] if t["im"] == 0 else complex(t["re"], t["im"])
        return GenericLevel(fn, target, obj["tolerance"])
    if v == "intersection":
        return Intersection(from_json(obj["left"]), from_json(obj["right"]))
    raise ValueError(f"unknown level-set variant {v!r}")


# -- operations --------------------------------------------------------------


def enumerate_members(spec: LevelSet, x: int, sieve: FactorSieve, chunk=1 << 20):
    """Stream the members of spec in [1, x] in increasing order."""
    if x > sieve.limit:
        raise SieveRangeError(f"x={x} exceeds sieve limit {sieve.limit}")
    table = spec.members_upto(x, sieve)
    for lo in range(0, x + 1, chunk):
        hi = min(lo + chunk, x + 1)
        for n in np.nonzero(table[lo:hi])[0]:
            yield int(n) + lo


def first_members(spec: LevelSet, count: int, sieve: FactorSieve) -> np.ndarray:
    """First `count` members as an int64 array; TruncationError if too few."""
    x = min(sieve.limit, max(1024, 4 * count))
    while True:
        table = spec.members_upto(x, sieve)
        members = np.nonzero(table)[0]
        if members.size >= count:
            return members[:count].astype(np.int64)
        if x >= sieve.limit:
            raise TruncationError(count, int(members.size), sieve.limit)
        x = min(sieve.limit, 4 * x)


def empirical_density(spec: LevelSet, checkpoints, sieve: FactorSieve) -> DensityReport:
    """|E cap [1,x]| / x at each checkpoint (exact integer counts)."""
    checkpoints = sorted(int(c) for c in checkpoints)
    if checkpoints[-1] > sieve.limit:
        raise SieveRangeError(f"checkpoint {checkpoints[-1]} exceeds sieve limit")
    table = spec.members_upto(checkpoints[-1], sieve)
    densities = []
    acc = 0
    prev = 1
    for c in checkpoints:
        acc += int(np.count_nonzero(table[prev : c + 1]))
        prev = c + 1
        densities.append(acc / c)
    return DensityReport(checkpoints, densities, set_spec=spec.to_json())


def concentration_scan(fn: ArithmeticFunction, target, y: int, checkpoints,
                       sieve: FactorSieve, tolerance: float = 0.0,
                       predicate=None) -> SeriesReport:
    """Partial sums of 1/p over primes p <= y' with f(p) = target.

    tolerance 0 means exact equality (for exactly representable values).  A
    custom predicate(value) -> bool generalizes the matching rule, which is
    how the torus-criteria series are probed.  The divergence slope is
    advisory only.
    """
    if y > sieve.limit:
        raise SieveRangeError(f"y={y} exceeds sieve limit {sieve.limit}")
    checkpoints = sorted(int(c) for c in checkpoints)
    if predicate is None:
        if tolerance == 0.0:
            predicate = lambda v: v == target
        else:
            predicate = lambda v: abs(complex(v) - complex(target)) <= tolerance
    primes = sieve.primes(y)
    sums = []
    acc = 0.0
    i = 0
    for c in checkpoints:
        while i < primes.size and primes[i] <= c:
            p = int(primes[i])
            if predicate(fn.prime_power(p, 1)):
                acc += 1.0 / p
            i += 1
        sums.append(acc)
    slope = divergence_slope(checkpoints, sums)
    return SeriesReport(
        name=f"concentration({fn.name})", cutoffs=checkpoints, partial_sums=sums,
        slope=slope,
    )


def divergence_slope(cutoffs, sums) -> float:
    """Advisory slope of the partial sum against log log y over the last decade.

    Slope near 1 suggests Mertens-type divergence; near 0 suggests convergence.
    Never a decision, only a report.
    """
    ys = np.asarray(cutoffs, dtype=np.float64)
    ss = np.asarray(sums, dtype=np.float64)
    keep = (ys >= ys.max() / 10.0) & (ys > math.e)
    if keep.sum() < 2:
        return 0.0
    ll = np.log(np.log(ys[keep]))
    if np.ptp(ll) == 0:
        return 0.0
    return float(np.polyfit(ll, ss[keep], 1)[0])
