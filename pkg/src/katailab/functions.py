"""Catalog of multiplicative and additive arithmetic functions.

Every function is described by its rule on prime powers; evaluation at a
single n goes through the sieve factorization, while values_upto(x) produces
a whole table at once (catalog entries have dedicated fast paths, arbitrary
prime-power rules go through a blockwise multiplicative dynamic program).

Functions carry a ``kind`` tag (multiplicative / completely_multiplicative /
additive) and an ``in_unit_ball`` flag marking membership in the class of
multiplicative functions bounded by 1 in modulus.
"""

from __future__ import annotations

import cmath
import math
from fractions import Fraction

import numpy as np

from .constants import Constant, as_constant
from .sieve import FactorSieve


class EvaluationError(ValueError):
    """A prime-power rule returned a non-finite value."""

    def __init__(self, p, m, value):
        super().__init__(f"rule returned non-finite value {value!r} at p={p}, m={m}")
        self.p, self.m = p, m


def root_of_unity(num: int, den: int):
    """e(num/den), exact for denominators 1, 2 and 4 after reduction."""
    t = Fraction(num, den) % 1
    if t == 0:
        return 1
    if t == Fraction(1, 2):
        return -1
    if t == Fraction(1, 4):
        return 1j
    if t == Fraction(3, 4):
        return -1j
    return cmath.exp(2j * cmath.pi * float(t))


def _e_of(x: float) -> complex:
    return cmath.exp(2j * cmath.pi * (x % 1.0))


class ArithmeticFunction:
    """An arithmetic function given by its rule on prime powers.

    kind: "multiplicative", "completely_multiplicative" or "additive".
    """

    def __init__(self, name, prime_power, kind="multiplicative",
                 in_unit_ball=False, integer_valued=False, params=None):
        self.name = name
        self._rule = prime_power
        self.kind = kind
        self.in_unit_ball = in_unit_ball
        self.integer_valued = integer_valued
        self.params = params or {}
        self._memo = {}

    @property
    def is_multiplicative(self):
        return self.kind in ("multiplicative", "completely_multiplicative")

    def prime_power(self, p: int, m: int):
        """Value on p^m (m >= 1); memoized, validated finite."""
        key = (p, m)
        v = self._memo.get(key)
        if v is None:
            v = self._rule(p, m)
            if isinstance(v, complex):
                finite = math.isfinite(v.real) and math.isfinite(v.imag)
            else:
                finite = math.isfinite(v)
            if not finite:
                raise EvaluationError(p, m, v)
            self._memo[key] = v
        return v

    def __call__(self, n: int, sieve: FactorSieve):
        return self.eval(n, sieve)

    def eval(self, n: int, sieve: FactorSieve):
        """Value at n, combined over the factorization per the function kind."""
        f = sieve.factorize(n)
        if self.kind == "additive":
            return sum(self.prime_power(p, m) for p, m in f)
        out = 1
        for p, m in f:
            out = out * self.prime_power(p, m)
        return out

    def values_upto(self, x: int, sieve: FactorSieve) -> np.ndarray:
        """Table of values for n = 0..x (index 0 is padding)."""
        fast = getattr(self, "_fast_table", None)
        if fast is not None:
            return fast(x, sieve)
        return bulk_values(self, x, sieve)

    def to_json(self):
        return {"function": self.name, **self.params}

    def __repr__(self):
        return f"ArithmeticFunction({self.name})"


def _with_fast_table(fn, table_builder):
    fn._fast_table = table_builder
    return fn


# -- bulk evaluation of arbitrary prime-power rules -------------------------

def bulk_values(fn: ArithmeticFunction, x: int, sieve: FactorSieve) -> np.ndarray:
    """values[n] for n <= x via the prime-power-part dynamic program."""
    if x > sieve.limit:
        raise ValueError(f"x={x} exceeds sieve limit {sieve.limit}")
    pp = sieve.table("prime_power_part")[: x + 1]

    # rule values on every prime power q = p^m <= x, placed densely at q
    additive = fn.kind == "additive"
    ppval = np.zeros(x + 1, dtype=complex)
    for p in sieve.primes(x):
        p = int(p)
        q, m = p, 1
        while q <= x:
            ppval[q] = complex(fn.prime_power(p, m))
            q *= p
            m += 1
    if not ppval.imag.any():
        ppval = ppval.real  # keep real rules in float tables

    out = np.zeros(x + 1, dtype=ppval.dtype)
    if not additive:
        out[1] = 1
    n = np.arange(x + 1, dtype=np.int64)
    lo = 2
    while lo <= x:
        hi = min(2 * lo, x + 1)
        rest = n[lo:hi] // pp[lo:hi]
        if additive:
            out[lo:hi] = out[rest] + ppval[pp[lo:hi]]
        else:
            out[lo:hi] = out[rest] * ppval[pp[lo:hi]]
        lo = hi
    return out


# -- catalog -----------------------------------------------------------------

def mobius() -> ArithmeticFunction:
    fn = ArithmeticFunction(
        "mobius", lambda p, m: -1 if m == 1 else 0,
        in_unit_ball=True, integer_valued=True,
    )
    return _with_fast_table(fn, lambda x, s: s.table("mobius")[: x + 1].astype(np.float64))


def liouville() -> ArithmeticFunction:
    fn = ArithmeticFunction(
        "liouville", lambda p, m: (-1) ** m,
        kind="completely_multiplicative", in_unit_ball=True, integer_valued=True,
    )

    def table(x, s):
        return np.where(s.table("big_omega")[: x + 1] % 2 == 0, 1.0, -1.0)

    return _with_fast_table(fn, table)


def squarefree_indicator() -> ArithmeticFunction:
    fn = ArithmeticFunction(
        "squarefree_indicator", lambda p, m: 1 if m == 1 else 0,
        in_unit_ball=True, integer_valued=True,
    )
    return _with_fast_table(fn, lambda x, s: s.table("squarefree")[: x + 1].astype(np.float64))


def euler_phi_ratio() -> ArithmeticFunction:
    def rule(p, m):
        return Fraction(p - 1, p)

    fn = ArithmeticFunction("euler_phi_ratio", rule, in_unit_ball=True)

    def table(x, s):
        phi = s.table("phi")[: x + 1].astype(np.float64)
        n = np.arange(x + 1, dtype=np.float64)
        n[0] = 1.0
        return phi / n

    return _with_fast_table(fn, table)


def sigma() -> ArithmeticFunction:
    fn = ArithmeticFunction(
        "sigma", lambda p, m: (p ** (m + 1) - 1) // (p - 1), integer_valued=True,
    )
    return _with_fast_table(fn, lambda x, s: s.table("sigma")[: x + 1].astype(np.float64))


def tau() -> ArithmeticFunction:
    fn = ArithmeticFunction("tau", lambda p, m: m + 1, integer_valued=True)
    return _with_fast_table(fn, lambda x, s: s.table("tau")[: x + 1].astype(np.float64))


def big_omega() -> ArithmeticFunction:
    fn = ArithmeticFunction("big_omega", lambda p, m: m, kind="additive", integer_valued=True)
    return _with_fast_table(fn, lambda x, s: s.table("big_omega")[: x + 1].astype(np.float64))


def small_omega() -> ArithmeticFunction:
    fn = ArithmeticFunction("small_omega", lambda p, m: 1, kind="additive", integer_valued=True)
    return _with_fast_table(fn, lambda x, s: s.table("small_omega")[: x + 1].astype(np.float64))


def archimedean(t: float) -> ArithmeticFunction:
    t = float(t)
    fn = ArithmeticFunction(
        "archimedean", lambda p, m: cmath.exp(1j * t * m * math.log(p)),
        kind="completely_multiplicative", in_unit_ball=True, params={"t": t},
    )

    def table(x, s):
        n = np.arange(x + 1, dtype=np.float64)
        n[0] = 1.0
        out = np.exp(1j * t * np.log(n))
        out[0] = 0.0
        return out

    return _with_fast_table(fn, table)


def _omega_exponential(name, xi, weight_of_m, restrict_squarefree=False):
    xi = as_constant(xi)

    def rule(p, m):
        if restrict_squarefree and m > 1:
            return 0
        k = weight_of_m(m)
        if xi.kind == "rational":
            v = xi.value_exact * k
            return root_of_unity(v.numerator, v.denominator)
        return _e_of(float(xi.frac_mul(np.array(k))))

    kind = "completely_multiplicative" if (name == "lambda_xi") else "multiplicative"
    fn = ArithmeticFunction(name, rule, kind=kind, in_unit_ball=True,
                            params={"xi": xi.to_json()})

    def phase_at(k):
        if xi.kind == "rational":
            v = xi.value_exact * k
            return root_of_unity(v.numerator, v.denominator)
        return _e_of(float(xi.frac_mul(np.array(k))))

    def table(x, s):
        counts = s.table("small_omega" if name == "kappa_xi" else "big_omega")[: x + 1]
        lut = np.array([complex(phase_at(k)) for k in range(int(counts.max(initial=0)) + 1)])
        out = lut[counts]
        if restrict_squarefree:
            out = out * s.table("squarefree")[: x + 1]
        out[0] = 0.0
        return out

    return _with_fast_table(fn, table)


def lambda_xi(xi) -> ArithmeticFunction:
    """e(xi * Omega(n)); completely multiplicative, reduces to liouville at xi=1/2."""
    return _omega_exponential("lambda_xi", xi, lambda m: m)


def kappa_xi(xi) -> ArithmeticFunction:
    """e(xi * omega(n)); multiplicative but not completely."""
    return _omega_exponential("kappa_xi", xi, lambda m: 1)


def mu_xi(xi) -> ArithmeticFunction:
    """e(xi * Omega(n)) on squarefree n, 0 elsewhere."""
    return _omega_exponential("mu_xi", xi, lambda m: m, restrict_squarefree=True)


def constant_one() -> ArithmeticFunction:
    fn = ArithmeticFunction(
        "one", lambda p, m: 1, kind="completely_multiplicative",
        in_unit_ball=True, integer_valued=True,
    )
    return _with_fast_table(
        fn, lambda x, s: np.concatenate([[0.0], np.ones(x, dtype=np.float64)])
    )


def custom(rule, name="custom", **flags) -> ArithmeticFunction:
    """Wrap a user prime-power rule (p, m) -> value; g(p^0)=1 implied."""
    return ArithmeticFunction(name, rule, **flags)


# -- Dirichlet characters ----------------------------------------------------

class CharacterGroupError(ValueError):
    """Exponent tuple does not match the unit-group shape."""


def _factor_small(d: int):
    out = []
    for p in (2, 3, 5, 7):
        e = 0
        while d % p == 0:
            d //= p
            e += 1
        if e:
            out.append((p, e))
    q = 11
    while q * q <= d:
        e = 0
        while d % q == 0:
            d //= q
            e += 1
        if e:
            out.append((q, e))
        q += 2
    if d > 1:
        out.append((d, 1))
    return out


def _prime_factors(n: int):
    return [p for p, _ in _factor_small(n)]


def _order(a: int, mod: int, group_order: int) -> int:
    order = group_order
    for q in _prime_factors(group_order):
        while order % q == 0 and pow(a, order // q, mod) == 1:
            order //= q
    return order


def smallest_primitive_root(pe: int, p: int) -> int:
    """Smallest primitive root modulo the odd prime power pe = p^e."""
    phi = pe - pe // p
    for g in range(2, pe):
        if g % p == 0:
            continue
        if _order(g, pe, phi) == phi:
            return g
    raise ValueError(f"no primitive root modulo {pe}")  # unreachable for odd p^e


def unit_group_structure(d: int):
    """Cyclic decomposition of (Z/dZ)*: list of (modulus_part, generator, order).

    Odd prime powers contribute one factor generated by the smallest primitive
    root; 4 contributes (C2, generator -1); 2^k for k >= 3 contributes the pair
    {-1, 5}. The basis is fixed so character indexing is reproducible.
    """
    factors = []
    for p, e in _factor_small(d):
        pe = p**e
        if p == 2:
            if e == 1:
                continue  # trivial group
            if e == 2:
                factors.append((pe, pe - 1, 2))
            else:
                factors.append((pe, pe - 1, 2))
                factors.append((pe, 5, pe // 4))
        else:
            factors.append((pe, smallest_primitive_root(pe, p), pe - pe // p))
    return factors


def dirichlet_character(d: int, exponents) -> ArithmeticFunction:
    """Dirichlet character mod d selected by exponents on the fixed generators."""
    if d < 1:
        raise CharacterGroupError(f"modulus must be >= 1, got {d}")
    factors = unit_group_structure(d)
    exponents = tuple(int(k) for k in exponents)
    if len(exponents) != len(factors):
        shape = " x ".join(f"C{order}" for _, _, order in factors) or "trivial"
        raise CharacterGroupError(
            f"(Z/{d}Z)* has shape {shape}: expected {len(factors)} exponents, "
            f"got {len(exponents)}"
        )

    # discrete logs per factor, then one exact rational phase per residue
    table = np.zeros(d if d > 1 else 1, dtype=complex)
    if d == 1:
        table[0] = 1  # chi(n) = 1 for all n when d = 1
    else:
        logs = []
        has_minus_five_pair = len(factors) >= 2 and factors[0][0] == factors[1][0]
        for i, (pe, g, order) in enumerate(factors):
            dl = {}
            if has_minus_five_pair and i == 0:
                # 2^k, k >= 3: every odd residue is (-1)^a 5^b; index by (a, b)
                order5 = factors[1][2]
                acc = 1
                for b in range(order5):
                    dl[acc] = (0, b)
                    dl[(-acc) % pe] = (1, b)
                    acc = acc * 5 % pe
                logs.append((pe, dl, order))
            else:
                acc = 1
                for j in range(order):
                    dl[acc] = j
                    acc = acc * g % pe
                logs.append((pe, dl, order))
        for n in range(1, d + 1):
            if math.gcd(n, d) != 1:
                continue
            phase = Fraction(0)
            if has_minus_five_pair:
                pe = factors[0][0]
                a, b = logs[0][1][n % pe]
                phase += Fraction(exponents[0] * a, 2)
                phase += Fraction(exponents[1] * b, factors[1][2])
                rest, rest_exp = logs[2:], exponents[2:]
            else:
                rest, rest_exp = logs, exponents
            for (pe, dl, order), k in zip(rest, rest_exp):
                phase += Fraction(k * dl[n % pe], order)
            table[n % d] = root_of_unity(phase.numerator, phase.denominator)

    def rule(p, m):
        return table[pow(p, m, d)] if d > 1 else 1

    fn = ArithmeticFunction(
        "dirichlet", rule, kind="completely_multiplicative", in_unit_ball=True,
        params={"modulus": d, "exponents": list(exponents)},
    )
    fn.modulus = d
    fn.character_table = table
    fn.is_principal = all(k % order == 0 for (_, _, order), k in zip(factors, exponents))

    def tab(x, s):
        idx = np.arange(x + 1, dtype=np.int64) % d
        return table[idx]

    return _with_fast_table(fn, tab)


def all_characters(d: int):
    """Every Dirichlet character mod d, in lexicographic exponent order."""
    factors = unit_group_structure(d)
    if not factors:
        yield dirichlet_character(d, ())
        return
    orders = [order for _, _, order in factors]
    total = math.prod(orders)
    for idx in range(total):
        exps = []
        rem = idx
        for o in orders:
            exps.append(rem % o)
            rem //= o
        yield dirichlet_character(d, exps)


CATALOG = {
    "mobius": mobius,
    "liouville": liouville,
    "euler_phi_ratio": euler_phi_ratio,
    "sigma": sigma,
    "tau": tau,
    "big_omega": big_omega,
    "small_omega": small_omega,
    "squarefree_indicator": squarefree_indicator,
    "one": constant_one,
}


def from_json(obj) -> ArithmeticFunction:
    name = obj["function"]
    if name in CATALOG:
        return CATALOG[name]()
    if name == "archimedean":
        return archimedean(obj["t"])
    if name == "dirichlet":
        return dirichlet_character(obj["modulus"], obj["exponents"])
    if name in ("lambda_xi", "kappa_xi", "mu_xi"):
        xi = Constant.from_json(obj["xi"])
        return {"lambda_xi": lambda_xi, "kappa_xi": kappa_xi, "mu_xi": mu_xi}[name](xi)
    raise ValueError(f"unknown function spec {obj!r}")
