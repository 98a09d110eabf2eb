"""Tagged real constants with double-double precision and JSON round-tripping.

Irrational parameters (rotation angles, polynomial coefficients, Weyl
frequencies) enter every experiment.  A plain float64 literal silently loses
the fractional part of n*alpha for large n, so constants are carried as a
tag plus a two-term binary64 representation accurate to ~2^-106.

Supported tags: sqrt(k), golden, e, pi, log(k), plus exact decimals and
rationals.  CLI spellings: ``sqrt2``, ``sqrt3``, ``golden``, ``e``, ``pi``,
``log2``, ``log3``, ... or any decimal literal.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction

import mpmath

from . import ddmath

_PI_DD = (3.141592653589793, 1.2246467991473532e-16)
_E_DD = (2.718281828459045, 1.4456468917292502e-16)
_GOLDEN_DD = (1.618033988749895, -5.432115203682506e-17)


def _dd_from_mp(x) -> tuple[float, float]:
    hi = float(x)
    lo = float(x - mpmath.mpf(hi))
    return hi, lo


@dataclass(frozen=True)
class Constant:
    """A tagged real number: irrational catalog entry or exact rational."""

    kind: str  # sqrt | golden | e | pi | log | rational
    arg: int | None = None
    value_exact: Fraction | None = None  # only for kind == "rational"

    def __post_init__(self):
        if self.kind in ("sqrt", "log"):
            if self.arg is None or self.arg < 1:
                raise ValueError(f"{self.kind} needs a positive integer argument")
            if self.kind == "log" and self.arg == 1:
                raise ValueError("log(1) is 0; use a rational constant")
        elif self.kind in ("golden", "e", "pi"):
            if self.arg is not None:
                raise ValueError(f"{self.kind} takes no argument")
        elif self.kind == "rational":
            if self.value_exact is None:
                raise ValueError("rational constant needs a value")
        else:
            raise ValueError(f"unknown constant kind {self.kind!r}")

    @property
    def is_irrational(self) -> bool:
        if self.kind == "sqrt":
            return math.isqrt(self.arg) ** 2 != self.arg
        if self.kind == "log":
            return self.arg >= 2  # log k is irrational for integer k >= 2
        return self.kind in ("golden", "e", "pi")

    @property
    def dd(self) -> tuple[float, float]:
        if self.kind == "rational":
            num, den = self.value_exact.numerator, self.value_exact.denominator
            hi = num / den
            lo = float(Fraction(num, den) - Fraction(hi))
            return hi, lo
        if self.kind == "pi":
            return _PI_DD
        if self.kind == "e":
            return _E_DD
        if self.kind == "golden":
            return _GOLDEN_DD
        with mpmath.workdps(60):
            if self.kind == "sqrt":
                return _dd_from_mp(mpmath.sqrt(self.arg))
            return _dd_from_mp(mpmath.log(self.arg))

    def __float__(self) -> float:
        return self.dd[0] + self.dd[1]

    def mp(self, dps: int = 60):
        """mpmath value at the requested precision (test/oracle helper)."""
        with mpmath.workdps(dps):
            if self.kind == "rational":
                return mpmath.mpf(self.value_exact.numerator) / self.value_exact.denominator
            if self.kind == "sqrt":
                return mpmath.sqrt(self.arg)
            if self.kind == "log":
                return mpmath.log(self.arg)
            if self.kind == "pi":
                return +mpmath.pi
            if self.kind == "e":
                return +mpmath.e
            return (1 + mpmath.sqrt(5)) / 2

    def frac_mul(self, n):
        """{n * self} for integer scalar/array n.

        Exact for rational constants with denominator < 2^30; for tagged
        irrationals the error stays below 1e-12 for n <= 2^40 and below
        ~2^-43 all the way up to the 2^62 floor guard.
        """
        import numpy as np

        n = np.asarray(n)
        if self.kind == "rational" and 0 < self.value_exact.denominator < 2**30:
            num, den = self.value_exact.numerator, self.value_exact.denominator
            r = (n.astype(np.int64) % den) * (num % den) % den
            return r / den
        nmax = int(np.max(np.abs(n))) if n.size else 0
        if nmax < 2**53:
            return ddmath.frac_int_mul(self.dd, n.astype(np.float64))
        return ddmath.frac(ddmath.mul(ddmath.from_int(n.astype(np.int64)), self.dd))

    def to_json(self):
        if self.kind == "rational":
            v = self.value_exact
            if v.denominator == 1:
                return {"kind": "decimal", "value": str(v.numerator)}
            return {"kind": "decimal", "value": f"{v.numerator}/{v.denominator}"}
        if self.arg is not None:
            return {"kind": self.kind, "arg": self.arg}
        return {"kind": self.kind}

    @staticmethod
    def from_json(obj) -> "Constant":
        kind = obj["kind"]
        if kind == "decimal":
            return rational(Fraction(obj["value"]))
        return Constant(kind, obj.get("arg"))

    @staticmethod
    def parse(text: str) -> "Constant":
        """Parse a CLI spelling: sqrt2, golden, e, pi, log2, 0.25, 1/3, ..."""
        text = text.strip()
        if text == "golden":
            return Constant("golden")
        if text == "e":
            return Constant("e")
        if text == "pi":
            return Constant("pi")
        for prefix in ("sqrt", "log"):
            if text.startswith(prefix) and text[len(prefix):].isdigit():
                return Constant(prefix, int(text[len(prefix):]))
        try:
            return rational(Fraction(text))
        except ValueError:
            raise ValueError(
                f"cannot parse constant {text!r}; use sqrt<k>, golden, e, pi, "
                f"log<k>, or a decimal/rational literal"
            ) from None

    def __str__(self) -> str:
        if self.kind == "rational":
            return str(self.value_exact)
        if self.arg is not None:
            return f"{self.kind}{self.arg}"
        return self.kind


def rational(value) -> Constant:
    """Exact rational constant from Fraction/int/float/decimal string."""
    return Constant("rational", value_exact=Fraction(value))


def as_constant(value) -> Constant:
    """Coerce numbers/strings/Constant into a Constant."""
    if isinstance(value, Constant):
        return value
    if isinstance(value, str):
        return Constant.parse(value)
    return rational(value)


SQRT2 = Constant("sqrt", 2)
SQRT3 = Constant("sqrt", 3)
SQRT5 = Constant("sqrt", 5)
GOLDEN = Constant("golden")
PI = Constant("pi")
E = Constant("e")
