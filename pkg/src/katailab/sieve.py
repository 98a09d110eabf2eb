"""Smallest-prime-factor sieve, factorization, and bulk arithmetic tables.

The FactorSieve is the backbone of the package: a uint32 table spf[n] holding
the smallest prime factor of every n up to its limit, built segment-parallel
but byte-identical for any thread count.  Factorization is then an O(log n)
chase n -> n / spf[n].

Bulk tables (big_omega, small_omega, mobius, sigma, tau, phi, ...) are built
by a blockwise dynamic program over div[n] = n / spf[n]: within the block
[2^j, 2^(j+1)) every div value is already below the block, so each block is
one vectorized gather.  Tables are memoized on the sieve instance.
"""

from __future__ import annotations

import os
import struct
import tempfile
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from math import isqrt

import numpy as np

MAX_LIMIT = 2**31
CACHE_MAGIC = b"KATAISV1"
_SPOT_CHECK_SEED = 0x5EED
_SEGMENT = 1 << 22


class SieveRangeError(ValueError):
    """Requested index or limit outside the sieve's accepted range."""


@dataclass(frozen=True)
class Factorization:
    """Canonical p1^e1 * ... * pk^ek with strictly increasing primes."""

    pairs: tuple[tuple[int, int], ...]

    def __iter__(self):
        return iter(self.pairs)

    def __len__(self):
        return len(self.pairs)

    @property
    def n(self) -> int:
        out = 1
        for p, e in self.pairs:
            out *= p**e
        return out


class FactorSieve:
    """Immutable smallest-prime-factor table for 0..limit (spf[0]=spf[1]=0)."""

    def __init__(self, limit: int, spf: np.ndarray):
        self.limit = int(limit)
        self.spf = spf
        self._tables: dict[str, np.ndarray] = {}

    # -- construction ------------------------------------------------------

    @staticmethod
    def build(limit: int, threads: int = 1) -> "FactorSieve":
        """Sieve smallest prime factors up to limit (2 <= limit <= 2^31)."""
        if not (2 <= limit <= MAX_LIMIT):
            raise SieveRangeError(
                f"sieve limit must be in [2, {MAX_LIMIT}], got {limit}"
            )
        root = isqrt(limit)
        base = _simple_spf(max(root, 2))
        base_primes = np.nonzero(
            base[2:] == np.arange(2, root + 1, dtype=np.uint32)
        )[0].astype(np.int64) + 2

        spf = np.zeros(limit + 1, dtype=np.uint32)
        if root >= 2:
            spf[2 : root + 1] = base[2 : root + 1]

        segments = [
            (lo, min(lo + _SEGMENT, limit + 1))
            for lo in range(root + 1, limit + 1, _SEGMENT)
        ]

        def mark(seg):
            lo, hi = seg
            block = spf[lo:hi]
            for p in base_primes:
                p = int(p)
                start = ((lo + p - 1) // p) * p
                if start < hi:
                    view = block[start - lo :: p]
                    view[view == 0] = p
            # untouched entries are primes
            idx = np.nonzero(block == 0)[0]
            block[idx] = (idx + lo).astype(np.uint32)

        if threads > 1 and segments:
            with ThreadPoolExecutor(max_workers=threads) as pool:
                list(pool.map(mark, segments))
        else:
            for seg in segments:
                mark(seg)
        return FactorSieve(limit, spf)

    # -- factorization -----------------------------------------------------

    def _check(self, n: int):
        if not (1 <= n <= self.limit):
            raise SieveRangeError(f"n must be in [1, {self.limit}], got {n}")

    def factorize(self, n: int) -> Factorization:
        """Canonical factorization of n (1 <= n <= limit); n=1 gives ()."""
        self._check(n)
        pairs = []
        spf = self.spf
        while n > 1:
            p = int(spf[n])
            e = 0
            while n % p == 0:
                n //= p
                e += 1
            pairs.append((p, e))
        return Factorization(tuple(pairs))

    def primes(self, upto: int | None = None) -> np.ndarray:
        """All primes <= upto (default: the sieve limit), as int64."""
        upto = self.limit if upto is None else int(upto)
        self._check(max(upto, 1))
        idx = np.arange(upto + 1, dtype=np.uint32)
        return np.nonzero(self.spf[: upto + 1] == idx)[0][1:].astype(np.int64)

    # -- bulk tables -------------------------------------------------------

    def _blocks(self):
        lo = 2
        while lo <= self.limit:
            hi = min(2 * lo, self.limit + 1)
            yield lo, hi
            lo = hi

    def _div_table(self) -> np.ndarray:
        # div[n] = n / spf[n] for n >= 2; div[0] = div[1] = 1
        if "div" not in self._tables:
            n = np.arange(self.limit + 1, dtype=np.int64)
            div = np.ones(self.limit + 1, dtype=np.int64)
            div[2:] = n[2:] // self.spf[2:]
            self._tables["div"] = div
        return self._tables["div"]

    def table(self, name: str) -> np.ndarray:
        """Memoized bulk table over 0..limit; entries at 0 (and 1) are padding."""
        if name not in self._tables:
            self._tables[name] = getattr(self, "_build_" + name)()
        return self._tables[name]

    def _build_big_omega(self) -> np.ndarray:
        div = self._div_table()
        out = np.zeros(self.limit + 1, dtype=np.int8)
        for lo, hi in self._blocks():
            out[lo:hi] = out[div[lo:hi]] + 1
        return out

    def _build_small_omega(self) -> np.ndarray:
        div = self._div_table()
        spf = self.spf
        out = np.zeros(self.limit + 1, dtype=np.int8)
        for lo, hi in self._blocks():
            d = div[lo:hi]
            new = (d == 1) | (spf[d] != spf[lo:hi])
            out[lo:hi] = out[d] + new
        return out

    def _build_mobius(self) -> np.ndarray:
        div = self._div_table()
        spf = self.spf
        out = np.zeros(self.limit + 1, dtype=np.int8)
        out[1] = 1
        for lo, hi in self._blocks():
            d = div[lo:hi]
            squarefree_step = (d == 1) | (spf[d] != spf[lo:hi])
            out[lo:hi] = np.where(squarefree_step, -out[d], 0)
        return out

    def _build_squarefree(self) -> np.ndarray:
        out = np.ones(self.limit + 1, dtype=bool)
        out[0] = False
        for p in self.primes(isqrt(self.limit)):
            out[p * p :: p * p] = False
        return out

    def _build_prime_power_part(self) -> np.ndarray:
        # pp[n] = spf[n]^e where e is the exponent of spf[n] in n
        div = self._div_table()
        spf = self.spf
        out = np.ones(self.limit + 1, dtype=np.int64)
        for lo, hi in self._blocks():
            d = div[lo:hi]
            p = spf[lo:hi].astype(np.int64)
            same = spf[d] == spf[lo:hi]
            out[lo:hi] = np.where(same & (d > 1), out[d] * p, p)
        return out

    def _build_sigma(self) -> np.ndarray:
        # sigma of the prime-power part first: sigma(p^e) = p*sigma(p^(e-1)) + 1
        div = self._div_table()
        spf = self.spf
        pp = self.table("prime_power_part")
        sig_pp = np.ones(self.limit + 1, dtype=np.int64)
        for lo, hi in self._blocks():
            d = div[lo:hi]
            p = spf[lo:hi].astype(np.int64)
            same = (spf[d] == spf[lo:hi]) & (d > 1)
            sig_pp[lo:hi] = np.where(same, sig_pp[d] * p + 1, p + 1)
        out = np.ones(self.limit + 1, dtype=np.int64)
        out[0] = 0
        n = np.arange(self.limit + 1, dtype=np.int64)
        for lo, hi in self._blocks():
            rest = n[lo:hi] // pp[lo:hi]
            out[lo:hi] = out[rest] * sig_pp[lo:hi]
        return out

    def _build_tau(self) -> np.ndarray:
        div = self._div_table()
        spf = self.spf
        pp = self.table("prime_power_part")
        # exponent of spf[n] in n
        e = np.zeros(self.limit + 1, dtype=np.int16)
        for lo, hi in self._blocks():
            d = div[lo:hi]
            same = (spf[d] == spf[lo:hi]) & (d > 1)
            e[lo:hi] = np.where(same, e[d] + 1, 1)
        out = np.ones(self.limit + 1, dtype=np.int32)
        out[0] = 0
        n = np.arange(self.limit + 1, dtype=np.int64)
        for lo, hi in self._blocks():
            rest = n[lo:hi] // pp[lo:hi]
            out[lo:hi] = out[rest] * (e[lo:hi] + 1)
        return out

    def _build_phi(self) -> np.ndarray:
        div = self._div_table()
        spf = self.spf
        pp = self.table("prime_power_part")
        # phi(p^e) = p^e - p^(e-1) = pp - pp/p
        n = np.arange(self.limit + 1, dtype=np.int64)
        phi_pp = pp - pp // np.maximum(spf.astype(np.int64), 1)
        out = np.ones(self.limit + 1, dtype=np.int64)
        out[0] = 0
        for lo, hi in self._blocks():
            rest = n[lo:hi] // pp[lo:hi]
            out[lo:hi] = out[rest] * phi_pp[lo:hi]
        return out

    def drop_tables(self):
        """Free memoized bulk tables (they rebuild on demand)."""
        self._tables.clear()

    # -- cache file --------------------------------------------------------

    def save(self, path: str | os.PathLike):
        """Write the cache file atomically (magic, LE limit, LE uint32 entries)."""
        path = os.fspath(path)
        os.makedirs(os.path.dirname(os.path.abspath(path)), exist_ok=True)
        fd, tmp = tempfile.mkstemp(dir=os.path.dirname(os.path.abspath(path)))
        try:
            with os.fdopen(fd, "wb") as fh:
                fh.write(CACHE_MAGIC)
                fh.write(struct.pack("<Q", self.limit))
                fh.write(self.spf.astype("<u4", copy=False).tobytes())
            os.replace(tmp, path)
        except BaseException:
            if os.path.exists(tmp):
                os.unlink(tmp)
            raise

    @staticmethod
    def load(path: str | os.PathLike) -> "FactorSieve":
        """Load and verify a cache file; spot-checks 1024 entries by trial division."""
        with open(path, "rb") as fh:
            magic = fh.read(8)
            if magic != CACHE_MAGIC:
                raise ValueError(f"bad sieve cache magic {magic!r} in {path}")
            (limit,) = struct.unpack("<Q", fh.read(8))
            if not (2 <= limit <= MAX_LIMIT):
                raise ValueError(f"sieve cache limit {limit} out of range")
            spf = np.fromfile(fh, dtype="<u4", count=limit + 1)
        if spf.size != limit + 1:
            raise ValueError(f"sieve cache truncated: {spf.size} of {limit + 1} entries")
        rng = np.random.default_rng(_SPOT_CHECK_SEED)
        sample = rng.integers(2, limit + 1, size=1024)
        for n in sample:
            if int(spf[n]) != _trial_spf(int(n)):
                raise ValueError(f"sieve cache failed spot check at n={int(n)}")
        return FactorSieve(int(limit), spf.astype(np.uint32, copy=False))


def _simple_spf(limit: int) -> np.ndarray:
    spf = np.zeros(limit + 1, dtype=np.uint32)
    for p in range(2, isqrt(limit) + 1):
        if spf[p] == 0:
            view = spf[p * p :: p]
            view[view == 0] = p
    idx = np.nonzero(spf[2:] == 0)[0] + 2
    spf[idx] = idx.astype(np.uint32)
    return spf


def _trial_spf(n: int) -> int:
    if n % 2 == 0:
        return 2
    d = 3
    while d * d <= n:
        if n % d == 0:
            return d
        d += 2
    return n


def build_sieve(limit: int, threads: int = 1) -> FactorSieve:
    """Module-level convenience wrapper around FactorSieve.build."""
    return FactorSieve.build(limit, threads=threads)


def factorize(n: int, sieve: FactorSieve) -> Factorization:
    """Canonical factorization of n using the sieve (1 <= n <= sieve.limit)."""
    return sieve.factorize(n)
