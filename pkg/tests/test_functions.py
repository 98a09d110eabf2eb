"""Arithmetic-function catalog: spec examples, multiplicativity, characters."""

import math
from fractions import Fraction

import numpy as np
import pytest

from katailab import functions as fns
from katailab.constants import Constant, rational
from katailab.functions import (
    CharacterGroupError,
    EvaluationError,
    all_characters,
    dirichlet_character,
    root_of_unity,
    smallest_primitive_root,
)


def test_catalog_point_values(sieve_small):
    assert fns.mobius().eval(30, sieve_small) == -1
    assert fns.sigma().eval(12, sieve_small) == 28
    assert fns.tau().eval(12, sieve_small) == 6
    assert fns.big_omega().eval(12, sieve_small) == 3
    assert fns.small_omega().eval(12, sieve_small) == 2


def test_lambda_xi_half_is_liouville(sieve_small):
    lam = fns.liouville()
    lx = fns.lambda_xi(rational(Fraction(1, 2)))
    for n in range(1, 10_001):
        assert lx.eval(n, sieve_small) == lam.eval(n, sieve_small)


def test_custom_phi_rule(sieve_small):
    g = fns.custom(lambda p, m: Fraction(p - 1, p))
    assert g.eval(12, sieve_small) == Fraction(1, 3)
    phi = sieve_small.table("phi")
    assert g.eval(12, sieve_small) == Fraction(int(phi[12]), 12)


def test_custom_rule_nonfinite_raises(sieve_small):
    g = fns.custom(lambda p, m: float("nan") if p == 3 else 1.0)
    with pytest.raises(EvaluationError) as err:
        g.eval(9, sieve_small)
    assert err.value.p == 3 and err.value.m == 2


def _coprime_pairs_upto(bound):
    for m in range(1, bound + 1):
        for n in range(m, bound // m + 1):
            if math.gcd(m, n) == 1:
                yield m, n


def test_multiplicativity_exhaustive_and_random(sieve_big):
    cases = [
        fns.mobius(), fns.liouville(), fns.euler_phi_ratio(), fns.sigma(),
        fns.tau(), fns.squarefree_indicator(),
        fns.lambda_xi(Constant("sqrt", 2)), fns.kappa_xi(Constant("golden")),
        fns.mu_xi(rational(Fraction(1, 3))), fns.archimedean(1.7),
        dirichlet_character(12, (1, 1)),
    ]
    additive = [fns.big_omega(), fns.small_omega()]
    pairs = list(_coprime_pairs_upto(10_000))
    rng = np.random.default_rng(5)
    big = []
    while len(big) < 2000:
        m = int(rng.integers(2, 1000))
        n = int(rng.integers(2, 1_000_000 // m))
        if math.gcd(m, n) == 1:
            big.append((m, n))
    for f in cases:
        for m, n in pairs[:: 7] + big[::5]:
            lhs = f.eval(m * n, sieve_big)
            rhs = f.eval(m, sieve_big) * f.eval(n, sieve_big)
            if f.integer_valued or isinstance(lhs, Fraction):
                assert lhs == rhs, (f.name, m, n)
            else:
                assert abs(lhs - rhs) < 1e-12, (f.name, m, n)
    for f in additive:
        for m, n in pairs[::19]:
            assert f.eval(m * n, sieve_big) == f.eval(m, sieve_big) + f.eval(n, sieve_big)


def test_complete_multiplicativity(sieve_small):
    complete = [
        fns.liouville(), fns.archimedean(0.8),
        fns.lambda_xi(Constant("sqrt", 3)), dirichlet_character(4, (1,)),
        dirichlet_character(5, (1,)),
    ]
    for f in complete:
        assert f.kind == "completely_multiplicative"
        for m in range(2, 101):
            for n in range(m, 10_000 // m + 1):
                lhs = f.eval(m * n, sieve_small)
                rhs = f.eval(m, sieve_small) * f.eval(n, sieve_small)
                if f.integer_valued:
                    assert lhs == rhs
                else:
                    assert abs(lhs - rhs) < 1e-12


def test_convolution_identities(sieve_small):
    x = 10_000
    mu = sieve_small.table("mobius")[: x + 1].astype(np.int64)
    phi = sieve_small.table("phi")[: x + 1]
    sum_mu = np.zeros(x + 1, dtype=np.int64)
    sum_phi = np.zeros(x + 1, dtype=np.int64)
    for d in range(1, x + 1):
        sum_mu[d::d] += mu[d]
        sum_phi[d::d] += phi[d]
    assert sum_mu[1] == 1 and not sum_mu[2:].any()
    assert np.array_equal(sum_phi[1:], np.arange(1, x + 1))
    sig = fns.sigma()
    for p in (2, 3, 5, 7):
        for a in range(1, 8):
            if p**a <= sieve_small.limit:
                assert sig.eval(p**a, sieve_small) == (p ** (a + 1) - 1) // (p - 1)


def test_squarefree_indicator_is_mobius_squared(sieve_mid):
    x = 100_000
    sq = fns.squarefree_indicator().values_upto(x, sieve_mid)
    mu = sieve_mid.table("mobius")[: x + 1].astype(np.float64)
    assert np.array_equal(sq[1:], (mu * mu)[1:])


def test_bulk_matches_pointwise(sieve_small):
    for f in [
        fns.mobius(), fns.liouville(), fns.euler_phi_ratio(), fns.sigma(),
        fns.tau(), fns.big_omega(), fns.small_omega(),
        fns.lambda_xi(Constant("sqrt", 2)), fns.mu_xi(Constant("golden")),
        fns.archimedean(1.0), dirichlet_character(7, (2,)),
        fns.custom(lambda p, m: Fraction(1, p**m), name="inv"),
        fns.custom(lambda p, m: m * math.log(p), name="von_mangoldt_sum",
                   kind="additive"),
    ]:
        vals = f.values_upto(3000, sieve_small)
        for n in list(range(1, 60)) + [97, 128, 1024, 2310, 2999]:
            want = complex(f.eval(n, sieve_small))
            assert abs(complex(vals[n]) - want) < 1e-12, (f.name, n)


def test_dirichlet_mod4_nonprincipal_exact():
    chi = dirichlet_character(4, (1,))
    t = chi.character_table
    assert t[1 % 4] == 1
    assert t[3 % 4] == -1
    assert t[2 % 4] == 0


def test_dirichlet_mod5_matches_brute_force_homomorphism():
    # 2 is the smallest primitive root mod 5 (brute-force check), so the
    # exponent-1 character sends 2 -> i
    assert smallest_primitive_root(5, 5) == 2
    powers = {pow(2, j, 5) for j in range(1, 4)}
    assert powers == {2, 4, 3}
    chi = dirichlet_character(5, (1,))
    t = chi.character_table
    assert t[2] == 1j
    assert t[3] == -1j
    assert t[4] == -1
    for a in range(1, 5):
        for b in range(1, 5):
            assert abs(t[a * b % 5] - t[a] * t[b]) < 1e-15


def test_principal_character_is_coprime_indicator(sieve_small):
    for d in (1, 2, 6, 12, 45):
        factors = fns.unit_group_structure(d)
        chi = dirichlet_character(d, tuple(0 for _ in factors))
        assert chi.is_principal
        for n in range(1, 200):
            want = 1 if math.gcd(n, d) == 1 else 0
            assert chi.eval(n, sieve_small) == want


def test_character_periodicity_and_value_field(sieve_small):
    for d in (3, 8, 9, 16, 24):
        for chi in all_characters(d):
            t = chi.character_table
            phid = sum(1 for n in range(1, d + 1) if math.gcd(n, d) == 1)
            for n in range(1, 2 * d):
                assert t[n % d] == t[(n + d) % d]
                if math.gcd(n, d) == 1:
                    assert abs(t[n % d] ** phid - 1) < 1e-9  # phi(d)-th root of unity
                else:
                    assert t[n % d] == 0


def test_character_orthogonality_all_moduli():
    for d in range(1, 31):
        for chi in all_characters(d):
            total = chi.character_table[np.arange(1, d + 1) % d].sum()
            if chi.is_principal:
                assert abs(total - sum(1 for n in range(1, d + 1) if math.gcd(n, d) == 1)) < 1e-9
            else:
                assert abs(total) < 1e-9, (d, chi.params)


def test_character_tuple_length_mismatch():
    with pytest.raises(CharacterGroupError, match="expected"):
        dirichlet_character(8, (1,))


def test_root_of_unity_exactness():
    assert root_of_unity(1, 2) == -1
    assert root_of_unity(1, 4) == 1j
    assert root_of_unity(7, 4) == -1j
    assert root_of_unity(5, 1) == 1
    assert abs(root_of_unity(1, 3) - complex(-0.5, math.sqrt(3) / 2)) < 1e-15


def test_json_roundtrip():
    for f in [
        fns.mobius(), fns.lambda_xi(Constant("sqrt", 2)),
        dirichlet_character(12, (1, 1)), fns.archimedean(2.5),
    ]:
        g = fns.from_json(f.to_json())
        assert g.name == f.name and g.params == f.params
