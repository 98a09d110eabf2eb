"""Correlation closed forms, decay over level sets, Turan-Kubilius variance."""

from fractions import Fraction

import mpmath
import numpy as np
import pytest

from katailab import functions as fns
from katailab.constants import GOLDEN, SQRT2, rational
from katailab.levelsets import Abundant, GenericLevel, OmegaMod, Squarefree
from katailab.orthogonality import (
    ConstantSequence,
    LinearExponential,
    PolynomialExponential,
    TableSequence,
    katai_correlation,
    orthogonality_sum,
    polynomial_frac,
    sequence_from_json,
    turan_kubilius_variance,
)

mpmath.mp.dps = 40


def geometric_modulus(theta_mp, x):
    """Oracle: |sum_{n<=x} e(n theta)| / x at 40 digits."""
    num = abs(mpmath.sin(mpmath.pi * x * theta_mp))
    den = x * abs(mpmath.sin(mpmath.pi * theta_mp))
    return float(num / den)


def test_constant_sequence_correlation_is_one():
    rep = katai_correlation(ConstantSequence(1.0), 3, 5, 1000, [10, 1000])
    assert all(c == 1.0 for c in rep.correlations)


def test_rational_theta_half_makes_correlation_one():
    # e((p-q) n / 2) = e(-n) = 1 for (p,q) = (3,5): hypothesis fails at rational theta
    rep = katai_correlation(LinearExponential(rational(Fraction(1, 2))), 3, 5, 10_000)
    assert abs(rep.correlations[-1] - 1.0) < 1e-15


def test_correlation_closed_form_sqrt2():
    rep = katai_correlation(LinearExponential(SQRT2), 2, 3, 10_000, [100, 1000, 10_000])
    for x, c, ref in zip(rep.checkpoints, rep.correlations, rep.references):
        oracle = geometric_modulus(-mpmath.sqrt(2), x)  # beta = (2-3) sqrt2
        assert abs(abs(c) - oracle) < 1e-9
        assert abs(ref - oracle) < 1e-9
    assert abs(rep.correlations[-1]) < 1e-3


def test_correlation_closed_form_many_pairs():
    for theta, theta_mp in ((SQRT2, mpmath.sqrt(2)), (GOLDEN, (1 + mpmath.sqrt(5)) / 2)):
        seq = LinearExponential(theta)
        for p, q in ((2, 3), (3, 7), (13, 11), (47, 2)):
            rep = katai_correlation(seq, p, q, 100_000)
            oracle = geometric_modulus((p - q) * theta_mp, 100_000)
            assert abs(abs(rep.correlations[-1]) - oracle) < 1e-9, (p, q)


def test_correlation_rejects_equal_primes():
    with pytest.raises(ValueError, match="distinct"):
        katai_correlation(LinearExponential(SQRT2), 5, 5, 100)


def test_correlation_phase_budget():
    from katailab.sieve import SieveRangeError

    with pytest.raises(SieveRangeError, match="phase budget"):
        katai_correlation(LinearExponential(SQRT2), 2, 10_000_019, 2**40, [2**40])


def test_orthogonality_empty_set(sieve_small):
    empty = GenericLevel(fns.constant_one(), 2.0)  # unattainable target
    prof = orthogonality_sum(empty, LinearExponential(SQRT2), 10_000,
                             [100, 1000, 10_000], sieve_small)
    assert prof.values == [0.0, 0.0, 0.0]
    assert prof.slope == 0.0  # defined finite on the empty profile


def test_orthogonality_full_set_matches_geometric(sieve_big):
    full = GenericLevel(fns.constant_one(), 1)
    grid = [10**4, 31623, 10**5, 316228, 10**6, 3162278, 10**7]
    prof = orthogonality_sum(full, LinearExponential(SQRT2), 10**7, grid, sieve_big)
    for x, v in zip(prof.checkpoints, prof.values):
        assert abs(v - geometric_modulus(mpmath.sqrt(2), x)) < 1e-9
    # |geometric sum|/x decays like 1/x; the half-decade grid averages the
    # sine oscillation enough to pin the exponent
    assert -1.1 < prof.slope < -0.9


def test_orthogonality_squarefree_decay(sieve_big):
    # golden values from the independent longdouble/mpmath oracle run:
    # 0.00385486 at 1e4 and 2.57743e-05 at 1e7
    prof = orthogonality_sum(Squarefree(), LinearExponential(SQRT2), 10**7,
                             [10**4, 10**5, 10**6, 10**7], sieve_big)
    assert abs(prof.values[0] - 0.00385486) < 1e-8
    assert abs(prof.values[-1] - 2.57743e-05) < 1e-9
    assert prof.values[-1] < 0.005
    assert prof.values[-1] < prof.values[0] / 3
    assert prof.slope <= -0.3


def test_negative_control_no_decay(sieve_big):
    # theta = 1/2 over squarefree: parity bias keeps the sum near 2/pi^2
    prof = orthogonality_sum(Squarefree(), LinearExponential(rational(Fraction(1, 2))),
                             10**6, [10**4, 10**5, 10**6], sieve_big)
    assert prof.values[-1] > 0.1
    assert abs(prof.values[-1] - 0.202646) < 1e-6  # oracle golden value


def test_hypothesis_conclusion_linkage(sieve_big):
    # correlations small at desk scale => decay profile slope clearly negative
    theta = SQRT2
    seq = LinearExponential(theta)
    for p, q in ((2, 3), (2, 5), (3, 5), (5, 7), (11, 13), (17, 19)):
        rep = katai_correlation(seq, p, q, 10**6)
        assert abs(rep.correlations[-1]) < 0.01, (p, q)
    grid = [10**4, 31623, 10**5, 316228, 10**6, 3162278, 10**7]
    for spec in (Squarefree(), OmegaMod(2, 0), Abundant()):
        prof = orthogonality_sum(spec, seq, 10**7, grid, sieve_big)
        assert prof.slope <= -0.3, spec.name


def test_polynomial_sequence_phases_match_mpmath():
    seq = PolynomialExponential([rational(0), rational(1, ), SQRT2])  # n + sqrt2 n^2
    n = np.array([1, 2, 3, 1000, 99_991], dtype=np.int64)
    got = polynomial_frac(seq.coefficients, n)
    s2 = mpmath.sqrt(2)
    for i, nn in enumerate(n):
        want = mpmath.frac(int(nn) + s2 * int(nn) ** 2)
        err = abs(mpmath.mpf(float(got[i])) - want)
        assert min(err, 1 - err) < 1e-12


def test_polynomial_budget_guard():
    from katailab.sieve import SieveRangeError

    seq = PolynomialExponential([rational(0), SQRT2])
    big = np.array([2**41], dtype=np.int64)
    with pytest.raises(SieveRangeError, match="budget"):
        polynomial_frac([rational(0)] * 3 + [SQRT2], big)  # n^3 at n=2^41
    # linear monomial at 2^39 stays inside the budget
    seq.eval_array(np.array([2**39], dtype=np.int64))


def test_table_sequence_and_json_roundtrip():
    tab = TableSequence([1, -1, 1, -1])
    assert np.allclose(tab.eval_array(np.array([1, 2, 3])), [1, -1, 1])
    for seq in (LinearExponential(SQRT2), PolynomialExponential([rational(0), GOLDEN]),
                ConstantSequence(0.5j)):
        clone = sequence_from_json(seq.to_json())
        assert clone.to_json() == seq.to_json()


def test_correlation_modulus_bounded_by_one():
    # unit-bounded sequences keep |correlation| <= 1 at every checkpoint
    for seq in (LinearExponential(SQRT2), LinearExponential(rational(Fraction(1, 2))),
                ConstantSequence(1.0)):
        rep = katai_correlation(seq, 2, 7, 5000, [10, 100, 5000])
        assert all(abs(c) <= 1.0 + 1e-12 for c in rep.correlations)


def test_turan_kubilius_exact_examples(sieve_small):
    rep = turan_kubilius_variance([2], 100, sieve_small)
    assert rep.m == Fraction(1, 2)
    assert rep.variance == 25
    rep = turan_kubilius_variance([2, 3], 6, sieve_small)
    assert rep.m == Fraction(5, 6)
    assert rep.variance == Fraction(17, 6)


def test_turan_kubilius_brute_force_crosscheck(sieve_small):
    # oracle: direct expansion of sum (w(n) - m)^2 in exact arithmetic
    P = [2, 3, 5, 7]
    x = 500
    m = sum(Fraction(1, p) for p in P)
    direct = sum((sum(1 for p in P if n % p == 0) - m) ** 2 for n in range(1, x + 1))
    rep = turan_kubilius_variance(P, x, sieve_small)
    assert rep.variance == direct


def test_turan_kubilius_ratio_budget(sieve_big):
    P = [int(p) for p in sieve_big.primes(100)]
    assert len(P) == 25
    for x in (10**4, 10**5, 10**6):
        rep = turan_kubilius_variance(P, x, sieve_big)
        assert rep.ratio <= 2.0, (x, rep.ratio)


def test_turan_kubilius_validation(sieve_small):
    with pytest.raises(ValueError, match="nonempty"):
        turan_kubilius_variance([], 100, sieve_small)
    with pytest.raises(ValueError, match="exceeds x"):
        turan_kubilius_variance([101], 100, sieve_small)
    with pytest.raises(ValueError, match="not prime"):
        turan_kubilius_variance([4], 100, sieve_small)
