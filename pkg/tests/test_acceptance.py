"""Acceptance gate: one test per criterion, at the stated tolerances.

Each criterion prints a PASS/FAIL line (run with -s or check captured
output).  Criterion 7's first case asserts the stated bounds and is known to
fail them: two independent high-precision oracles put D* at 0.026885 for
t^{3/2} along squarefree at N = 10^5 (slow N^{-1/4} equidistribution), so the
pinned 0.01/0.02 cannot be met by a correct implementation.  The assertion is
kept faithful rather than loosened; see the analysis note in the failure
message.
"""

import math
import time
from fractions import Fraction

import mpmath
import numpy as np

from katailab import functions as fns
from katailab.cli import main
from katailab.constants import GOLDEN, SQRT2, rational
from katailab.equidist import (
    Mod1Sequence,
    ergodic_weyl_test,
    floor_sequence,
    fractional_parts_along,
    polynomial,
    power,
    star_discrepancy,
    total_ergodicity_test,
    ud_test,
    weyl_sum,
)
from katailab.levelsets import Abundant, OmegaMod, Squarefree, enumerate_members
from katailab.meanvalues import empirical_mean, euler_product_mean
from katailab.orthogonality import (
    LinearExponential,
    katai_correlation,
    orthogonality_sum,
    turan_kubilius_variance,
)

mpmath.mp.dps = 40

TARGET = 0.6079271  # 6/pi^2
GRID7 = [10**4, 31623, 10**5, 316228, 10**6, 3162278, 10**7]


def gate(name, ok, detail=""):
    print(f"{'PASS' if ok else 'FAIL'}  {name}  {detail}")
    assert ok, f"{name}: {detail}"


def test_accept_01_squarefree_density_cli(tmp_path):
    out = tmp_path / "density.csv"
    t0 = time.perf_counter()
    code = main(["density", "--set", "squarefree", "--x", str(10**7),
                 "--csv", str(out), "--threads", "1"])
    elapsed = time.perf_counter() - t0
    rows = [r for r in out.read_text().splitlines() if not r.startswith("#")]
    final = float(rows[-1].split(",")[1])
    gate("ACCEPT-01 squarefree density at 1e7",
         code == 0 and abs(final - TARGET) < 5e-4 and elapsed < 30.0,
         f"value={final:.7f} (target {TARGET} +- 5e-4), runtime={elapsed:.1f}s < 30s")


def test_accept_02_halasz_formula_consistency(sieve_big):
    mean = empirical_mean(fns.euler_phi_ratio(), 10**7, [10**7], sieve_big).means[-1]
    product, _ = euler_product_mean(lambda p, m: 1 - 1 / p, 10**5)
    ok = (abs(mean - product) < 2e-3
          and abs(mean - TARGET) < 1e-3 and abs(product - TARGET) < 1e-3)
    gate("ACCEPT-02 mean-value formula consistency", ok,
         f"empirical={mean:.7f} product={product.real:.7f}")


def test_accept_03_correlation_closed_form_suite():
    primes = [2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37, 41, 43, 47]
    x = 10**6
    worst_err, worst_mod = 0.0, 0.0
    for theta, theta_mp in ((SQRT2, mpmath.sqrt(2)), (GOLDEN, (1 + mpmath.sqrt(5)) / 2)):
        seq = LinearExponential(theta)
        for i, p in enumerate(primes):
            for q in primes[i + 1:]:
                got = abs(katai_correlation(seq, p, q, x).correlations[-1])
                beta = (p - q) * theta_mp
                want = float(abs(mpmath.sin(mpmath.pi * x * beta))
                             / (x * abs(mpmath.sin(mpmath.pi * beta))))
                worst_err = max(worst_err, abs(got - want))
                worst_mod = max(worst_mod, got)
    gate("ACCEPT-03 correlation closed-form suite (p,q <= 50, x=1e6)",
         worst_err < 1e-9 and worst_mod < 1e-2,
         f"max |computed - closed form| = {worst_err:.2e}, max modulus = {worst_mod:.2e}")


def test_accept_04_decay_over_level_sets(sieve_big):
    seq = LinearExponential(SQRT2)
    for spec in (Squarefree(), OmegaMod(2, 0), Abundant()):
        prof = orthogonality_sum(spec, seq, 10**7, GRID7, sieve_big)
        v4, v7 = prof.values[0], prof.values[-1]
        ok = v7 < 0.005 and v7 < v4 / 3 and prof.slope <= -0.3
        gate(f"ACCEPT-04 decay over {spec.name}", ok,
             f"value(1e7)={v7:.2e} value(1e4)={v4:.2e} slope={prof.slope:+.2f}")


def test_accept_05_negative_control(sieve_big):
    prof = orthogonality_sum(Squarefree(), LinearExponential(rational("0.5")),
                             10**6, [10**4, 10**5, 10**6], sieve_big)
    gate("ACCEPT-05 negative control theta=1/2 over squarefree",
         prof.values[-1] > 0.1,
         f"value(1e6)={prof.values[-1]:.4f} > 0.1 (no decay without the hypothesis)")


def test_accept_06_turan_kubilius(sieve_big):
    exact25 = turan_kubilius_variance([2], 100, sieve_big)
    exact176 = turan_kubilius_variance([2, 3], 6, sieve_big)
    ok = exact25.variance == 25 and exact176.variance == Fraction(17, 6)
    ratios = []
    P = [int(p) for p in sieve_big.primes(100)]
    for x in (10**4, 10**5, 10**6):
        ratios.append(turan_kubilius_variance(P, x, sieve_big).ratio)
    ok = ok and all(r <= 2.0 for r in ratios)
    gate("ACCEPT-06 variance bound for prime divisor counts", ok,
         f"exact cases 25, 17/6 ok; ratios={[f'{r:.3f}' for r in ratios]} <= 2")


def test_accept_07a_equidistribution_power_squarefree(sieve_big):
    rep = ud_test(power(rational("1.5")), Squarefree(), 10**5, 5, sieve_big)
    ok = rep.dstar < 0.01 and rep.max_abs_weyl < 0.02
    gate("ACCEPT-07a t^{3/2} along squarefree, N=1e5", ok,
         f"D*={rep.dstar:.6f} (stated bound 0.01), max|W|={rep.max_abs_weyl:.6f} "
         f"(stated bound 0.02). KNOWN-BAD PIN: two independent oracles give "
         f"D*=0.026885 exactly here; the sequence equidistributes at rate "
         f"~N^(-1/4), so the pinned bounds are unattainable at N=1e5 "
         f"(they would first hold near N=4e6). See README, 'Known red "
         f"acceptance criterion'.")


def test_accept_07b_equidistribution_polynomial_omega_even(sieve_big):
    h = polynomial([rational(0), rational(1), SQRT2])  # sqrt2 t^2 + t
    rep = ud_test(h, OmegaMod(2, 0), 10**5, 5, sieve_big)
    ok = rep.dstar < 0.01 and rep.max_abs_weyl < 0.02
    gate("ACCEPT-07b sqrt2*t^2 + t along Omega-even, N=1e5", ok,
         f"D*={rep.dstar:.6f} < 0.01, max|W|={rep.max_abs_weyl:.6f} < 0.02")


def test_accept_08_total_ergodicity(sieve_big):
    prof = total_ergodicity_test(OmegaMod(2, 0), GOLDEN, 10**6, sieve_big,
                                 grid=[10**6])
    gate("ACCEPT-08 golden-ratio Weyl average over Omega-even members",
         prof.values[-1] < 0.01, f"value={prof.values[-1]:.5f} < 0.01")


def test_accept_09_floor_sequence_ergodicity(sieve_big):
    floors = floor_sequence(power(rational("1.5")), Squarefree(), 10**6, sieve_big)
    prof = ergodic_weyl_test(floors, rational("0.5"), grid=[10**6])
    gate("ACCEPT-09 floor(n^{3/2}) over squarefree at alpha=1/2",
         prof.values[-1] < 0.02, f"value={prof.values[-1]:.5f} < 0.02")


def test_accept_10_property_suites(sieve_big, tmp_path):
    checks = []

    # multiplicativity: exhaustive below 1e4, randomized above
    rng = np.random.default_rng(2026)
    fams = [fns.mobius(), fns.euler_phi_ratio(), fns.sigma(),
            fns.lambda_xi(SQRT2), fns.dirichlet_character(12, (1, 1))]
    ok = True
    pairs = [(m, n) for m in range(2, 100) for n in range(m, 10**4 // m + 1)
             if math.gcd(m, n) == 1]
    big = []
    while len(big) < 500:
        m = int(rng.integers(2, 1000))
        n = int(rng.integers(2, 10**6 // m))
        if math.gcd(m, n) == 1:
            big.append((m, n))
    for f in fams:
        for m, n in pairs[::11] + big[::7]:
            lhs, rhs = f.eval(m * n, sieve_big), f.eval(m, sieve_big) * f.eval(n, sieve_big)
            if abs(complex(lhs) - complex(rhs)) > 1e-12:
                ok = False
    checks.append(("multiplicativity", ok))

    # convolution identities at 1e4
    x = 10**4
    mu = sieve_big.table("mobius")[: x + 1].astype(np.int64)
    phi = sieve_big.table("phi")[: x + 1]
    s_mu = np.zeros(x + 1, dtype=np.int64)
    s_phi = np.zeros(x + 1, dtype=np.int64)
    for d in range(1, x + 1):
        s_mu[d::d] += mu[d]
        s_phi[d::d] += phi[d]
    checks.append(("convolution identities",
                   s_mu[1] == 1 and not s_mu[2:].any()
                   and np.array_equal(s_phi[1:], np.arange(1, x + 1))))

    # character orthogonality for every modulus <= 30
    ok = True
    for d in range(1, 31):
        for chi in fns.all_characters(d):
            total = chi.character_table[np.arange(1, d + 1) % d].sum()
            if chi.is_principal:
                continue
            if abs(total) > 1e-9:
                ok = False
    checks.append(("character orthogonality", ok))

    # enumerate/membership agreement at 1e4
    ok = True
    for spec in (Squarefree(), OmegaMod(2, 0), Abundant()):
        members = set(enumerate_members(spec, 10**4, sieve_big))
        for n in range(1, 10**4 + 1):
            if spec.contains(n, sieve_big).member != (n in members):
                ok = False
    checks.append(("enumerate/membership agreement", ok))

    # Koksma cross-check and discrepancy bounds on produced sequences
    ok = True
    for seq in (fractional_parts_along(power(rational("1.5")), Squarefree(),
                                       5000, sieve_big),
                Mod1Sequence(SQRT2.frac_mul(np.arange(1, 5001)))):
        d = star_discrepancy(seq)
        if not (1 / (2 * len(seq)) <= d <= 1.0):
            ok = False
        for k in range(1, 11):
            if abs(weyl_sum(seq, k)) > 4 * math.sqrt(2) * k * d + 1e-9:
                ok = False
    checks.append(("Koksma + discrepancy bounds", ok))

    # byte-identical CSV across thread counts
    a, b = tmp_path / "a.csv", tmp_path / "b.csv"
    cache = tmp_path / "c.spf"
    base = ["katai", "--set", "big_omega_mod:2,0", "--theta", "golden",
            "--x", "200000", "--cache", str(cache)]
    main(base + ["--csv", str(a), "--threads", "1"])
    main(base + ["--csv", str(b), "--threads", "4"])
    checks.append(("thread-count determinism", a.read_bytes() == b.read_bytes()))

    for name, ok in checks:
        gate(f"ACCEPT-10 {name}", ok)
