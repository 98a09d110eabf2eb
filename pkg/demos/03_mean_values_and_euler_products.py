"""Empirical means against the mean-value Euler product, and the criterion
series that govern when the mean exists.

For a bounded multiplicative g with convergent sum (1 - g(p))/p and some
g(2^k) != -1, the mean equals prod_p (1 - 1/p)(1 + sum_m g(p^m) p^-m); the
product side is truncated at a prime cutoff with the tail budget reported,
never silently dropped.
"""

import math

from katailab import (
    build_sieve,
    empirical_cdf,
    empirical_mean,
    functions as fns,
    halasz_series,
    mean_with_product,
    seminorm_l1,
    three_series,
)

sieve = build_sieve(10_000_000)
grid = [10**5, 10**6, 10**7]

print("empirical mean vs Euler product (cutoff 1e5):")
for fn in (fns.euler_phi_ratio(), fns.squarefree_indicator(),
           fns.custom(lambda p, m: 1 - 2 / p, name="1 - 2/p", in_unit_ball=True)):
    rep = mean_with_product(fn, 10**7, grid, sieve, prime_cutoff=10**5)
    print(f"  {fn.name:12s} empirical {rep.means[-1].real:.7f}   "
          f"product {rep.product.real:.7f}   |diff| {rep.final_discrepancy:.2e}   "
          f"tail <= {rep.tail_bound:.1e}")

rep = empirical_mean(fns.liouville(), 10**7, grid, sieve)
print(f"\nliouville mean at 1e7: {rep.means[-1]:+.2e}  (cancellation, no bias)")

print("\naveraged modulus (seminorm route):")
for fn in (fns.liouville(), fns.mobius(), fns.euler_phi_ratio()):
    rep = seminorm_l1(fn, 10**6, [10**6], sieve)
    print(f"  |{fn.name}| averages to {rep.means[-1]:.6f}")

# a multiplicative function vanishing on most primes: modulus average dies
sparse = fns.custom(lambda p, m: 1 if (m == 1 and p % 8 == 1) else 0,
                    name="sparse", in_unit_ball=True)
rep = seminorm_l1(sparse, 10**7, grid, sieve)
print(f"  sparse restriction (p = 1 mod 8 only): {rep.means[-1]:.6f} -> 0")

print("\ncriterion series, partial sums over p <= y:")
rep = halasz_series(fns.liouville(), 0.0, 10**5, [10**2, 10**4, 10**5], sieve)
print(f"  sum (1 - Re liouville(p))/p at y = 1e5: {rep.partial_sums[-1]:.4f} "
      f"(diverges like 2 log log y)")
rep = halasz_series(fns.euler_phi_ratio(), 0.0, 10**5, [10**5], sieve)
print(f"  sum (1 - phi(p)/p)/p at y = 1e5:        {rep.partial_sums[-1]:.4f} "
      f"(converges to sum 1/p^2)")

s1, s2, s3 = three_series(lambda p: math.log(1 - 1 / p), 10**4, [10**4], sieve)
print(f"\nthree-series test for a(p) = log(1 - 1/p): "
      f"{s1.partial_sums[-1]:.4f} / {s2.partial_sums[-1]:.4f} / {s3.partial_sums[-1]:.4f}")
print("  (all three settle: the additive function has a limiting distribution)")

values = fns.euler_phi_ratio().values_upto(10**6, sieve)[1:]
cdf = empirical_cdf(values, [0.3, 0.5, 0.7, 0.9, 1.0])
print("\nempirical CDF of phi(n)/n at 1e6:")
for t, y in cdf:
    print(f"  F({t:.1f}) = {y:.6f}")
