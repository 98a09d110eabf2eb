"""Fractional parts of smooth functions along level sets: Weyl sums and
star discrepancy.

Admissible catalog entries (t^c with non-integer c, polynomials with an
irrational coefficient, log^r t with r > 2, t log t, t/log t, log Gamma)
equidistribute along every catalog level set of positive density.  The rate
varies enormously: the coefficient-1 power t^{3/2} drags its feet at
~N^{-1/4} while a generic polynomial is essentially perfect at N = 1e5, and
log^2.5 t is far too slow to bound at desk scale at all.
"""

from katailab import (
    OmegaMod,
    Squarefree,
    build_sieve,
    log_gamma,
    log_power,
    polynomial,
    power,
    pq_dilation_check,
    rational,
    t_log_t,
    ud_test,
)
from katailab.constants import SQRT2

sieve = build_sieve(10_000_000)

print("N = 1e5 points along each set, Weyl frequencies k <= 5:\n")
cases = [
    (power(rational("1.5")), Squarefree(), "t^{3/2}, squarefree"),
    (polynomial([rational(0), rational(1), SQRT2]), OmegaMod(2, 0),
     "sqrt2 t^2 + t, Omega even"),
    (t_log_t(), Squarefree(), "t log t, squarefree"),
    (log_gamma(), OmegaMod(2, 1), "log Gamma, Omega odd"),
]
for h, spec, label in cases:
    rep = ud_test(h, spec, 10**5, 5, sieve)
    print(f"  {label:28s} D* = {rep.dstar:.5f}   max|W(k)| = {rep.max_abs_weyl:.5f}")

print("\nthe slow one: t^{3/2} along squarefree drifts down like N^{-1/4}:")
for n in (10**4, 10**5, 10**6):
    rep = ud_test(power(rational("1.5")), Squarefree(), n, 1, sieve)
    print(f"  N = {n:>9,}   D* = {rep.dstar:.5f}")

print("\nlog^{2.5} t equidistributes too slowly to bound at desk scale:")
rep = ud_test(log_power(rational("2.5")), Squarefree(), 10**5, 3, sieve)
print(f"  N = 1e5: D* = {rep.dstar:.4f}  (reported, no threshold claimed)")

print("\ndilation differences h(pn) - h(qn), the quantity the decay rides on:")
for h, label in ((power(rational("1.5")), "t^{3/2}"),
                 (t_log_t(), "t log t")):
    rep = pq_dilation_check(h, 2, 3, 10**5, 3)
    print(f"  {label:10s} (p,q)=(2,3):  D* = {rep.dstar:.5f}")
