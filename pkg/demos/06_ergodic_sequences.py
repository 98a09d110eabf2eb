"""Ergodic-sequence tests: Weyl averages along members and their floors.

A set of positive density whose indicator is driven by multiplicative
structure gives a totally ergodic sequence: (1/N)|sum e(n_j alpha)| dies for
every irrational alpha.  Floors of admissible sublinear or between-powers
functions along those members give ergodic sequences: the averages die for
every non-integer alpha, rationals included.
"""

import numpy as np

from katailab import (
    OmegaMod,
    Squarefree,
    build_sieve,
    ergodic_weyl_test,
    floor_sequence,
    power,
    rational,
    t_over_log_t,
    total_ergodicity_test,
)
from katailab.constants import GOLDEN, SQRT2

sieve = build_sieve(10_000_000)
grid = [10**4, 10**5, 10**6]

print("total ergodicity: (1/N)|sum e(n_j alpha)| over the member sequence\n")
for spec, alpha, label in [
    (OmegaMod(2, 0), GOLDEN, "Omega even, alpha = golden"),
    (OmegaMod(2, 0), SQRT2, "Omega even, alpha = sqrt2"),
    (Squarefree(), GOLDEN, "squarefree, alpha = golden"),
]:
    prof = total_ergodicity_test(spec, alpha, 10**6, sieve, grid=grid)
    row = "  ".join(f"{v:.2e}" for v in prof.values)
    print(f"  {label:28s} {row}")

print("\nrational alpha is refused unless explicitly flagged as a control:")
try:
    total_ergodicity_test(Squarefree(), rational("0.5"), 10**4, sieve)
except ValueError as err:
    print(f"  rejected: {err}")
prof = total_ergodicity_test(Squarefree(), rational("0.5"), 10**6, sieve,
                             grid=[10**6], negative_control=True)
print(f"  under the flag: squarefree at alpha=1/2 stays at {prof.values[-1]:.4f} "
      f"(parity bias 1/3: these members are NOT an ergodic sequence)")

print("\nfloor sequences: exact floor(h(n_j)) with h admissible")
floors = floor_sequence(power(rational("1.5")), Squarefree(), 10**6, sieve)
print(f"  first floors of n^(3/2) over squarefree: {floors[:8].tolist()}")
for alpha in (rational("0.5"), SQRT2):
    prof = ergodic_weyl_test(floors, alpha, grid=grid)
    row = "  ".join(f"{v:.2e}" for v in prof.values)
    print(f"  alpha = {str(alpha):6s} {row}")

floors = floor_sequence(t_over_log_t(), OmegaMod(2, 0), 10**5, sieve)
prof = ergodic_weyl_test(floors, rational("0.5"), grid=[10**5])
print(f"  floor(t/log t) over Omega-even, alpha=1/2: {prof.values[-1]:.2e}")

prof = ergodic_weyl_test(np.arange(1, 10**5 + 1), rational(3))
print(f"\ninteger alpha is trivial: average = {prof.values[-1]} exactly")
