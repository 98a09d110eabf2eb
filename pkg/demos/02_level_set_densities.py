"""Level sets: membership, enumeration, empirical densities, concentration.

The catalog sets (squarefree, prime-factor-count residues, abundant numbers,
totient-ratio cuts, divisor-count residues) all decide membership from the
factorization alone; densities are reported on a geometric grid with the
oscillation over the last decade as the settling diagnostic.
"""

from katailab import (
    Abundant,
    OmegaMod,
    PhiRatioBelow,
    Squarefree,
    TauMod,
    build_sieve,
    concentration_scan,
    empirical_density,
    enumerate_members,
    functions as fns,
    rational,
)

sieve = build_sieve(10_000_000)

print("first squarefree numbers: ",
      [n for _, n in zip(range(12), enumerate_members(Squarefree(), 100, sieve))])
print("abundant numbers up to 60:",
      list(enumerate_members(Abundant(), 60, sieve)))

grid = [10**4, 10**5, 10**6, 10**7]
for spec, note in [
    (Squarefree(), "limit 6/pi^2 = 0.607927"),
    (OmegaMod(2, 0), "parity of Omega splits evenly"),
    (Abundant(), "classical value ~ 0.2476"),
    (PhiRatioBelow(rational("0.5")), "totient ratio below 1/2"),
    (TauMod(4, 1), "divisor count = 1 mod 4: only squares have odd tau, density 0"),
]:
    rep = empirical_density(spec, grid, sieve)
    print(f"\ndensity[{spec.name}]  ({note})")
    for x, d in zip(rep.checkpoints, rep.densities):
        print(f"  x = {x:>10,}   {d:.6f}")
    print(f"  oscillation over last decade: {rep.max_oscillation_last_decade:.2e}")

# divergence diagnostics: sum of 1/p over primes with f(p) = z
print("\npartial sums of 1/p over primes p <= y with liouville(p) = -1:")
rep = concentration_scan(fns.liouville(), -1, 10**6,
                         [10**2, 10**3, 10**4, 10**5, 10**6], sieve)
for y, s in zip(rep.cutoffs, rep.partial_sums):
    print(f"  y = {y:>9,}   {s:.5f}")
print(f"  advisory slope vs log log y: {rep.slope:+.3f}  (~1 suggests divergence)")

rep = concentration_scan(fns.euler_phi_ratio(), 1, 10**6, [10**6], sieve)
print(f"matches for phi(p)/p = 1: partial sum stays {rep.partial_sums[-1]}")
