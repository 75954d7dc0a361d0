"""Cycle censuses and the limiting distribution R(x) = 1 - e^(-x)(1 + x).

Decomposes a few random surfaces per prime, scales the cycle lengths, and
prints the empirical curve next to the limit law together with the area
error.  Larger primes hug the limit noticeably tighter.

Run:  python demos/04_cycle_distribution.py
"""

from wehlerk3.dynamics import asymmetric_pairing, cycle_decomposition
from wehlerk3.stats import (
    ExperimentConfig,
    area_error,
    empirical_curve,
    limit_R,
    run_experiment,
    sanity_windows,
)
from wehlerk3.surface import random_surface

# One surface in detail.
s = random_surface(61, seed=12)
census = cycle_decomposition(s)
print(f"p=61 seed=12: {census.total} phase points, "
      f"{len(census.cycles)} cycles, fix = ({census.fix_x}, {census.fix_y})")
print(f"symmetric cycles: {census.symmetric_count} "
      f"= (fix_x + fix_y)/2 = {(census.fix_x + census.fix_y) // 2}")
pairing = asymmetric_pairing(census)
print(f"asymmetric cycles: {census.asymmetric_count} in {len(pairing) // 2} pairs")
print("windows:", "PASS" if sanity_windows(s, census).passed else "FAIL")

curve = empirical_curve(census)  # symmetric-mean scaling
print(f"\nscaling z = {curve.z:.2f};  area error vs limit law: "
      f"{area_error(curve):.2f}%\n")
print("   x   empirical   R(x)")
for i in range(0, len(curve.xs), 10):
    x = curve.xs[i]
    print(f"  {x:4.1f}   {curve.values[i]:.4f}     {limit_R(x):.4f}")

# A small averaged experiment across two primes.
cfg = ExperimentConfig(count=8, primes=(29, 113), seed=3)
report = run_experiment(cfg)
print("\naveraged over 8 surfaces per prime:")
for block in report.blocks:
    print(f"  p={block.prime}: mean area error {block.mean_area_error:.2f}%, "
          f"symmetric point fraction {block.mean_symmetric_fraction:.4f}")
