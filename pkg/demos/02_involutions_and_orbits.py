"""The two involutions, their composition, and a full orbit through a
degenerate fiber.

Run:  python demos/02_involutions_and_orbits.py
"""

from wehlerk3 import PrimeField, point2
from wehlerk3.dynamics import lift_pair, orbit
from wehlerk3.fixtures import w1_surface
from wehlerk3.involution import fiber_partner_oracle, phi, psi, sigma

s = w1_surface(29)
F = PrimeField(29)
pt = lambda *c: point2(F, *c)

# sigma("y", .) fixes the second coordinate and swaps the two points of the
# fiber over it.
P = (pt(1, 0, -1), pt(1, 0, 1))
print("P          =", P)
print("sigma_y(P) =", sigma(s, "y", P))
print("oracle     =", fiber_partner_oracle(s, "y", P), "(independent fiber solve)")
print("involution:", sigma(s, "y", sigma(s, "y", P)) == P)

# phi = sigma_y o sigma_x; psi is its inverse.
start = (pt(-1, -1, 1), pt(1, 0, 1))
step = phi(s, start)
print("\nphi", start, "=", step)
print("psi undoes it:", psi(s, step) == start)

# The full orbit: the first coordinate of the start lies over a degenerate
# fiber, so the step routes through a blow-up chart and carries a line
# parameter.  The coordinates repeat with period 4.
print("\norbit:")
for i, Q in enumerate(orbit(s, start, 8)):
    print(f"  phi^{i}: {Q}")

lifted = lift_pair(s, *start)
print("\nlifted start:", lifted, "-> line parameter", lifted.sx)
