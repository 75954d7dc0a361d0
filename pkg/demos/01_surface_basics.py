"""Tour of the surface layer: forms, fiber quadratics, and the branch sextic.

Run:  python demos/01_surface_basics.py
"""

from wehlerk3 import (
    PrimeField,
    coefficient_polys,
    enumerate_points,
    fiber_quadratic,
    gh_system,
    is_smooth_rational,
    point_count,
    ramification_sextic,
)
from wehlerk3.fixtures import w1_surface

# The running example: L = x0 y0 + x1 y1 + x2 y2 and a sparse (2,2) form.
s_q = w1_surface()          # over the rationals
s = w1_surface(29)          # reduced mod 29

print("L =", s_q.l_poly())
print("Q =", s_q.q_poly())

# The linear and quadratic coefficient polynomials of the second factor.
cp = coefficient_polys(s_q, "y")
print("\nlinear coefficients L^y:", [str(f) for f in cp.lc])
print("quadratic coefficient Q^y_01:", cp.q(0, 1))

# The G/H system encodes, for each base point b, the quadratic whose two
# roots are the fiber points over b.
sys_y = gh_system(s_q, "y")
print("\nG_0^y =", sys_y.g[0])

b = (1, 0, 1)
A, B, C = fiber_quadratic(s_q, "y", b, (0, 1))
print(f"fiber quadratic over {b}, pair (0,1): ({A}) x1^2 + ({B}) x0 x1 + ({C}) x0^2")
print("  -> the two fiber points have x1/x0 in {0, 1}")

# The branch sextic: its zeros are the bases whose two fiber points collide.
rs = ramification_sextic(s_q, "y")
print("\nbranch form degree:", rs.g.total_degree())
print("value at", b, "=", rs.g.evaluate({"y0": b[0], "y1": b[1], "y2": b[2]}),
      "(nonzero: two distinct fiber points)")

# Point enumeration over F_29 and the quality checks.
n = point_count(s)
print(f"\n#S(F_29) = {n} (lower bound {29 * 29 - 22 * 29 + 1})")
print("rational-point Jacobian check:", is_smooth_rational(s).no_rational_singular_point)
print("first three points:", enumerate_points(s)[:3])
