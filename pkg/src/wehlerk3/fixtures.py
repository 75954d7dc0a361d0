"""The worked example surface and its known orbit, used by tests and the
`verify-fixtures` command.

W1 is the surface with
    L = x0*y0 + x1*y1 + x2*y2
    Q = x1^2*y0^2 + 2*x2^2*y0*y1 + x0^2*y1^2 - x0*x1*y2^2.
It has exactly two degenerate fibers for the first projection, over
(-1,-1,1) and (1,1,1), and carries a known period-4 coordinate orbit
through ((-1,-1,1),(1,0,1)) that passes through both of them.
"""

from __future__ import annotations

from .field import QQ, PrimeField
from .geometry import point2
from .surface import WehlerSurface

W1_L_TERMS = (((0, 0), 1), ((1, 1), 1), ((2, 2), 1))
W1_Q_TERMS = (
    ((1, 1, 0, 0), 1),
    ((2, 2, 0, 1), 2),
    ((0, 0, 1, 1), 1),
    ((0, 1, 2, 2), -1),
)

# Degenerate bases of the first projection, as written in the source text.
W1_DEGENERATE_X = ((-1, -1, 1), (1, 1, 1))

# The printed coordinate orbit of phi starting at ((-1,-1,1),(1,0,1)); the
# coordinates repeat with period 4.
W1_ORBIT = (
    ((-1, -1, 1), (1, 0, 1)),
    ((1, 0, 1), (-1, 2, 1)),
    ((1, 1, 1), (-1, 0, 1)),
    ((-1, 0, 1), (1, -2, 1)),
)


def w1_surface(p: int | None = None) -> WehlerSurface:
    """The example surface over QQ, or reduced mod an odd prime."""
    domain = QQ if p is None else PrimeField(p)
    return WehlerSurface.from_terms(domain, W1_L_TERMS, W1_Q_TERMS)


def w1_orbit_points(p: int):
    """The printed orbit as canonical point pairs over F_p."""
    field = PrimeField(p)
    return [
        (point2(field, *a), point2(field, *b))
        for a, b in W1_ORBIT
    ]


def w1_degenerate_centers(p: int | None = None):
    domain = QQ if p is None else PrimeField(p)
    return [point2(domain, *c) for c in W1_DEGENERATE_X]
