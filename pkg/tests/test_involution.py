import random

import pytest

from wehlerk3.errors import DegenerateFiber, NotOnSurface
from wehlerk3.field import PrimeField
from wehlerk3.geometry import point2
from wehlerk3.involution import (
    fiber_partner_oracle,
    fiber_points,
    fixed_points,
    phi,
    psi,
    sigma,
)
from wehlerk3.surface import gh_values, ramification_sextic, random_surface


def test_sigma_worked_swaps(w1_29, F29):
    pt = lambda *c: point2(F29, *c)
    assert sigma(w1_29, "y", (pt(1, 0, -1), pt(1, 0, 1))) == (pt(1, 1, -1), pt(1, 0, 1))
    assert sigma(w1_29, "y", (pt(1, 1, -1), pt(1, 0, 1))) == (pt(1, 0, -1), pt(1, 0, 1))
    assert sigma(w1_29, "x", (pt(1, 0, 1), pt(1, 0, -1))) == (pt(1, 0, 1), pt(1, -2, -1))


def test_sigma_not_on_surface(w1_29, F29):
    with pytest.raises(NotOnSurface):
        sigma(w1_29, "y", (point2(F29, 1, 1, 1), point2(F29, 1, 0, 1)))


def test_sigma_degenerate_fiber_raises(w1_29, F29):
    # the first projection has a degenerate fiber over (-1,-1,1)
    b = point2(F29, 1, 0, 1)
    a = point2(F29, -1, -1, 1)
    with pytest.raises(DegenerateFiber):
        sigma(w1_29, "x", (a, b))


def test_oracle_matches_sigma_exhaustively():
    p = 11
    s = random_surface(p, seed=3)
    from wehlerk3.surface import enumerate_points
    for (a, b) in enumerate_points(s):
        for side in ("x", "y"):
            got = sigma(s, side, (a, b))
            assert got == fiber_partner_oracle(s, side, (a, b))
            assert sigma(s, side, got) == (a, b)
            # base preservation and surface closure
            if side == "y":
                assert got[1] == b
            else:
                assert got[0] == a
            assert s.contains(got[0].coords, got[1].coords)


def test_oracle_detects_degenerate_fiber(w1_29, F29):
    with pytest.raises(DegenerateFiber):
        fiber_partner_oracle(w1_29, "x", (point2(F29, -1, -1, 1), point2(F29, 1, 0, 1)))


def test_sigma_partner_is_pair_independent():
    # Recompute the partner from every admissible index pair directly and
    # compare with sigma's output.
    p = 11
    s = random_surface(p, seed=6)
    F = s.domain
    from wehlerk3.surface import enumerate_points
    rng = random.Random(0)
    pts = enumerate_points(s)
    for (a, b) in rng.sample(pts, 25):
        want = sigma(s, "y", (a, b))[0]
        lc = s.line_values("y", b.coords)
        g, h = gh_values(s, "y", b.coords)
        for (k, l, m) in ((0, 1, 2), (0, 2, 1), (1, 2, 0)):
            if int(lc[m]) == 0:
                continue
            A, B, C = g[k], h[(k, l)], g[l]
            alpha, beta = a.coords[k], a.coords[l]
            if int(alpha) != 0:
                gamma, delta = A * alpha, -(B * alpha + A * beta)
            else:
                gamma, delta = B, -C
            out = [None, None, None]
            out[k], out[l] = gamma, delta
            out[m] = -(lc[k] * gamma + lc[l] * delta) / lc[m]
            assert point2(F, *out) == want


def test_ramified_point_is_fixed():
    # Points over a root of the branch form are their own partner.
    p = 11
    s = random_surface(p, seed=3)
    fx = fixed_points(s, "y")
    assert fx, "expected at least one ramification point at p=11"
    rs = ramification_sextic(s, "y")
    for P in fx:
        if P.kind != "regular":
            continue
        b = P.b
        assert sigma(s, "y", (P.a, P.b)) == (P.a, P.b)
        val = rs.g.evaluate({"y0": b.coords[0], "y1": b.coords[1], "y2": b.coords[2]})
        assert int(val) == 0


def test_fixed_points_match_direct_scan():
    p = 11
    s = random_surface(p, seed=3)
    from wehlerk3.dynamics import build_phase_space, phase_step
    space = build_phase_space(s)
    for side in ("x", "y"):
        direct = {P.key() for P in space.points() if phase_step(s, P, side) == P}
        got = {P.key() for P in fixed_points(s, side)}
        assert got == direct


def test_branch_form_roots_give_fixed_points():
    # Converse direction: every rational zero of the branch form over a
    # non-degenerate base whose fiber is rational carries a fixed point.
    p = 11
    s = random_surface(p, seed=3)
    rs = ramification_sextic(s, "y")
    fixed_bases = {P.b.raw for P in fixed_points(s, "y")}
    pts = [(0, 0, 1)] + [(0, 1, z) for z in range(p)] + [
        (1, y, z) for y in range(p) for z in range(p)]
    for b in pts:
        val = rs.g.evaluate({"y0": b[0], "y1": b[1], "y2": b[2]})
        if int(val) != 0:
            continue
        fiber = fiber_points(s, "y", tuple(s.domain.element(v) for v in b))
        if len(fiber) == 1:
            # a doubled rational point: must be fixed by the involution
            assert b in fixed_bases


def test_phi_psi_worked_example(w1_29, F29):
    pt = lambda *c: point2(F29, *c)
    start = (pt(-1, -1, 1), pt(1, 0, 1))
    step = phi(w1_29, start)
    assert step == (pt(1, 0, 1), pt(-1, 2, 1))
    assert psi(w1_29, step) == start
    cur = start
    for _ in range(4):
        cur = phi(w1_29, cur)
    assert cur == start


def test_phi_psi_inverse_on_random_points(w1_29):
    from wehlerk3.dynamics import build_phase_space
    space = build_phase_space(w1_29)
    rng = random.Random(1)
    idxs = rng.sample(range(space.size), 100)
    for i in idxs:
        P = space.point(i)
        assert psi(w1_29, phi(w1_29, (P.a, P.b))) == (P.a, P.b)


def test_fiber_points_solves_the_fiber(w1_29, F29):
    pts = fiber_points(w1_29, "y", (F29(1), F29(0), F29(1)))
    assert sorted(p.raw for p in pts) == [(1, 0, 28), (1, 1, 28)]
    line = fiber_points(w1_29, "x", (F29(1), F29(1), F29(28)))
    assert len(line) == 30  # whole line: degenerate fiber
