import pytest

from wehlerk3.blowup import (
    BinaryForm,
    BoundaryPoint,
    build_chart,
    chart_for,
    exceptional_points,
    ramification_prime,
    resolve_s,
    sigma_extended,
)
from wehlerk3.errors import NotDegenerate, NotOnSurface
from wehlerk3.field import PrimeField
from wehlerk3.geometry import point1, point2
from wehlerk3.involution import fiber_points
from wehlerk3.surface import degenerate_fibers, random_surface


@pytest.fixture(scope="module")
def chart29(w1_29, F29):
    return build_chart(w1_29, "x", point2(F29, -1, -1, 1))


def test_binary_form_basics():
    f = BinaryForm(29, [4, 19, 19])  # 4*(7 s0^2 + 12 s0 s1 + 12 s1^2) mod 29
    assert f.degree == 2
    assert f(1, 0) == 4
    assert f.order_at(1, 0) == 0
    g = BinaryForm(29, [0, 0, 1])  # s1^2
    assert g.order_at(1, 0) == 2
    assert g.order_at(0, 1) == 0
    # s0^2 (3 s0 + 5 s1) has coefficient rows [3, 5, 0, 0]
    k, stripped = BinaryForm(29, [3, 5, 0, 0]).strip_power_of_s0()
    assert k == 2 and stripped.coeffs == [3, 5]


def test_chart_construction(chart29):
    assert chart29.e == 1
    assert chart29.t1 == 1
    assert chart29.dehom_index == 0
    # dividing once more would kill the system
    text = chart29.debug_dump()
    assert "G'0" in text and "Q'" in text


def test_chart_requires_degenerate_center(w1_29, F29):
    with pytest.raises(NotDegenerate):
        build_chart(w1_29, "x", point2(F29, 1, 0, 1))


def test_generic_parameter_has_two_roots(chart29):
    # Away from finitely many parameters the line meets the fiber in two
    # rational points or none (a conjugate pair); multiplicities always sum
    # to 2 when the roots are rational.
    full = empty = 0
    for s in chart29.s_candidates():
        roots = chart29.roots_at(s)
        total = sum(m for _, m in roots)
        assert total in (0, 2)
        if total == 2:
            full += 1
        else:
            empty += 1
    assert full + empty == 30
    assert full == 15  # each line carries 0 or 2 of the 30 fiber points


def test_resolve_s_worked_example(chart29, F29):
    s = resolve_s(chart29, point2(F29, 1, 0, 1))
    assert s == point1(F29, 2, 1)
    partner_s = resolve_s(chart29, point2(F29, -1, 2, 1))
    assert partner_s == s


def test_resolve_s_roundtrip(chart29):
    for s in [(1, 5), (1, 28), (0, 1)]:
        for pt in chart29.points_at(s):
            assert resolve_s(chart29, pt).raw == s


def test_resolve_s_rejects_off_fiber_points(chart29, F29):
    with pytest.raises(NotOnSurface):
        resolve_s(chart29, point2(F29, 1, 0, 2))


def test_exceptional_points_cover_the_fiber(chart29, w1_29, F29):
    eps = exceptional_points(chart29)
    assert len(eps) == 30
    fiber = {p.raw for p in fiber_points(w1_29, "x", chart29.center.coords)}
    assert {bp.moving.raw for bp in eps} <= fiber
    assert {bp.moving.raw for bp in eps} == fiber  # all points carry a line here


def test_sigma_extended_worked_swap(chart29, F29):
    s = point1(F29, 2, 1)
    bp = BoundaryPoint("x", chart29.center, s, point2(F29, 1, 0, 1))
    out = sigma_extended(chart29, bp)
    assert out.moving == point2(F29, -1, 2, 1)
    assert out.s == bp.s and out.center == bp.center
    assert sigma_extended(chart29, out).moving == bp.moving


def test_sigma_extended_involution_everywhere(chart29):
    for bp in exceptional_points(chart29):
        out = sigma_extended(chart29, bp)
        assert out.s == bp.s
        back = sigma_extended(chart29, out)
        assert back.moving == bp.moving


def test_vieta_relation_on_boundary_pairs(chart29):
    # The pair of roots on each line satisfies the projective relation
    # [m_k m'_k, m_k m'_l + m_l m'_k, m_l m'_l] = [A, -B, C] for every
    # usable index pair of the stripped chart quadratic.
    p = chart29.p
    for s in chart29.s_candidates():
        pts = chart29.points_at(s)
        if not pts:
            continue
        m1 = pts[0].raw
        m2 = pts[-1].raw  # equals m1 for a ramified line
        for (k, l) in ((0, 1), (0, 2), (1, 2)):
            triple = chart29.pair_triple((k, l), s)
            if triple is None:
                continue
            A, B, C = triple
            u = (m1[k] * m2[k] % p, (m1[k] * m2[l] + m1[l] * m2[k]) % p,
                 m1[l] * m2[l] % p)
            v = (A, -B % p, C)
            # projective equality: cross products vanish
            assert all(
                (u[i] * v[j] - u[j] * v[i]) % p == 0
                for i in range(3) for j in range(3))


def test_ramification_prime_golden(chart29):
    rp = ramification_prime(chart29)
    # over Q the stripped form is 4*(7 s0^2 + 12 s0 s1 + 12 s1^2); mod 29
    # that reads (28, 48, 48) = (28, 19, 19).
    assert rp.s0_stripped == 4
    assert rp.form.coeffs == [28, 19, 19]
    assert rp.form.degree <= 6
    assert rp.rational_roots() == []


def test_ramified_lines_match_branch_roots():
    # fixed boundary points <-> rational roots of the stripped branch form
    surfaces = [random_surface(29, seed=5, mode="degenerate"),
                random_surface(29, seed=8, mode="degenerate")]
    for s in surfaces:
        for side in ("x", "y"):
            for info in degenerate_fibers(s, side):
                chart = chart_for(s, side, info.base)
                rp = ramification_prime(chart)
                fixed_lines = set()
                n_fixed = 0
                for bp in exceptional_points(chart):
                    if sigma_extended(chart, bp).moving == bp.moving:
                        fixed_lines.add(bp.s.raw)
                        n_fixed += 1
                assert n_fixed <= 6
                for bp in exceptional_points(chart):
                    is_fixed = sigma_extended(chart, bp).moving == bp.moving
                    assert is_fixed == (rp.form(*bp.s.raw) == 0)


def test_all_charts_of_the_example(w1_29):
    # every degenerate fiber of the reduced example yields a working chart
    for side in ("x", "y"):
        for info in degenerate_fibers(w1_29, side):
            chart = chart_for(w1_29, side, info.base)
            assert chart.e >= 1
            eps = exceptional_points(chart)
            assert eps
            for bp in eps[:5]:
                assert w1_29.contains(*chart._pair_coords(bp.moving))


def test_vertical_parameter_is_stripped(chart29):
    # at s = (0,1) the raw quadratics vanish identically; the stripped
    # triple is the projective limit and stays usable.
    triple = chart29.pair_triple((0, 1), (0, 1))
    assert triple is not None
    assert any(v % 29 for v in triple)
