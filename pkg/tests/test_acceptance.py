"""End-to-end acceptance checks.

Each test prints one PASS line so the suite doubles as a checklist; the
expensive surface pools are shared via module fixtures.  Total runtime is a
few minutes on a laptop core.
"""

import math
import os
import time

import pytest

from wehlerk3.blowup import chart_for, exceptional_points, ramification_prime, sigma_extended
from wehlerk3.dynamics import (
    asymmetric_pairing,
    build_phase_space,
    cycle_decomposition,
    lift_pair,
    orbit,
)
from wehlerk3.field import QQ, PrimeField
from wehlerk3.fixtures import (
    W1_DEGENERATE_X,
    w1_orbit_points,
    w1_surface,
)
from wehlerk3.geometry import point2
from wehlerk3.involution import fiber_partner_oracle, sigma
from wehlerk3.stats import (
    ExperimentConfig,
    area_error,
    empirical_curve,
    limit_R,
    limit_R_area,
    make_grid,
    run_experiment,
    sanity_windows,
    symmetric_point_fraction,
)
from wehlerk3.surface import degenerate_fibers, point_count, random_surface

THREADS = min(8, os.cpu_count() or 1)


def _report(name: str, detail: str = ""):
    print(f"ACCEPT {name}: PASS" + (f" ({detail})" if detail else ""))


@pytest.fixture(scope="module")
def pool_nondegenerate_29():
    return [random_surface(29, seed=100 + i) for i in range(20)]


@pytest.fixture(scope="module")
def pool_degenerate_29():
    return [random_surface(29, seed=200 + i, mode="degenerate") for i in range(10)]


@pytest.fixture(scope="module")
def experiment_29_307():
    cfg = ExperimentConfig(count=30, primes=(29, 307), seed=41, threads=THREADS)
    return run_experiment(cfg)


@pytest.fixture(scope="module")
def experiment_101():
    cfg = ExperimentConfig(count=50, primes=(101,), seed=42, threads=THREADS)
    return run_experiment(cfg)


def test_criterion_1_degenerate_fibers_of_the_example():
    t0 = time.time()
    wq = w1_surface()
    got_x = [d.base for d in degenerate_fibers(wq, "x")]
    expected = [point2(QQ, *c) for c in ((-1, -1, 1), (1, 1, 1))]
    assert sorted(got_x, key=lambda P: P.raw) == sorted(expected, key=lambda P: P.raw)
    assert degenerate_fibers(wq, "y") == []
    for p in (29, 37, 101):
        s = w1_surface(p)
        found = {d.base for d in degenerate_fibers(s, "x")}
        for c in W1_DEGENERATE_X:
            assert point2(s.domain, *c) in found, f"center {c} lost mod {p}"
    elapsed = time.time() - t0
    assert elapsed < 5.0
    _report("criterion 1", f"two centers over Q and mod 29/37/101, {elapsed:.2f}s")


def test_criterion_2_orbit_golden():
    t0 = time.time()
    s = w1_surface(29)
    expected = w1_orbit_points(29)
    orb = orbit(s, expected[0], 8)
    assert [(P.a, P.b) for P in orb] == [expected[i % 4] for i in range(9)]
    census = cycle_decomposition(s)
    start = lift_pair(s, *expected[0])
    cid = int(census.cycle_id[census.space.index_of(start)])
    rec = census.cycles[cid]
    assert rec.length == 4 and not rec.symmetric
    pairing = asymmetric_pairing(census)
    partner = census.cycles[pairing[cid]]
    assert pairing[cid] != cid and partner.length == 4
    elapsed = time.time() - t0
    assert elapsed < 5.0
    _report("criterion 2", f"period-4 asymmetric orbit with paired twin, {elapsed:.2f}s")


def _oracle_scan(s):
    """sigma against the brute-force fiber solver, plus the involution law."""
    space = build_phase_space(s)
    mismatches = 0
    for P in space.points():
        pair = (P.a, P.b)
        for side in ("x", "y"):
            degenerate = (P.sx if side == "x" else P.sy) is not None
            if degenerate:
                continue
            got = sigma(s, side, pair)
            if got != fiber_partner_oracle(s, side, pair):
                mismatches += 1
            if sigma(s, side, got) != pair:
                mismatches += 1
    return space, mismatches


def _chart_scan(s):
    """sigma_extended involution and the Vieta relation on every chart point."""
    bad = 0
    n = 0
    for side in ("x", "y"):
        for info in degenerate_fibers(s, side):
            chart = chart_for(s, side, info.base)
            p = chart.p
            for bp in exceptional_points(chart):
                n += 1
                out = sigma_extended(chart, bp)
                if out.s != bp.s or sigma_extended(chart, out).moving != bp.moving:
                    bad += 1
                    continue
                m1, m2 = bp.moving.raw, out.moving.raw
                for (k, l) in ((0, 1), (0, 2), (1, 2)):
                    triple = chart.pair_triple((k, l), bp.s.raw)
                    if triple is None:
                        continue
                    A, B, C = triple
                    u = (m1[k] * m2[k] % p,
                         (m1[k] * m2[l] + m1[l] * m2[k]) % p,
                         m1[l] * m2[l] % p)
                    v = (A, -B % p, C)
                    if any((u[i] * v[j] - u[j] * v[i]) % p
                           for i in range(3) for j in range(3)):
                        bad += 1
    return n, bad


def test_criterion_3_involution_oracle_equivalence():
    surfaces = [w1_surface(29)]
    surfaces += [random_surface(11, seed=300 + i) for i in range(3)]
    surfaces += [random_surface(29, seed=310 + i, mode="degenerate") for i in range(2)]
    total_mis = total_chart_bad = total_pts = total_chart_pts = 0
    for s in surfaces:
        space, mis = _oracle_scan(s)
        total_mis += mis
        total_pts += space.size
        n, bad = _chart_scan(s)
        total_chart_pts += n
        total_chart_bad += bad
    assert total_mis == 0
    assert total_chart_bad == 0
    _report("criterion 3",
            f"{total_pts} phase points and {total_chart_pts} chart points, 0 mismatches")


def test_criterion_4_combinatorial_identities(pool_nondegenerate_29, pool_degenerate_29):
    violations = 0
    for s in pool_nondegenerate_29 + pool_degenerate_29:
        census = cycle_decomposition(s)
        if sum(c.length for c in census.cycles) != census.total:
            violations += 1
        if census.symmetric_count * 2 != census.fix_x + census.fix_y:
            violations += 1
        pairing = asymmetric_pairing(census)
        if len(pairing) != census.asymmetric_count:
            violations += 1
        for i, j in pairing.items():
            if (pairing.get(j) != i or i == j
                    or census.cycles[i].length != census.cycles[j].length):
                violations += 1
    assert violations == 0
    _report("criterion 4", "30 surfaces at p=29, exact identities, 0 violations")


def test_criterion_5_windows(pool_nondegenerate_29, pool_degenerate_29):
    t0 = time.time()
    violations = 0
    for s in pool_nondegenerate_29 + pool_degenerate_29:
        census = cycle_decomposition(s)
        assert point_count(s) >= 29 * 29 - 22 * 29 + 1
        report = sanity_windows(s, census)
        if not report.passed:
            violations += 1
    # large primes: the lower fixed-point bound becomes a real constraint
    for p in (401, 503):
        for i in range(5):
            s = random_surface(p, seed=500 + i)
            census = cycle_decomposition(s)
            report = sanity_windows(s, census)
            by_name = {c.name: c for c in report.checks}
            assert by_name["fix_x_lower"].required
            assert by_name["fix_y_lower"].required
            if not report.passed:
                violations += 1
    elapsed = time.time() - t0
    assert violations == 0
    assert elapsed < 600
    _report("criterion 5", f"windows on 40 surfaces incl. p=401/503, {elapsed:.0f}s")


def test_criterion_6_chart_fixed_points(pool_degenerate_29):
    surfaces = [w1_surface(29)] + pool_degenerate_29
    checked = 0
    for s in surfaces:
        for side in ("x", "y"):
            for info in degenerate_fibers(s, side):
                chart = chart_for(s, side, info.base)
                rp = ramification_prime(chart)
                fixed = 0
                for bp in exceptional_points(chart):
                    is_fixed = sigma_extended(chart, bp).moving == bp.moving
                    g_zero = rp.form(*bp.s.raw) == 0
                    assert is_fixed == g_zero, (
                        f"branch-form equivalence fails at s={bp.s} on {info.base}")
                    fixed += is_fixed
                assert fixed <= 6
                checked += 1
    assert checked > 0
    _report("criterion 6", f"{checked} charts, fixed points <= 6 and branch form exact")


def test_criterion_7_distribution_reproduction(experiment_101, experiment_29_307):
    avg_err_101 = experiment_101.blocks[0].averaged_area_error
    assert len(experiment_101.blocks[0].summaries) >= 50
    assert avg_err_101 <= 10.0
    by_prime = {b.prime: b for b in experiment_29_307.blocks}
    assert len(by_prime[29].summaries) >= 30
    assert len(by_prime[307].summaries) >= 30
    assert by_prime[307].mean_area_error < by_prime[29].mean_area_error
    _report(
        "criterion 7",
        f"avg-curve error {avg_err_101:.2f}% at p=101; "
        f"mean error {by_prime[307].mean_area_error:.2f}% @307 < "
        f"{by_prime[29].mean_area_error:.2f}% @29")


def test_criterion_8_symmetric_dominance(experiment_29_307):
    by_prime = {b.prime: b for b in experiment_29_307.blocks}
    f29 = by_prime[29].mean_symmetric_fraction
    f307 = by_prime[307].mean_symmetric_fraction
    assert f307 > f29
    _report("criterion 8", f"symmetric point fraction {f307:.4f} @307 > {f29:.4f} @29")


def test_criterion_9_limit_law_values():
    assert limit_R(0.0) == 0.0
    assert abs(limit_R(1.0) - (1 - 2 / math.e)) < 1e-12
    xs = make_grid()
    vals = [limit_R(x) for x in xs]
    assert all(b >= a for a, b in zip(vals, vals[1:]))
    assert abs(limit_R_area() - (8 + 12 * math.exp(-10))) < 1e-9
    _report("criterion 9", "limit law spot values and area")
