"""The verification engine against independent brute-force measurement, plus
witness search, coarse controls and the exhaustive 1-D search."""

import itertools

import pytest

from coarselab.covers import (
    CoverScheme,
    grid_cover,
    mixed_grid_cover,
    product_square_cover,
    shift_union_cover,
    singleton_cover,
    spaced_interval_cover,
    staircase_cover,
)
from coarselab.spaces import (
    ControlFn,
    IDENTITY,
    MapSpec,
    SpaceSpec,
    Window,
    iter_window,
    lattice_max_distance,
    space_distance,
)
from coarselab.verify import (
    BudgetExceeded,
    VerifyError,
    assignment_scheme,
    check_coarse_control,
    find_fiber_witnesses,
    materialize,
    oracle_1d_nocover,
    verify_cover,
)


# ---------------------------------------------------------------------------
# a third, fully naive measurement path used as the test oracle
# ---------------------------------------------------------------------------

def brute_measure(scheme, spec, w):
    """Group every window point by classification and measure diameters and
    separations by unpruned all-pairs loops."""
    cells: dict = {}
    uncovered = 0
    for p in iter_window(spec, w):
        res = scheme.classify(p)
        if res is None:
            uncovered += 1
            continue
        color, key = res
        cells.setdefault(color, {}).setdefault(key, []).append(p)
    out = {}
    for color, per_key in cells.items():
        diam = 0
        for pts in per_key.values():
            for a, b in itertools.combinations(pts, 2):
                diam = max(diam, space_distance(spec, a, b))
        sep = None
        for (k1, A), (k2, B) in itertools.combinations(per_key.items(), 2):
            d = min(space_distance(spec, a, b) for a in A for b in B)
            sep = d if sep is None else min(sep, d)
        out[color] = (len(per_key), diam, sep)
    return out, uncovered


def assert_engine_matches_brute(scheme, spec, w, **kwargs):
    report = verify_cover(scheme, spec, w, **kwargs)
    expected, uncovered = brute_measure(scheme, spec, w)
    assert report.uncovered_total == uncovered
    for color, (cells_seen, diam, sep) in expected.items():
        rec = report.per_color[color]
        assert rec.cells_seen == cells_seen
        assert rec.max_diameter == diam
        assert rec.min_cross_cell_separation == sep
    return report


# ---------------------------------------------------------------------------
# engine vs brute force across space kinds
# ---------------------------------------------------------------------------

def test_engine_matches_brute_on_grid():
    rep = assert_engine_matches_brute(
        grid_cover(1, 5), SpaceSpec.lattice((1,)),
        Window.make(box=((-50, 50),)))
    assert rep.record(0).min_cross_cell_separation == 6
    assert rep.record(0).max_diameter == 4
    assert rep.verdict == "pass"


def test_engine_matches_brute_on_staircase_slice():
    # the [-2,2] boxes still realize all four phase classes of the scheme
    scheme = staircase_cover(1, 2, dim=2, height_interval=(3, 3))
    spec = SpaceSpec.lattice((2, 2, 1, 1))
    w = Window.make(axis_boxes={0: (-2, 2), 1: (-2, 2),
                                2: (-64, 64), 3: (3, 3)})
    rep = assert_engine_matches_brute(scheme, spec, w)
    assert rep.record(0).min_cross_cell_separation >= 1
    assert rep.record(1).min_cross_cell_separation >= 2
    assert rep.uncovered_total == 0


def test_engine_matches_brute_on_mixed_grid():
    scheme = mixed_grid_cover(1, 1, 3, 5)
    spec = SpaceSpec.lattice((1, 3))
    w = Window.make(axis_boxes={0: (-24, 24), 1: (-15, 15)})
    assert_engine_matches_brute(scheme, spec, w)


def test_engine_matches_brute_on_tower_singletons():
    spec = SpaceSpec.tower("identity")
    scheme = singleton_cover(spec, 2)
    w = Window.make(levels=(3, 4), box=(-6, 6))
    rep = assert_engine_matches_brute(scheme, spec, w)
    assert rep.record(0).min_cross_cell_separation == 3


def test_engine_matches_brute_on_product_square():
    scheme = product_square_cover(1, 2)
    spec = SpaceSpec.product_of_towers("pow2")
    w = Window.make(levels=(1, 2), box=(-4, 4))
    assert_engine_matches_brute(scheme, spec, w)


def test_engine_matches_brute_on_shift_union():
    scheme = shift_union_cover(1, 2)
    spec = SpaceSpec.shift_union()
    w = Window.make(levels=(0, 3), max_support=7, box=(0, 0),
                    axis_boxes={2: (-12, 12), 3: (-4, 4), 5: (-6, 6)})
    rep = assert_engine_matches_brute(scheme, spec, w)
    assert rep.uncovered_total == 0


def test_omega_cover_verifies_over_a_tower_window():
    from coarselab.covers import omega_cover
    scheme = omega_cover(3, 5)
    spec = SpaceSpec.tower_with_factor("pow2", 1)
    rep = verify_cover(scheme, spec, Window.make(levels=(1, 5), box=(-8, 8)))
    assert rep.passed
    assert rep.uncovered_total == 0
    # the designated small-gap color measures at least its declared gap
    assert rep.record(0).min_cross_cell_separation is None or \
        rep.record(0).min_cross_cell_separation >= 3
    hit = [rec for rec in rep.per_color if rec.cells_seen]
    assert len(hit) >= 4  # every region contributes cells on this window


def test_pullback_through_level_projection_stays_disjoint():
    # a 1-Lipschitz map pulls an r-disjoint family back to an r-disjoint one
    from coarselab.covers import pullback_scheme
    from coarselab.spaces import MapSpec as _MapSpec
    proj = _MapSpec.make("f-level-projection")
    pulled = pullback_scheme(grid_cover(1, 3), proj)
    spec = SpaceSpec.shift_union()
    w = Window.make(levels=(0, 8), box=(-2, 2), max_support=2)
    rep = verify_cover(pulled, spec, w)
    brute, _ = brute_measure(pulled, spec, w)
    for color, (cells_seen, diam, sep) in brute.items():
        if sep is not None:
            assert sep >= 3
            assert rep.per_color[color].min_cross_cell_separation == sep


def test_zero_point_window_passes_with_empty_colors():
    spec = SpaceSpec.lattice((5,))
    w = Window.make(box=((1, 4),))  # no multiples of 5 inside
    rep = verify_cover(grid_cover(1, 3), spec, w)
    assert rep.points_seen == 0
    assert rep.verdict == "pass-with-empty-color"
    assert materialize(grid_cover(1, 3), spec, w) == {}


def test_run_path_agrees_with_pointwise():
    scheme = staircase_cover(1, 2, dim=2, height_interval=(1, 1))
    spec = SpaceSpec.lattice((2, 2, 1, 1))
    w = Window.make(axis_boxes={0: (-16, 16), 1: (-16, 16),
                                2: (0, 180), 3: (1, 1)})
    a = verify_cover(scheme, spec, w, mode="pointwise")
    b = verify_cover(scheme, spec, w, mode="runs")
    assert a.points_seen == b.points_seen
    for ra, rb in zip(a.per_color, b.per_color):
        assert ra.cells_seen == rb.cells_seen
        assert ra.max_diameter == rb.max_diameter
        assert ra.min_cross_cell_separation == rb.min_cross_cell_separation


def test_run_mode_requires_run_support():
    with pytest.raises(VerifyError):
        verify_cover(grid_cover(1, 5), SpaceSpec.lattice((1,)),
                     Window.make(box=((-5, 5),)), mode="runs")


# ---------------------------------------------------------------------------
# report semantics
# ---------------------------------------------------------------------------

def test_monotone_in_window_size():
    scheme = grid_cover(2, 4)
    spec = SpaceSpec.lattice((1, 1))
    small = verify_cover(scheme, spec, Window.make(box=(-10, 10)))
    large = verify_cover(scheme, spec, Window.make(box=(-30, 30)))
    for rec_s, rec_l in zip(small.per_color, large.per_color):
        if rec_s.min_cross_cell_separation is not None:
            assert (rec_l.min_cross_cell_separation
                    <= rec_s.min_cross_cell_separation)
        assert rec_l.max_diameter >= rec_s.max_diameter


def test_empty_window_is_pass_with_empty_color():
    scheme = spaced_interval_cover(6, 3)
    rep = verify_cover(scheme, SpaceSpec.lattice((1,)),
                       Window.make(box=((6, 7),)))
    # points exist but fall between blocks: uncovered, hence fail
    assert rep.verdict == "fail"
    rep = verify_cover(grid_cover(1, 5), SpaceSpec.lattice((1,)),
                       Window.make(box=((2, 3),)))
    assert rep.verdict == "pass-with-empty-color"  # one parity never appears


def test_uncovered_points_reported_not_raised():
    # period-6 blocks {0,1,2}, {6,7,8}, {12}: 7 of 13 points covered
    scheme = spaced_interval_cover(3, 4)
    rep = verify_cover(scheme, SpaceSpec.lattice((1,)),
                       Window.make(box=((0, 12),)))
    assert rep.verdict == "fail"
    assert rep.uncovered_total == 6
    assert rep.uncovered_sample


def test_budget_guard():
    with pytest.raises(BudgetExceeded):
        verify_cover(grid_cover(2, 5), SpaceSpec.lattice((1, 1)),
                     Window.make(box=(-500, 500)), point_budget=1000)


def test_worker_partition_agrees_with_serial():
    scheme = grid_cover(2, 4)
    spec = SpaceSpec.lattice((1, 1))
    w = Window.make(box=(-60, 60))
    serial = verify_cover(scheme, spec, w, workers=1)
    parallel = verify_cover(scheme, spec, w, workers=4)
    assert serial.to_json() == parallel.to_json()


def test_report_json_round_trip_fields():
    rep = verify_cover(grid_cover(1, 3), SpaceSpec.lattice((1,)),
                       Window.make(box=((-9, 9),)))
    body = rep.to_json()
    assert body["verdict"] == "pass"
    assert body["per_color"][0]["min_cross_cell_separation"] == 4
    assert "window" in body and "points_seen" in body


def test_materialize_groups_by_cell():
    fams = materialize(grid_cover(1, 5), SpaceSpec.lattice((1,)),
                       Window.make(box=((0, 9),)))
    # [0,9] splits into the even block {0..4} and the odd block {5..9}
    sets = {color: sorted(sorted(p[0] for p in pts) for _, pts in fam.cells)
            for color, fam in fams.items()}
    assert sorted(sets.values()) == [[[0, 1, 2, 3, 4]], [[5, 6, 7, 8, 9]]]


def test_singleton_cells_in_materialization():
    spec = SpaceSpec.tower("identity")
    fams = materialize(singleton_cover(spec, 2), spec,
                       Window.make(levels=(3, 3), box=(-3, 3)))
    assert all(len(pts) == 1 for _, pts in fams[0].cells)


# ---------------------------------------------------------------------------
# fiber witnesses
# ---------------------------------------------------------------------------

def test_no_families_means_first_box_point_witnesses():
    res = find_fiber_witnesses([], [(0,), (4,)], [(t,) for t in range(-5, 6)])
    assert res.all_fibers_witnessed
    assert all(wit == (-5,) for _, wit in res.records)


def test_single_interval_family_always_missed_on_wide_box():
    family = spaced_interval_cover(6, 3)  # 5-bounded, 3-disjoint
    box = [(t,) for t in range(-5, 6)]
    res = find_fiber_witnesses([family], [(8 * i,) for i in range(100)], box)
    assert res.all_fibers_witnessed
    for _, wit in res.records:
        assert family.classify(wit) is None


def test_two_block_families_leave_a_witness_square():
    def blocks(offset):
        def classify(p):
            cells = []
            for c in p:
                j, rem = divmod(c - offset, 12)
                if rem > 6:
                    return None
                cells.append(j)
            return (0, tuple(cells))
        return CoverScheme(classify=classify, colors=1,
                           declared_separation={0: 3},
                           declared_bound={0: 6},
                           domain_note=f"2-D blocks at offset {offset}")

    box = [p for p in itertools.product(range(-6, 7), repeat=2)]
    res = find_fiber_witnesses([blocks(0), blocks(-6)],
                               [(i,) for i in range(100)], box)
    assert res.all_fibers_witnessed


def test_delta_table_concatenates_fiber_and_witness():
    family = spaced_interval_cover(6, 3)
    res = find_fiber_witnesses([family], [(0,), (4,)],
                               [(t,) for t in range(-5, 6)])
    table = res.delta_table()
    assert set(table) == {(0,), (4,)}
    assert all(len(v) == 2 and v[:1] == k for k, v in table.items())


# ---------------------------------------------------------------------------
# coarse controls
# ---------------------------------------------------------------------------

def test_identity_map_has_no_violations():
    spec = SpaceSpec.lattice((1,))
    report = check_coarse_control(lambda p: p, spec, spec,
                                  Window.make(box=((-20, 20),)))
    assert report.passed
    assert report.max_observed_stretch == 0


def test_phi_tower_isometry_control():
    phi = MapSpec.make("phi-tower", {"n": 3})
    spec = SpaceSpec.tower_with_factor("pow2", 1)
    report = check_coarse_control(phi, spec, lattice_max_distance,
                                  Window.make(levels=(1, 3), box=(-4, 4)))
    assert report.passed
    assert report.max_observed_stretch == 0


def test_violations_are_reported_with_distances():
    # doubling map against identity controls must violate the upper bound
    spec = SpaceSpec.lattice((1,))
    report = check_coarse_control(lambda p: (2 * p[0],), spec, spec,
                                  Window.make(box=((0, 10),)))
    assert not report.passed
    x, y, dx, dy = report.violations[0]
    assert dy == 2 * dx


def test_delta_witness_control_bounds():
    family = spaced_interval_cover(6, 3)
    fibers = [(5 * i,) for i in range(40)]
    box = [(t,) for t in range(-5, 6)]
    res = find_fiber_witnesses([family], fibers, box)
    delta = MapSpec.make("delta-witness", table=res.delta_table(),
                         lower=IDENTITY, upper=ControlFn("plus-const", 10))
    report = check_coarse_control(delta, SpaceSpec.lattice((5,)),
                                  lattice_max_distance, points=fibers)
    assert report.passed
    assert report.max_observed_stretch <= 10


# ---------------------------------------------------------------------------
# the exhaustive 1-D search
# ---------------------------------------------------------------------------

def test_oracle_window_too_wide_is_infeasible():
    out = oracle_1d_nocover(3, 5, 1, (-5, 5))
    assert out.status == "infeasible"
    assert out.assignment is None
    assert out.nodes_explored > 0


def test_oracle_narrow_window_is_feasible_single_cluster():
    out = oracle_1d_nocover(3, 5, 1, (-2, 2))
    assert out.status == "feasible"
    assert {g for _, _, g in out.assignment} == {0}


def test_oracle_two_colors_hand_cover():
    out = oracle_1d_nocover(3, 30, 2, (-30, 30))
    assert out.status == "feasible"
    scheme = assignment_scheme(out, 3, 30, 2)
    rep = verify_cover(scheme, SpaceSpec.lattice((1,)),
                       Window.make(box=((-30, 30),)))
    assert rep.passed
    assert rep.uncovered_total == 0


def test_oracle_feasible_assignments_reverify():
    for window in ((-2, 2), (0, 5), (-7, -3)):
        out = oracle_1d_nocover(2, 6, 1, window)
        assert out.status == "feasible"
        rep = verify_cover(assignment_scheme(out, 2, 6, 1),
                           SpaceSpec.lattice((1,)),
                           Window.make(box=(window,)))
        assert rep.passed and rep.uncovered_total == 0


def test_oracle_matches_exhaustive_partition_search_one_color():
    # independent oracle: try every way to cut the sorted window into
    # consecutive clusters and check the diameter/separation constraints
    def brute_feasible(n, R, lo, hi):
        pts = list(range(lo, hi + 1))
        cuts = len(pts) - 1

        def ok(groups):
            for g in groups:
                if g[-1] - g[0] > R:
                    return False
            for a, b in zip(groups, groups[1:]):
                if b[0] - a[-1] < n:
                    return False
            return True

        for mask in range(2 ** cuts):
            groups, start = [], 0
            for i in range(cuts):
                if mask >> i & 1:
                    groups.append(pts[start:i + 1])
                    start = i + 1
            groups.append(pts[start:])
            if ok(groups):
                return True
        return False

    for n, R, lo, hi in ((3, 5, -5, 5), (3, 5, -2, 2), (2, 4, 0, 8),
                         (2, 3, 0, 9), (4, 4, -4, 4), (1, 2, 0, 7)):
        expected = brute_feasible(n, R, lo, hi)
        got = oracle_1d_nocover(n, R, 1, (lo, hi)).status
        assert got == ("feasible" if expected else "infeasible")


def test_oracle_budget_yields_inconclusive():
    out = oracle_1d_nocover(3, 5, 2, (-12, 12), node_budget=5)
    assert out.status == "inconclusive"


def test_oracle_rejects_unsupported_color_counts():
    with pytest.raises(VerifyError):
        oracle_1d_nocover(3, 5, 3, (-2, 2))


def test_engine_matches_brute_on_random_block_schemes():
    # random deterministic block colorings over 2-D windows: the pruned
    # engine must agree with unpruned all-pairs measurement everywhere
    import random as _random
    rng = _random.Random(2024)
    spec = SpaceSpec.lattice((1, 1))
    for trial in range(12):
        width = rng.randint(2, 6)
        colors = rng.randint(1, 4)
        salt = rng.randint(0, 10 ** 6)

        def classify(p, width=width, colors=colors, salt=salt):
            bx, by = p[0] // width, p[1] // width
            color = (bx * 7_919 + by * 104_729 + salt) % colors
            return (color, (bx, by))

        scheme = CoverScheme(
            classify=classify, colors=colors,
            declared_separation={c: 1 for c in range(colors)},
            declared_bound={c: 2 * width for c in range(colors)},
            domain_note="random block coloring",
        )
        half = rng.randint(6, 14)
        w = Window.make(box=(-half, half))
        assert_engine_matches_brute(scheme, spec, w)


def test_run_path_matches_pointwise_on_random_staircases():
    import random as _random
    rng = _random.Random(77)
    for trial in range(6):
        n = rng.randint(1, 2)
        r = n + rng.randint(1, 2)
        dim = rng.randint(1, 2)
        scheme = staircase_cover(n, r, dim=dim, height_interval=(0, 0))
        spec = SpaceSpec.lattice((2 ** n,) * dim + (1, 1))
        half = 2 ** r * rng.randint(1, 3)
        t_half = rng.randint(40, 200)
        axis_boxes = {j: (-half, half) for j in range(dim)}
        axis_boxes[dim] = (-t_half, t_half)
        axis_boxes[dim + 1] = (0, 0)
        w = Window.make(axis_boxes=axis_boxes)
        a = verify_cover(scheme, spec, w, mode="pointwise")
        b = verify_cover(scheme, spec, w, mode="runs")
        for ra, rb in zip(a.per_color, b.per_color):
            assert ra.cells_seen == rb.cells_seen
            assert ra.max_diameter == rb.max_diameter
            assert (ra.min_cross_cell_separation
                    == rb.min_cross_cell_separation)


def test_oracle_outcome_round_trips_through_json():
    import json as _json
    from coarselab.verify import OracleOutcome
    out = oracle_1d_nocover(2, 6, 1, (0, 5))
    reloaded = OracleOutcome.from_json(_json.loads(_json.dumps(out.to_json())))
    assert reloaded.status == out.status
    assert reloaded.assignment == out.assignment
    rep = verify_cover(assignment_scheme(reloaded, 2, 6, 1),
                       SpaceSpec.lattice((1,)), Window.make(box=((0, 5),)))
    assert rep.passed
