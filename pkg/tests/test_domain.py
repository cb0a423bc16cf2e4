import math

import pytest

from genecbs.core import Configuration
from genecbs.domain import ArmSpec, GridDomain, PlanarArmDomain, _seg_seg_closest

from oracles import bfs_distances

DELTA = math.radians(15.0)


def C(*coords):
    return Configuration(tuple(coords))


def make_grid(blocked=(), starts=((0, 0), (4, 4)), goals=((4, 0), (0, 4))):
    return GridDomain(
        6, 6, blocked,
        [C(*s) for s in starts],
        [C(*g) for g in goals],
    )


def make_arms(
    bases=((0.0, 0.0), (3.0, 0.0)),
    links=((1.0, 1.0), (1.0, 1.0)),
    limits=(((-6, 6), (-6, 6)), ((6, 18), (-6, 6))),
    thickness=0.1,
    obstacles=(),
    starts=None,
    goals=None,
):
    arms = [
        ArmSpec(base=b, link_lengths=tuple(l), joint_limits=tuple(jl), thickness=thickness)
        for b, l, jl in zip(bases, links, limits)
    ]
    starts = starts or [C(lims[0][0], lims[1][0]) for lims in limits]
    goals = goals or starts
    return PlanarArmDomain(arms, obstacles, DELTA, starts, goals)


class TestGridSuccessors:
    def test_interior_cell_has_five_successors(self):
        d = make_grid()
        succ = d.successors(0, C(2, 2))
        assert len(succ) == 5
        assert (C(2, 2), 1.0) in succ  # wait

    def test_corner_cell(self):
        d = make_grid()
        assert len(d.successors(0, C(0, 0))) == 3

    def test_blocked_neighbors_filtered(self):
        d = make_grid(blocked=[(2, 3), (3, 2)])
        succ = [q.coords for q, _ in d.successors(0, C(2, 2))]
        assert (2, 3) not in succ and (3, 2) not in succ
        assert len(succ) == 3


class TestArmSuccessors:
    def test_both_joints_at_limit_maxima(self):
        d = make_arms()
        q = C(6, 6)
        succ = d.successors(0, q)
        coords = [s.coords for s, _ in succ]
        assert coords == [(5, 6), (6, 5), (6, 6)]

    def test_obstacle_blocks_one_primitive(self):
        # Arm along +x at (0,0)->(1,0)->(2,0); a small circle sits just above
        # the elbow where only the +1 move of joint 2 sweeps into it.
        tip_up = (1.0 + math.cos(DELTA), math.sin(DELTA))
        d = make_arms(obstacles=[((tip_up[0], tip_up[1]), 0.05)])
        succ = [s.coords for s, _ in d.successors(0, C(0, 0))]
        assert (0, 1) not in succ  # raising the second joint hits the circle
        assert (0, -1) in succ and (1, 0) in succ and (-1, 0) in succ and (0, 0) in succ


class TestHeuristic:
    def test_zero_at_goal(self):
        d = make_grid()
        assert d.heuristic(0, C(3, 3), C(3, 3)) == 0.0

    def test_manhattan(self):
        d = make_grid()
        assert d.heuristic(0, C(0, 0), C(2, 3)) == 5.0

    def test_arm_l1_over_indices(self):
        d = make_arms()
        assert d.heuristic(0, C(2, 5), C(4, 4)) == 3.0

    def test_admissible_and_consistent_on_grid(self):
        d = make_grid(blocked=[(1, 1), (2, 3), (4, 2)])
        goal = (5, 5)
        dist = bfs_distances(d, goal)
        for (x, y), true_cost in dist.items():
            h = d.heuristic(0, C(x, y), C(*goal))
            assert h <= true_cost
        for (x, y), true_cost in dist.items():
            for q2, cost in d.successors(0, C(x, y)):
                if q2.coords in dist:
                    assert d.heuristic(0, C(x, y), C(*goal)) <= cost + d.heuristic(0, q2, C(*goal))


class TestAgentsCollide:
    def test_grid_same_cell_center_convention(self):
        d = make_grid()
        assert d.agents_collide(0, C(3, 3), 1, C(3, 3)) == (3.5, 3.5)
        assert d.agents_collide(0, C(3, 3), 1, C(3, 4)) is None

    def test_disjoint_workspaces(self):
        d = make_arms(bases=((0.0, 0.0), (10.0, 0.0)))
        assert d.agents_collide(0, C(0, 0), 1, C(12, 0)) is None

    def test_crossing_one_link_arms_hit_analytic_intersection(self):
        # Two single-link arms whose segments cross: (0,0)->(2,0) at 0 deg and
        # (1,-1)->(1,1) at 90 deg intersect at exactly (1, 0).
        arms = [
            ArmSpec(base=(0.0, 0.0), link_lengths=(2.0,), joint_limits=((-6, 6),), thickness=0.1),
            ArmSpec(base=(1.0, -1.0), link_lengths=(2.0,), joint_limits=((0, 12),), thickness=0.1),
        ]
        d = PlanarArmDomain(arms, [], DELTA, [C(0), C(0)], [C(0), C(0)])
        point = d.agents_collide(0, C(0), 1, C(6))  # 6 * 15 deg = 90 deg
        assert point is not None
        assert math.hypot(point[0] - 1.0, point[1] - 0.0) <= 0.1

    def test_symmetry(self):
        d = make_arms()
        for qa, qb in [(C(0, 0), C(12, 0)), (C(6, -3), C(9, 2)), (C(3, 3), C(15, -4))]:
            hit_ab = d.agents_collide(0, qa, 1, qb) is not None
            hit_ba = d.agents_collide(1, qb, 0, qa) is not None
            assert hit_ab == hit_ba


class TestEdgeCollides:
    def test_grid_swap_conflict_at_midpoint(self):
        d = make_grid()
        hit = d.edge_collides(0, C(2, 2), C(3, 2), 1, C(3, 2), C(2, 2))
        assert hit is not None
        point, s = hit
        assert point == (3.0, 2.5) and s == 0.5

    def test_grid_non_swap_is_clear(self):
        d = make_grid()
        assert d.edge_collides(0, C(2, 2), C(3, 2), 1, C(3, 3), C(3, 2)) is None

    def test_both_waiting_disjoint(self):
        d = make_arms()
        # Arm 0 vertical at the origin, arm 1 folded back along the x axis.
        assert d.agents_collide(0, C(6, 0), 1, C(12, 0)) is None
        assert d.edge_collides(0, C(6, 0), C(6, 0), 1, C(12, 0), C(12, 0)) is None

    def test_mid_transition_crossing_detected(self):
        # One-link arms sweeping through each other: endpoints are clear but
        # the segments cross mid-rotation.
        arms = [
            ArmSpec(base=(0.0, 0.0), link_lengths=(2.0,), joint_limits=((-12, 12),), thickness=0.05),
            ArmSpec(base=(2.5, 0.0), link_lengths=(2.0,), joint_limits=((0, 24),), thickness=0.05),
        ]
        d = PlanarArmDomain(arms, [], DELTA, [C(0), C(12)], [C(0), C(12)], substeps=4)
        # agent 0 swings -60deg..+60deg while agent 1 swings 240deg..120deg;
        # at s = 0.5 both lie flat on the x axis and overlap.
        start_clear = d.agents_collide(0, C(-4), 1, C(16)) is None
        end_clear = d.agents_collide(0, C(4), 1, C(8)) is None
        assert start_clear and end_clear
        hit = d.edge_collides(0, C(-4), C(4), 1, C(16), C(8))
        assert hit is not None
        point, s = hit
        assert 0.0 < s < 1.0

    def test_refinement_monotonicity(self):
        arms = [
            ArmSpec(base=(0.0, 0.0), link_lengths=(2.0,), joint_limits=((-12, 12),), thickness=0.05),
            ArmSpec(base=(2.5, 0.0), link_lengths=(2.0,), joint_limits=((0, 24),), thickness=0.05),
        ]
        d = PlanarArmDomain(arms, [], DELTA, [C(0), C(12)], [C(0), C(12)])
        cases = [
            (C(-2), C(2), C(14), C(10)),
            (C(-4), C(4), C(16), C(8)),
            (C(0), C(1), C(12), C(11)),
            (C(-12), C(-8), C(20), C(24)),
        ]
        for qa, qa2, qb, qb2 in cases:
            for m in (2, 4, 8):
                if d.edge_collides(0, qa, qa2, 1, qb, qb2, substeps=m) is not None:
                    assert d.edge_collides(0, qa, qa2, 1, qb, qb2, substeps=2 * m) is not None


class TestCircleIntersection:
    def test_radius_zero_point_on_link(self):
        d = make_arms()
        # Arm 0 at zero configuration lies along +x from (0,0) to (2,0).
        assert d.occupancy_intersects_circle(0, C(0, 0), (1.0, 0.0), 0.0)

    def test_unreachable_center(self):
        d = make_arms()
        assert not d.occupancy_intersects_circle(0, C(0, 0), (5.0, 0.0), 0.5)

    def test_tangency_is_closed(self):
        d = make_arms(thickness=0.1)
        # Center exactly thickness + radius above the first link.
        assert d.occupancy_intersects_circle(0, C(0, 0), (0.5, 0.35), 0.25)
        assert not d.occupancy_intersects_circle(0, C(0, 0), (0.5, 0.35 + 1e-9), 0.25)

    def test_grid_cell_center_rule(self):
        d = make_grid()
        assert d.occupancy_intersects_circle(0, C(2, 2), (2.5, 2.5), 0.0)
        assert d.occupancy_intersects_circle(0, C(2, 2), (3.5, 2.5), 1.0)
        assert not d.occupancy_intersects_circle(0, C(2, 2), (3.5, 2.5), 0.999)


class TestForwardKinematics:
    def test_total_reach(self):
        d = make_arms(links=((1.5, 0.75), (1.0, 1.0)))
        assert d.arms[0].reach == 2.25

    def test_zero_configuration_layout(self):
        d = make_arms()
        segs = d.fk_segments(0, (0, 0))
        assert segs[0] == ((0.0, 0.0), (1.0, 0.0))
        assert segs[1][1] == pytest.approx((2.0, 0.0))

    def test_cumulative_angles(self):
        d = make_arms()
        segs = d.fk_segments(0, (6, 6))  # 90 deg then +90 deg
        assert segs[0][1] == pytest.approx((0.0, 1.0))
        assert segs[1][1] == pytest.approx((-1.0, 1.0))


class TestValidation:
    def test_start_goal_conflicts_rejected(self):
        d = GridDomain(4, 4, [], [C(0, 0), C(0, 0)], [C(1, 1), C(2, 2)])
        with pytest.raises(ValueError):
            d.validate_instance()

    def test_blocked_start_rejected(self):
        d = GridDomain(4, 4, [(0, 0)], [C(0, 0)], [C(1, 1)])
        with pytest.raises(ValueError):
            d.validate_instance()

    def test_out_of_bounds_goal_rejected(self):
        d = GridDomain(4, 4, [], [C(0, 0)], [C(4, 4)])
        with pytest.raises(ValueError):
            d.validate_instance()


class TestSegmentGeometry:
    def test_parallel_segments(self):
        dist, p1, p2 = _seg_seg_closest(((0, 0), (1, 0)), ((0, 1), (1, 1)))
        assert dist == pytest.approx(1.0)

    def test_crossing_segments_distance_zero(self):
        dist, p1, p2 = _seg_seg_closest(((0, -1), (0, 1)), ((-1, 0), (1, 0)))
        assert dist == pytest.approx(0.0)
        assert p1 == pytest.approx((0.0, 0.0)) and p2 == pytest.approx((0.0, 0.0))

    def test_degenerate_point_segment(self):
        dist, _, _ = _seg_seg_closest(((2, 2), (2, 2)), ((0, 0), (4, 0)))
        assert dist == pytest.approx(2.0)
