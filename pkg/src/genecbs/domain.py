"""Planning domains: successor generation, heuristics, and collision geometry.

Two implementations share one interface: a 2D grid with point robots (the
fast oracle domain) and a planar N-link arm domain where each link is a
segment inflated to a capsule of radius ``thickness``. All collision
predicates are closed (<= thresholds) so tangency behaves deterministically.
Domains are immutable after construction; the internal memo caches only store
results of pure queries.
"""

from __future__ import annotations

import math
from abc import ABC, abstractmethod
from dataclasses import dataclass
from typing import Dict, List, Optional, Sequence, Tuple

from .core import Configuration

Point = Tuple[float, float]
Segment = Tuple[Point, Point]

# Fixed successor ordering keeps every search deterministic.
GRID_MOVES = ((1, 0), (-1, 0), (0, 1), (0, -1))


class Domain(ABC):
    """Shared interface over planning domains.

    Implementations provide per-agent successor sets, an admissible and
    consistent heuristic under unit-cost primitives, and pairwise collision
    queries returning workspace points.
    """

    n_agents: int
    starts: Tuple[Configuration, ...]
    goals: Tuple[Configuration, ...]
    substeps: int

    @abstractmethod
    def dimension(self, agent: int) -> int: ...

    @abstractmethod
    def in_bounds(self, agent: int, q: Configuration) -> bool: ...

    @abstractmethod
    def is_static_free(self, agent: int, q: Configuration) -> bool: ...

    @abstractmethod
    def successors(self, agent: int, q: Configuration) -> List[Tuple[Configuration, float]]: ...

    @abstractmethod
    def heuristic(self, agent: int, q: Configuration, goal: Configuration) -> float: ...

    @abstractmethod
    def agents_collide(self, i: int, q_i: Configuration, j: int, q_j: Configuration) -> Optional[Point]: ...

    @abstractmethod
    def edge_collides(
        self,
        i: int,
        q_i: Configuration,
        q_i2: Configuration,
        j: int,
        q_j: Configuration,
        q_j2: Configuration,
        substeps: Optional[int] = None,
    ) -> Optional[Tuple[Point, float]]: ...

    @abstractmethod
    def occupancy_intersects_circle(
        self, agent: int, q: Configuration, center: Point, radius: float
    ) -> bool: ...

    @abstractmethod
    def edge_intersects_circle(
        self,
        agent: int,
        q: Configuration,
        q2: Configuration,
        center: Point,
        radius: float,
        substeps: Optional[int] = None,
    ) -> bool: ...

    @abstractmethod
    def state_slack(self, agent: int) -> int:
        """Upper bound on any shortest constraint-free path length, used to
        cap low-level horizons."""

    def transition_cost(self, agent: int, a: Configuration, b: Configuration) -> float:
        return 1.0

    def transition_valid(self, agent: int, a: Configuration, b: Configuration) -> bool:
        """b must be a (wait or primitive) successor of a."""
        if not (self.in_bounds(agent, a) and self.is_static_free(agent, a)):
            return False
        return any(b == succ for succ, _ in self.successors(agent, a))

    def validate_instance(self) -> None:
        """Check starts/goals: dimensionality, bounds, static freedom, and
        mutual conflict freedom. Raises ValueError on the first failure."""
        for agent in range(self.n_agents):
            for label, q in (("start", self.starts[agent]), ("goal", self.goals[agent])):
                if len(q) != self.dimension(agent):
                    raise ValueError(f"agent {agent} {label} has wrong dimensionality")
                if not self.in_bounds(agent, q):
                    raise ValueError(f"agent {agent} {label} out of bounds: {q.coords}")
                if not self.is_static_free(agent, q):
                    raise ValueError(f"agent {agent} {label} collides with static obstacles")
        for i in range(self.n_agents):
            for j in range(i + 1, self.n_agents):
                if self.agents_collide(i, self.starts[i], j, self.starts[j]) is not None:
                    raise ValueError(f"starts of agents {i} and {j} are in conflict")
                if self.agents_collide(i, self.goals[i], j, self.goals[j]) is not None:
                    raise ValueError(f"goals of agents {i} and {j} are in conflict")


class GridDomain(Domain):
    """Unit-cell grid with point robots; cell (x, y) has workspace center
    (x + 0.5, y + 0.5)."""

    def __init__(
        self,
        width: int,
        height: int,
        blocked: Sequence[Tuple[int, int]],
        starts: Sequence[Configuration],
        goals: Sequence[Configuration],
        substeps: int = 4,
    ):
        self.width = width
        self.height = height
        self.blocked = frozenset((int(x), int(y)) for x, y in blocked)
        self.starts = tuple(starts)
        self.goals = tuple(goals)
        self.n_agents = len(self.starts)
        self.substeps = substeps
        if len(self.goals) != self.n_agents:
            raise ValueError("starts and goals must have the same length")

    def dimension(self, agent: int) -> int:
        return 2

    def in_bounds(self, agent: int, q: Configuration) -> bool:
        x, y = q.coords
        return 0 <= x < self.width and 0 <= y < self.height

    def is_static_free(self, agent: int, q: Configuration) -> bool:
        return (q.coords[0], q.coords[1]) not in self.blocked

    def successors(self, agent: int, q: Configuration) -> List[Tuple[Configuration, float]]:
        x, y = q.coords
        out = []
        for dx, dy in GRID_MOVES:
            nx, ny = x + dx, y + dy
            if 0 <= nx < self.width and 0 <= ny < self.height and (nx, ny) not in self.blocked:
                out.append((Configuration((nx, ny)), 1.0))
        out.append((q, 1.0))  # wait
        return out

    def heuristic(self, agent: int, q: Configuration, goal: Configuration) -> float:
        return float(abs(q.coords[0] - goal.coords[0]) + abs(q.coords[1] - goal.coords[1]))

    def cell_center(self, q: Configuration) -> Point:
        return (q.coords[0] + 0.5, q.coords[1] + 0.5)

    def agents_collide(self, i, q_i, j, q_j) -> Optional[Point]:
        if q_i.coords == q_j.coords:
            return self.cell_center(q_i)
        return None

    def edge_collides(self, i, q_i, q_i2, j, q_j, q_j2, substeps=None):
        # Point robots on a grid only conflict mid-transition on a swap.
        if q_i2.coords == q_j.coords and q_j2.coords == q_i.coords and q_i.coords != q_j.coords:
            a = self.cell_center(q_i)
            b = self.cell_center(q_j)
            return ((a[0] + b[0]) / 2.0, (a[1] + b[1]) / 2.0), 0.5
        return None

    def occupancy_intersects_circle(self, agent, q, center, radius) -> bool:
        cx, cy = self.cell_center(q)
        return math.hypot(cx - center[0], cy - center[1]) <= radius

    def edge_intersects_circle(self, agent, q, q2, center, radius, substeps=None) -> bool:
        m = self.substeps if substeps is None else substeps
        ax, ay = self.cell_center(q)
        bx, by = self.cell_center(q2)
        for k in range(m + 1):
            s = k / m
            x = ax + (bx - ax) * s
            y = ay + (by - ay) * s
            if math.hypot(x - center[0], y - center[1]) <= radius:
                return True
        return False

    def state_slack(self, agent: int) -> int:
        return self.width * self.height

    def to_obj(self) -> dict:
        return {
            "type": "grid",
            "width": self.width,
            "height": self.height,
            "blocked": sorted([list(c) for c in self.blocked]),
            "substeps": self.substeps,
        }


@dataclass(frozen=True)
class ArmSpec:
    """Geometry of one planar arm: base position, link lengths, inclusive
    per-joint index ranges, and capsule thickness."""

    base: Point
    link_lengths: Tuple[float, ...]
    joint_limits: Tuple[Tuple[int, int], ...]
    thickness: float

    @property
    def reach(self) -> float:
        return sum(self.link_lengths)


def _seg_point_dist(seg: Segment, p: Point) -> float:
    (ax, ay), (bx, by) = seg
    px, py = p
    dx, dy = bx - ax, by - ay
    ln2 = dx * dx + dy * dy
    if ln2 <= 0.0:
        return math.hypot(px - ax, py - ay)
    t = ((px - ax) * dx + (py - ay) * dy) / ln2
    t = max(0.0, min(1.0, t))
    return math.hypot(px - (ax + t * dx), py - (ay + t * dy))


def _seg_seg_closest(s1: Segment, s2: Segment) -> Tuple[float, Point, Point]:
    """Distance between two segments and the closest point pair."""
    (p1x, p1y), (q1x, q1y) = s1
    (p2x, p2y), (q2x, q2y) = s2
    d1x, d1y = q1x - p1x, q1y - p1y
    d2x, d2y = q2x - p2x, q2y - p2y
    rx, ry = p1x - p2x, p1y - p2y
    a = d1x * d1x + d1y * d1y
    e = d2x * d2x + d2y * d2y
    f = d2x * rx + d2y * ry
    eps = 1e-12
    if a <= eps and e <= eps:
        s = t = 0.0
    elif a <= eps:
        s = 0.0
        t = max(0.0, min(1.0, f / e))
    else:
        c = d1x * rx + d1y * ry
        if e <= eps:
            t = 0.0
            s = max(0.0, min(1.0, -c / a))
        else:
            b = d1x * d2x + d1y * d2y
            denom = a * e - b * b
            s = max(0.0, min(1.0, (b * f - c * e) / denom)) if denom > eps else 0.0
            t = (b * s + f) / e
            if t < 0.0:
                t = 0.0
                s = max(0.0, min(1.0, -c / a))
            elif t > 1.0:
                t = 1.0
                s = max(0.0, min(1.0, (b - c) / a))
    c1 = (p1x + d1x * s, p1y + d1y * s)
    c2 = (p2x + d2x * t, p2y + d2y * t)
    return math.hypot(c1[0] - c2[0], c1[1] - c2[1]), c1, c2


class PlanarArmDomain(Domain):
    """Planar kinematic chains sharing a workspace.

    Joint angles are absolute-cumulative: link k points at the sum of the
    first k joint angles, each angle being index * delta radians. The
    occupancy of a configuration is the union of its link capsules. Static
    obstacles are circles; successor generation filters configurations that
    touch any of them.
    """

    def __init__(
        self,
        arms: Sequence[ArmSpec],
        obstacles: Sequence[Tuple[Point, float]],
        delta: float,
        starts: Sequence[Configuration],
        goals: Sequence[Configuration],
        substeps: int = 4,
    ):
        if delta <= 0:
            raise ValueError("delta must be positive")
        self.arms = tuple(arms)
        self.obstacles = tuple(((float(c[0]), float(c[1])), float(r)) for c, r in obstacles)
        self.delta = float(delta)
        self.starts = tuple(starts)
        self.goals = tuple(goals)
        self.n_agents = len(self.arms)
        self.substeps = substeps
        if not (len(self.starts) == len(self.goals) == self.n_agents):
            raise ValueError("arms, starts, and goals must have the same length")
        self._fk_cache: Dict[Tuple[int, Tuple[float, ...]], Tuple[Segment, ...]] = {}
        self._bbox_cache: Dict[Tuple[int, Tuple[float, ...]], Tuple[float, float, float, float]] = {}
        self._static_cache: Dict[Tuple[int, Tuple[int, ...]], bool] = {}
        self._succ_cache: Dict[Tuple[int, Tuple[int, ...]], List[Tuple[Configuration, float]]] = {}
        self._pair_cache: Dict[tuple, Optional[Point]] = {}
        self._edge_cache: Dict[tuple, Optional[Tuple[Point, float]]] = {}

    def dimension(self, agent: int) -> int:
        return len(self.arms[agent].link_lengths)

    def in_bounds(self, agent: int, q: Configuration) -> bool:
        limits = self.arms[agent].joint_limits
        if len(q.coords) != len(limits):
            return False
        return all(lo <= c <= hi for c, (lo, hi) in zip(q.coords, limits))

    def fk_segments(self, agent: int, coords: Sequence[float]) -> Tuple[Segment, ...]:
        """Link segments of the arm at (possibly fractional) joint indices."""
        key = (agent, tuple(coords))
        hit = self._fk_cache.get(key)
        if hit is not None:
            return hit
        arm = self.arms[agent]
        x, y = arm.base
        theta = 0.0
        segs = []
        for length, c in zip(arm.link_lengths, coords):
            theta += c * self.delta
            nx = x + length * math.cos(theta)
            ny = y + length * math.sin(theta)
            segs.append(((x, y), (nx, ny)))
            x, y = nx, ny
        out = tuple(segs)
        if len(self._fk_cache) < 400_000:
            self._fk_cache[key] = out
        return out

    def _static_free_coords(self, agent: int, coords: Sequence[float]) -> bool:
        eps = self.arms[agent].thickness
        for seg in self.fk_segments(agent, coords):
            for center, radius in self.obstacles:
                if _seg_point_dist(seg, center) <= eps + radius:
                    return False
        return True

    def is_static_free(self, agent: int, q: Configuration) -> bool:
        key = (agent, q.coords)
        hit = self._static_cache.get(key)
        if hit is None:
            hit = self._static_free_coords(agent, q.coords)
            self._static_cache[key] = hit
        return hit

    def successors(self, agent: int, q: Configuration) -> List[Tuple[Configuration, float]]:
        key = (agent, q.coords)
        hit = self._succ_cache.get(key)
        if hit is not None:
            return hit
        limits = self.arms[agent].joint_limits
        out = []
        for j in range(len(q.coords)):
            for dj in (1, -1):
                c = q.coords[j] + dj
                if limits[j][0] <= c <= limits[j][1]:
                    cfg = Configuration(q.coords[:j] + (c,) + q.coords[j + 1 :])
                    if self.is_static_free(agent, cfg):
                        out.append((cfg, 1.0))
        out.append((q, 1.0))  # wait
        self._succ_cache[key] = out
        return out

    def heuristic(self, agent: int, q: Configuration, goal: Configuration) -> float:
        return float(sum(abs(a - b) for a, b in zip(q.coords, goal.coords)))

    def _bbox(self, agent: int, coords: Tuple[float, ...]) -> Tuple[float, float, float, float]:
        key = (agent, coords)
        hit = self._bbox_cache.get(key)
        if hit is not None:
            return hit
        segs = self.fk_segments(agent, coords)
        xs = [p[0] for seg in segs for p in seg]
        ys = [p[1] for seg in segs for p in seg]
        out = (min(xs), min(ys), max(xs), max(ys))
        if len(self._bbox_cache) < 400_000:
            self._bbox_cache[key] = out
        return out

    def _pair_in_reach(self, i: int, j: int) -> bool:
        bi, bj = self.arms[i].base, self.arms[j].base
        limit = (
            self.arms[i].reach + self.arms[j].reach
            + self.arms[i].thickness + self.arms[j].thickness
        )
        return math.hypot(bi[0] - bj[0], bi[1] - bj[1]) <= limit

    def _collide_coords(
        self, i: int, coords_i: Tuple[float, ...], j: int, coords_j: Tuple[float, ...]
    ) -> Optional[Point]:
        threshold = self.arms[i].thickness + self.arms[j].thickness
        ax0, ay0, ax1, ay1 = self._bbox(i, coords_i)
        bx0, by0, bx1, by1 = self._bbox(j, coords_j)
        if (
            ax0 - threshold > bx1
            or bx0 - threshold > ax1
            or ay0 - threshold > by1
            or by0 - threshold > ay1
        ):
            return None
        for si in self.fk_segments(i, coords_i):
            for sj in self.fk_segments(j, coords_j):
                dist, c1, c2 = _seg_seg_closest(si, sj)
                if dist <= threshold:
                    return ((c1[0] + c2[0]) / 2.0, (c1[1] + c2[1]) / 2.0)
        return None

    def agents_collide(self, i, q_i, j, q_j) -> Optional[Point]:
        if i > j:
            i, j, q_i, q_j = j, i, q_j, q_i
        if not self._pair_in_reach(i, j):
            return None
        key = (i, q_i.coords, j, q_j.coords)
        if key in self._pair_cache:
            return self._pair_cache[key]
        out = self._collide_coords(i, q_i.coords, j, q_j.coords)
        if len(self._pair_cache) < 1_000_000:
            self._pair_cache[key] = out
        return out

    def edge_collides(self, i, q_i, q_i2, j, q_j, q_j2, substeps=None):
        if i > j:
            i, j, q_i, q_j, q_i2, q_j2 = j, i, q_j, q_i, q_j2, q_i2
        if not self._pair_in_reach(i, j):
            return None
        m = self.substeps if substeps is None else substeps
        key = (i, q_i.coords, q_i2.coords, j, q_j.coords, q_j2.coords, m)
        if key in self._edge_cache:
            return self._edge_cache[key]
        a_i, b_i = q_i.coords, q_i2.coords
        a_j, b_j = q_j.coords, q_j2.coords
        out = None
        for k in range(m + 1):
            s = k / m
            ci = tuple(a + (b - a) * s for a, b in zip(a_i, b_i))
            cj = tuple(a + (b - a) * s for a, b in zip(a_j, b_j))
            point = self._collide_coords(i, ci, j, cj)
            if point is not None:
                out = (point, s)
                break
        if len(self._edge_cache) < 1_000_000:
            self._edge_cache[key] = out
        return out

    def occupancy_intersects_circle(self, agent, q, center, radius) -> bool:
        eps = self.arms[agent].thickness
        return any(
            _seg_point_dist(seg, center) <= eps + radius
            for seg in self.fk_segments(agent, q.coords)
        )

    def edge_intersects_circle(self, agent, q, q2, center, radius, substeps=None) -> bool:
        m = self.substeps if substeps is None else substeps
        eps = self.arms[agent].thickness
        a, b = q.coords, q2.coords
        for k in range(m + 1):
            s = k / m
            coords = tuple(x + (y - x) * s for x, y in zip(a, b))
            if any(
                _seg_point_dist(seg, center) <= eps + radius
                for seg in self.fk_segments(agent, coords)
            ):
                return True
        return False

    def state_slack(self, agent: int) -> int:
        return 2 * sum(hi - lo for lo, hi in self.arms[agent].joint_limits) + 2

    def to_obj(self) -> dict:
        return {
            "type": "planar_arm",
            "delta": self.delta,
            "substeps": self.substeps,
            "obstacles": [{"center": list(c), "radius": r} for c, r in self.obstacles],
            "arms": [
                {
                    "base": list(a.base),
                    "link_lengths": list(a.link_lengths),
                    "joint_limits": [list(l) for l in a.joint_limits],
                    "thickness": a.thickness,
                }
                for a in self.arms
            ],
        }


def domain_from_obj(obj: dict, starts: Sequence[Configuration], goals: Sequence[Configuration]) -> Domain:
    kind = obj.get("type")
    if kind == "grid":
        allowed = {"type", "width", "height", "blocked", "substeps"}
        unknown = set(obj) - allowed
        if unknown:
            raise ValueError(f"unknown grid domain fields: {sorted(unknown)}")
        return GridDomain(
            width=int(obj["width"]),
            height=int(obj["height"]),
            blocked=[tuple(c) for c in obj.get("blocked", [])],
            starts=starts,
            goals=goals,
            substeps=int(obj.get("substeps", 4)),
        )
    if kind == "planar_arm":
        allowed = {"type", "delta", "substeps", "obstacles", "arms"}
        unknown = set(obj) - allowed
        if unknown:
            raise ValueError(f"unknown planar_arm domain fields: {sorted(unknown)}")
        arms = [
            ArmSpec(
                base=(float(a["base"][0]), float(a["base"][1])),
                link_lengths=tuple(float(x) for x in a["link_lengths"]),
                joint_limits=tuple((int(lo), int(hi)) for lo, hi in a["joint_limits"]),
                thickness=float(a["thickness"]),
            )
            for a in obj["arms"]
        ]
        obstacles = [
            ((float(o["center"][0]), float(o["center"][1])), float(o["radius"]))
            for o in obj.get("obstacles", [])
        ]
        return PlanarArmDomain(
            arms=arms,
            obstacles=obstacles,
            delta=float(obj["delta"]),
            starts=starts,
            goals=goals,
            substeps=int(obj.get("substeps", 4)),
        )
    raise ValueError(f"unknown domain type: {kind!r}")
