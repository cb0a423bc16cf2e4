"""Constraint factory: one conflict in, one symmetric constraint pair out per
enabled constraint type, plus a sampling utility that probes whether a pair
of constraints is mutually disjunctive (no conflict-free configuration pair
violates both).

The complete (vertex/edge) type is always present: branching on it is what
preserves completeness of the tree search, so a menu cannot drop it. Every
incomplete entry adds one more candidate pair, giving 2K + 2 children per
expansion for K incomplete types.
"""

from __future__ import annotations

import itertools
import random
from dataclasses import dataclass, field
from typing import List, Optional, Tuple

from .core import (
    CT_AVOIDANCE,
    CT_EDGE,
    CT_PRIORITY,
    CT_SPHERE,
    CT_STEP_PRIORITY,
    CT_VERTEX,
    EDGE,
    VERTEX,
    Configuration,
    Conflict,
    Constraint,
)
from .domain import Domain, GridDomain

COMPLETE = "complete"
INCOMPLETE_KINDS = (CT_SPHERE, CT_AVOIDANCE, CT_STEP_PRIORITY, CT_PRIORITY)


@dataclass(frozen=True)
class MenuEntry:
    kind: str  # "complete" or one of INCOMPLETE_KINDS
    radius: Optional[float] = None  # spheres only

    @property
    def key(self) -> str:
        if self.kind == CT_SPHERE:
            return f"sphere:{self.radius:g}"
        return self.kind

    def to_obj(self) -> dict:
        obj = {"type": self.kind}
        if self.radius is not None:
            obj["radius"] = self.radius
        return obj

    @staticmethod
    def from_obj(obj: dict) -> "MenuEntry":
        allowed = {"type", "radius"}
        unknown = set(obj) - allowed
        if unknown:
            raise ValueError(f"unknown menu entry fields: {sorted(unknown)}")
        kind = obj["type"]
        if kind == CT_SPHERE:
            return MenuEntry(kind=kind, radius=float(obj["radius"]))
        if "radius" in obj:
            raise ValueError(f"radius only applies to sphere entries, not {kind!r}")
        return MenuEntry(kind=kind)


@dataclass(frozen=True)
class ConstraintMenu:
    """Ordered set of enabled constraint types.

    `allow_incomplete_only` exists solely for the substitution ablation mode
    (a single incomplete type replacing the complete pair); regular solvers
    must never set it.
    """

    enabled: Tuple[MenuEntry, ...]
    allow_incomplete_only: bool = False

    def __post_init__(self):
        keys = [e.key for e in self.enabled]
        if len(set(keys)) != len(keys):
            raise ValueError(f"duplicate menu entries: {keys}")
        for e in self.enabled:
            if e.kind == CT_SPHERE and (e.radius is None or e.radius <= 0):
                raise ValueError("sphere radii must be strictly positive")
            if e.kind not in (COMPLETE,) + INCOMPLETE_KINDS:
                raise ValueError(f"unknown constraint type: {e.kind!r}")
        if not self.allow_incomplete_only:
            if COMPLETE not in keys:
                raise ValueError("the complete constraint type cannot be disabled")
            if keys[0] != COMPLETE:
                raise ValueError("the complete entry must come first")

    @property
    def k_incomplete(self) -> int:
        return sum(1 for e in self.enabled if e.kind != COMPLETE)

    @property
    def branching(self) -> int:
        """Children per expansion: 2 per entry."""
        return 2 * len(self.enabled)

    @property
    def keys(self) -> Tuple[str, ...]:
        return tuple(e.key for e in self.enabled)

    @staticmethod
    def complete_only() -> "ConstraintMenu":
        return ConstraintMenu(enabled=(MenuEntry(COMPLETE),))

    @staticmethod
    def of(*entries: MenuEntry) -> "ConstraintMenu":
        return ConstraintMenu(enabled=tuple(entries))

    def to_obj(self) -> list:
        return [e.to_obj() for e in self.enabled]

    @staticmethod
    def from_obj(obj: list, allow_incomplete_only: bool = False) -> "ConstraintMenu":
        return ConstraintMenu(
            enabled=tuple(MenuEntry.from_obj(e) for e in obj),
            allow_incomplete_only=allow_incomplete_only,
        )


def default_menu(domain: Domain) -> ConstraintMenu:
    """Complete plus avoidance, step-priority, and three sphere radii.

    Grid radii are in cells; arm radii scale with the first arm's link
    length (small / medium / large at 0.1 / 0.3 / 0.6 per unit of length).
    """
    if isinstance(domain, GridDomain):
        radii = (1.0, 2.0, 3.0)
    else:
        unit = domain.arms[0].link_lengths[0]
        radii = tuple(round(f * unit, 6) for f in (0.1, 0.3, 0.6))
    return ConstraintMenu(
        enabled=(
            MenuEntry(COMPLETE),
            MenuEntry(CT_AVOIDANCE),
            MenuEntry(CT_STEP_PRIORITY),
            MenuEntry(CT_SPHERE, radius=radii[0]),
            MenuEntry(CT_SPHERE, radius=radii[1]),
            MenuEntry(CT_SPHERE, radius=radii[2]),
        )
    )


def _pair_for_entry(entry: MenuEntry, conflict: Conflict) -> Tuple[Constraint, Constraint]:
    i, j = conflict.agents
    t = conflict.time
    is_edge = conflict.kind == EDGE
    if entry.kind == COMPLETE:
        if is_edge:
            return (
                Constraint(agent=i, ctype=CT_EDGE, time=t, q=conflict.configs_i[0], q2=conflict.configs_i[1]),
                Constraint(agent=j, ctype=CT_EDGE, time=t, q=conflict.configs_j[0], q2=conflict.configs_j[1]),
            )
        return (
            Constraint(agent=i, ctype=CT_VERTEX, time=t, q=conflict.configs_i[0]),
            Constraint(agent=j, ctype=CT_VERTEX, time=t, q=conflict.configs_j[0]),
        )
    if entry.kind == CT_SPHERE:
        mk = lambda a: Constraint(
            agent=a, ctype=CT_SPHERE, time=t, point=conflict.point, radius=entry.radius, from_edge=is_edge
        )
        return mk(i), mk(j)
    if entry.kind == CT_AVOIDANCE:
        # Snapshot the other agent's conflicting configuration(s); the
        # constraint keeps forbidding this volume even after the other
        # agent replans away from it.
        return (
            Constraint(
                agent=i, ctype=CT_AVOIDANCE, time=t, other=j,
                q_other=conflict.configs_j[0],
                q_other2=conflict.configs_j[1] if is_edge else None,
                from_edge=is_edge,
            ),
            Constraint(
                agent=j, ctype=CT_AVOIDANCE, time=t, other=i,
                q_other=conflict.configs_i[0],
                q_other2=conflict.configs_i[1] if is_edge else None,
                from_edge=is_edge,
            ),
        )
    if entry.kind == CT_STEP_PRIORITY:
        # No snapshot: resolved against the other agent's current path at
        # satisfaction-check time.
        return (
            Constraint(agent=i, ctype=CT_STEP_PRIORITY, time=t, other=j, from_edge=is_edge),
            Constraint(agent=j, ctype=CT_STEP_PRIORITY, time=t, other=i, from_edge=is_edge),
        )
    if entry.kind == CT_PRIORITY:
        return (
            Constraint(agent=i, ctype=CT_PRIORITY, time=None, other=j),
            Constraint(agent=j, ctype=CT_PRIORITY, time=None, other=i),
        )
    raise ValueError(f"unknown menu entry kind: {entry.kind!r}")


def make_constraints(
    conflict: Conflict, menu: ConstraintMenu
) -> List[Tuple[MenuEntry, Constraint, Constraint]]:
    """One symmetric (c_i, c_j) pair per enabled menu entry, menu order."""
    return [(entry,) + _pair_for_entry(entry, conflict) for entry in menu.enabled]


@dataclass(frozen=True)
class DisjunctiveCheck:
    confirmed: bool
    counterexample: Optional[Tuple[Configuration, Configuration]] = None


def _violates(domain: Domain, c: Constraint, q: Configuration, other_q: Optional[Configuration]) -> bool:
    """Configuration-level violation check used by the disjunctiveness probe.

    Step-priority and priority constraints depend on the other agent's path;
    here the other agent's probe configuration stands in for it.
    """
    if c.ctype == CT_VERTEX:
        return c.q == q
    if c.ctype == CT_EDGE:
        return c.q == q  # edge start occupancy; probe is per configuration
    if c.ctype == CT_SPHERE:
        return domain.occupancy_intersects_circle(c.agent, q, c.point, c.radius)
    if c.ctype == CT_AVOIDANCE:
        return domain.agents_collide(c.agent, q, c.other, c.q_other) is not None
    if c.ctype in (CT_STEP_PRIORITY, CT_PRIORITY):
        return other_q is not None and domain.agents_collide(c.agent, q, c.other, other_q) is not None
    raise ValueError(c.ctype)


def _all_configs(domain: Domain, agent: int):
    if isinstance(domain, GridDomain):
        for x in range(domain.width):
            for y in range(domain.height):
                q = Configuration((x, y))
                if domain.is_static_free(agent, q):
                    yield q
    else:
        limits = domain.arms[agent].joint_limits
        for coords in itertools.product(*[range(lo, hi + 1) for lo, hi in limits]):
            q = Configuration(coords)
            if domain.is_static_free(agent, q):
                yield q


def mutually_disjunctive_check(
    c_i: Constraint,
    c_j: Constraint,
    domain: Domain,
    sample_budget: int = 100_000,
    seed: int = 0,
) -> DisjunctiveCheck:
    """Search for a conflict-free configuration pair violating both
    constraints; finding one certifies the constraint type incomplete.

    Grids are swept exhaustively. Arm domains are sampled uniformly up to
    `sample_budget` pairs (falling back to exhaustive enumeration when the
    joint configuration product is smaller than the budget).
    """
    i, j = c_i.agent, c_j.agent

    def probe(q_i: Configuration, q_j: Configuration) -> Optional[DisjunctiveCheck]:
        if not _violates(domain, c_i, q_i, q_j):
            return None
        if not _violates(domain, c_j, q_j, q_i):
            return None
        if domain.agents_collide(i, q_i, j, q_j) is None:
            return DisjunctiveCheck(confirmed=False, counterexample=(q_i, q_j))
        return None

    configs_i = list(_all_configs(domain, i))
    configs_j = list(_all_configs(domain, j))
    n_pairs = len(configs_i) * len(configs_j)
    if isinstance(domain, GridDomain) or n_pairs <= sample_budget:
        for q_i in configs_i:
            if not _violates(domain, c_i, q_i, None) and c_i.ctype not in (CT_STEP_PRIORITY, CT_PRIORITY):
                continue
            for q_j in configs_j:
                hit = probe(q_i, q_j)
                if hit is not None:
                    return hit
        return DisjunctiveCheck(confirmed=True)
    rng = random.Random(seed)
    for _ in range(sample_budget):
        q_i = configs_i[rng.randrange(len(configs_i))]
        q_j = configs_j[rng.randrange(len(configs_j))]
        hit = probe(q_i, q_j)
        if hit is not None:
            return hit
    return DisjunctiveCheck(confirmed=True)
