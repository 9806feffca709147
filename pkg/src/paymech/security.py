"""Coalition deviation constraints and scheme verification.

The target property: for every subgame, every coalition C of size at
most t, every leaf that C can force (others on-profile) outside the
support of the on-profile continuation, and every member i of C, the
member's expected on-profile utility beats the leaf by at least delta.

Each such requirement is one linear row over vec(E) (row-major, player
blocks of m leaf entries): +w_a on the support leaves of the subgame,
-1 on the deviation leaf, right-hand side delta.  Support weights are
fractional exactly when chance nodes sit on the on-profile path.
Duplicate coefficient patterns are dropped, keeping the metadata of the
first occurrence; generation order is preorder over subgames, then
coalition size, then coalition, then member, then leaf, so the row
order is deterministic.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from itertools import combinations
from typing import Iterable

import numpy as np

from .errors import BadParameters, DimensionMismatch, MissingBranchChoice
from .game_core import (
    Branch,
    Chance,
    GameTree,
    Leaf,
    StrategyProfile,
    honest_outcome,
    subgame_ids,
    utility_matrix,
)
from .info_structure import InfoStructure, PaymentScheme, implemented_utilities

SLACK_TOL = 1e-9


@dataclass(frozen=True)
class SecurityParams:
    """delta: required utility gap (>= 0); t: maximum coalition size."""

    delta: float
    t: int = 1

    def __post_init__(self):
        if not np.isfinite(self.delta) or self.delta < 0:
            raise BadParameters(f"delta must be finite and nonnegative, got {self.delta}")
        if self.t < 1:
            raise BadParameters(f"coalition bound t must be at least 1, got {self.t}")


@dataclass(frozen=True)
class ConstraintRow:
    """Provenance of one constraint row."""

    subgame: str
    coalition: tuple[int, ...]
    deviator: int
    leaf: int


@dataclass(frozen=True, eq=False)
class ConstraintSystem:
    """Rows A over vec(E) with A @ vec(E) >= rhs required."""

    a: np.ndarray
    rhs: np.ndarray
    rows: tuple[ConstraintRow, ...]
    n: int
    m: int
    delta: float
    t: int

    @property
    def alpha(self) -> int:
        return self.a.shape[0]


def inducible_leaves(
    tree: GameTree, root_id: str, coalition: Iterable[int], profile: StrategyProfile
) -> frozenset[int]:
    """Leaf indices the coalition can reach with positive probability.

    Coalition members choose freely at their branches, everyone else
    follows the profile, and chance contributes every positive-probability
    child.
    """
    members = frozenset(int(i) for i in coalition)
    if any(i < 0 or i >= tree.n for i in members):
        raise BadParameters(f"coalition {sorted(members)} out of range for {tree.n} players")
    found: set[int] = set()
    stack = [tree.node(root_id)]
    while stack:
        node = stack.pop()
        if isinstance(node, Leaf):
            found.add(node.index)
        elif isinstance(node, Branch):
            if node.owner in members:
                for _, child in node.children:
                    stack.append(child)
            else:
                if node.id not in profile:
                    raise MissingBranchChoice(f"profile has no move for branch {node.id!r}")
                stack.append(node.child(profile[node.id]))
        else:
            for p, child in node.children:
                if p > 0:
                    stack.append(child)
    return frozenset(found)


def build_constraints(
    tree: GameTree, profile: StrategyProfile, params: SecurityParams
) -> ConstraintSystem:
    n, m = tree.n, tree.m
    if params.t > n:
        raise BadParameters(f"coalition bound t={params.t} exceeds {n} players")
    seen: dict[tuple, None] = {}
    coeff_rows: list[np.ndarray] = []
    metadata: list[ConstraintRow] = []
    for root_id in subgame_ids(tree):
        w, _ = honest_outcome(tree, root_id, profile)
        support = [int(j) for j in np.nonzero(w > 0)[0]]
        support_set = set(support)
        for size in range(1, params.t + 1):
            for coalition in combinations(range(n), size):
                reachable = inducible_leaves(tree, root_id, coalition, profile)
                targets = sorted(reachable - support_set)
                if not targets:
                    continue
                for i in coalition:
                    base = i * m
                    for j in targets:
                        row = np.zeros(n * m)
                        for a in support:
                            row[base + a] += w[a]
                        row[base + j] -= 1.0
                        key = tuple(zip(*np.nonzero(row), row[np.nonzero(row)]))
                        if key in seen:
                            continue
                        seen[key] = None
                        coeff_rows.append(row)
                        metadata.append(ConstraintRow(root_id, coalition, i, j))
    a = np.array(coeff_rows).reshape(len(coeff_rows), n * m)
    rhs = np.full(len(coeff_rows), float(params.delta))
    a.setflags(write=False)
    rhs.setflags(write=False)
    return ConstraintSystem(a, rhs, tuple(metadata), n, m, float(params.delta), params.t)


@dataclass(frozen=True, eq=False)
class VerifyReport:
    passed: bool
    slacks: np.ndarray
    violations: tuple[tuple[ConstraintRow, float], ...]
    system: ConstraintSystem

    @property
    def min_slack(self) -> float | None:
        return float(self.slacks.min()) if self.slacks.size else None


def verify(
    tree: GameTree,
    info: InfoStructure,
    scheme: PaymentScheme,
    profile: StrategyProfile,
    params: SecurityParams,
) -> VerifyReport:
    """Check whether the scheme secures the profile at (delta, t)."""
    if info.m != tree.m:
        raise DimensionMismatch(f"{info.m} emission columns for {tree.m} leaves")
    system = build_constraints(tree, profile, params)
    u = utility_matrix(tree)
    e = implemented_utilities(u, scheme, info)
    slacks = system.a @ e.ravel() - system.rhs
    slacks.setflags(write=False)
    violations = tuple(
        (row, float(s)) for row, s in zip(system.rows, slacks) if s < -SLACK_TOL
    )
    return VerifyReport(not violations, slacks, violations, system)


def lifting_matrix(info: InfoStructure, n: int) -> np.ndarray:
    """R with vec(Lambda @ Phi) = R @ vec(Lambda), both vecs row-major.

    Block diagonal: one Phi-transpose block per player.
    """
    if n < 1:
        raise BadParameters(f"need at least one player, got {n}")
    return np.kron(np.eye(n), info.phi.T)
