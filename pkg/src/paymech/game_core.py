"""Finite extensive-form games of perfect information.

A game tree is built from three node kinds: decision nodes owned by a
player (Branch), random moves with fixed probabilities (Chance), and
terminal nodes (Leaf).  Every leaf carries a utility vector, one entry
per player, and an emission distribution over the symbols of whatever
reporting mechanism observes the play.  Leaves are indexed 0..m-1 in
depth-first, left-to-right order; that order fixes the columns of the
utility matrix and of the emission matrix everywhere else in the
package.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Iterable, Mapping, Union

import numpy as np

from .errors import (
    BadParameters,
    BadProbabilitySum,
    DimensionMismatch,
    DuplicateNodeId,
    MissingBranchChoice,
    UnknownNodeId,
    ValidationError,
)

PROB_TOL = 1e-9

# A strategy profile is a plain mapping: branch id -> chosen move name.
StrategyProfile = Mapping[str, str]


@dataclass(frozen=True)
class Leaf:
    id: str
    utilities: tuple[float, ...]
    emission: tuple[float, ...]
    index: int = -1  # assigned when the tree is built


@dataclass(frozen=True)
class Branch:
    id: str
    owner: int
    children: tuple[tuple[str, "Node"], ...]

    def moves(self) -> tuple[str, ...]:
        return tuple(move for move, _ in self.children)

    def child(self, move: str) -> "Node":
        for name, node in self.children:
            if name == move:
                return node
        raise MissingBranchChoice(
            f"branch {self.id!r} has no move {move!r} (moves: {self.moves()})"
        )


@dataclass(frozen=True)
class Chance:
    id: str
    children: tuple[tuple[float, "Node"], ...]


Node = Union[Branch, Chance, Leaf]


def leaf(node_id: str, utilities: Iterable[float], emission: Iterable[float]) -> Leaf:
    return Leaf(node_id, tuple(float(u) for u in utilities), tuple(float(p) for p in emission))


def branch(node_id: str, owner: int, children) -> Branch:
    if isinstance(children, Mapping):
        children = children.items()
    return Branch(node_id, int(owner), tuple((str(m), c) for m, c in children))


def chance(node_id: str, children: Iterable[tuple[float, Node]]) -> Chance:
    return Chance(node_id, tuple((float(p), c) for p, c in children))


@dataclass(frozen=True, eq=False)
class GameTree:
    """A validated game tree.

    Validation happens at construction: node ids must be unique, chance
    probabilities and leaf emissions must be distributions, utility
    vectors must match the player count, and all leaves must emit over
    the same symbol count.  Leaf indices are assigned depth-first.
    """

    players: tuple[str, ...]
    root: Node
    nodes: dict[str, Node] = field(init=False, repr=False, compare=False)
    leaves: tuple[Leaf, ...] = field(init=False, repr=False, compare=False)

    def __post_init__(self):
        players = tuple(str(p) for p in self.players)
        if not players:
            raise BadParameters("a game needs at least one player")
        if len(set(players)) != len(players):
            raise BadParameters("player names must be unique")
        object.__setattr__(self, "players", players)
        nodes, leaves = _walk_and_validate(self.root, len(players))
        object.__setattr__(self, "nodes", nodes)
        object.__setattr__(self, "leaves", leaves)

    @property
    def n(self) -> int:
        return len(self.players)

    @property
    def m(self) -> int:
        return len(self.leaves)

    @property
    def num_symbols(self) -> int:
        return len(self.leaves[0].emission)

    def node(self, node_id: str) -> Node:
        try:
            return self.nodes[node_id]
        except KeyError:
            raise UnknownNodeId(f"no node with id {node_id!r}") from None

    def branch_ids(self) -> tuple[str, ...]:
        return tuple(nid for nid, nd in self.nodes.items() if isinstance(nd, Branch))

    def __eq__(self, other):
        if not isinstance(other, GameTree):
            return NotImplemented
        return self.players == other.players and self.root == other.root

    def __hash__(self):
        return hash((self.players, self.root))


def _walk_and_validate(root: Node, n: int):
    nodes: dict[str, Node] = {}
    leaves: list[Leaf] = []
    emission_len = None
    stack = [root]
    while stack:
        node = stack.pop()
        if node.id in nodes:
            raise DuplicateNodeId(f"node id {node.id!r} appears more than once")
        nodes[node.id] = node
        if isinstance(node, Leaf):
            if len(node.utilities) != n:
                raise DimensionMismatch(
                    f"leaf {node.id!r} has {len(node.utilities)} utilities, expected {n}"
                )
            if emission_len is None:
                emission_len = len(node.emission)
                if emission_len < 1:
                    raise DimensionMismatch(f"leaf {node.id!r} has an empty emission pdf")
            elif len(node.emission) != emission_len:
                raise DimensionMismatch(
                    f"leaf {node.id!r} emits over {len(node.emission)} symbols, "
                    f"expected {emission_len}"
                )
            if any(p < 0 for p in node.emission):
                raise BadProbabilitySum(f"leaf {node.id!r} has a negative emission probability")
            total = sum(node.emission)
            if abs(total - 1.0) > PROB_TOL:
                raise BadProbabilitySum(f"leaf {node.id!r} emission pdf sums to {total!r}")
            j = len(leaves)
            if node.index not in (-1, j):
                raise ValidationError(
                    f"leaf {node.id!r} carries index {node.index}, depth-first order gives {j}"
                )
            object.__setattr__(node, "index", j)
            leaves.append(node)
        elif isinstance(node, Branch):
            if not node.children:
                raise ValidationError(f"branch {node.id!r} has no moves")
            if not 0 <= node.owner < n:
                raise DimensionMismatch(
                    f"branch {node.id!r} owner {node.owner} out of range for {n} players"
                )
            moves = node.moves()
            if len(set(moves)) != len(moves):
                raise ValidationError(f"branch {node.id!r} repeats a move name")
            for _, child in reversed(node.children):
                stack.append(child)
        elif isinstance(node, Chance):
            probs = [p for p, _ in node.children]
            if any(p < 0 for p in probs):
                raise BadProbabilitySum(f"chance node {node.id!r} has a negative probability")
            total = sum(probs)
            if abs(total - 1.0) > PROB_TOL:
                raise BadProbabilitySum(f"chance node {node.id!r} probabilities sum to {total!r}")
            for _, child in reversed(node.children):
                stack.append(child)
        else:
            raise ValidationError(f"unknown node type {type(node).__name__}")
    return nodes, tuple(leaves)


def validate_and_index(tree: GameTree):
    """Re-derive leaf order and return (utility matrix, leaf id order).

    The utility matrix U has one row per player and one column per leaf,
    columns in depth-first left-to-right order.
    """
    _, leaves = _walk_and_validate(tree.root, tree.n)
    u = np.array([lf.utilities for lf in leaves], dtype=np.float64).T
    u = u.reshape(tree.n, len(leaves))
    u.setflags(write=False)
    return u, tuple(lf.id for lf in leaves)


def utility_matrix(tree: GameTree) -> np.ndarray:
    u = np.array([lf.utilities for lf in tree.leaves], dtype=np.float64).T
    return u.reshape(tree.n, tree.m)


def emission_stack(tree: GameTree) -> np.ndarray:
    """Column-stack the leaf emission pdfs: shape (num_symbols, m)."""
    return np.array([lf.emission for lf in tree.leaves], dtype=np.float64).T


def check_profile(tree: GameTree, profile: StrategyProfile) -> None:
    """Require one valid move for every branch, and no stray ids."""
    branch_ids = set(tree.branch_ids())
    for nid in profile:
        if nid not in branch_ids:
            raise UnknownNodeId(f"profile names {nid!r}, which is not a branch of this tree")
    for nid in branch_ids:
        if nid not in profile:
            raise MissingBranchChoice(f"profile has no move for branch {nid!r}")
        node = tree.nodes[nid]
        node.child(profile[nid])  # raises MissingBranchChoice on a bad move


def expected_utilities(tree: GameTree, profile: StrategyProfile) -> np.ndarray:
    """Expected utility vector when every branch follows the profile."""

    def value(node: Node) -> np.ndarray:
        if isinstance(node, Leaf):
            return np.asarray(node.utilities, dtype=np.float64)
        if isinstance(node, Branch):
            if node.id not in profile:
                raise MissingBranchChoice(f"profile has no move for branch {node.id!r}")
            return value(node.child(profile[node.id]))
        acc = np.zeros(tree.n)
        for p, child in node.children:
            if p > 0:
                acc += p * value(child)
        return acc

    return value(tree.root)


def backward_induction(tree: GameTree) -> dict[str, str]:
    """Subgame-perfect choices, ties resolved toward the leftmost child."""
    choices: dict[str, str] = {}

    def value(node: Node) -> np.ndarray:
        if isinstance(node, Leaf):
            return np.asarray(node.utilities, dtype=np.float64)
        if isinstance(node, Chance):
            acc = np.zeros(tree.n)
            for p, child in node.children:
                if p > 0:
                    acc += p * value(child)
            return acc
        best_move, best = node.children[0][0], value(node.children[0][1])
        for move, child in node.children[1:]:
            v = value(child)
            if v[node.owner] > best[node.owner]:
                best_move, best = move, v
        choices[node.id] = best_move
        return best

    value(tree.root)
    return choices


def honest_outcome(tree: GameTree, root_id: str, profile: StrategyProfile):
    """Leaf distribution and expected utilities of on-profile play.

    Starting from the subgame rooted at `root_id`, branches follow the
    profile and chance spreads over its children.  Returns `(w, u)`
    where w is a length-m weight vector over leaves (summing to 1) and
    u = U @ w.
    """
    start = tree.node(root_id)
    w = np.zeros(tree.m)
    u = np.zeros(tree.n)

    def walk(node: Node, p: float):
        nonlocal u
        if isinstance(node, Leaf):
            w[node.index] += p
            u = u + p * np.asarray(node.utilities, dtype=np.float64)
            return
        if isinstance(node, Branch):
            if node.id not in profile:
                raise MissingBranchChoice(f"profile has no move for branch {node.id!r}")
            walk(node.child(profile[node.id]), p)
            return
        for q, child in node.children:
            if q > 0:
                walk(child, p * q)

    walk(start, 1.0)
    return w, u


def subgame_ids(tree: GameTree) -> tuple[str, ...]:
    """All node ids in depth-first preorder; each roots a subgame."""
    out = []
    stack = [tree.root]
    while stack:
        node = stack.pop()
        out.append(node.id)
        if isinstance(node, (Branch, Chance)):
            for _, child in reversed(node.children):
                stack.append(child)
    return tuple(out)
