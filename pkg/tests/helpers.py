"""Shared factories and independent oracles for the test suite.

The oracles deliberately take the dumbest correct route: constraint rows
by enumerating coalition strategies outright, linear programs by
enumerating basic feasible points inside a large box.  Slow but
trustworthy on the small instances used here.
"""

from __future__ import annotations

from itertools import combinations, product

import numpy as np

from paymech import (
    Branch,
    Chance,
    GameTree,
    InfoStructure,
    Leaf,
    branch,
    chance,
    honest_outcome,
    leaf,
    subgame_ids,
)

FEAS_TOL = 1e-7

# One "N. PASS/FAIL: detail" line per acceptance criterion, shown in the
# terminal summary by the conftest hook.
ACCEPTANCE_LINES: list[str] = []


def record_acceptance(num: int, passed: bool, detail: str) -> None:
    status = "PASS" if passed else "FAIL"
    ACCEPTANCE_LINES.append(f"criterion {num:2d} {status}: {detail}")


# ---------------------------------------------------------------- trees

def random_emission(rng, s):
    if rng.random() < 0.5:
        out = np.zeros(s)
        out[rng.integers(s)] = 1.0
        return out
    return rng.dirichlet(np.ones(s))


def random_tree(rng, n_players=2, num_symbols=3, max_nodes=12, allow_chance=True):
    """Random game: root is always a branch, every leaf emits over
    num_symbols, total node count stays within max_nodes."""
    counter = [0]
    budget = [int(rng.integers(4, max_nodes + 1))]

    def make_leaf():
        counter[0] += 1
        utilities = rng.integers(-5, 6, size=n_players).astype(float)
        return leaf(f"L{counter[0]}", utilities, random_emission(rng, num_symbols))

    def make_node(depth):
        budget[0] -= 1
        if depth >= 3 or budget[0] <= 1 or rng.random() < 0.35:
            return make_leaf()
        counter[0] += 1
        node_id = counter[0]
        width = int(rng.integers(2, 4))
        if allow_chance and rng.random() < 0.25:
            probs = rng.dirichlet(np.ones(width))
            kids = [(float(p), make_node(depth + 1)) for p in probs]
            return chance(f"C{node_id}", kids)
        owner = int(rng.integers(n_players))
        kids = [(f"m{k}", make_node(depth + 1)) for k in range(width)]
        return branch(f"B{node_id}", owner, kids)

    budget[0] -= 1
    root_id = "root"
    width = int(rng.integers(2, 4))
    owner = int(rng.integers(n_players))
    root = branch(root_id, owner, [(f"m{k}", make_node(1)) for k in range(width)])
    players = tuple(f"P{i + 1}" for i in range(n_players))
    return GameTree(players, root)


def random_profile(rng, tree):
    out = {}
    for node_id in tree.branch_ids():
        node = tree.node(node_id)
        moves = node.moves()
        out[node_id] = moves[int(rng.integers(len(moves)))]
    return out


def random_instance(rng, n_players=2, num_symbols=3, max_nodes=12, allow_chance=True):
    tree = random_tree(rng, n_players, num_symbols, max_nodes, allow_chance)
    alphabet = tuple(f"s{k}" for k in range(num_symbols))
    info = InfoStructure.from_tree(tree, alphabet)
    return tree, info, random_profile(rng, tree)


def solvable_instance(rng, n_players=2, max_nodes=10, allow_chance=True):
    """Instance whose synthesis always has solutions: one private symbol
    per leaf keeps the emission matrix square and invertible, so any
    implemented-utility target is reachable."""
    tree = random_tree(rng, n_players, num_symbols=1, max_nodes=max_nodes,
                       allow_chance=allow_chance)
    m = tree.m
    phi = np.eye(m)
    rebuilt = _replace_emissions(tree.root, phi)
    tree2 = GameTree(tree.players, rebuilt)
    alphabet = tuple(f"s{k}" for k in range(m))
    info = InfoStructure.from_tree(tree2, alphabet)
    return tree2, info, random_profile(rng, tree2)


def _replace_emissions(node, phi, next_index=None):
    if next_index is None:
        next_index = [0]
    if isinstance(node, Leaf):
        j = next_index[0]
        next_index[0] += 1
        return leaf(node.id, node.utilities, phi[:, j])
    if isinstance(node, Chance):
        kids = [(p, _replace_emissions(c, phi, next_index)) for p, c in node.children]
        return chance(node.id, kids)
    kids = [(mv, _replace_emissions(c, phi, next_index)) for mv, c in node.children]
    return branch(node.id, node.owner, kids)


# --------------------------------------------- constraint-row oracle

def _subtree_branches(tree, root_id):
    out = []
    stack = [tree.node(root_id)]
    while stack:
        node = stack.pop()
        if isinstance(node, Branch):
            out.append(node)
            stack.extend(child for _, child in node.children)
        elif isinstance(node, Chance):
            stack.extend(child for _, child in node.children)
    return out


def _reached(tree, root_id, moves, profile):
    found = set()
    stack = [tree.node(root_id)]
    while stack:
        node = stack.pop()
        if isinstance(node, Leaf):
            found.add(node.index)
        elif isinstance(node, Branch):
            stack.append(node.child(moves.get(node.id, profile[node.id])))
        else:
            stack.extend(child for p, child in node.children if p > 0)
    return found


def oracle_rows(tree, profile, delta, t):
    """All distinct (coefficients, rhs) deviation rows, found by brute
    force over every pure strategy of every coalition in every subgame."""
    n, m = tree.n, tree.m
    rows = set()
    for root_id in subgame_ids(tree):
        w, _ = honest_outcome(tree, root_id, profile)
        support = [j for j in range(m) if w[j] > 0]
        support_set = set(support)
        for size in range(1, t + 1):
            for coalition in combinations(range(n), size):
                owned = [b for b in _subtree_branches(tree, root_id) if b.owner in coalition]
                induced = set()
                for choice in product(*(b.moves() for b in owned)):
                    moves = {b.id: mv for b, mv in zip(owned, choice)}
                    induced |= _reached(tree, root_id, moves, profile)
                for i in coalition:
                    base = i * m
                    for j in sorted(induced - support_set):
                        vec = np.zeros(n * m)
                        for a in support:
                            vec[base + a] += w[a]
                        vec[base + j] -= 1.0
                        rows.add((tuple(vec), float(delta)))
    return rows


def system_rows(system):
    return {(tuple(row), float(r)) for row, r in zip(system.a, system.rhs)}


# --------------------------------------------------- LP vertex oracle

def random_lp(rng):
    """Small integer LP over free variables; roughly a third carry one
    equality row.  Shapes and magnitudes keep the vertex oracle exact."""
    from paymech import LinearProgram

    d = int(rng.integers(1, 4))
    p = int(rng.integers(0, 5))
    c = rng.integers(-4, 5, size=d).astype(float)
    g = h = a_eq = b_eq = None
    if p:
        g = rng.integers(-4, 5, size=(p, d)).astype(float)
        h = rng.integers(-8, 9, size=p).astype(float)
    if rng.random() < 0.3:
        row = rng.integers(-4, 5, size=d).astype(float)
        while not row.any():
            row = rng.integers(-4, 5, size=d).astype(float)
        a_eq = row.reshape(1, d)
        b_eq = rng.integers(-8, 9, size=1).astype(float)
    return LinearProgram(c=c, g=g, h=h, a_eq=a_eq, b_eq=b_eq)


def _vertex_optimum(c, g, h, a_eq, b_eq, box):
    d = len(c)
    blocks = [np.eye(d), -np.eye(d)]
    bounds = [np.full(d, -box), np.full(d, -box)]
    if g is not None and len(g):
        blocks.insert(0, np.asarray(g, dtype=float))
        bounds.insert(0, np.asarray(h, dtype=float))
    gg = np.vstack(blocks)
    hh = np.concatenate(bounds)
    if a_eq is not None and len(a_eq):
        aa = np.asarray(a_eq, dtype=float)
        bb = np.asarray(b_eq, dtype=float)
    else:
        aa = np.zeros((0, d))
        bb = np.zeros(0)
    q = aa.shape[0]
    best = None
    best_x = None
    for combo in combinations(range(gg.shape[0]), d - q):
        mat = np.vstack([aa, gg[list(combo)]])
        if abs(np.linalg.det(mat)) < 1e-9:
            continue
        x = np.linalg.solve(mat, np.concatenate([bb, hh[list(combo)]]))
        if np.all(gg @ x >= hh - FEAS_TOL) and (q == 0 or np.all(np.abs(aa @ x - bb) <= FEAS_TOL)):
            val = float(np.asarray(c) @ x)
            if best is None or val < best:
                best = val
                best_x = x
    return best, best_x


def lp_oracle(c, g=None, h=None, a_eq=None, b_eq=None):
    """Classify a small LP by vertex enumeration in two nested boxes.

    Returns (status, value): a finite optimum that does not move when
    the box doubles is 'optimal'; a moving or box-supported optimum is
    'unbounded'; no feasible vertex is 'infeasible'.  Assumes, as the
    generators here guarantee, that a nonempty feasible set meets the
    smaller box.
    """
    v1, _ = _vertex_optimum(c, g, h, a_eq, b_eq, 1e5)
    if v1 is None:
        return "infeasible", None
    v2, _ = _vertex_optimum(c, g, h, a_eq, b_eq, 2e5)
    if v2 is not None and abs(v2 - v1) <= 1e-6 * (1.0 + abs(v1)):
        return "optimal", v1
    return "unbounded", None
