"""Payment-scheme synthesis by linear programming.

Decision variables are the n*s entries of the payment matrix, flattened
row-major over (player, symbol).  Security rows come from the constraint
builder and are lifted into payment space through the emission matrix;
self-containment adds one row per symbol.  Infinite cost entries pin the
corresponding payment to zero.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .errors import (
    BadParameters,
    DimensionMismatch,
    Infeasible,
    NumericalBreakdown,
    Unbounded,
)
from .game_core import GameTree, StrategyProfile, check_profile, honest_outcome, utility_matrix
from .info_structure import InfoStructure, PaymentScheme
from .security import SecurityParams, build_constraints, lifting_matrix, verify
from .simplex import LinearProgram, solve

OBJ_WEIGHTED = "weighted_cost"
OBJ_MINMAX = "min_max_deposit"

HONEST_PER_LEAF = "per_leaf"
HONEST_EXPECTED = "expected"


@dataclass(frozen=True)
class SynthesisOptions:
    """Toggles for the synthesis program.

    zero_inflation turns the per-symbol column-sum inequality into an
    equality.  honest_invariance forces payments to vanish on the honest
    outcome, either per supported leaf or only in expectation.
    """

    objective: str = OBJ_MINMAX
    zero_inflation: bool = False
    honest_invariance: bool = False
    honest_form: str = HONEST_PER_LEAF

    def __post_init__(self):
        if self.objective not in (OBJ_WEIGHTED, OBJ_MINMAX):
            raise BadParameters(f"unknown objective {self.objective!r}")
        if self.honest_form not in (HONEST_PER_LEAF, HONEST_EXPECTED):
            raise BadParameters(f"unknown honest-invariance form {self.honest_form!r}")


def _cost_matrix(cost, n, s):
    arr = np.asarray(cost, dtype=np.float64)
    if arr.ndim == 1:
        if arr.shape[0] != n * s:
            raise DimensionMismatch(f"cost vector must have {n * s} entries, got {arr.shape[0]}")
        arr = arr.reshape(n, s)
    if arr.shape != (n, s):
        raise DimensionMismatch(f"cost must be {n}x{s}, got {arr.shape}")
    if np.any(np.isnan(arr)) or np.any(np.isneginf(arr)):
        raise BadParameters("cost entries must be finite or +inf")
    return arr


def synthesize(
    tree: GameTree,
    info: InfoStructure,
    profile: StrategyProfile,
    params: SecurityParams,
    cost=None,
    opts: SynthesisOptions | None = None,
) -> PaymentScheme:
    """Find a self-contained payment matrix securing the profile.

    Raises Infeasible (with the constraint system attached) when no
    payment matrix works, Unbounded when a weighted objective has no
    finite optimum, and NumericalBreakdown if the solver's output fails
    re-verification.
    """
    opts = opts if opts is not None else SynthesisOptions()
    check_profile(tree, profile)
    if info.m != tree.m:
        raise DimensionMismatch(f"info structure has {info.m} leaf columns, tree has {tree.m}")
    n, s = tree.n, info.s
    cost_mat = None if cost is None else _cost_matrix(cost, n, s)
    if opts.objective == OBJ_WEIGHTED and cost_mat is None:
        raise BadParameters("weighted_cost objective requires a cost vector")

    minmax = opts.objective == OBJ_MINMAX
    nv = n * s + (1 if minmax else 0)
    system = build_constraints(tree, profile, params)
    u = utility_matrix(tree)

    g_blocks, h_blocks = [], []
    eq_blocks, eq_rhs_blocks = [], []

    if system.alpha:
        lifted = system.a @ lifting_matrix(info, n)  # (alpha, n*s)
        sec = np.zeros((system.alpha, nv))
        sec[:, : n * s] = -lifted
        g_blocks.append(sec)
        h_blocks.append(system.rhs - system.a @ u.ravel())

    colsum = np.zeros((s, nv))
    colsum[:, : n * s] = np.tile(np.eye(s), (1, n))
    if opts.zero_inflation:
        eq_blocks.append(colsum)
        eq_rhs_blocks.append(np.zeros(s))
    else:
        g_blocks.append(colsum)
        h_blocks.append(np.zeros(s))

    if cost_mat is not None:
        pinned = np.argwhere(np.isposinf(cost_mat))
        if pinned.size:
            pins = np.zeros((len(pinned), nv))
            for row, (i, k) in enumerate(pinned):
                pins[row, i * s + k] = 1.0
            eq_blocks.append(pins)
            eq_rhs_blocks.append(np.zeros(len(pinned)))

    if opts.honest_invariance:
        weights, _ = honest_outcome(tree, tree.root.id, profile)
        if opts.honest_form == HONEST_PER_LEAF:
            support = np.nonzero(weights > 0.0)[0]
            rows = np.zeros((n * len(support), nv))
            pos = 0
            for i in range(n):
                for j in support:
                    rows[pos, i * s : (i + 1) * s] = info.phi[:, j]
                    pos += 1
        else:
            mixed = info.phi @ weights  # symbol pdf of the honest outcome
            rows = np.zeros((n, nv))
            for i in range(n):
                rows[i, i * s : (i + 1) * s] = mixed
        eq_blocks.append(rows)
        eq_rhs_blocks.append(np.zeros(rows.shape[0]))

    if minmax:
        cap = np.zeros((n * s, nv))
        cap[:, : n * s] = -np.eye(n * s)
        cap[:, n * s] = 1.0
        g_blocks.append(cap)
        h_blocks.append(np.zeros(n * s))
        c = np.zeros(nv)
        c[n * s] = 1.0
    else:
        c = np.where(np.isposinf(cost_mat), 0.0, cost_mat).ravel()

    lp = LinearProgram(
        c,
        np.vstack(g_blocks) if g_blocks else None,
        np.concatenate(h_blocks) if h_blocks else None,
        np.vstack(eq_blocks) if eq_blocks else None,
        np.concatenate(eq_rhs_blocks) if eq_blocks else None,
    )
    outcome = solve(lp)
    if outcome.status == "infeasible":
        raise Infeasible("no payment scheme satisfies the constraints", constraints=system)
    if outcome.status == "unbounded":
        raise Unbounded("cost objective is unbounded below on the feasible region")

    scheme = PaymentScheme(outcome.x[: n * s].reshape(n, s))
    report = verify(tree, info, scheme, profile, params)
    if not report.passed:
        raise NumericalBreakdown(
            f"solver output fails re-verification (min slack {report.min_slack:.3e})"
        )
    return scheme


def minmax_deposit(tree: GameTree, info: InfoStructure, profile: StrategyProfile, t: int = 1) -> float:
    """Smallest worst-case deposit that makes the profile an equilibrium.

    Solves the synthesis program at delta=0 under the min-max objective
    and reports the largest payment entry; +inf when even that program
    is infeasible.
    """
    params = SecurityParams(delta=0.0, t=t)
    try:
        scheme = synthesize(tree, info, profile, params, opts=SynthesisOptions(objective=OBJ_MINMAX))
    except Infeasible:
        return math.inf
    return float(scheme.matrix.max())
