"""Matrix norms and lower bounds on the largest deposit."""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .errors import NoConstraints, ValidationError
from .game_core import GameTree, StrategyProfile, utility_matrix
from .info_structure import InfoStructure
from .security import ConstraintSystem, SecurityParams, build_constraints
from .synthesis import minmax_deposit

POWER_REL_TOL = 1e-10
POWER_MAX_ITER = 10000


def spectral_norm(mat) -> float:
    """Largest singular value by power iteration on the Gram matrix.

    Deterministic: starts from a fixed pseudorandom vector and iterates
    until the Rayleigh quotient is stable to POWER_REL_TOL.
    """
    m = np.asarray(mat, dtype=np.float64)
    if m.ndim != 2:
        raise ValidationError(f"expected a matrix, got ndim {m.ndim}")
    if not np.all(np.isfinite(m)):
        raise ValidationError("matrix has non-finite entries")
    if m.size == 0 or not m.any():
        return 0.0
    # iterate on the smaller Gram matrix
    gram = m.T @ m if m.shape[1] <= m.shape[0] else m @ m.T
    k = gram.shape[0]
    v = np.random.default_rng(1729).standard_normal(k)
    v /= np.linalg.norm(v)
    lam = float(v @ gram @ v)
    for _ in range(POWER_MAX_ITER):
        w = gram @ v
        norm = np.linalg.norm(w)
        if norm == 0.0:
            return 0.0
        v = w / norm
        lam_next = float(v @ gram @ v)
        if abs(lam_next - lam) <= POWER_REL_TOL * max(abs(lam_next), 1e-300):
            lam = lam_next
            break
        lam = lam_next
    return math.sqrt(max(lam, 0.0))


@dataclass(frozen=True)
class NormReport:
    one_norm: float  # max absolute column sum
    two_norm: float  # largest singular value
    inf_norm: float  # max absolute row sum
    max_norm: float  # max absolute entry


def norms(mat) -> NormReport:
    m = np.asarray(mat, dtype=np.float64)
    if m.ndim != 2:
        raise ValidationError(f"expected a matrix, got ndim {m.ndim}")
    if not np.all(np.isfinite(m)):
        raise ValidationError("matrix has non-finite entries")
    if m.size == 0:
        return NormReport(0.0, 0.0, 0.0, 0.0)
    a = np.abs(m)
    return NormReport(
        one_norm=float(a.sum(axis=0).max()),
        two_norm=spectral_norm(m),
        inf_norm=float(a.sum(axis=1).max()),
        max_norm=float(a.max()),
    )


def constraint_utility_product(system: ConstraintSystem, u: np.ndarray) -> np.ndarray:
    """The alpha x n matrix pairing each constraint row with each player's
    utility row: entry (r, i) applies row r's per-leaf coefficients for
    player i to that player's utilities.  Its 2-norm drives the bound."""
    a = system.a.reshape(system.alpha, system.n, system.m)
    return np.einsum("rim,im->ri", a, u)


@dataclass(frozen=True)
class BoundReport:
    optimistic_bound: float
    conservative_bound: float
    delta_g: float
    delta: float
    t: int
    n: int
    num_symbols: int
    alpha: int
    au_norm: float


def deposit_lower_bound(
    tree: GameTree, info: InfoStructure, profile: StrategyProfile, params: SecurityParams
) -> BoundReport:
    """Norm-based lower bounds on the largest deposit of any scheme that
    secures the profile at (delta, t), plus the exact delta=0 optimum.

    Raises NoConstraints (carrying that optimum) when the instance
    generates no security rows and the bound is undefined.
    """
    system = build_constraints(tree, profile, params)
    delta_g = minmax_deposit(tree, info, profile, params.t)
    if system.alpha == 0:
        raise NoConstraints("no security constraints generated", min_max_deposit=delta_g)
    au = constraint_utility_product(system, utility_matrix(tree))
    au_norm = spectral_norm(au)
    n, s, alpha = tree.n, info.s, system.alpha
    # two readings of the rhs-vector norm: row-sum style and plain Euclidean
    optimistic = (params.delta * math.sqrt(n) + au_norm / math.sqrt(n * alpha)) / (2.0 * s)
    conservative = params.delta / (2.0 * s * math.sqrt(n)) + au_norm / (
        2.0 * s * math.sqrt(n * alpha)
    )
    return BoundReport(
        optimistic_bound=optimistic,
        conservative_bound=conservative,
        delta_g=delta_g,
        delta=params.delta,
        t=params.t,
        n=n,
        num_symbols=s,
        alpha=alpha,
        au_norm=au_norm,
    )
