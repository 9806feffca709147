"""Dense two-phase simplex for small linear programs.

Problem form: minimize c.x subject to G x >= h and A x = b, with every
variable free.  Free variables are split into differences of nonnegative
parts, inequalities get surplus variables, and phase one drives a full
set of artificial variables to zero.  Pivoting uses Bland's rule, so the
method terminates without cycling; this is meant for the small dense
systems produced elsewhere in the package, not for large-scale work.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import DimensionMismatch, NumericalBreakdown, ValidationError

FEAS_TOL = 1e-9
OPT_TOL = 1e-9
PIVOT_ELIGIBLE = 1e-9
PIVOT_BREAKDOWN = 1e-12


def _as_matrix(mat, ncols, name):
    if mat is None:
        return np.zeros((0, ncols))
    out = np.asarray(mat, dtype=np.float64)
    if out.size == 0:
        return out.reshape(0, ncols)
    if out.ndim != 2 or out.shape[1] != ncols:
        raise DimensionMismatch(f"{name} must have {ncols} columns, got shape {out.shape}")
    return out


def _as_vector(vec, length, name):
    if vec is None:
        if length:
            raise ValidationError(f"{name} is required when its matrix has {length} rows")
        return np.zeros(0)
    out = np.asarray(vec, dtype=np.float64).reshape(-1)
    if out.shape[0] != length:
        raise DimensionMismatch(f"{name} must have length {length}, got {out.shape[0]}")
    return out


@dataclass(frozen=True, eq=False)
class LinearProgram:
    """minimize c.x  s.t.  g @ x >= h,  a_eq @ x = b_eq,  x free."""

    c: np.ndarray
    g: np.ndarray = None
    h: np.ndarray = None
    a_eq: np.ndarray = None
    b_eq: np.ndarray = None

    def __post_init__(self):
        c = np.asarray(self.c, dtype=np.float64).reshape(-1)
        g = _as_matrix(self.g, c.shape[0], "g")
        h = _as_vector(self.h, g.shape[0], "h")
        a_eq = _as_matrix(self.a_eq, c.shape[0], "a_eq")
        b_eq = _as_vector(self.b_eq, a_eq.shape[0], "b_eq")
        for name, arr in (("c", c), ("g", g), ("h", h), ("a_eq", a_eq), ("b_eq", b_eq)):
            if not np.all(np.isfinite(arr)):
                raise ValidationError(f"linear program field {name} has non-finite entries")
        for name, arr in (("c", c), ("g", g), ("h", h), ("a_eq", a_eq), ("b_eq", b_eq)):
            object.__setattr__(self, name, arr)

    @property
    def num_vars(self) -> int:
        return self.c.shape[0]


@dataclass(frozen=True, eq=False)
class LpOutcome:
    status: str  # "optimal" | "infeasible" | "unbounded"
    x: np.ndarray | None = None
    value: float | None = None
    dual_ineq: np.ndarray | None = None
    dual_eq: np.ndarray | None = None

    @property
    def is_optimal(self) -> bool:
        return self.status == "optimal"


def _pivot(tableau, row, col):
    piv = tableau[row, col]
    if abs(piv) < PIVOT_BREAKDOWN:
        raise NumericalBreakdown(f"pivot element {piv!r} below breakdown threshold")
    tableau[row] /= piv
    for r in range(tableau.shape[0]):
        if r != row and tableau[r, col] != 0.0:
            tableau[r] -= tableau[r, col] * tableau[row]


def _run(tableau, basis, enterable, max_iter):
    """Iterate to optimality with Bland's rule.

    The last tableau row holds reduced costs, the last column the rhs.
    Returns "optimal" or "unbounded".
    """
    nrows = tableau.shape[0] - 1
    for _ in range(max_iter):
        enter = -1
        for j in range(tableau.shape[1] - 1):
            if enterable[j] and tableau[-1, j] < -OPT_TOL:
                enter = j
                break
        if enter < 0:
            return "optimal"
        col = tableau[:nrows, enter]
        best_ratio = None
        for r in range(nrows):
            if col[r] > PIVOT_ELIGIBLE:
                ratio = tableau[r, -1] / col[r]
                if best_ratio is None or ratio < best_ratio - 1e-12:
                    best_ratio = ratio
        if best_ratio is None:
            return "unbounded"
        leave = -1
        for r in range(nrows):
            if col[r] > PIVOT_ELIGIBLE:
                ratio = tableau[r, -1] / col[r]
                if ratio <= best_ratio + 1e-12 * (1.0 + abs(best_ratio)):
                    if leave < 0 or basis[r] < basis[leave]:
                        leave = r
        _pivot(tableau, leave, enter)
        basis[leave] = enter
    raise NumericalBreakdown("simplex iteration limit exceeded")


def solve(lp: LinearProgram) -> LpOutcome:
    """Solve the program; outcome status is one of optimal, infeasible, unbounded."""
    d = lp.num_vars
    p = lp.g.shape[0]
    q = lp.a_eq.shape[0]
    nrows = p + q
    nstruct = 2 * d + p

    rows = np.vstack([lp.g, lp.a_eq]) if nrows else np.zeros((0, d))
    rhs = np.concatenate([lp.h, lp.b_eq])
    # structural columns: positive parts, negative parts, surplus
    a0 = np.zeros((nrows, nstruct))
    a0[:, :d] = rows
    a0[:, d : 2 * d] = -rows
    for r in range(p):
        a0[r, 2 * d + r] = -1.0
    signs = np.where(rhs < 0, -1.0, 1.0)
    a0 *= signs[:, None]
    b0 = rhs * signs

    ncols = nstruct + nrows
    tableau = np.zeros((nrows + 1, ncols + 1))
    tableau[:nrows, :nstruct] = a0
    tableau[:nrows, -1] = b0
    for r in range(nrows):
        tableau[r, nstruct + r] = 1.0
    basis = [nstruct + r for r in range(nrows)]
    # canonical phase-one objective: minimize the artificial total
    tableau[-1, :] = 0.0
    for r in range(nrows):
        tableau[-1, :] -= tableau[r, :]
    tableau[-1, nstruct:ncols] = 0.0

    enterable = np.ones(ncols, dtype=bool)
    enterable[nstruct:] = False  # artificials never enter
    max_iter = 2000 + 200 * (nrows + ncols)
    _run(tableau, basis, enterable, max_iter)

    feas_scale = 1.0 + (np.abs(b0).max() if b0.size else 0.0)
    if -tableau[-1, -1] > FEAS_TOL * feas_scale:
        return LpOutcome("infeasible")

    # clear leftover artificials from the basis; drop rows with no pivot
    keep = list(range(nrows))
    for r in range(nrows):
        if basis[r] >= nstruct:
            piv_col = -1
            for j in range(nstruct):
                if abs(tableau[r, j]) > PIVOT_ELIGIBLE:
                    piv_col = j
                    break
            if piv_col >= 0:
                _pivot(tableau, r, piv_col)
                basis[r] = piv_col
            else:
                keep.remove(r)
    if len(keep) < nrows:
        rows_idx = keep + [nrows]
        tableau = tableau[rows_idx]
        basis = [basis[r] for r in keep]
    tableau = np.hstack([tableau[:, :nstruct], tableau[:, -1:]])

    c_struct = np.concatenate([lp.c, -lp.c, np.zeros(p)])
    tableau[-1, :-1] = c_struct
    tableau[-1, -1] = 0.0
    for r, b in enumerate(basis):
        if c_struct[b] != 0.0:
            tableau[-1, :] -= c_struct[b] * tableau[r, :]

    enterable = np.ones(nstruct, dtype=bool)
    status = _run(tableau, basis, enterable, max_iter)
    if status == "unbounded":
        return LpOutcome("unbounded")

    x_struct = np.zeros(nstruct)
    for r, b in enumerate(basis):
        x_struct[b] = tableau[r, -1]
    x = x_struct[:d] - x_struct[d : 2 * d]
    value = float(lp.c @ x)

    recheck = 1e-7 * (1.0 + (np.abs(rhs).max() if rhs.size else 0.0))
    if p and np.any(lp.g @ x - lp.h < -recheck):
        raise NumericalBreakdown("optimal basis violates an inequality on recheck")
    if q and np.any(np.abs(lp.a_eq @ x - lp.b_eq) > recheck):
        raise NumericalBreakdown("optimal basis violates an equality on recheck")

    dual_ineq, dual_eq = _duals(lp, a0, c_struct, keep, basis, p, q)
    return LpOutcome("optimal", x, value, dual_ineq, dual_eq)


def _duals(lp, a0, c_struct, keep, basis, p, q):
    """Multipliers from the optimal basis, mapped back to the input rows."""
    if not basis:
        y = np.zeros(0)
    else:
        try:
            bmat = a0[keep][:, basis]
            y = np.linalg.solve(bmat.T, c_struct[list(basis)])
        except np.linalg.LinAlgError:
            return None, None
    signs = np.where(np.concatenate([lp.h, lp.b_eq]) < 0, -1.0, 1.0)
    full = np.zeros(p + q)
    full[keep] = y
    full *= signs  # undo the row scaling
    return full[:p].copy(), full[p:].copy()
