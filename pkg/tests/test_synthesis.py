"""Scheme synthesis: objectives, side constraints, and failure modes."""

import math

import numpy as np
import pytest

from paymech import (
    BadParameters,
    DimensionMismatch,
    GameTree,
    Infeasible,
    InfoStructure,
    SecurityParams,
    SynthesisOptions,
    branch,
    honest_outcome,
    implemented_utilities,
    leaf,
    minmax_deposit,
    scheme_diagnostics,
    synthesize,
    utility_matrix,
    verify,
)
from paymech.synthesis import HONEST_EXPECTED, OBJ_MINMAX, OBJ_WEIGHTED

from .helpers import solvable_instance


def greedy_two_leaf():
    """Owner strictly prefers the off-profile leaf; one shared symbol
    makes payments useless, so nothing can secure the profile."""
    tree = GameTree(("A",), branch("r", 0, [
        ("stay", leaf("good", (0.0,), (1.0,))),
        ("grab", leaf("bad", (5.0,), (1.0,))),
    ]))
    info = InfoStructure.from_tree(tree, ("only",))
    return tree, info, {"r": "stay"}


def test_options_validation():
    with pytest.raises(BadParameters):
        SynthesisOptions(objective="maximize_profit")
    with pytest.raises(BadParameters):
        SynthesisOptions(honest_form="sometimes")


def test_weighted_objective_needs_costs(commerce):
    with pytest.raises(BadParameters):
        synthesize(commerce.tree, commerce.info, commerce.profile,
                   SecurityParams(delta=1.0),
                   opts=SynthesisOptions(objective=OBJ_WEIGHTED))


def test_minmax_output_verifies_and_is_self_contained(commerce):
    params = SecurityParams(delta=1.0)
    scheme = synthesize(commerce.tree, commerce.info, commerce.profile, params)
    assert verify(commerce.tree, commerce.info, scheme, commerce.profile, params).passed
    diag = scheme_diagnostics(scheme)
    assert diag.self_contained
    assert scheme.matrix.max() <= commerce.scheme.matrix.max() + 1e-9


def test_zero_inflation_forces_exact_column_sums(commerce):
    params = SecurityParams(delta=1.0)
    scheme = synthesize(commerce.tree, commerce.info, commerce.profile, params,
                        opts=SynthesisOptions(zero_inflation=True))
    np.testing.assert_allclose(scheme.matrix.sum(axis=0), 0.0, atol=1e-8)
    assert verify(commerce.tree, commerce.info, scheme, commerce.profile, params).passed


def test_honest_invariance_leaves_intended_path_unpaid(commerce):
    params = SecurityParams(delta=1.0)
    scheme = synthesize(commerce.tree, commerce.info, commerce.profile, params,
                        opts=SynthesisOptions(honest_invariance=True))
    u = utility_matrix(commerce.tree)
    e = implemented_utilities(u, scheme, commerce.info)
    w, _ = honest_outcome(commerce.tree, "root", commerce.profile)
    support = np.nonzero(w > 0)[0]
    np.testing.assert_allclose(e[:, support], u[:, support], atol=1e-8)


def test_expected_honest_invariance_is_weaker(commerce):
    params = SecurityParams(delta=1.0)
    scheme = synthesize(commerce.tree, commerce.info, commerce.profile, params,
                        opts=SynthesisOptions(honest_invariance=True,
                                              honest_form=HONEST_EXPECTED))
    w, _ = honest_outcome(commerce.tree, "root", commerce.profile)
    np.testing.assert_allclose(scheme.matrix @ (commerce.info.phi @ w), 0.0, atol=1e-8)


def test_infinite_cost_pins_entries(commerce):
    params = SecurityParams(delta=1.0)
    cost = np.ones((2, 3))
    cost[0, 0] = np.inf
    cost[1, 2] = np.inf
    scheme = synthesize(commerce.tree, commerce.info, commerce.profile, params,
                        cost=cost, opts=SynthesisOptions(objective=OBJ_WEIGHTED))
    assert scheme.matrix[0, 0] == pytest.approx(0.0, abs=1e-9)
    assert scheme.matrix[1, 2] == pytest.approx(0.0, abs=1e-9)
    assert verify(commerce.tree, commerce.info, scheme, commerce.profile, params).passed


def test_cost_matrix_validation(commerce):
    with pytest.raises(BadParameters):
        synthesize(commerce.tree, commerce.info, commerce.profile,
                   SecurityParams(delta=1.0), cost=np.full((2, 3), -np.inf),
                   opts=SynthesisOptions(objective=OBJ_WEIGHTED))
    with pytest.raises(DimensionMismatch):
        synthesize(commerce.tree, commerce.info, commerce.profile,
                   SecurityParams(delta=1.0), cost=np.ones((3, 2)),
                   opts=SynthesisOptions(objective=OBJ_WEIGHTED))


def test_unsecurable_profile_is_infeasible():
    tree, info, profile = greedy_two_leaf()
    with pytest.raises(Infeasible):
        synthesize(tree, info, profile, SecurityParams(delta=0.0))
    assert minmax_deposit(tree, info, profile) == math.inf


def test_minmax_deposit_zero_for_already_secure_profile():
    tree = GameTree(("A",), branch("r", 0, [
        ("stay", leaf("good", (5.0,), (1.0, 0.0))),
        ("grab", leaf("bad", (0.0,), (0.0, 1.0))),
    ]))
    info = InfoStructure.from_tree(tree, ("fine", "blame"))
    assert minmax_deposit(tree, info, {"r": "stay"}) == pytest.approx(0.0, abs=1e-9)


def test_synthesis_random_solvable_instances_verify():
    rng = np.random.default_rng(55)
    for _ in range(25):
        tree, info, profile = solvable_instance(rng)
        params = SecurityParams(delta=float(rng.uniform(0, 2)))
        scheme = synthesize(tree, info, profile, params)
        report = verify(tree, info, scheme, profile, params)
        assert report.passed, report.violations


def test_minmax_value_nondecreasing_in_delta():
    rng = np.random.default_rng(57)
    for _ in range(10):
        tree, info, profile = solvable_instance(rng)
        values = []
        for delta in (0.0, 0.5, 1.0, 2.0):
            scheme = synthesize(tree, info, profile, SecurityParams(delta=delta))
            values.append(scheme.matrix.max())
        assert all(a <= b + 1e-7 for a, b in zip(values, values[1:])), values
