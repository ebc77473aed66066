import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from momlab.errors import PreconditionError
from momlab.methods import (
    MethodKind,
    MethodParams,
    init_state,
    run,
    step,
    theorem1_params,
    theorem2_params,
)
from momlab.problems import EigenBounds, make_diagonal_problem, make_rotated_problem


FIG1_PARAMS = MethodParams(1.9 / 100.0, 0.85, MethodKind.HBM)


def _trajectories_agree(a, b, rtol):
    scale = np.linalg.norm(a.iterates[0])
    for xa, xb in zip(a.iterates, b.iterates):
        ref = max(np.linalg.norm(xa), np.linalg.norm(xb), 1e-3 * scale)
        if np.linalg.norm(xa - xb) > rtol * ref:
            return False
    return True


def test_params_validation():
    with pytest.raises(ValueError):
        MethodParams(0.0, 0.5, MethodKind.HBM)
    with pytest.raises(ValueError):
        MethodParams(0.1, 1.0, MethodKind.HBM)
    with pytest.raises(ValueError):
        MethodParams(0.1, -0.1, MethodKind.HBM)


def test_step_rejects_state_from_other_kind():
    p = make_diagonal_problem([1, 100])
    hbm_state = init_state(p, FIG1_PARAMS, [1.0, 1.0])
    with pytest.raises(ValueError, match="init_state"):
        step(p, MethodParams(0.019, 0.85, MethodKind.MM), hbm_state)
    from momlab.errors import DimensionMismatchError

    bad_dim = init_state(make_diagonal_problem([1, 2, 3]), FIG1_PARAMS, [1.0, 1.0, 1.0])
    with pytest.raises(DimensionMismatchError):
        step(p, FIG1_PARAMS, bad_dim)


def test_hbm_beta_zero_step_is_steepest_descent():
    p = make_diagonal_problem([1, 100])
    params = MethodParams(0.007, 0.0, MethodKind.HBM)
    s = step(p, params, init_state(p, params, [1.0, 1.0]))
    expected = np.array([1.0, 1.0]) - 0.007 * np.array([1.0, 100.0])
    assert np.array_equal(s.x_curr, expected)


def test_mm_equals_hbm_short():
    p = make_diagonal_problem([1, 100])
    mm = run(p, MethodParams(0.019, 0.85, MethodKind.MM), [1.0, 1.0], 20)
    hb = run(p, MethodParams(0.019, 0.85, MethodKind.HBM), [1.0, 1.0], 20)
    assert np.abs(mm.iterates - hb.iterates).max() <= 1e-12


def test_nag_forms_agree_short():
    # this step length makes the accelerated iteration diverge (alpha_i = 1.9),
    # so the agreement is scaled per step
    p = make_diagonal_problem([1, 100])
    two = run(p, MethodParams(0.019, 0.85, MethodKind.NAG_TWO_SEQUENCE), [1.0, 1.0], 20)
    compact = run(p, MethodParams(0.019, 0.85, MethodKind.NAG_COMPACT), [1.0, 1.0], 20)
    diffs = np.abs(two.iterates - compact.iterates).max(axis=1)
    scales = np.maximum(1.0, np.abs(two.iterates).max(axis=1))
    assert (diffs <= 1e-12 * scales).all()


def test_mm_equals_hbm_200_steps():
    p = make_diagonal_problem([1, 100])
    mm = run(p, MethodParams(0.019, 0.85, MethodKind.MM), [1.0, 1.0], 200)
    hb = run(p, MethodParams(0.019, 0.85, MethodKind.HBM), [1.0, 1.0], 200)
    assert _trajectories_agree(mm, hb, 1e-10)


def test_nag_forms_agree_200_steps():
    p = make_diagonal_problem([1, 100])
    beta = theorem2_params(EigenBounds(1.0, 100.0)).beta
    two = run(p, MethodParams(0.01, beta, MethodKind.NAG_TWO_SEQUENCE), [1.0, 1.0], 200)
    compact = run(p, MethodParams(0.01, beta, MethodKind.NAG_COMPACT), [1.0, 1.0], 200)
    assert _trajectories_agree(two, compact, 1e-10)


@settings(deadline=None, max_examples=25)
@given(
    lam=st.floats(1.5, 80.0),
    beta=st.floats(0.0, 0.95),
    step_factor=st.floats(0.05, 2.0),
    x0a=st.floats(-5.0, 5.0),
    x0b=st.floats(-5.0, 5.0),
)
def test_mm_hbm_equivalence_property(lam, beta, step_factor, x0a, x0b):
    p = make_diagonal_problem([1.0, lam])
    alpha = step_factor / lam
    mm = run(p, MethodParams(alpha, beta, MethodKind.MM), [x0a, x0b], 60)
    hb = run(p, MethodParams(alpha, beta, MethodKind.HBM), [x0a, x0b], 60)
    assert _trajectories_agree(mm, hb, 1e-10)


@settings(deadline=None, max_examples=25)
@given(
    lam=st.floats(1.5, 80.0),
    beta=st.floats(0.0, 0.95),
    step_factor=st.floats(0.05, 1.0),
    x0a=st.floats(-5.0, 5.0),
    x0b=st.floats(-5.0, 5.0),
)
def test_nag_equivalence_property(lam, beta, step_factor, x0a, x0b):
    p = make_diagonal_problem([1.0, lam])
    alpha = step_factor / lam
    two = run(p, MethodParams(alpha, beta, MethodKind.NAG_TWO_SEQUENCE), [x0a, x0b], 60)
    compact = run(p, MethodParams(alpha, beta, MethodKind.NAG_COMPACT), [x0a, x0b], 60)
    assert _trajectories_agree(two, compact, 1e-10)


def test_run_figure_setup_is_non_monotone():
    p = make_diagonal_problem([1, 100])
    d = run(p, FIG1_PARAMS, [1.0, 1.0], 100).distances
    assert np.any(d[1:] > d[:-1])
    assert d[-1] < d[0]


def test_run_from_minimizer_stays_put():
    p = make_diagonal_problem([1, 100])
    d = run(p, FIG1_PARAMS, [0.0, 0.0], 10).distances
    assert np.array_equal(d, np.zeros(11))


def test_one_d_full_step_flips_sign():
    # alpha * curvature = 2: the first step maps x0 to -x0, same distance
    p = make_diagonal_problem([1.0])
    traj = run(p, MethodParams(2.0, 0.5, MethodKind.HBM), [3.0], 1)
    assert traj.iterates[1] == pytest.approx([-3.0])
    assert traj.distances[1] == traj.distances[0]


def test_beta_zero_is_exact_gradient_descent():
    p = make_diagonal_problem([2, 5])
    alpha = 0.1
    traj = run(p, MethodParams(alpha, 0.0, MethodKind.HBM), [1.0, -2.0], 30)
    x = np.array([1.0, -2.0])
    for k in range(1, 31):
        x = x - alpha * (p.hessian @ x)
        assert np.array_equal(traj.iterates[k], x)


def test_first_step_never_increases_distance_with_full_step():
    rng = np.random.default_rng(7)
    for seed in range(5):
        eig = np.sort(rng.uniform(0.5, 60.0, size=4))
        p = make_rotated_problem(eig, seed=seed, shift=rng.standard_normal(4))
        params = MethodParams(2.0 / eig[-1], 0.9, MethodKind.HBM)
        traj = run(p, params, p.x_star + rng.standard_normal(4), 1)
        assert traj.distances[1] <= traj.distances[0] * (1.0 + 1e-12)


def test_trajectory_bookkeeping():
    p = make_diagonal_problem([1, 100])
    traj = run(p, FIG1_PARAMS, [1.0, 1.0], 5)
    assert traj.num_steps == 5
    assert traj.distances == pytest.approx(np.linalg.norm(traj.iterates, axis=1))
    assert np.array_equal(traj.averaged_final, 0.5 * (traj.iterates[4] + traj.iterates[5]))
    assert np.array_equal(traj.averaged_iterate(0), traj.iterates[0])
    avg = traj.averaged_distances()
    assert avg[0] == traj.distances[0]
    assert avg[3] == pytest.approx(np.linalg.norm(traj.averaged_iterate(3)))
    with pytest.raises(ValueError):
        run(p, FIG1_PARAMS, [1.0, 1.0], 0)


def test_theorem1_params_cond100():
    params = theorem1_params(EigenBounds(1.0, 100.0))
    assert params.kind is MethodKind.HBM
    assert params.alpha == pytest.approx(0.02, abs=1e-16)
    # frozen from a 50-digit mpmath evaluation of (1 - sqrt(2/100))^2
    assert params.beta == pytest.approx(0.7371572875253810, abs=1e-15)


def test_theorem1_params_matches_normalized_lower_step():
    # beta = (1 - sqrt(alpha * lower))^2 is the same rule
    bounds = EigenBounds(2.0, 80.0)
    params = theorem1_params(bounds)
    underbar = params.alpha * bounds.lower
    assert params.beta == pytest.approx((1.0 - math.sqrt(underbar)) ** 2, abs=1e-15)


def test_theorem1_params_boundary():
    params = theorem1_params(EigenBounds(1.0, 28.0))
    assert params.alpha == pytest.approx(2.0 / 28.0)
    assert params.beta == pytest.approx((1.0 - math.sqrt(1.0 / 14.0)) ** 2, abs=1e-15)


def test_theorem1_params_below_threshold():
    with pytest.raises(PreconditionError) as exc:
        theorem1_params(EigenBounds(1.0, 2.0))
    assert exc.value.threshold == 28.0


def test_theorem2_params_cond100():
    params = theorem2_params(EigenBounds(1.0, 100.0))
    assert params.kind is MethodKind.NAG_TWO_SEQUENCE
    assert params.alpha == pytest.approx(0.01, abs=1e-16)
    assert params.beta == pytest.approx(0.81 / 0.99, abs=1e-15)


@pytest.mark.parametrize("cond", [28.0, 100.0, 1000.0])
def test_theorem2_beta_forms_agree(cond):
    u = 1.0 / cond
    form1 = (1.0 - math.sqrt(u)) ** 2 / (1.0 - u)
    form2 = (math.sqrt(cond) - 1.0) ** 2 / (cond - 1.0)
    assert abs(form1 - form2) <= 1e-14
    assert theorem2_params(EigenBounds(1.0, cond)).beta == pytest.approx(form1, abs=1e-15)


def test_theorem2_params_below_threshold():
    with pytest.raises(PreconditionError):
        theorem2_params(EigenBounds(1.0, 4.0))


def test_convergence_under_theorem1_params():
    from momlab.complexity import theorem1_budget

    bounds = EigenBounds(1.0, 100.0)
    p = make_diagonal_problem([1, 100])
    budget = theorem1_budget(bounds.cond_bar, 0.01).budget
    traj = run(p, theorem1_params(bounds), [1.0, 1.0], budget)
    assert traj.distances[budget] < traj.distances[0]
