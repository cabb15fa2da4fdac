import dataclasses
import math

import numpy as np
import pytest

import cablecycle as cc
from cablecycle import verify
from cablecycle.verify import grasp_matrix_ref, nullspace_ref, verify_nullspace, verify_plan

from conftest import make_load, sampled_load


def test_full_pipeline_all_flags_pass():
    load = sampled_load(5, seed=3)
    for cycle in cc.enumerate_cycles(5)[:4]:
        plan = cc.build_plan(load, cycle, cc.color_edges(cycle, "universal"))
        report = verify_plan(plan, samples_per_period=2000)
        assert report.passed, report.to_dict()
        assert report.statics_residual_max <= 1e-9
        assert report.smoothness_defect <= 1e-6
        assert np.all(report.tension_min > 0)


def test_minimum_samples_enforced(square_load):
    cycle = cc.HamiltonianCycle((1, 2, 3, 4))
    plan = cc.build_plan(square_load, cycle, cc.color_edges(cycle))
    with pytest.raises(ValueError):
        verify_plan(plan, samples_per_period=500)


def test_tampered_offset_fails_tension_flag(square_load):
    cycle = cc.HamiltonianCycle((1, 2, 3, 4))
    plan = cc.build_plan(square_load, cycle, cc.color_edges(cycle))
    n_hat = np.cross(plan.delta[0], plan.delta_bar[0])
    n_hat /= np.linalg.norm(n_hat)
    a = plan.library.amplitude
    f_tilde0 = a * math.cos(plan.beta[0]) * plan.delta[0] + a * math.cos(
        plan.beta_bar[0]
    ) * plan.delta_bar[0]
    f0 = plan.f0.copy()
    f0[0] = 1e-8 * n_hat - f_tilde0
    tampered = dataclasses.replace(plan, f0=f0)
    report = verify_plan(tampered, samples_per_period=2000)
    assert not report.tension_ok
    assert not report.passed
    # the offset change also breaks the equilibrium wrench
    assert not report.statics_ok


def test_identical_phases_fail_speed_flag(square_load):
    cycle = cc.HamiltonianCycle((1, 2, 3, 4))
    plan = cc.build_plan(square_load, cycle, cc.color_edges(cycle))
    tampered = dataclasses.replace(plan, beta_bar=plan.beta.copy())
    with pytest.warns(RuntimeWarning):
        report = verify_plan(tampered, samples_per_period=2000)
    assert not report.speed_ok
    assert np.all(report.bound_speed_min == 0.0)
    # the derivative stalls at the shared stationary instants
    assert report.speed_min.min() < 1e-3
    assert not report.passed


def test_nullspace_residual_small_for_any_cycle():
    for n, seed in ((3, 5), (4, 6), (5, 7)):
        load = sampled_load(n, seed=seed)
        for cycle in cc.enumerate_cycles(n)[:5]:
            assert verify_nullspace(load, cycle) <= 1e-10


def test_nullspace_reference_matches_printed_example():
    load = sampled_load(4, seed=21)
    cycle = cc.HamiltonianCycle((1, 3, 4, 2))
    assert verify_nullspace(load, cycle) <= 1e-12
    # the reference construction agrees with the production one exactly
    basis = cc.nullspace_basis(cycle, load)
    ref = nullspace_ref(load.attachments, load.rotation, cycle)
    assert np.array_equal(basis.n_matrix, ref)


def test_nullspace_negative_control():
    load = sampled_load(4, seed=8)
    cycle = cc.HamiltonianCycle((1, 2, 3, 4))
    g = grasp_matrix_ref(load.attachments, load.rotation)
    perturbed = load.attachments.copy()
    perturbed[2, 0] += 1e-3
    n_bad = nullspace_ref(perturbed, load.rotation, cycle)
    assert np.max(np.linalg.norm(g @ n_bad, axis=0)) > 1e-7


def test_grasp_reference_agrees_with_production():
    load = sampled_load(6, seed=9)
    assert np.array_equal(
        grasp_matrix_ref(load.attachments, load.rotation), cc.grasp_matrix(load).matrix
    )


def test_speed_bound_agreement_on_random_plans():
    rng = np.random.default_rng(23)
    count = 0
    for seed in range(50):
        n = int(rng.integers(4, 7))
        load = sampled_load(n, seed=300 + seed)
        cycles = cc.enumerate_cycles(n)
        cycle = cycles[int(rng.integers(0, len(cycles)))]
        mode = "universal" if seed % 2 else "minimal"
        plan = cc.build_plan(load, cycle, cc.color_edges(cycle, mode))
        report = verify_plan(plan, samples_per_period=2000)
        assert report.passed
        assert np.all(report.bound_speed_min <= report.speed_min * 1.01)
        count += 1
    assert count == 50


def test_verification_is_pure(square_load):
    cycle = cc.HamiltonianCycle((1, 2, 3, 4))
    plan = cc.build_plan(square_load, cycle, cc.color_edges(cycle))
    a = verify_plan(plan, samples_per_period=1500).to_dict()
    b = verify_plan(plan, samples_per_period=1500).to_dict()
    assert a == b


def test_report_serialization_shape(square_load):
    cycle = cc.HamiltonianCycle((1, 2, 3, 4))
    plan = cc.build_plan(square_load, cycle, cc.color_edges(cycle))
    d = verify_plan(plan, samples_per_period=1000).to_dict()
    assert d["passed"] is True
    assert set(d["flags"]) == {"smooth", "statics", "tension", "speed"}
    assert len(d["tension_min_n"]) == 4
