import json

import numpy as np
import pytest

import cablecycle as cc
from cablecycle import geom
from cablecycle.errors import DegenerateLoadError
from cablecycle.statics import equilibrium_wrench

from conftest import make_load, sampled_load


def test_load_model_validation():
    with pytest.raises(ValueError):
        make_load([[1, 0, 0], [0, 1, 0], [0, 0, 1]], mass=0.0)
    with pytest.raises(ValueError):
        make_load([[1, 0, 0], [0, 1, 0]])  # n < 3
    bad_inertia = np.eye(3)
    bad_inertia[0, 1] = 1e-6
    with pytest.raises(ValueError):
        cc.LoadModel(mass=1.0, inertia=bad_inertia, attachments=np.eye(3))
    with pytest.raises(ValueError):
        make_load(np.eye(3), rotation=2 * np.eye(3))


def test_load_model_accepts_diagonal_inertia():
    load = cc.LoadModel(mass=1.0, inertia=np.array([0.01, 0.02, 0.03]), attachments=np.eye(3))
    assert np.allclose(load.inertia, np.diag([0.01, 0.02, 0.03]))


def test_load_model_json_round_trip(tmp_path, square_load):
    path = tmp_path / "load.json"
    path.write_text(json.dumps(square_load.to_dict()))
    back = cc.LoadModel.from_json(path)
    assert back.mass == square_load.mass
    assert np.array_equal(back.attachments, square_load.attachments)
    assert np.array_equal(back.inertia, square_load.inertia)
    assert back.gravity == square_load.gravity


def test_grasp_matrix_identity_orientation_blocks():
    load = make_load([[1.0, 0, 0], [0, 1.0, 0], [0, 0, 1.0]])
    g = cc.grasp_matrix(load).matrix
    assert np.array_equal(g[:3, 0:3], np.eye(3))
    assert np.array_equal(g[3:, 0:3], geom.skew([1.0, 0, 0]))


def test_grasp_matrix_matches_direct_wrench_evaluation():
    rng = np.random.default_rng(3)
    load = sampled_load(4, seed=9, mass=2.0)
    load = cc.LoadModel(
        mass=load.mass,
        inertia=load.inertia,
        attachments=load.attachments,
        rotation=geom.exp_so3(rng.normal(size=3) * 0.4),
    )
    g = cc.grasp_matrix(load)
    f = rng.normal(size=12)
    wrench = g.matrix @ f
    force_sum = sum(f[3 * i : 3 * i + 3] for i in range(4))
    moment_sum = sum(
        np.cross(load.attachments[i], load.rotation.T @ f[3 * i : 3 * i + 3])
        for i in range(4)
    )
    assert np.allclose(wrench[:3], force_sum, atol=1e-12)
    assert np.allclose(wrench[3:], moment_sum, atol=1e-12)


def test_grasp_matrix_rank_six_for_generic_attachments():
    g = cc.grasp_matrix(sampled_load(4, seed=5))
    assert g.rank == 6


def test_equilibrium_offset_equilateral_triangle(triangle_load):
    g = cc.grasp_matrix(triangle_load)
    f0, f0_per = cc.equilibrium_offset(g, triangle_load)
    expected = triangle_load.mass * triangle_load.gravity / 3.0
    assert np.allclose(f0_per, np.array([[0.0, 0.0, expected]] * 3), atol=1e-9)
    assert f0.shape == (9,)


def test_equilibrium_offset_residual_and_minimum_norm():
    load = sampled_load(5, seed=13)
    g = cc.grasp_matrix(load)
    f0, _ = cc.equilibrium_offset(g, load)
    w0 = equilibrium_wrench(load)
    assert np.linalg.norm(g.matrix @ f0 - w0) <= 1e-9
    # normal-equations oracle for the minimum-norm solution
    gm = g.matrix
    oracle = gm.T @ np.linalg.solve(gm @ gm.T, w0)
    assert np.max(np.abs(f0 - oracle)) <= 1e-9


def test_equilibrium_offset_rejects_rank_deficient_grasp():
    # all attachments on one line: moments about that line are unreachable
    load = make_load([[x, 0.0, 0.0] for x in (-1.0, 0.0, 1.0, 2.0)])
    g = cc.grasp_matrix(load)
    assert g.rank < 6
    with pytest.raises(DegenerateLoadError):
        cc.equilibrium_offset(g, load)


def test_nullspace_matches_printed_block_pattern():
    load = sampled_load(4, seed=21)
    cycle = cc.HamiltonianCycle((1, 3, 4, 2))
    basis = cc.nullspace_basis(cycle, load)
    r = load.rotation
    b = lambda i, j: r @ (load.attachments[j - 1] - load.attachments[i - 1])
    z = np.zeros(3)
    expected = np.block(
        [
            [b(1, 3)[:, None], z[:, None], z[:, None], -b(2, 1)[:, None]],
            [z[:, None], z[:, None], -b(4, 2)[:, None], b(2, 1)[:, None]],
            [-b(1, 3)[:, None], b(3, 4)[:, None], z[:, None], z[:, None]],
            [z[:, None], -b(3, 4)[:, None], b(4, 2)[:, None], z[:, None]],
        ]
    )
    assert np.array_equal(basis.n_matrix, expected)


def test_nullspace_columns_annihilated_by_grasp():
    for seed, n in ((1, 3), (2, 4), (3, 5), (4, 6)):
        load = sampled_load(n, seed=seed)
        g = cc.grasp_matrix(load).matrix
        for cycle in cc.enumerate_cycles(n)[:6]:
            basis = cc.nullspace_basis(cycle, load)
            assert np.max(np.abs(g @ basis.n_matrix)) <= 1e-10


def test_nullspace_rank_and_delta_geometry(square_load):
    cycle = cc.HamiltonianCycle((1, 2, 3, 4))
    basis = cc.nullspace_basis(cycle, square_load)
    assert geom.matrix_rank(basis.n_matrix) == 4
    # delta_i points from vertex i to its predecessor, delta_bar_i to its successor
    att = square_load.attachments
    assert np.allclose(basis.delta[0], att[3] - att[0])
    assert np.allclose(basis.delta_bar[0], att[1] - att[0])


def test_attachment_offsets_antisymmetric():
    load = sampled_load(5, seed=2)
    r = load.rotation
    for i in range(5):
        for j in range(5):
            bij = r @ (load.attachments[j] - load.attachments[i])
            bji = r @ (load.attachments[i] - load.attachments[j])
            assert np.array_equal(bij, -bji)


def test_collinear_triple_flags_middle_vertex():
    # vertices 1,2,3 collinear; tour visits them consecutively
    load = make_load([[-1.0, 0, 0], [0.0, 0, 0], [1.0, 0, 0], [0.0, 2.0, 0.5]])
    cycle = cc.HamiltonianCycle((1, 2, 3, 4))
    basis = cc.nullspace_basis(cycle, load)
    f0_per = np.tile([0.0, 0.0, 2.4525], (4, 1))
    report = cc.check_admissibility(basis, f0_per)
    assert report.aligned_triple[1]  # middle vertex of the collinear run
    assert not report.admissible
    assert report.score == 0.0


def test_fully_collinear_attachments_drop_nullspace_rank():
    # one collinear triple alone does not lower rank(N): the other vertices'
    # independent pairs already force lambda = 0. With every attachment on a
    # line all blocks are parallel, so rank(N) = rank(H) = n - 1.
    load = make_load([[float(x), 0.0, 0.0] for x in (-2, -1, 1, 2)])
    cycle = cc.HamiltonianCycle((1, 2, 3, 4))
    basis = cc.nullspace_basis(cycle, load)
    assert geom.matrix_rank(basis.n_matrix) == 3


def test_square_all_cycles_admissible(square_load):
    g = cc.grasp_matrix(square_load)
    _, f0_per = cc.equilibrium_offset(g, square_load)
    for cycle in cc.enumerate_cycles(4):
        report = cc.check_admissibility(cc.nullspace_basis(cycle, square_load), f0_per)
        assert report.admissible
        assert not any(report.aligned_triple)
        assert not any(report.f0_in_span)


def test_admissibility_rank_matches_determinant_oracle():
    rng = np.random.default_rng(17)
    checked = 0
    for trial in range(100):
        load = sampled_load(4, seed=1000 + trial)
        g = cc.grasp_matrix(load)
        _, f0_per = cc.equilibrium_offset(g, load)
        cycle = cc.enumerate_cycles(4)[trial % 3]
        basis = cc.nullspace_basis(cycle, load)
        report = cc.check_admissibility(basis, f0_per)
        for i in range(4):
            m = np.column_stack([f0_per[i], basis.delta[i], basis.delta_bar[i]])
            scale = np.prod(np.linalg.norm(m, axis=0))
            full_rank = abs(np.linalg.det(m)) > 1e-9 * scale
            assert report.f0_in_span[i] == (not full_rank)
            checked += 1
    assert checked == 400


def test_f0_in_span_detected():
    # place attachments so vertex 1's span contains the vertical equilibrium force
    load = make_load(
        [[0.0, 0.0, 0.0], [1.0, 0.0, 1.0], [0.0, 1.0, -1.0], [1.0, 1.0, 3.0]]
    )
    cycle = cc.HamiltonianCycle((1, 2, 3, 4))
    basis = cc.nullspace_basis(cycle, load)
    # delta_1 ~ b4 - b1 wait: incoming edge of vertex 1 is (4,1): delta_1 = b1 - b4
    f0_fake = np.zeros((4, 3))
    f0_fake[0] = 0.3 * basis.delta[0] - 0.6 * basis.delta_bar[0]
    f0_fake[1:] = [0.0, 0.0, 1.0]
    report = cc.check_admissibility(basis, f0_fake)
    assert report.f0_in_span[0]
    assert not report.admissible


def test_score_cycle_square_ordering(square_load):
    g = cc.grasp_matrix(square_load)
    _, f0_per = cc.equilibrium_offset(g, square_load)
    scores = {}
    for cycle in cc.enumerate_cycles(4):
        scores[cycle.tour] = cc.score_cycle(cc.nullspace_basis(cycle, square_load), f0_per)
    assert scores[(1, 2, 3, 4)] == pytest.approx(1.0, abs=1e-12)
    assert scores[(1, 2, 4, 3)] == pytest.approx(np.sqrt(0.5), abs=1e-12)
    assert scores[(1, 3, 2, 4)] == pytest.approx(np.sqrt(0.5), abs=1e-12)
    assert scores[(1, 2, 3, 4)] > scores[(1, 2, 4, 3)]
    assert scores[(1, 2, 3, 4)] > scores[(1, 3, 2, 4)]
