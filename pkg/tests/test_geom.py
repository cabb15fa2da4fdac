import numpy as np
import pytest

from cablecycle import geom


def random_rotation(rng):
    return geom.exp_so3(rng.normal(size=3))


def test_skew_cross_product_identity():
    e1, e2, e3 = np.eye(3)
    assert np.allclose(geom.skew(e3) @ e1, e2)
    rng = np.random.default_rng(0)
    for _ in range(20):
        v, w = rng.normal(size=3), rng.normal(size=3)
        assert np.allclose(geom.skew(v) @ w, np.cross(v, w), atol=1e-14)


def test_skew_annihilates_its_argument():
    v = np.array([1.0, 2.0, 3.0])
    assert np.array_equal(geom.skew(v) @ v, np.zeros(3))


def test_skew_antisymmetry_identities():
    a = np.array([1.0, 0.0, 0.0])
    b = np.array([0.0, 1.0, 0.0])
    assert np.allclose(geom.skew(a) @ b, -(geom.skew(b) @ a))
    s = geom.skew(np.array([0.3, -0.7, 2.0]))
    assert np.allclose(s, -s.T)


def test_pseudoinverse_identity_and_diagonal():
    assert np.allclose(geom.pseudoinverse(np.eye(3)), np.eye(3))
    assert np.allclose(geom.pseudoinverse(np.diag([2.0, 0.0])), np.diag([0.5, 0.0]))


def test_pseudoinverse_full_row_rank_right_inverse():
    rng = np.random.default_rng(1)
    m = rng.normal(size=(6, 12))
    assert np.linalg.svd(m, compute_uv=False)[5] > 1e-6  # full row rank draw
    assert np.max(np.abs(m @ geom.pseudoinverse(m) - np.eye(6))) <= 1e-9


@pytest.mark.parametrize("shape,seed", [((6, 12), 2), ((5, 3), 3), ((4, 4), 4)])
def test_pseudoinverse_moore_penrose_identities(shape, seed):
    rng = np.random.default_rng(seed)
    m = rng.normal(size=shape)
    if shape == (4, 4):  # force rank deficiency
        m[3] = m[0] + m[1]
    p = geom.pseudoinverse(m)
    assert np.max(np.abs(m @ p @ m - m)) <= 1e-9
    assert np.max(np.abs(p @ m @ p - p)) <= 1e-9
    assert np.max(np.abs((m @ p) - (m @ p).T)) <= 1e-9
    assert np.max(np.abs((p @ m) - (p @ m).T)) <= 1e-9


def test_pseudoinverse_gives_minimum_norm_solution():
    rng = np.random.default_rng(5)
    m = rng.normal(size=(4, 9))
    y = rng.normal(size=4)
    x = geom.pseudoinverse(m) @ y
    assert np.allclose(m @ x, y, atol=1e-10)
    null_proj = np.eye(9) - geom.pseudoinverse(m) @ m
    for _ in range(100):
        z = x + null_proj @ rng.normal(size=9)
        assert np.allclose(m @ z, y, atol=1e-9)
        assert np.linalg.norm(x) <= np.linalg.norm(z) + 1e-12


def test_pseudoinverse_rejects_non_finite():
    with pytest.raises(ValueError):
        geom.pseudoinverse(np.array([[np.nan, 0.0], [0.0, 1.0]]))


def test_matrix_rank_relative_threshold():
    assert geom.matrix_rank(np.diag([1.0, 1e-12])) == 1
    assert geom.matrix_rank(np.diag([1.0, 1e-8])) == 2
    assert geom.matrix_rank(np.zeros((3, 3))) == 0


def test_rotation_preserves_norm():
    rng = np.random.default_rng(6)
    for _ in range(50):
        r = random_rotation(rng)
        v = rng.normal(size=3)
        assert abs(np.linalg.norm(r @ v) - np.linalg.norm(v)) <= 1e-12


def test_is_rotation_and_orthonormalize():
    rng = np.random.default_rng(7)
    r = random_rotation(rng)
    assert geom.is_rotation(r)
    drifted = r + 1e-7 * rng.normal(size=(3, 3))
    fixed = geom.orthonormalize(drifted)
    assert geom.is_rotation(fixed, tol=1e-12)
    assert not geom.is_rotation(2.0 * np.eye(3))
    assert not geom.is_rotation(np.diag([1.0, 1.0, -1.0]))  # det = -1
    with pytest.raises(ValueError):
        geom.require_rotation(np.zeros((3, 3)))


def test_rot_z():
    assert np.allclose(geom.rot_z(np.pi / 2) @ [1, 0, 0], [0, 1, 0], atol=1e-15)


def test_euler_zyx_round_trip():
    rng = np.random.default_rng(8)
    for _ in range(50):
        yaw, pitch, roll = rng.uniform([-np.pi, -1.4, -np.pi], [np.pi, 1.4, np.pi])
        r = geom.rot_z(yaw) @ geom.exp_so3([0.0, pitch, 0.0]) @ geom.exp_so3([roll, 0.0, 0.0])
        got = geom.euler_zyx(r)
        assert np.allclose(got, (yaw, pitch, roll), atol=1e-9)


def test_as_vec3_rejects_non_finite():
    with pytest.raises(ValueError):
        geom.as_vec3([1.0, np.inf, 0.0])
