"""Small fixed-size linear algebra helpers: skew matrices, SO(3) utilities,
and an SVD-backed pseudoinverse with a shared rank threshold.

Every other module builds on these, so the numerical conventions live here:
singular values below ``RANK_RTOL`` times the largest one are treated as
zero, both for pseudoinversion and for rank decisions.
"""

from __future__ import annotations

import math

import numpy as np

# Relative singular-value cutoff shared by pseudoinverse() and matrix_rank().
RANK_RTOL = 1e-10

E3 = np.array([0.0, 0.0, 1.0])


def as_vec3(v) -> np.ndarray:
    """Coerce to a finite float vector of shape (3,)."""
    a = np.asarray(v, dtype=float).reshape(3)
    if not np.all(np.isfinite(a)):
        raise ValueError(f"vector has non-finite components: {a}")
    return a


def skew(v) -> np.ndarray:
    """Skew-symmetric matrix S(v) such that S(v) @ w == cross(v, w)."""
    x, y, z = np.asarray(v, dtype=float).reshape(3)
    return np.array([[0.0, -z, y], [z, 0.0, -x], [-y, x, 0.0]])


def pseudoinverse(m, rtol: float = RANK_RTOL) -> np.ndarray:
    """Moore-Penrose inverse via SVD, truncating singular values below
    ``rtol`` times the largest one."""
    m = np.asarray(m, dtype=float)
    if not np.all(np.isfinite(m)):
        raise ValueError("matrix has non-finite entries")
    return np.linalg.pinv(m, rcond=rtol)


def matrix_rank(m, rtol: float = RANK_RTOL) -> int:
    """Numerical rank with the same relative cutoff as pseudoinverse()."""
    m = np.asarray(m, dtype=float)
    s = np.linalg.svd(m, compute_uv=False)
    if s.size == 0:
        return 0
    return int(np.count_nonzero(s > rtol * s[0]))


def is_rotation(r, tol: float = 1e-9) -> bool:
    """True if r is orthonormal with determinant +1, within tol."""
    r = np.asarray(r, dtype=float)
    if r.shape != (3, 3) or not np.all(np.isfinite(r)):
        return False
    if np.max(np.abs(r.T @ r - np.eye(3))) > tol:
        return False
    return abs(np.linalg.det(r) - 1.0) <= tol


def require_rotation(r, tol: float = 1e-9) -> np.ndarray:
    r = np.asarray(r, dtype=float)
    if not is_rotation(r, tol):
        raise ValueError("matrix is not a rotation (orthonormality/det check failed)")
    return r


def orthonormalize(r) -> np.ndarray:
    """Project a near-rotation matrix back onto SO(3) (polar factor)."""
    u, _, vt = np.linalg.svd(np.asarray(r, dtype=float))
    d = np.sign(np.linalg.det(u @ vt))
    return u @ np.diag([1.0, 1.0, d]) @ vt


def rot_z(angle: float) -> np.ndarray:
    """Elementary rotation about the world z axis."""
    c, s = math.cos(angle), math.sin(angle)
    return np.array([[c, -s, 0.0], [s, c, 0.0], [0.0, 0.0, 1.0]])


def exp_so3(v) -> np.ndarray:
    """Rodrigues' formula: exponential of a rotation vector."""
    v = np.asarray(v, dtype=float).reshape(3)
    theta = float(np.linalg.norm(v))
    s = skew(v)
    if theta < 1e-12:
        return np.eye(3) + s + 0.5 * (s @ s)
    return (
        np.eye(3)
        + (math.sin(theta) / theta) * s
        + ((1.0 - math.cos(theta)) / theta**2) * (s @ s)
    )


def euler_zyx(r) -> tuple[float, float, float]:
    """Extract (yaw, pitch, roll) from R = Rz(yaw) @ Ry(pitch) @ Rx(roll).

    Near the pitch singularity (|pitch| = pi/2) roll is set to zero and yaw
    absorbs the remaining in-plane angle.
    """
    r = np.asarray(r, dtype=float)
    sp = -r[2, 0]
    if abs(sp) < 1.0 - 1e-12:
        pitch = math.asin(sp)
        yaw = math.atan2(r[1, 0], r[0, 0])
        roll = math.atan2(r[2, 1], r[2, 2])
    else:
        pitch = math.copysign(math.pi / 2.0, sp)
        yaw = math.atan2(-r[0, 1], r[1, 1])
        roll = 0.0
    return yaw, pitch, roll
