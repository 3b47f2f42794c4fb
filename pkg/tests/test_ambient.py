import numpy as np
import pytest
from itertools import combinations

from lmcflab import ambient
from lmcflab.ambient import (LagrangianFrame, lagrangian_angle, plane_frame,
                             gaussian_area, omega, liouville,
                             complex_to_real, real_to_complex)
from lmcflab.errors import LagrangianConditionError, TruncationError
from lmcflab import fixtures


def test_dlambda_equals_omega_randomized():
    # lambda is linear in the base point, so central differences are exact
    # at any step; h of order one keeps the 1/h roundoff below 1e-12
    rng = np.random.default_rng(0)
    h = 0.5
    worst = 0.0
    for _ in range(10_000):
        n = rng.integers(1, 4)
        z = rng.normal(size=n) + 1j * rng.normal(size=n)
        u = rng.normal(size=n) + 1j * rng.normal(size=n)
        v = rng.normal(size=n) + 1j * rng.normal(size=n)
        dlam = ((liouville(z + h * u, v) - liouville(z - h * u, v))
                - (liouville(z + h * v, u) - liouville(z - h * v, u))) \
            / (2.0 * h)
        worst = max(worst, abs(dlam - omega(u, v)))
    assert worst < 1e-12


def _pfaffian(a):
    n = a.shape[0]
    if n == 0:
        return 1.0
    if n % 2:
        return 0.0
    total = 0.0
    for j in range(1, n):
        idx = [k for k in range(n) if k not in (0, j)]
        minor = a[np.ix_(idx, idx)]
        total += (-1.0) ** (j - 1) * a[0, j] * _pfaffian(minor)
    return total


def _omega_top(vectors):
    """omega^n / n! evaluated on 2n vectors = Pf(omega(v_i, v_j))."""
    m = len(vectors)
    a = np.zeros((m, m))
    for i in range(m):
        for j in range(m):
            a[i, j] = omega(vectors[i], vectors[j])
    return _pfaffian(a)


def _omega_wedge_omegabar(vectors):
    """(Omega wedge conj(Omega))(v_1..v_2n) by the shuffle expansion."""
    m = len(vectors)
    n = m // 2
    total = 0.0 + 0.0j
    base = list(range(m))
    for subset in combinations(base, n):
        rest = [k for k in base if k not in subset]
        perm = list(subset) + rest
        sign = _perm_sign(perm)
        om = ambient.holomorphic_volume([vectors[k] for k in subset])
        total += sign * om * np.conj(
            ambient.holomorphic_volume([vectors[k] for k in rest]))
    return total


def _perm_sign(perm):
    perm = list(perm)
    sign = 1
    for i in range(len(perm)):
        while perm[i] != i:
            j = perm[i]
            perm[i], perm[j] = perm[j], perm[i]
            sign = -sign
    return sign


@pytest.mark.parametrize("n", [1, 2, 3])
def test_omega_wedge_proportional_to_top_power(n):
    # Omega ^ conj(Omega) = c_n omega^n / n! with the standard constant
    # c_n = (-2i)^n (-1)^{n(n-1)/2}
    rng = np.random.default_rng(n)
    std = [np.eye(n, dtype=complex)[k] for k in range(n)]
    std += [1j * v for v in std]
    c_ref = _omega_wedge_omegabar(std) / _omega_top(std)
    c_exact = (-2.0j) ** n * (-1.0) ** (n * (n - 1) // 2)
    assert abs(c_ref - c_exact) < 1e-12
    for _ in range(5):
        vecs = [rng.normal(size=n) + 1j * rng.normal(size=n)
                for _ in range(2 * n)]
        top = _omega_top(vecs)
        if abs(top) < 1e-6:
            continue
        ratio = _omega_wedge_omegabar(vecs) / top
        assert abs(ratio - c_exact) < 1e-9 * max(1.0, abs(top))


def test_angle_of_real_plane_is_zero():
    assert abs(lagrangian_angle(plane_frame(0.0, 3))) < 1e-14


def test_angle_of_rotated_plane_is_phase_sum_mod_2pi():
    phases = np.array([0.3, 1.0, np.pi - 1.1])
    th = lagrangian_angle(plane_frame(phases))
    gap = (th - np.sum(phases)) % (2.0 * np.pi)
    assert min(gap, 2.0 * np.pi - gap) < 1e-12


def test_non_lagrangian_frame_rejected_with_residual():
    vecs = np.array([[1.0 + 0.0j, 0.0], [0.1j, 1.0]])
    frame = LagrangianFrame(np.zeros(2, complex), vecs)
    with pytest.raises(LagrangianConditionError) as err:
        lagrangian_angle(frame)
    assert err.value.omega_residual > 0.05


def test_angle_invariant_under_oriented_reframing():
    rng = np.random.default_rng(3)
    q, _ = np.linalg.qr(rng.normal(size=(3, 3)) + 1j * rng.normal(size=(3, 3)))
    frame = LagrangianFrame(np.zeros(3, complex), q.T)
    th = lagrangian_angle(frame)
    g = rng.normal(size=(3, 3))
    g = g @ g.T + 3.0 * np.eye(3)    # positive determinant mixing
    frame2 = LagrangianFrame(np.zeros(3, complex), g @ q.T)
    assert abs(lagrangian_angle(frame2) - th) < 1e-10


def test_gaussian_area_of_lines():
    assert abs(gaussian_area(fixtures.line()) - 1.0) < 1e-12
    assert abs(gaussian_area(fixtures.line_pair()) - 2.0) < 1e-12
    b = 1.3
    assert abs(gaussian_area(fixtures.line(offset=b))
               - np.exp(-b * b / 4.0)) < 1e-10


def test_gaussian_area_scaling_compatibility():
    curve = fixtures.twoline_desing(neck_scale=0.3, extent=20.0, m=901)
    x0 = np.array([0.07, -0.12])
    r = 0.73
    a1 = gaussian_area(curve, center=x0, scale=r, tol=1e-8)
    moved = curve.translated(x0).scaled(1.0 / r)
    a2 = gaussian_area(moved, tol=1e-8)
    assert abs(a1 - a2) < 1e-10


def test_gaussian_area_truncation_error_carries_estimate():
    short = fixtures.line(extent=4.0, m=101)
    with pytest.raises(TruncationError) as err:
        gaussian_area(short, tol=1e-12)
    assert err.value.estimate > 1e-12


def test_real_complex_coordinate_roundtrip():
    z = np.array([1.0 + 2.0j, -0.5 + 0.25j])
    assert np.allclose(real_to_complex(complex_to_real(z)), z)
