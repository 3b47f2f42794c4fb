"""Ambient Calabi-Yau structure on C^n and Lagrangian-angle primitives.

Points of C^n are represented as complex (n,) arrays. The real coordinate
order used for serialization and finite differences is
(Re z_1..Re z_n, Im z_1..Im z_n). The structure forms are

    omega(u, v)  = Im <u, v>           (<u,v> = sum conj(u_j) v_j)
    Omega(v_1..v_n) = det [v_1 ... v_n]
    lambda_z(u)  = (1/2) Im <z, u>     (Liouville form, d lambda = omega)

so omega = sum dx_j ^ dy_j and lambda = (1/2) sum (x_j dy_j - y_j dx_j) in
the real coordinates.
"""

import numpy as np
from dataclasses import dataclass, field

from .errors import LagrangianConditionError, ParameterError, TruncationError
from .quadrature import gaussian_tail_bound

OMEGA_TOL = 1e-8


def omega(u, v):
    """Symplectic pairing of two tangent vectors (complex (n,) arrays)."""
    return float(np.imag(np.vdot(u, v)))


def holomorphic_volume(vectors):
    """Omega evaluated on n tangent vectors (rows or columns both (n,))."""
    return complex(np.linalg.det(np.column_stack(vectors)))


def liouville(z, u):
    """Liouville 1-form lambda at base point z on tangent u."""
    return 0.5 * float(np.imag(np.vdot(z, u)))


def real_to_complex(xy):
    """(2n,) real vector in (Re.., Im..) order -> complex (n,) vector."""
    xy = np.asarray(xy, float)
    n = xy.size // 2
    return xy[:n] + 1j * xy[n:]


def complex_to_real(z):
    z = np.asarray(z, complex)
    return np.concatenate([z.real, z.imag])


@dataclass
class AmbientStructure:
    """Standard Euclidean Calabi-Yau structure on C^n."""

    n: int

    def __post_init__(self):
        if self.n < 1:
            raise ParameterError("dimension must be a positive integer")

    omega = staticmethod(omega)
    holomorphic_volume = staticmethod(holomorphic_volume)
    liouville = staticmethod(liouville)

    def liouville_covector(self, z):
        """lambda at z as a real covector in (Re.., Im..) coordinate order."""
        z = np.asarray(z, complex)
        # lambda(u) = 1/2 Im<z,u> = 1/2 (x . du_y - y . du_x)
        return 0.5 * np.concatenate([-z.imag, z.real])


@dataclass
class LagrangianFrame:
    """Base point plus n tangent vectors spanning a Lagrangian n-plane."""

    base: np.ndarray
    vectors: np.ndarray  # (n, n) complex, rows are tangent vectors

    def __post_init__(self):
        self.base = np.asarray(self.base, complex)
        self.vectors = np.atleast_2d(np.asarray(self.vectors, complex))
        if not np.all(np.isfinite(self.vectors)):
            raise ParameterError("frame vectors must be finite")

    def omega_residual(self):
        """Largest |omega(v_i, v_j)| over normalized frame pairs."""
        v = self.vectors
        norms = np.linalg.norm(v, axis=1)
        if np.any(norms == 0):
            raise ParameterError("frame contains a zero vector")
        u = v / norms[:, None]
        pair = np.imag(np.conj(u) @ u.T)
        return float(np.max(np.abs(pair)))


def orthonormalize_frame(frame, tol=OMEGA_TOL):
    """Oriented orthonormalization of a Lagrangian frame.

    Returns the unitary matrix whose columns span the same plane with the
    same orientation. Raises when the omega-residual exceeds tol or the
    vectors are dependent.
    """
    res = frame.omega_residual()
    if res > tol:
        raise LagrangianConditionError(
            "frame is not Lagrangian: omega-residual %.3e exceeds %.1e"
            % (res, tol), omega_residual=res)
    v = frame.vectors
    n = v.shape[0]
    real_mat = np.vstack([v.T.real, v.T.imag])  # (2n, n), columns = vectors
    q, r = np.linalg.qr(real_mat)
    diag = np.diag(r)
    if np.min(np.abs(diag)) < 1e-12 * np.max(np.abs(diag)):
        raise ParameterError("frame vectors are linearly dependent")
    q = q * np.sign(diag)[None, :]  # orientation-preserving (R_ii > 0)
    return q[:n, :] + 1j * q[n:, :]


def lagrangian_angle(frame, tol=OMEGA_TOL):
    """Lagrangian angle theta = arg Omega(e_1..e_n) of an oriented frame.

    The frame is orthonormalized preserving orientation; the result is the
    principal branch in (-pi, pi]. Branch continuation along sampled families
    is the caller's job (see unwrap_angles).
    """
    f = orthonormalize_frame(frame, tol=tol)
    det = np.linalg.det(f)
    return float(np.angle(det))


def unwrap_angles(theta, anchor=0.0):
    """Continuous branch through a sampled angle sequence, shifted so the
    first entry lands within pi of anchor."""
    theta = np.unwrap(np.asarray(theta, float))
    shift = 2.0 * np.pi * np.round((theta[0] - anchor) / (2.0 * np.pi))
    return theta - shift


def plane_frame(phases, n=None):
    """Frame of the plane Pi_phi = (e^{i phi_1},..,e^{i phi_n}) R^n.

    phases may be a scalar 0 for Pi_0 (then n is required).
    """
    if np.isscalar(phases):
        if n is None:
            raise ParameterError("n required for scalar phase")
        phases = np.full(n, float(phases))
    phases = np.asarray(phases, float)
    return LagrangianFrame(np.zeros(len(phases), complex),
                           np.diag(np.exp(1j * phases)))


def plane_gaussian_area(n, dist, scale=1.0):
    """Gaussian area of an affine Lagrangian n-plane at Euclidean distance
    dist from the center, at the given scale: exp(-dist^2 / (4 scale^2))."""
    return float(np.exp(-(dist / scale) ** 2 / 4.0))


def gaussian_area(L, center=None, scale=1.0, tol=1e-12,
                  area_ratio_bound=2.0):
    """Gaussian area Theta(L, x0, r) = Theta(r^{-1}(L - x0)).

    Dispatches to the object's own quadrature (polyline curves, equivariant
    profiles, plane unions all implement _gaussian_area). The sampled extent
    must cover the Gaussian mass: the tail bound (area-ratio bound times the
    Gaussian tail beyond the sampled radius) must stay below tol.
    """
    if scale <= 0:
        raise ParameterError("scale must be positive")
    meth = getattr(L, "_gaussian_area", None)
    if meth is None:
        raise ParameterError(
            "unsupported Lagrangian type for gaussian_area: %r" % type(L))
    return meth(center=center, scale=scale, tol=tol,
                area_ratio_bound=area_ratio_bound)


def check_truncation(n, reached_radius, tol, area_ratio_bound):
    bound = gaussian_tail_bound(n, reached_radius, area_ratio_bound)
    if bound > tol:
        raise TruncationError(
            "sampling extent radius %.3g gives Gaussian tail estimate %.3e "
            "above tolerance %.1e" % (reached_radius, bound, tol),
            estimate=bound)
