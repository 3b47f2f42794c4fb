"""Lawlor necks: explicit construction, parameter correspondence, and
verification of their special Lagrangian, asymptotic, and potential
properties.

The neck with data a_1..a_n > 0 (n >= 3) is the equivariant submanifold
    { (z_1(y) x_1, ..., z_n(y) x_n) : y real, x in S^{n-1} },
    z_k(y) = e^{i psi_k(y)} sqrt(1/a_k + y^2),
    psi_k(y) = a_k int_{-inf}^y dx / ((1 + a_k x^2) sqrt(P(x))),
    P(x) = (prod_k (1 + a_k x^2) - 1) / x^2,
with phases phi_k = psi_k(+inf) summing to pi and the area-type invariant
A = int dx / (2 sqrt(P)). The far ends are graphs over the planes Pi_0 and
Pi_phi with potential decay r^{2-n}.
"""

import numpy as np
from dataclasses import dataclass, field

from .errors import (ParameterError, PhaseSumError, NewtonStagnationError,
                     DecayRateError, ToleranceError)
from .quadrature import (integrate_real_line, integrate_tail, cumulative_gl4,
                         sphere_quadrature_squares)
from .ambient import LagrangianFrame, lagrangian_angle, unwrap_angles
from .spectra import sphere_area

PHASE_SUM_TOL = 1e-8


def _poly_eval(a, x):
    """P(x) = (prod (1 + a_k x^2) - 1)/x^2, with the limit sum(a) at 0."""
    a = np.asarray(a, float)
    x = np.asarray(x, float)
    scalar = x.ndim == 0
    x2 = np.atleast_1d(x) ** 2
    prod = np.prod(1.0 + a[:, None] * x2[None, :], axis=0)
    small = x2 < 1e-18
    safe = np.where(small, 1.0, x2)
    out = np.where(small, np.sum(a), (prod - 1.0) / safe)
    return float(out[0]) if scalar else out


_poly_scalar = _poly_eval


@dataclass
class LawlorParams:
    """Neck parameters a with the derived phases phi and invariant A."""

    a: np.ndarray
    phi: np.ndarray
    A: float
    quad_error: float = 0.0

    def __post_init__(self):
        self.a = np.asarray(self.a, float)
        self.phi = np.asarray(self.phi, float)
        if np.any(self.phi <= 0) or np.any(self.phi >= np.pi):
            raise ParameterError("phases must lie in (0, pi)")
        gap = abs(np.sum(self.phi) - np.pi)
        if gap > 1e-6:
            raise PhaseSumError("phase-sum violation: sum phi - pi = %.3e"
                                % gap)
        if self.A <= 0:
            raise ParameterError("A must be positive")

    @property
    def n(self):
        return len(self.a)


def lawlor_forward(a, epsabs=1e-12):
    """Phases and invariant from the positive parameters a (n >= 3).

    phi_k = a_k int dx/((1+a_k x^2) sqrt(P)), A = int dx/(2 sqrt(P)), both
    computed by adaptive Gauss-Kronrod after the x = tan(s) compactification.
    """
    a = np.asarray(a, float)
    if a.ndim != 1 or len(a) < 3:
        raise ParameterError("need n >= 3 parameters (got %r)" % (a,))
    if np.any(a <= 0) or not np.all(np.isfinite(a)):
        raise ParameterError("all parameters a_k must be positive and finite")
    n = len(a)
    phis = np.empty(n)
    err_total = 0.0
    for k in range(n):
        def integrand(x, k=k):
            return a[k] / ((1.0 + a[k] * x * x)
                           * np.sqrt(_poly_scalar(a, x)))
        phis[k], err = integrate_real_line(integrand, epsabs=epsabs)
        err_total = max(err_total, err)
    A, err = integrate_real_line(
        lambda x: 0.5 / np.sqrt(_poly_scalar(a, x)), epsabs=epsabs)
    err_total = max(err_total, err)
    gap = abs(np.sum(phis) - np.pi)
    if gap > PHASE_SUM_TOL:
        raise ToleranceError(
            "quadrature failed the phase-sum identity: |sum phi - pi| = %.3e"
            % gap, estimate=gap)
    return LawlorParams(a, phis, A, quad_error=err_total)


def lawlor_inverse(phi, A, tol=1e-10, max_iter=60):
    """Parameters a with lawlor_forward(a) matching (phi, A).

    Solves for phi at normalized A = 1 by damped Newton in log a (finite
    difference Jacobian), then rescales a -> a / A using the exact scaling
    law phi(s^-2 a) = phi(a), A(s^-2 a) = s^2 A(a).
    """
    phi = np.asarray(phi, float)
    n = len(phi)
    if n < 3:
        raise ParameterError("need n >= 3 phases")
    if np.any(phi <= 0) or np.any(phi >= np.pi):
        raise ParameterError("phases must lie in (0, pi)")
    gap = abs(np.sum(phi) - np.pi)
    if gap > 1e-6:
        raise PhaseSumError("phase-sum violation: |sum phi - pi| = %.3e" % gap)
    if A <= 0:
        raise ParameterError("A must be positive")

    def residual(u):
        p = lawlor_forward(np.exp(u), epsabs=1e-12)
        return np.concatenate([p.phi[:-1] - phi[:-1], [np.log(p.A)]])

    # initial guess: scale-normalized, biased toward larger a for larger phi
    u = np.log(phi / np.mean(phi))
    g = residual(u)
    u = u - 2.0 * g[-1] * np.ones(n)  # fix the overall scale first
    g = residual(u)
    for it in range(max_iter):
        nrm = np.linalg.norm(g)
        if nrm < tol:
            break
        J = np.empty((n, n))
        h = 1e-6
        for j in range(n):
            up = u.copy()
            up[j] += h
            J[:, j] = (residual(up) - g) / h
        try:
            step = np.linalg.solve(J, -g)
        except np.linalg.LinAlgError:
            raise NewtonStagnationError("singular Jacobian in lawlor_inverse",
                                        last_iterate=np.exp(u), residual=nrm)
        lam = 1.0
        while lam > 1e-4:
            g_new = residual(u + lam * step)
            if np.linalg.norm(g_new) < nrm:
                break
            lam *= 0.5
        else:
            raise NewtonStagnationError(
                "Newton stagnation in lawlor_inverse at residual %.3e" % nrm,
                last_iterate=np.exp(u), residual=nrm)
        u = u + lam * step
        g = g_new
    else:
        raise NewtonStagnationError(
            "lawlor_inverse did not converge: residual %.3e"
            % np.linalg.norm(g), last_iterate=np.exp(u),
            residual=float(np.linalg.norm(g)))
    return np.exp(u) / A


# ---------------------------------------------------------------------------
# profiles
# ---------------------------------------------------------------------------

@dataclass
class GridSpec:
    """Profile grid: sinh-stretched in |y| (dense near the waist, sparse at
    the ends) reaching |y| = extent."""

    extent: float = 1e3
    points: int = 2001
    waist_scale: float = 1.0

    def build(self):
        if self.points < 9 or self.extent <= 0:
            raise ParameterError("grid needs >= 9 points and extent > 0")
        m = self.points if self.points % 2 == 1 else self.points + 1
        umax = np.arcsinh(self.extent / self.waist_scale)
        u = np.linspace(-umax, umax, m)
        return self.waist_scale * np.sinh(u)


@dataclass
class ProfileLagrangian:
    """Equivariant Lagrangian sampled along its profile curve."""

    y: np.ndarray
    z: np.ndarray               # (m, n) complex
    psi: np.ndarray             # (m, n) phases, continuous in y
    params: LawlorParams = None
    metadata: dict = field(default_factory=dict)

    @property
    def n(self):
        return self.z.shape[1]

    def modulus_residual(self):
        """sup | |z_k| - sqrt(1/a_k + y^2) | when built from parameters."""
        if self.params is None:
            return np.nan
        target = np.sqrt(1.0 / self.params.a[None, :] + self.y[:, None] ** 2)
        return float(np.max(np.abs(np.abs(self.z) - target)))

    def radius(self):
        """Representative point radius r(y) (root mean square over fibers)."""
        return np.sqrt(np.mean(np.abs(self.z) ** 2, axis=1))

    def dz(self):
        """Profile derivative dz/dy by second-order differences."""
        return np.gradient(self.z, self.y, axis=0, edge_order=2)

    def _gaussian_area(self, center=None, scale=1.0, tol=1e-12,
                       area_ratio_bound=2.0):
        if center is not None and np.any(np.asarray(center) != 0):
            raise ParameterError(
                "profile Gaussian areas are supported centered at the origin")
        from .ambient import check_truncation
        r = self.radius() / scale
        check_truncation(self.n, float(np.max(r)), tol, area_ratio_bound)
        dens = profile_area_density(self, gaussian_scale=scale)
        theta = np.trapezoid(dens, self.y) / (4.0 * np.pi) ** (self.n / 2.0)
        return float(theta)


def lawlor_profile(a, grid=None, epsabs=1e-12):
    """Sampled Lawlor neck for parameters a on the given GridSpec.

    psi_k is accumulated by per-cell Gauss-Legendre quadrature of the exact
    integrand, normalized with the (-inf) tail so psi_k(-inf) = 0. A warning
    channel reports cells whose quadrature increment is untrusted.
    """
    params = a if isinstance(a, LawlorParams) else lawlor_forward(a)
    a = params.a
    grid = grid or GridSpec()
    y = grid.build()
    m, n = len(y), len(a)
    psi = np.empty((m, n))
    warnings = []
    for k in range(n):
        def rate(x, k=k):
            return a[k] / ((1.0 + a[k] * x * x) * np.sqrt(_poly_eval(a, x)))
        tail, terr = integrate_tail(lambda x: rate(-x), -y[0], epsabs=epsabs)
        psi[:, k] = tail + cumulative_gl4(rate, y)
        end_gap = abs(psi[-1, k] + integrate_tail(rate, y[-1])[0]
                      - params.phi[k])
        if end_gap > 1e-8:
            warnings.append("psi_%d end gap %.3e above 1e-8 "
                            "(grid too coarse)" % (k, end_gap))
    z = np.exp(1j * psi) * np.sqrt(1.0 / a[None, :] + y[:, None] ** 2)
    return ProfileLagrangian(y, z, psi, params=params,
                             metadata={"kind": "lawlor",
                                       "warnings": warnings})


def plane_union_profile(a, grid=None, phases=None):
    """Degenerate profile with constant phases (a union-of-planes-like
    surface of revolution); used as a regression fixture."""
    params = a if isinstance(a, LawlorParams) else lawlor_forward(a)
    a = params.a
    grid = grid or GridSpec()
    y = grid.build()
    n = len(a)
    if phases is None:
        phases = np.zeros(n)
    psi = np.broadcast_to(np.asarray(phases, float),
                          (len(y), n)).copy()
    z = np.exp(1j * psi) * np.sqrt(1.0 / a[None, :] + y[:, None] ** 2)
    return ProfileLagrangian(y, z, psi, params=params,
                             metadata={"kind": "plane-union", "warnings": []})


# ---------------------------------------------------------------------------
# induced measure
# ---------------------------------------------------------------------------

def neck_ode_weights(params, y):
    """Closed-form reduced metric weights of the exact neck.

    W1(y) = area(S^{n-1}) sqrt(P / prod a),
    W0(y) = area(S^{n-1}) (p+1) / (n sqrt(P prod a)) * sum_k a_k/(1+a_k y^2),
    where p + 1 = prod (1 + a_k y^2). W0 is the fiber-integrated area density
    (dH^n = W0 dy for equivariant integrands) and W1 the Dirichlet weight, so
    the Laplacian restricted to functions of y is (W1 u')' / W0. Both follow
    from the first fundamental form of the ansatz: the fiber metric is
    diag(|z_k|^2) restricted to x-perp and g_yy = sum |z_k'|^2 x_k^2, whose
    determinant collapses to a function linear in the x_k^2 on the exact
    neck.
    """
    a = params.a
    n = len(a)
    y = np.asarray(y, float)
    P = _poly_eval(a, y)
    p1 = np.prod(1.0 + a[None, :] * y[:, None] ** 2, axis=1)
    S = np.sum(a[None, :] / (1.0 + a[None, :] * y[:, None] ** 2), axis=1)
    pa = np.prod(a)
    area = sphere_area(n)
    W1 = area * np.sqrt(P / pa)
    W0 = area * p1 * S / (n * np.sqrt(P * pa))
    return W0, W1


def profile_area_density(profile, gaussian_scale=None, order=20):
    """Fiber-integrated area density in y for a general sampled profile,
    optionally weighted by the Gaussian exp(-|x|^2/(4 scale^2)).

    Uses the first fundamental form of the ansatz with the Schur complement
    for the y-fiber coupling; the fiber integral runs over functions of the
    squared sphere coordinates x_k^2.
    """
    z = profile.z
    dz = profile.dz()
    n = profile.n
    D = np.abs(z) ** 2                      # (m, n) fiber metric diagonal
    gyy_coef = np.abs(dz) ** 2              # g_yy = sum |z'|^2 x^2
    mix = np.real(np.conj(z) * dz)          # g_{y,u} coefficients m_k
    s, w = sphere_quadrature_squares(n, order)
    dens = np.empty(len(profile.y))
    for i in range(len(profile.y)):
        Di = D[i]
        det_perp = np.prod(Di) * (s @ (1.0 / Di))
        gyy = s @ gyy_coef[i]
        # Schur complement of the y-row against the fiber block:
        # q = sum m^2 x^2 / D - (sum m x^2 / D)^2 / (sum x^2 / D)
        q = (s @ (mix[i] ** 2 / Di)
             - (s @ (mix[i] / Di)) ** 2 / (s @ (1.0 / Di)))
        schur = np.maximum(gyy - q, 0.0)
        integrand = np.sqrt(det_perp * schur)
        if gaussian_scale is not None:
            integrand = integrand * np.exp(-(s @ Di)
                                           / (4.0 * gaussian_scale ** 2))
        dens[i] = np.sum(w * integrand)
    return dens


# ---------------------------------------------------------------------------
# verification operations
# ---------------------------------------------------------------------------

def equivariant_frames(profile):
    """Lagrangian frames along the profile at the symmetric fiber direction
    x = (1,..,1)/sqrt(n): the y-tangent (z_k' x_k) plus the sphere tangents
    (z_k u_k) for an oriented orthonormal basis u of x-perp."""
    n = profile.n
    xbar = np.full(n, 1.0 / np.sqrt(n))
    basis = np.linalg.qr(np.column_stack([xbar, np.eye(n)[:, :n - 1]]))[0]
    u = basis[:, 1:] * np.sign(basis[0, 0])  # columns orthonormal to xbar
    dz = profile.dz()
    frames = []
    for i in range(len(profile.y)):
        rows = [dz[i] * xbar]
        for m in range(n - 1):
            rows.append(profile.z[i] * u[:, m])
        frames.append(LagrangianFrame(profile.z[i] * xbar, np.array(rows)))
    return frames


def special_residual(profile):
    """(sup Lagrangian-angle deviation, sup omega-pullback residual).

    theta is evaluated through equivariant frames with the orientation
    normalized so the branch anchors at 0 on the Pi_0 end; omega-residual is
    the worst normalized pairing within the frames (zero iff the profile is
    Lagrangian for every fiber direction). Samples where the profile
    tangent degenerates (|dz/dy| ~ 0, as at the waist of phase-constant
    degenerate profiles) are skipped. Both residuals are discretization
    limited and converge at second order under grid refinement.
    """
    frames = equivariant_frames(profile)
    scale = float(np.median([np.linalg.norm(f.vectors[1]) for f in frames]))
    keep = [f for f in frames
            if np.min(np.linalg.norm(f.vectors, axis=1)) > 1e-10 * scale]
    omega_res = max(f.omega_residual() for f in keep)
    thetas = np.array([lagrangian_angle(f, tol=np.inf) for f in keep])
    thetas = unwrap_angles(thetas)
    thetas -= np.pi * np.round(thetas[0] / np.pi)
    return float(np.max(np.abs(thetas))), float(omega_res)


@dataclass
class AsymptoticFit:
    end: str                    # "pi0" or "piphi"
    potential_exponent: float
    gradient_exponent: float
    residual: float
    degenerate: bool = False


def _loglog_slope(r, g):
    keep = g > 0
    if np.count_nonzero(keep) < 4:
        return np.nan, 0.0
    x = np.log(r[keep])
    yv = np.log(g[keep])
    A = np.column_stack([x, np.ones_like(x)])
    coef, res, *_ = np.linalg.lstsq(A, yv, rcond=None)
    fit = A @ coef
    return float(coef[0]), float(np.sqrt(np.mean((yv - fit) ** 2)))


def asymptotic_fit(profile, window=(0.05, 0.5), signal_floor=1e-13):
    """Least-squares decay exponents of the potential and its gradient at
    both ends, fitted on log radius over the window fractions of the grid
    extent. Expected exponents: 2-n for the potential gap, 1-n for the
    angular displacement from the asymptotic plane."""
    if profile.params is None:
        raise ParameterError("asymptotic_fit needs parameter metadata")
    pot = neck_potential(profile)
    f, A_inv = pot["f"], pot["A_invariant"]
    y = profile.y
    r = profile.radius()
    Y = np.max(np.abs(y))
    fits = []
    phi = profile.params.phi
    for end, sel_mask, gap, psi_gap in (
            ("pi0", (y < 0), np.abs(f), np.abs(profile.psi)),
            ("piphi", (y > 0), np.abs(A_inv - f),
             np.abs(phi[None, :] - profile.psi))):
        sel = sel_mask & (np.abs(y) >= window[0] * Y) \
            & (np.abs(y) <= window[1] * Y)
        if np.count_nonzero(sel) < 8:
            raise ParameterError("fit window too small; refine the grid")
        gap_w = gap[sel]
        disp = np.max(np.abs(profile.z[sel]) * psi_gap[sel], axis=1)
        if np.max(gap_w) < signal_floor:
            fits.append(AsymptoticFit(end, np.nan, np.nan, 0.0,
                                      degenerate=True))
            continue
        if np.any(np.diff(disp[np.argsort(np.abs(y[sel]))]) > 1e-10
                  + 0.1 * np.max(disp)):
            raise DecayRateError(
                "far region not graphical over the %s plane" % end)
        p_exp, p_res = _loglog_slope(r[sel], gap_w)
        g_exp, g_res = _loglog_slope(r[sel], disp)
        fits.append(AsymptoticFit(end, p_exp, g_exp,
                                  max(p_res, g_res)))
    return fits


def neck_potential(profile):
    """Lagrangian potential along the profile and the invariant A(L).

    On the exact neck lambda pulls back to dy/(2 sqrt(P)) (independent of
    the fiber direction), so f(y) = int_{-inf}^y dy/(2 sqrt P), normalized
    to 0 on the Pi_0 end; A(L) = lim_{Pi_phi} f equals the parameter A. For
    generic profiles the density is the fiber-averaged (1/2) Im <z, dz/dy>
    and the end limits carry a tail estimate instead of an exact tail.
    """
    y = profile.y
    if profile.params is not None and profile.metadata.get("kind") == "lawlor":
        a = profile.params.a

        def dens(x):
            return 0.5 / np.sqrt(_poly_eval(a, x))
        tail_lo, _ = integrate_tail(lambda x: dens(-x), -y[0])
        f = tail_lo + cumulative_gl4(dens, y)
        tail_hi, _ = integrate_tail(dens, y[-1])
        A_inv = f[-1] + tail_hi
        tail_estimate = 0.0
    else:
        dens_samples = 0.5 * np.mean(np.imag(np.conj(profile.z)
                                             * profile.dz()), axis=1)
        f = np.concatenate([[0.0], np.cumsum(
            0.5 * (dens_samples[1:] + dens_samples[:-1]) * np.diff(y))])
        tail_estimate = float(abs(dens_samples[-1] * y[-1])
                              + abs(dens_samples[0] * y[0]))
        A_inv = f[-1]
        if tail_estimate > 1e-6 and np.max(np.abs(f)) > 1e-12:
            profile.metadata.setdefault("warnings", []).append(
                "potential end limits carry tail estimate %.3e"
                % tail_estimate)
    return {"f": f, "A_invariant": float(A_inv),
            "tail_estimate": tail_estimate}
