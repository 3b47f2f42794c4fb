"""Lagrangian potentials, the A(L) invariant interfaces, volume and
equicontinuity audits, Floer degree arithmetic, strip-area identities, ball
monotonicity with Lagrangian boundary, and the compactification chart.

Potential convention: df = lambda|_L throughout (the convention under which
A(L) equals the Lawlor parameter A); loop integrals of lambda must vanish
on exact inputs.
"""

import numpy as np
from dataclasses import dataclass, field

from .errors import (ParameterError, LagrangianConditionError,
                     ModelAssumptionError)
from .ambient import orthonormalize_frame
from .curves import ImmersedCurve
from .lawlor import ProfileLagrangian, neck_potential


# ---------------------------------------------------------------------------
# potentials
# ---------------------------------------------------------------------------

@dataclass
class PotentialField:
    """Sampled Lagrangian potential with its normalization bookkeeping."""

    values: list                  # per-component arrays (or one array)
    anchor: str
    end_limits: tuple = None      # (c_0, c_phi) when applicable
    tail_estimate: float = 0.0

    def a_invariant(self):
        if self.end_limits is None:
            raise ParameterError("no end limits on this potential")
        return self.end_limits[1] - self.end_limits[0]


def integrate_potential(L, anchors=None):
    """Path-integrate lambda along each component from its anchor.

    Curves: exact per-segment integrals, with the exactness check on closed
    loops. Profiles: the equivariant reduction (potential a function of the
    profile coordinate), normalized to 0 on the Pi_0 end when the profile
    carries parameters.
    """
    if isinstance(L, ImmersedCurve):
        vals = L.integrate_liouville(anchors)
        return PotentialField(vals, anchor="first vertex per component")
    if isinstance(L, ProfileLagrangian):
        pot = neck_potential(L)
        return PotentialField([pot["f"]], anchor="Pi_0 end limit = 0",
                              end_limits=(0.0, pot["A_invariant"]),
                              tail_estimate=pot["tail_estimate"])
    raise ParameterError("unsupported Lagrangian type %r" % type(L))


def equicontinuity_audit(L, eps, C0=1.0, flag_C=50.0, max_pairs=2_000_000,
                         rng=None):
    """Worst modulus-of-continuity ratio over sampled vertex pairs:

        max |f(p) - f(q)| / (|p - q| + exp(-eps^{-2} / C0)),

    with the pairs exceeding flag_C collected. Pairs are subsampled
    deterministically (or by the supplied generator) above max_pairs.
    """
    if eps <= 0:
        raise ParameterError("eps must be positive")
    pot = integrate_potential(L)
    pts = []
    fs = []
    for comp, f in zip(L.components, pot.values):
        if f is None:
            continue
        pts.append(comp.vertices)
        fs.append(f)
    pts = np.vstack(pts)
    fs = np.concatenate(fs)
    m = len(pts)
    floor = np.exp(-1.0 / (C0 * eps * eps))
    if m * (m - 1) // 2 > max_pairs:
        rng = rng or np.random.default_rng(0)
        ii = rng.integers(0, m, size=max_pairs)
        jj = rng.integers(0, m, size=max_pairs)
        keep = ii != jj
        ii, jj = ii[keep], jj[keep]
    else:
        ii, jj = np.triu_indices(m, k=1)
    dist = np.linalg.norm(pts[ii] - pts[jj], axis=1)
    ratio = np.abs(fs[ii] - fs[jj]) / (dist + floor)
    worst = int(np.argmax(ratio))
    flags = np.where(ratio > flag_C)[0]
    return {
        "worst_ratio": float(ratio[worst]),
        "worst_pair": (pts[ii[worst]].tolist(), pts[jj[worst]].tolist()),
        "flagged_pairs": int(len(flags)),
        "floor": float(floor),
        "flag_C": flag_C,
    }


# ---------------------------------------------------------------------------
# volume monotonicity audits (n = 1 testbed: lengths in balls, exact)
# ---------------------------------------------------------------------------

def _length_in_ball(comp, p, r):
    """Exact length of a polyline inside the closed ball B(p, r)."""
    v = comp.vertices - p
    if comp.closed:
        v = np.vstack([v, v[:1]])
    a, b = v[:-1], v[1:]
    d = b - a
    total = 0.0
    for ai, di in zip(a, d):
        dd = float(di @ di)
        if dd == 0.0:
            continue
        # |a + t d|^2 <= r^2 for t in [0,1]
        t0, t1 = 0.0, 1.0
        A, B, C = dd, 2.0 * float(ai @ di), float(ai @ ai) - r * r
        disc = B * B - 4.0 * A * C
        if disc <= 0:
            continue
        sq = np.sqrt(disc)
        lo, hi = (-B - sq) / (2 * A), (-B + sq) / (2 * A)
        lo, hi = max(lo, t0), min(hi, t1)
        if hi > lo:
            total += (hi - lo) * np.sqrt(dd)
    return total


def volume_monotonicity_audit(L, p, eps, C=1.0, radii=None, quad_tol=1e-9):
    """Volume lower bound and almost-monotonicity over a radius grid.

    Lower bound margin: min over r of Vol(L cap B(p,r))/(omega_n r^n)
    - (1 - C eps^2), omega_1 = 2. Almost-monotonicity: decrease events of
    Vol / (omega_n r^{n cos eps}) beyond the quadrature tolerance.
    """
    p = np.asarray(p, float)
    if radii is None:
        radii = np.linspace(0.1, 0.8 * L.truncation_radius(p), 40)
    vols = np.array([sum(_length_in_ball(c, p, r) for c in L.components)
                     for r in radii])
    omega_n = 2.0
    lower = vols / (omega_n * radii) - (1.0 - C * eps * eps)
    ratio = vols / (omega_n * radii ** np.cos(eps))
    decreases = np.where(np.diff(ratio) < -quad_tol * np.maximum(
        ratio[:-1], 1.0))[0]
    return {
        "radii": radii,
        "volume_ratio": vols / (omega_n * radii),
        "lower_bound_margin": float(np.min(lower)),
        "almost_monotone_ratio": ratio,
        "violations": [(float(radii[i]), float(ratio[i + 1] - ratio[i]))
                       for i in decreases],
    }


# ---------------------------------------------------------------------------
# Floer degrees
# ---------------------------------------------------------------------------

@dataclass
class IntersectionDatum:
    point: np.ndarray
    alphas: np.ndarray            # characteristic angles in (0, pi)
    grading_L: float
    grading_Lp: float
    degree: float                 # mu = (sum alpha + theta_L - theta_L')/pi

    def bounds(self):
        low = (self.grading_L - self.grading_Lp) / np.pi
        return low, low + len(self.alphas)


def characteristic_angles(frame_L, frame_Lp, transversality_tol=1e-9):
    """Characteristic angles alpha_i in (0, pi) between two Lagrangian
    planes: with unitary bases F, F' the relative map U = F^{-1} F' has
    U U^T unitary symmetric; its eigenvalue arguments are 2 alpha_i."""
    F = orthonormalize_frame(frame_L)
    Fp = orthonormalize_frame(frame_Lp)
    U = np.linalg.solve(F, Fp)
    M = U @ U.T
    eig = np.linalg.eigvals(M)
    args = np.angle(eig)           # (-pi, pi]
    args = np.where(args <= transversality_tol, args + 2.0 * np.pi, args)
    alphas = 0.5 * args
    if np.any(np.minimum(np.abs(alphas), np.abs(np.pi - alphas))
              < transversality_tol):
        raise ModelAssumptionError(
            "planes are not transverse: characteristic angle at 0 or pi")
    return np.sort(alphas)


def floer_degree(point, frame_L, frame_Lp, grading_L, grading_Lp):
    """Degree mu_{L,L'}(p) = (sum alpha_i + theta_L(p) - theta_L'(p))/pi of
    a transverse graded intersection, with the strict bounds
    (theta_L - theta_L')/pi < mu < same + n asserted."""
    alphas = characteristic_angles(frame_L, frame_Lp)
    mu = (np.sum(alphas) + grading_L - grading_Lp) / np.pi
    datum = IntersectionDatum(np.asarray(point), alphas,
                              float(grading_L), float(grading_Lp),
                              float(mu))
    low, high = datum.bounds()
    if not (low < mu < high):
        raise ModelAssumptionError(
            "degree bounds violated: %.12f not in (%.12f, %.12f)"
            % (mu, low, high))
    return datum


# ---------------------------------------------------------------------------
# strips and ball monotonicity
# ---------------------------------------------------------------------------

@dataclass
class TriangleSoup:
    """Sampled surface in C^n: complex vertex array plus triangle indices;
    boundary edges carry tags from {"L", "L'", "corner"}."""

    vertices: np.ndarray          # (m, n) complex
    triangles: np.ndarray         # (k, 3) int
    boundary_tags: dict = field(default_factory=dict)  # edge (i,j) -> tag

    def omega_integral(self):
        """int_Sigma omega = sum over triangles of omega(e1, e2)/2."""
        v = self.vertices
        t = self.triangles
        e1 = v[t[:, 1]] - v[t[:, 0]]
        e2 = v[t[:, 2]] - v[t[:, 0]]
        pair = np.imag(np.sum(np.conj(e1) * e2, axis=1))
        return float(0.5 * np.sum(pair))

    def boundary_edges(self):
        from collections import Counter
        cnt = Counter()
        for tri in self.triangles:
            for a, b in ((0, 1), (1, 2), (2, 0)):
                e = tuple(sorted((int(tri[a]), int(tri[b]))))
                cnt[e] += 1
        return [e for e, c in cnt.items() if c == 1]

    def area_in_ball(self, p, r, refine=3):
        """Area of the surface inside B(p, r), by uniform triangle
        subdivision with centroid inclusion (first order in the subdivided
        edge length)."""
        p = np.asarray(p, complex)
        v = self.vertices
        total = 0.0
        for tri in self.triangles:
            a, b, c = v[tri[0]], v[tri[1]], v[tri[2]]
            total += _tri_area_in_ball(a, b, c, p, r, refine)
        return total


def _tri_area(a, b, c):
    e1 = np.atleast_1d(b - a)
    e2 = np.atleast_1d(c - a)
    g11 = np.real(np.vdot(e1, e1))
    g22 = np.real(np.vdot(e2, e2))
    g12 = np.real(np.vdot(e1, e2))
    return 0.5 * np.sqrt(max(g11 * g22 - g12 * g12, 0.0))


def _tri_area_in_ball(a, b, c, p, r, depth):
    corners_in = [np.linalg.norm(np.atleast_1d(x - p)) <= r
                  for x in (a, b, c)]
    if all(corners_in):
        return _tri_area(a, b, c)
    if depth == 0:
        centroid = (a + b + c) / 3.0
        if np.linalg.norm(np.atleast_1d(centroid - p)) <= r:
            return _tri_area(a, b, c)
        return 0.0
    ab, bc, ca = (a + b) / 2, (b + c) / 2, (c + a) / 2
    return (_tri_area_in_ball(a, ab, ca, p, r, depth - 1)
            + _tri_area_in_ball(ab, b, bc, p, r, depth - 1)
            + _tri_area_in_ball(ca, bc, c, p, r, depth - 1)
            + _tri_area_in_ball(ab, bc, ca, p, r, depth - 1))


def bigon_strip(g, x_range=(0.0, np.pi), m=200, layers=24):
    """Triangulated strip between the real axis and the graph y = g(x) in C,
    with boundary tags: lower edge on L (the axis), upper edge on L'."""
    xs = np.linspace(x_range[0], x_range[1], m)
    ys = np.linspace(0.0, 1.0, layers)
    pts = np.empty((layers, m), complex)
    for j, t in enumerate(ys):
        pts[j] = xs + 1j * t * g(xs)
    verts = pts.reshape(-1)
    tris = []
    for j in range(layers - 1):
        for i in range(m - 1):
            a = j * m + i
            tris.append((a, a + 1, a + m))
            tris.append((a + 1, a + m + 1, a + m))
    tags = {}
    for i in range(m - 1):
        tags[(i, i + 1)] = "L"
        top = (layers - 1) * m
        tags[(top + i, top + i + 1)] = "L'"
    soup = TriangleSoup(verts.reshape(-1, 1), np.array(tris, int), tags)
    return soup


def strip_area(L, Lp, p, q, strip, potentials, boundary_tol=1e-4):
    """Potential-difference value, direct omega-area, and discrepancy for a
    strip with boundary on L and L' and corners p, q.

    The identity int_Sigma omega = (f_L - f_L')(q) - (f_L - f_L')(p) is
    Stokes for any strip with such boundary; no holomorphicity is assumed,
    and the report says so. potentials = (f_L at {p,q}, f_L' at {p,q}) as
    callables or dicts.
    """
    fL, fLp = potentials
    for edge in strip.boundary_edges():
        tag = strip.boundary_tags.get(edge)
        if tag is None:
            continue
        for vi in edge:
            z = strip.vertices[vi]
            target = L if tag == "L" else Lp if tag == "L'" else None
            if target is None:
                continue
            d = _distance_to_lagrangian(target, z)
            if d > boundary_tol:
                raise ModelAssumptionError(
                    "strip boundary vertex %s at distance %.3e from %s"
                    % (np.array2string(np.atleast_1d(z)), d, tag))
    direct = strip.omega_integral()
    pot = (fL(q) - fLp(q)) - (fL(p) - fLp(p))
    return {
        "potential_difference": float(pot),
        "direct_area": float(direct),
        "discrepancy": float(abs(pot - direct)),
        "note": ("Stokes identity for any strip with boundary on the two "
                 "exact Lagrangians; holomorphicity not assumed"),
    }


def _distance_to_lagrangian(target, z):
    z = np.atleast_1d(np.asarray(z, complex))
    if isinstance(target, ImmersedCurve):
        pt = np.array([z[0].real, z[0].imag])
        best = np.inf
        for comp in target.components:
            v = comp.vertices
            if comp.closed:
                v = np.vstack([v, v[:1]])
            a, d = v[:-1], np.diff(v, axis=0)
            dd = np.sum(d * d, axis=1)
            t = np.clip(np.sum((pt - a) * d, axis=1)
                        / np.where(dd > 0, dd, 1.0), 0.0, 1.0)
            proj = a + t[:, None] * d
            best = min(best, float(np.min(np.linalg.norm(proj - pt,
                                                         axis=1))))
        return best
    if hasattr(target, "distance"):
        d = target.distance(z[None, :])
        return float(np.min(d))
    if callable(target):
        return float(target(z))
    raise ParameterError("cannot measure distance to %r" % type(target))


@dataclass
class FlatHalfDisc:
    """Half-disc of radius R in a complex coordinate plane through p, with
    the diameter on the real axis (the Lagrangian boundary); area inside
    B(p, r) is exactly (pi/2) min(r, R)^2."""

    p: np.ndarray
    R: float

    def area_in_ball(self, p, r, refine=None):
        if np.any(np.abs(np.asarray(p) - self.p) > 1e-12):
            raise ParameterError("half-disc areas supported at its center")
        return 0.5 * np.pi * min(r, self.R) ** 2


@dataclass
class FlatDisc:
    p: np.ndarray
    R: float

    def area_in_ball(self, p, r, refine=None):
        if np.any(np.abs(np.asarray(p) - self.p) > 1e-12):
            raise ParameterError("disc areas supported at its center")
        return np.pi * min(r, self.R) ** 2


def ball_monotonicity_check(sigma, L, p, R, inv_C=0.5, radii=None,
                            boundary_check=None):
    """Minimum of Area(Sigma cap B(p, r)) / r^2 over a radius grid up to R,
    compared against the configured constant 1/C."""
    if R > 1.0 + 1e-12:
        raise ParameterError("stated for R <= 1")
    if boundary_check is not None and not boundary_check:
        raise ModelAssumptionError("strip boundary in the ball is not on L")
    if radii is None:
        radii = np.linspace(R / 20.0, R, 20)
    ratios = np.array([sigma.area_in_ball(p, r) / r ** 2 for r in radii])
    return {
        "radii": radii,
        "ratios": ratios,
        "min_ratio": float(np.min(ratios)),
        "margin": float(np.min(ratios) - inv_C),
    }


# ---------------------------------------------------------------------------
# compactification chart
# ---------------------------------------------------------------------------

@dataclass
class CompactifiedChart:
    """Adapted coordinates, cutoff data, and modified Liouville form at a
    point of C^n, for the two-plane compactification with parameter T."""

    adapted_x: np.ndarray
    adapted_y: np.ndarray
    t_value: float                # sum x^2 - sum y^2
    eta: float
    h: float
    lambda_tilde: np.ndarray      # real covector, (Re.., Im..) order
    sphere_x: np.ndarray          # F-coordinates toward infinity_0
    sphere_y: np.ndarray          # F-coordinates toward infinity_phi


def _eta_cutoff(t, T):
    """C^4 odd ramp: 0 on [-T, T], +-1 beyond +-2T, |eta'| = O(1/T). The
    ninth-order smoothstep keeps finite-difference d(lambda-tilde) = omega
    checks clean across the cutoff knots."""
    s = np.sign(t)
    u = (np.abs(t) - T) / T
    u = np.clip(u, 0.0, 1.0)
    return s * u ** 5 * (126.0 + u * (-420.0 + u * (540.0
                                                    + u * (-315.0
                                                           + 70.0 * u))))


def _eta_cutoff_deriv(t, T):
    u = (np.abs(t) - T) / T
    if u <= 0.0 or u >= 1.0:
        return 0.0
    return 630.0 * u ** 4 * (1.0 - u) ** 4 / T


def dlambda_tilde_residual(z, phi, T, h=5e-5):
    """max_{i<j} |d(lambda-tilde)(e_i, e_j) - omega(e_i, e_j)| at z, by
    fourth-order central differences (the ramp's high derivatives overwhelm
    a second-order stencil near the cutoff)."""
    z = np.asarray(z, complex)
    n = len(z)
    zr = np.concatenate([z.real, z.imag])

    def lt(v):
        return compactify(v[:n] + 1j * v[n:], phi, T).lambda_tilde

    def d_along(i, comp):
        e = np.zeros(2 * n)
        e[i] = 1.0
        return (-lt(zr + 2 * h * e)[comp] + 8.0 * lt(zr + h * e)[comp]
                - 8.0 * lt(zr - h * e)[comp]
                + lt(zr - 2 * h * e)[comp]) / (12.0 * h)

    worst = 0.0
    for i in range(2 * n):
        for j in range(i + 1, 2 * n):
            om = 1.0 if j == i + n else 0.0
            worst = max(worst, abs(d_along(i, j) - d_along(j, i) - om))
    return worst


def compactify_batch(points, phi, T, f_values=None):
    """Chart evaluations over a list of points (the batched interface)."""
    if f_values is None:
        return [compactify(z, phi, T) for z in points]
    return [compactify(z, phi, T, f_value=f)
            for z, f in zip(points, f_values)]


def compactify(z, phi, T, f_value=None):
    """Chart evaluation at z for asymptotic phases phi and parameter T.

    Adapted coordinates x_j = Re z_j - cot(phi_j) Im z_j, y_j = Im z_j make
    omega = sum dx_j ^ dy_j with Pi_0 = {y = 0} and Pi_phi = {x = 0}. The
    modified Liouville form is lambda-tilde = lambda + dh with
    h = -(1/2) eta(sum x^2 - sum y^2) sum x_j y_j, vanishing for
    |sum x^2 - sum y^2| <= T. Sphere coordinates use F(r) = 1/log(1+r^2).
    When f_value (the Lagrangian potential at z) is given, the compactified
    potential f + h is reported too.
    """
    z = np.asarray(z, complex)
    phi = np.asarray(phi, float)
    if np.any(phi <= 0) or np.any(phi >= np.pi):
        raise ParameterError("phases must lie in (0, pi)")
    if T < 1:
        raise ParameterError("T must be >= 1")
    cot = 1.0 / np.tan(phi)
    x = z.real - cot * z.imag
    y = z.imag
    t_val = float(np.sum(x * x) - np.sum(y * y))
    s_val = float(np.sum(x * y))
    eta = float(_eta_cutoff(t_val, T))
    etap = float(_eta_cutoff_deriv(t_val, T))
    h = -0.5 * eta * s_val
    # dh in adapted coordinates: dh = -(1/2)(eta' dt s + eta ds)
    dh_x = -0.5 * (etap * 2.0 * x * s_val + eta * y)
    dh_y = -0.5 * (etap * (-2.0 * y) * s_val + eta * x)
    # lambda in adapted coordinates: (1/2)(x dy - y dx) (equals the standard
    # Liouville form; the cot terms cancel)
    lam_x = -0.5 * y + dh_x
    lam_y = 0.5 * x + dh_y
    # pull back to (Re z, Im z): dx_j = dRe - cot dIm, dy_j = dIm
    cov_re = lam_x
    cov_im = -cot * lam_x + lam_y
    rx = np.linalg.norm(x)
    ry = np.linalg.norm(y)
    Fx = x / rx / np.log1p(rx * rx) if rx > 0 else x * 0.0
    Fy = y / ry / np.log1p(ry * ry) if ry > 0 else y * 0.0
    chart = CompactifiedChart(x, y, t_val, eta, h,
                              np.concatenate([cov_re, cov_im]), Fx, Fy)
    if f_value is None:
        return chart
    return chart, float(f_value + h)
