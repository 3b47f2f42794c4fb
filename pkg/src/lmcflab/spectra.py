"""Special Lagrangian cones, link spectra, drift-Laplacian modes, static
solutions, stability accounting, and the elliptic three-annulus dichotomy.

Supported link families: round spheres (plane components in C^n), flat tori
given by a 2x2 lattice metric (the Harvey-Lawson T^2 cone in C^3 being the
standard instance), and disjoint unions of these.
"""

import numpy as np
from dataclasses import dataclass, field

from .errors import ParameterError
from .ambient import plane_frame, plane_gaussian_area
from . import annulus as _annulus


def sphere_area(n):
    """Area of the unit sphere S^{n-1} in R^n."""
    from math import gamma, pi
    return 2.0 * pi ** (n / 2.0) / gamma(n / 2.0)


# ---------------------------------------------------------------------------
# plane-union cones
# ---------------------------------------------------------------------------

@dataclass
class PlaneComponent:
    """One special Lagrangian n-plane with a grading."""

    phases: np.ndarray          # plane = (e^{i phi_1},..) R^n
    grading: float = None       # real-valued theta_W; defaults to sum(phases)

    def __post_init__(self):
        self.phases = np.atleast_1d(np.asarray(self.phases, float))
        if self.grading is None:
            self.grading = float(np.sum(self.phases))

    @property
    def n(self):
        return len(self.phases)

    def frame(self):
        return plane_frame(self.phases)

    def basis(self):
        """Unitary matrix whose columns span the plane over R."""
        return np.diag(np.exp(1j * self.phases))

    def distance(self, z):
        """Euclidean distance from points z (shape (..., n)) to the plane."""
        z = np.asarray(z, complex)
        u = z * np.exp(-1j * self.phases)
        return np.linalg.norm(np.imag(u), axis=-1)


@dataclass
class PlaneUnionCone:
    """Union of special Lagrangian planes with per-component gradings.

    Component j carries the locally constant angle value theta_W used by the
    distance and excess functionals.
    """

    components: list

    def __post_init__(self):
        if not self.components:
            raise ParameterError("cone needs at least one component")
        ns = {c.n for c in self.components}
        if len(ns) != 1:
            raise ParameterError("components must share the ambient dimension")

    @property
    def n(self):
        return self.components[0].n

    def gradings(self):
        return np.array([c.grading for c in self.components])

    def distance(self, z):
        """Distance to the union, plus the index of the nearest component."""
        d = np.stack([c.distance(z) for c in self.components])
        idx = np.argmin(d, axis=0)
        return np.min(d, axis=0), idx

    def gaussian_area_exact(self, center=None, scale=1.0):
        """Theta of the union: sum of exp(-dist^2/4) over components."""
        if center is None:
            return float(len(self.components))
        center = np.asarray(center, complex)
        return float(sum(
            plane_gaussian_area(self.n, c.distance(center), scale)
            for c in self.components))

    def _gaussian_area(self, center=None, scale=1.0, tol=1e-12,
                      area_ratio_bound=None):
        return self.gaussian_area_exact(center, scale)


def line_union(angles, gradings=None):
    """PlaneUnionCone of lines through the origin of C (n = 1 testbed)."""
    angles = np.atleast_1d(np.asarray(angles, float))
    if gradings is None:
        gradings = angles
    return PlaneUnionCone([PlaneComponent(np.array([a]), float(g))
                           for a, g in zip(angles, gradings)])


def two_plane_cone(phases):
    """Pi_0 union Pi_phi with the standard gradings (0 and sum phi)."""
    phases = np.asarray(phases, float)
    n = len(phases)
    return PlaneUnionCone([PlaneComponent(np.zeros(n), 0.0),
                           PlaneComponent(phases)])


# ---------------------------------------------------------------------------
# link spectra
# ---------------------------------------------------------------------------

@dataclass
class LinkSpectrum:
    """Sorted link eigenvalues with multiplicities and provenance."""

    n: int                      # cone dimension
    mu: np.ndarray
    multiplicity: np.ndarray
    provenance: str             # analytic-plane | lattice-torus | union
    components: int = 1

    def degrees(self):
        return np.array([degree_of(m, self.n) for m in self.mu])


def sphere_harmonic_multiplicity(n, k):
    """Dimension of degree-k spherical harmonics on S^{n-1} in R^n."""
    from math import comb
    if k == 0:
        return 1
    if n == 1:
        return 0
    if n == 2:
        return 2
    lower = comb(n + k - 3, k - 2) if k >= 2 else 0
    return comb(n + k - 1, k) - lower


@dataclass
class PlaneLink:
    """Round sphere link of a plane in C^n."""

    n: int


@dataclass
class TorusLink:
    """Flat 2-torus link R^2_theta / (2 pi Z)^2 with metric g (2x2).

    Eigenfunctions e^{i k.theta}, k integer pair; eigenvalues k^T g^{-1} k.
    """

    metric: np.ndarray
    coordinate_span: int = 6   # dim of the span of ambient coordinates
    su_stabilizer_dim: int = 2

    def __post_init__(self):
        self.metric = np.asarray(self.metric, float)
        if self.metric.shape != (2, 2):
            raise ParameterError("torus metric must be 2x2")


def harvey_lawson_t2_link():
    """Link of the T^2 cone over (e^{i t1}, e^{i t2}, e^{-i(t1+t2)})/sqrt(3).

    The induced flat metric in the (t1, t2) chart is (1/3) [[2,1],[1,2]]:
    each circle factor contributes |d e^{i t}|^2/3 and the third coordinate
    couples the two angles. Its inverse is [[2,-1],[-1,2]].
    """
    return TorusLink(np.array([[2.0, 1.0], [1.0, 2.0]]) / 3.0,
                     coordinate_span=6, su_stabilizer_dim=2)


def link_spectrum(descriptor, mu_max=40.0):
    """Link Laplacian spectrum for a supported cone descriptor.

    Accepts PlaneLink, TorusLink, PlaneUnionCone, or a list of descriptors
    (disjoint union). mu capped at mu_max.
    """
    if isinstance(descriptor, PlaneLink):
        n = descriptor.n
        mus, mult = [], []
        k = 0
        while True:
            mu = k * (k + n - 2)
            if k >= 1 and mu > mu_max:
                break
            mus.append(float(mu))
            mult.append(sphere_harmonic_multiplicity(n, k))
            k += 1
        return LinkSpectrum(n, np.array(mus), np.array(mult),
                            "analytic-plane")
    if isinstance(descriptor, TorusLink):
        ginv = np.linalg.inv(descriptor.metric)
        kmax = int(np.ceil(np.sqrt(mu_max / max(np.min(np.linalg.eigvalsh(
            ginv)), 1e-12)))) + 2
        vals = {}
        for k1 in range(-kmax, kmax + 1):
            for k2 in range(-kmax, kmax + 1):
                k = np.array([k1, k2], float)
                mu = float(k @ ginv @ k)
                if mu > mu_max + 1e-9:
                    continue
                key = round(mu, 9)
                vals[key] = vals.get(key, 0) + 1
        mus = np.array(sorted(vals))
        mult = np.array([vals[m] for m in sorted(vals)])
        return LinkSpectrum(3, mus, mult, "lattice-torus")
    if isinstance(descriptor, PlaneUnionCone):
        descriptor = [PlaneLink(c.n) for c in descriptor.components]
    if isinstance(descriptor, (list, tuple)):
        parts = [link_spectrum(d, mu_max) for d in descriptor]
        n = parts[0].n
        if any(p.n != n for p in parts):
            raise ParameterError("union components must share dimension")
        vals = {}
        for p in parts:
            for m, c in zip(p.mu, p.multiplicity):
                key = round(float(m), 9)
                vals[key] = vals.get(key, 0) + int(c)
        mus = np.array(sorted(vals))
        mult = np.array([vals[m] for m in sorted(vals)])
        return LinkSpectrum(n, mus, mult, "union", components=len(parts))
    raise ParameterError(
        "unsupported cone descriptor %r; supported: PlaneLink, TorusLink, "
        "PlaneUnionCone, list of these" % type(descriptor))


def degree_of(mu, n):
    """Positive root of d (d + n - 2) = mu (homogeneity of cone harmonics)."""
    if mu < 0:
        raise ParameterError("link eigenvalue must be nonnegative")
    b = n - 2.0
    return 0.5 * (-b + np.sqrt(b * b + 4.0 * mu))


# ---------------------------------------------------------------------------
# drift modes
# ---------------------------------------------------------------------------

@dataclass
class HarmonicMode:
    """Homogeneous degree-d harmonic on a cone as a drift eigenfunction.

    L0 f = (Delta - x.grad/2) f = -(d/2) f for homogeneous harmonic f, since
    Delta f = 0 and x.grad f = d f; the rescaled-time growth factor of the
    1-form mode d f is exp((lambda + 1) t) with lambda + 1 = 1 - d/2.
    """

    degree: float
    eigenvalue: float = field(init=False)
    growth_exponent: float = field(init=False)

    def __post_init__(self):
        if self.degree < 0:
            raise ParameterError("degree must be nonnegative")
        self.eigenvalue = -0.5 * self.degree
        self.growth_exponent = 1.0 - 0.5 * self.degree


def drift_mode(d, n=None):
    """Drift mode data for a homogeneous degree-d harmonic; n unused beyond
    the interface (the eigenvalue is dimension-independent)."""
    return HarmonicMode(float(d))


def radial_drift_eigenvalue(mu, n, rmax=12.0, bracket_pad=0.45,
                            rtol=1e-12):
    """Independent cross-check of the drift eigenvalue by shooting.

    Separating the drift Laplacian on the cone with link eigenvalue mu
    gives the radial problem
        R'' + ((n-1)/r - r/2) R' - (mu/r^2) R = lam R  on (0, rmax],
    whose decaying solutions exist only at the eigenvalues; the lowest is
    lam = -d/2 with R = r^d, d the positive indicial root of
    d(d + n - 2) = mu. The oracle integrates outward from the regular
    singular point with the indicial start r^s (series data independent of
    the drift identity) and bisects the Gaussian-weighted endpoint value,
    which changes sign across the eigenvalue. Accepts mu or (by degree)
    d via mu = d (d + n - 2).
    """
    from scipy.integrate import solve_ivp

    s = degree_of(mu, n)
    r0 = 1e-3

    def endpoint(lam):
        def rhs(r, y):
            R, dR = y
            return [dR, lam * R + (mu / (r * r)) * R
                    - ((n - 1) / r - r / 2.0) * dR]
        # regular-singular start: R = r^s (1 + c1 r^2 + ...), the leading
        # correction from matching lam at order r^{s+2}
        c1 = (lam + s / 2.0) / (2.0 * (2.0 * s + n))
        y0 = [r0 ** s * (1.0 + c1 * r0 * r0),
              s * r0 ** (s - 1.0) * (1.0 + c1 * (s + 2.0) / s * r0 * r0)
              if s > 0 else 2.0 * c1 * r0]
        sol = solve_ivp(rhs, (r0, rmax), y0, rtol=1e-11, atol=1e-300,
                        dense_output=False)
        return sol.y[0, -1] * np.exp(-rmax * rmax / 8.0)

    from scipy.optimize import brentq
    lo = -s / 2.0 - bracket_pad
    hi = -s / 2.0 + bracket_pad
    if endpoint(lo) * endpoint(hi) > 0:
        raise ParameterError("shooting bracket does not straddle the "
                             "eigenvalue; widen bracket_pad")
    return float(brentq(endpoint, lo, hi, xtol=rtol, rtol=1e-15))


# ---------------------------------------------------------------------------
# static 1-forms
# ---------------------------------------------------------------------------

@dataclass
class StaticForm:
    """Static 1-form d(f + c |x|^2) on one plane component.

    quadratic holds the symmetric coefficient matrix of the harmonic part f
    (trace zero), radial_coefficient is c. As drift-heat data both parts are
    degree-2 modes with growth exponent 0.
    """

    component: int
    quadratic: np.ndarray
    radial_coefficient: float = 0.0

    def degree(self):
        return 2.0


def static_basis(cone):
    """Static 1-form generators per Lemma-level accounting: the degree-2
    harmonic quadratics of each plane component plus the per-component
    d|x|^2 rotation mode (Delta |x|^2 = 2n on the component)."""
    if not isinstance(cone, PlaneUnionCone):
        raise ParameterError("static_basis supports plane-union cones")
    n = cone.n
    out = []
    for ci in range(len(cone.components)):
        # harmonic quadratics: x_i x_j (i<j) and x_i^2 - x_{i+1}^2
        for i in range(n):
            for j in range(i + 1, n):
                q = np.zeros((n, n))
                q[i, j] = q[j, i] = 0.5
                out.append(StaticForm(ci, q))
        for i in range(n - 1):
            q = np.zeros((n, n))
            q[i, i] = 1.0
            q[i + 1, i + 1] = -1.0
            out.append(StaticForm(ci, q))
        out.append(StaticForm(ci, np.zeros((n, n)), radial_coefficient=1.0))
    return out


def static_basis_dimension(n, components=1):
    return components * (n * (n + 1) // 2 - 1 + 1)


# ---------------------------------------------------------------------------
# stability
# ---------------------------------------------------------------------------

@dataclass
class StabilityReport:
    is_stable: bool
    offending_degrees: dict    # degree -> (actual mult, expected mult)
    expected: dict


def stability_check(descriptor, degree_tol=1e-9):
    """Joyce-type stability accounting for a connected-link cone.

    Counts harmonic homogeneity degrees in [0, 2] from the link spectrum and
    compares against the geometrically forced ones: constants (1), the span
    of ambient coordinate restrictions at degree 1, and the su(n)-induced
    quadratics (dim su(n) minus the cone's su(n) stabilizer) at degree 2.
    Any other degree in (0, 2] is offending, as is a multiplicity mismatch.
    """
    spec = link_spectrum(descriptor, mu_max=2.5 * (2.5 + 1) + 1)
    if spec.provenance == "union" or spec.components > 1:
        raise ParameterError("stability_check expects a connected link")
    n = spec.n
    if isinstance(descriptor, PlaneLink):
        coord_span = n
        stab = n * (n - 1) // 2          # SO(n) preserves R^n in SU(n)
    elif isinstance(descriptor, TorusLink):
        coord_span = descriptor.coordinate_span
        stab = descriptor.su_stabilizer_dim
    else:
        raise ParameterError("unsupported descriptor for stability_check")
    expected = {0.0: 1, 1.0: coord_span, 2.0: n * n - 1 - stab}

    actual = {}
    for mu, mult in zip(spec.mu, spec.multiplicity):
        dd = degree_of(mu, n)
        if dd > 2.0 + degree_tol:
            continue
        key = round(float(dd), 9)
        actual[key] = actual.get(key, 0) + int(mult)

    offending = {}
    keys = set(actual) | set(expected)
    for k in sorted(keys):
        a = actual.get(k, 0)
        e = expected.get(k, 0)
        # tolerate degree keys that are the same up to degree_tol
        matches = [kk for kk in expected if abs(kk - k) <= 1e-6]
        if matches:
            e = expected[matches[0]]
        if a != e:
            offending[k] = (a, e)
    return StabilityReport(not offending, offending, expected)


# ---------------------------------------------------------------------------
# elliptic three-annulus lemma
# ---------------------------------------------------------------------------

def annulus_norm_sq(modes, n, r_outer, r_inner):
    """Exact squared L^2 norm over the annulus {r_inner < |x| < r_outer} of a
    combination of link-orthonormal homogeneous 1-form modes.

    modes: iterable of (degree e, coefficient a); |mode|(r z) = r^e |mode|(z)
    with unit link L^2 norm. The radial factor integrates r^{2e + n - 1}.
    """
    total = 0.0
    for e, a in modes:
        q = 2.0 * e + n
        if abs(q) < 1e-14:
            rad = np.log(r_outer / r_inner)
        else:
            rad = (r_outer ** q - r_inner ** q) / q
        total += a * a * rad
    return total


def three_annulus_elliptic(modes, rho0, d, lam1, lam2, n):
    """Evaluate the elliptic three-annulus alternatives for a harmonic
    1-form given as homogeneous modes on the annulus A_{1, rho0^3}.

    With N_k the L^2 norm over A_{rho0^k, rho0^{k+1}}:
      (i)  hypothesis N_1 >= rho0^{d - lam1 + n/2} N_0
           conclusion N_2 >= rho0^{d - lam2 + n/2} N_1
      (ii) hypothesis N_1 >= rho0^{-d - lam1 - n/2} N_2
           conclusion N_0 >= rho0^{-d - lam2 - n/2} N_1
    For mode sets with no degree-d term and admissible (lam1, lam2, rho0)
    the report asserts that conclusion (i) or (ii) holds.
    """
    if not modes:
        raise ParameterError("empty mode list")
    if not (0 < lam1 < lam2):
        raise ParameterError("need 0 < lam1 < lam2")
    if not (0 < rho0 < 1):
        raise ParameterError("need rho0 in (0,1)")
    norms = np.sqrt([annulus_norm_sq(modes, n, rho0 ** k, rho0 ** (k + 1))
                     for k in range(3)])
    log_inv = -np.log(rho0)
    # shared core in per-step log units: mode log-ratio per annulus step
    degrees = np.array([e for e, _ in modes])
    step_rates = -(degrees + n / 2.0) * log_inv
    d_eff = -(d + n / 2.0) * log_inv
    lam1_eff = lam1 * log_inv
    lam2_eff = lam2 * log_inv
    return _annulus.evaluate_clauses(norms, step_rates, d_eff, lam1_eff,
                                     lam2_eff,
                                     has_degree_d=bool(np.any(
                                         np.abs(degrees - d) < 1e-12)))


def suggest_elliptic_lambdas(degrees, d, n, lam1=None, lam2=None):
    """Smallest gap of the degree set to d, for choosing admissible lambdas
    and rho0; see annulus.dichotomy_admissible."""
    degrees = np.asarray(degrees, float)
    gaps = np.abs(degrees - d)
    gaps = gaps[gaps > 1e-12]
    return float(np.min(gaps)) if gaps.size else np.inf
