"""Graphicality measurement and graph linearization over reference
Lagrangians.

Conventions. The graph of a 1-form eta over a Lagrangian W moves along the
vector field v with iota_v omega = eta, i.e. v = -J eta-sharp; with this
sign the first-order angle change of the graph is d* eta = -div eta-sharp
(the rotation family generated by d|x|^2 then has increasing angle).
"""

import numpy as np
from dataclasses import dataclass, field

from .errors import ParameterError, GraphRepresentabilityError
from .ambient import LagrangianFrame, lagrangian_angle

SLOPE_THRESHOLD = 0.3


@dataclass
class Annulus:
    center: np.ndarray
    r_in: float
    r_out: float

    def __post_init__(self):
        self.center = np.asarray(self.center, float)
        if not (0 <= self.r_in < self.r_out):
            raise ParameterError("need 0 <= r_in < r_out")

    def contains(self, pts):
        r = np.linalg.norm(np.asarray(pts, float) - self.center, axis=-1)
        return (r >= self.r_in) & (r <= self.r_out)


@dataclass
class Ball(Annulus):
    def __init__(self, center, radius):
        super().__init__(center, 0.0, radius)


@dataclass
class GraphReport:
    is_graph: bool
    norm: float               # discrete C^{k0} norm of the vector field
    k0: int
    empty: bool = False
    per_component: dict = field(default_factory=dict)


def _runs(indices):
    """Split sorted vertex indices into maximal consecutive runs."""
    if len(indices) == 0:
        return []
    breaks = np.where(np.diff(indices) > 1)[0]
    return np.split(np.asarray(indices), breaks + 1)


def c_graph_fit(L, W, region, k0=1, overlap_tol=None):
    """Try to present the curve L over the line union W inside the region.

    Vertices in the region are assigned to their nearest W component; per
    component, each maximal run of consecutive curve vertices is one sheet
    parametrized by the signed coordinate s along the line. L is a graph
    when every sheet is strictly monotone in s (no folds) and no two sheets
    of the same line overlap in s. The norm is the discrete C^{k0} norm of
    the perpendicular offset v(s), derivatives by centered differences.
    """
    if k0 < 0 or k0 > 3:
        raise ParameterError("k0 must be between 0 and 3")
    sheets = {}
    for comp in L.components:
        z = comp.as_complex()
        pts = comp.vertices
        inside = region.contains(pts)
        if not np.any(inside):
            continue
        d = np.stack([c.distance(z[:, None]) for c in W.components])
        nearest = np.argmin(d, axis=0)
        for wi in range(len(W.components)):
            idx = np.where(inside & (nearest == wi))[0]
            for run in _runs(idx):
                if len(run) < 2:
                    continue
                ang = W.components[wi].phases[0]
                u = z[run] * np.exp(-1j * ang)
                sheets.setdefault(wi, []).append(
                    (np.real(u), np.imag(u)))
    if not sheets:
        return GraphReport(False, np.nan, k0, empty=True)
    is_graph = True
    worst = 0.0
    per_component = {}
    for wi, runs in sheets.items():
        intervals = []
        comp_norm = 0.0
        for s, v in runs:
            ds = np.diff(s)
            if np.any(ds == 0) or (np.any(ds > 0) and np.any(ds < 0)):
                is_graph = False
                continue
            if ds[0] < 0:
                s, v = s[::-1], v[::-1]
            intervals.append((s[0], s[-1]))
            comp_norm = max(comp_norm, float(np.max(np.abs(v))))
            if k0 >= 1 and len(s) >= 3:
                dv = v.copy()
                for order in range(1, k0 + 1):
                    dv = np.gradient(dv, s)
                    comp_norm = max(comp_norm, float(np.max(np.abs(dv))))
        tol = overlap_tol
        if tol is None:
            tol = 1e-9
        intervals.sort()
        for (a0, b0), (a1, b1) in zip(intervals, intervals[1:]):
            if a1 < b0 - tol:
                is_graph = False
        per_component[wi] = comp_norm
        worst = max(worst, comp_norm)
    return GraphReport(is_graph, worst if is_graph else np.nan, k0,
                       per_component=per_component)


# ---------------------------------------------------------------------------
# graphs of 1-forms over planes and their linearization
# ---------------------------------------------------------------------------

@dataclass
class OneFormField:
    """1-form on R^n given by callables; derivatives fall back to centered
    differences when not supplied.

    eta(x): (..., n) -> (..., n) components; jac(x) optional with
    jac[..., i, j] = d eta_j / d x_i.
    """

    eta: callable
    jac: callable = None
    fd_step: float = 1e-6

    def jacobian(self, x):
        if self.jac is not None:
            return self.jac(x)
        x = np.asarray(x, float)
        n = x.shape[-1]
        out = np.empty(x.shape[:-1] + (n, n))
        for i in range(n):
            e = np.zeros(n)
            e[i] = self.fd_step
            out[..., i, :] = (self.eta(x + e) - self.eta(x - e)) \
                / (2.0 * self.fd_step)
        return out


def graph_map(field, x):
    """Graph point of the 1-form over Pi_0 = R^n: x - i eta(x) in C^n."""
    return x.astype(complex) - 1j * field.eta(x)


def graph_frame(field, x):
    """Tangent frame of the graph at base x: rows e_i - i d_i eta."""
    n = len(x)
    J = field.jacobian(np.asarray(x, float))
    return LagrangianFrame(graph_map(field, np.asarray(x, float)),
                           np.eye(n) - 1j * J)


def linearize_graph(field, region_samples, slope_threshold=SLOPE_THRESHOLD):
    """Residuals of the graph linearization over the plane Pi_0.

    Returns (closedness residual, angle residual):
      sup | pullback of omega - d eta |   (max over coordinate pairs)
      sup | theta_L - theta_W - d* eta |  (d* eta = -sum_i d_i eta_i)
    Both are O(|eta|_{C^1}^2) for small graphs. Raises when the slope
    |eta| + |grad eta| exceeds the threshold somewhere on the samples.
    """
    closed_res = 0.0
    angle_res = 0.0
    for x in np.atleast_2d(region_samples):
        x = np.asarray(x, float)
        J = field.jacobian(x)
        ev = field.eta(x)
        slope = float(np.max(np.abs(ev)) + np.max(np.abs(J)))
        if slope > slope_threshold:
            raise GraphRepresentabilityError(
                "slope %.3f exceeds threshold %.3f at %s"
                % (slope, slope_threshold, x), where=x)
        frame = graph_frame(field, x)
        v = frame.vectors
        n = len(x)
        for i in range(n):
            for j in range(i + 1, n):
                pull = np.imag(np.vdot(v[i], v[j]))
                deta = J[i, j] - J[j, i]
                closed_res = max(closed_res, abs(pull - deta))
        theta = lagrangian_angle(frame, tol=np.inf)
        dstar = -np.trace(J)
        angle_res = max(angle_res, abs(theta - dstar))
    return closed_res, angle_res
