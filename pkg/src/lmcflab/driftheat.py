"""Exact solution of the linearized rescaled flow (the drift heat equation
d eta/dt = Delta eta + (eta - x.grad eta)/2) for exact 1-forms on cones, by
expansion in drift eigenmodes.

On plane components the eigenbasis is the Gaussian Hermite family: phi_m =
prod_i h_{m_i}(x_i) with h_k orthonormal for the weight e^{-|x|^2/4}, drift
eigenvalue -(deg)/2, so the 1-form mode d phi evolves by e^{(1 - deg/2) t}.
Expansion coefficients are stored against unit Gaussian-norm 1-form modes.

The n = 2 logarithmic mode d ln|x| is extracted first through its flux
around the origin. Its time factor is configurable: the default exponent
t/2 follows the decomposition lemma's case (iii) statement, while the
alternative t matches the displayed decomposition (the source displays both
and they differ; this is surfaced, not resolved).
"""

import numpy as np
from dataclasses import dataclass, field, replace
from math import factorial
from numpy.polynomial.hermite import hermgauss
from numpy.polynomial.hermite_e import hermeval

from .errors import ParameterError, TailEnergyError
from . import annulus as _annulus

LOG_MODE_FACTORS = {"half": 0.5, "full": 1.0}


# ---------------------------------------------------------------------------
# Hermite basis for the Gaussian weight e^{-x^2/4}
# ---------------------------------------------------------------------------

def hermite_fn(k, x):
    """Orthonormal h_k for int h_j h_k e^{-x^2/4} dx = delta_jk."""
    c = np.zeros(k + 1)
    c[k] = 1.0
    return hermeval(np.asarray(x, float) / np.sqrt(2.0), c) \
        / np.sqrt(2.0 * np.sqrt(np.pi) * factorial(k))


def hermite_deriv_coeff(k):
    """h_k' = sqrt(k/2) h_{k-1}."""
    return np.sqrt(k / 2.0)


def gauss_nodes(order):
    """Nodes/weights with int f(x) e^{-x^2/4} dx = sum w f(node)."""
    t, w = hermgauss(order)
    return 2.0 * t, 2.0 * w


@dataclass(frozen=True)
class PlaneMode:
    """One Hermite 1-form mode on a plane component: d phi_m normalized to
    unit Gaussian L^2 norm (norm of d phi_m is sqrt(deg/2))."""

    component: int
    multi_index: tuple

    @property
    def degree(self):
        return float(sum(self.multi_index))

    def phi(self, x):
        x = np.atleast_2d(np.asarray(x, float))
        out = np.ones(len(x))
        for i, k in enumerate(self.multi_index):
            out = out * hermite_fn(k, x[:, i])
        return out

    def dphi(self, x):
        """Gradient of phi_m at points x, shape (m, n)."""
        x = np.atleast_2d(np.asarray(x, float))
        npts, n = x.shape
        vals = np.empty((npts, n, 2))
        for i, k in enumerate(self.multi_index):
            vals[:, i, 0] = hermite_fn(k, x[:, i])
            vals[:, i, 1] = (hermite_deriv_coeff(k)
                             * hermite_fn(k - 1, x[:, i])) if k > 0 else 0.0
        out = np.empty((npts, n))
        for j in range(n):
            prod = np.ones(npts)
            for i in range(n):
                prod = prod * vals[:, i, 1 if i == j else 0]
            out[:, j] = prod
        return out

    def unit_dphi(self, x):
        return self.dphi(x) / np.sqrt(self.degree / 2.0)


@dataclass
class ModeEntry:
    degree: float
    coeff: float
    mode: PlaneMode = None        # concrete realization when available

    @property
    def growth_exponent(self):
        return 1.0 - 0.5 * self.degree


@dataclass
class ModeExpansion:
    """Coefficients against unit-norm drift 1-form eigenmodes, plus the
    n = 2 logarithmic coefficient per the decomposition convention."""

    n: int
    entries: list
    log_coeff: float = 0.0
    log_factor: str = "half"      # "half": e^{t/2}; "full": e^{t}
    cone_ref: str = "plane"
    tail_energy: float = 0.0

    def __post_init__(self):
        if self.log_coeff != 0.0 and self.n != 2:
            raise ParameterError("log mode exists only for n = 2 planes")
        if self.log_factor not in LOG_MODE_FACTORS:
            raise ParameterError("log_factor must be 'half' or 'full'")
        if not np.all(np.isfinite([e.coeff for e in self.entries]
                                  + [self.log_coeff])):
            raise ParameterError("expansion coefficients must be finite")

    def coefficients(self):
        return np.array([e.coeff for e in self.entries])

    def degrees(self):
        return np.array([e.degree for e in self.entries])

    def growth_exponents(self, include_log=True):
        g = [1.0 - 0.5 * e.degree for e in self.entries]
        if include_log and self.log_coeff != 0.0:
            g.append(LOG_MODE_FACTORS[self.log_factor])
        return np.array(g)


def evolve(expansion, t):
    """Exact drift-heat evolution: a_j -> a_j e^{(1 - d_j/2) t}; the log
    coefficient evolves by the configured factor."""
    entries = [replace(e, coeff=e.coeff * np.exp((1.0 - 0.5 * e.degree) * t))
               for e in expansion.entries]
    log_c = expansion.log_coeff * np.exp(
        LOG_MODE_FACTORS[expansion.log_factor] * t)
    return replace(expansion, entries=entries, log_coeff=log_c)


def eta_norm(expansion, t=0.0):
    """Norm ||eta(t)||^2 = |evolved log coeff|^2 + ||eta_1(t)||_{L^2}^2."""
    ev = evolve(expansion, t) if t != 0.0 else expansion
    return float(np.sqrt(ev.log_coeff ** 2
                         + np.sum(ev.coefficients() ** 2)))


def eta_eval(expansion, x, component=0):
    """Evaluate the smooth part eta_1 at points x on one plane component."""
    x = np.atleast_2d(np.asarray(x, float))
    out = np.zeros((len(x), expansion.n))
    for e in expansion.entries:
        if e.mode is None:
            raise ParameterError("expansion lacks concrete plane modes")
        if e.mode.component != component:
            continue
        out += e.coeff * e.mode.unit_dphi(x)
    return out


# ---------------------------------------------------------------------------
# initial-data expansion
# ---------------------------------------------------------------------------

def _near_origin_growth_ok(eta_fn, n, bound_factor=50.0):
    """Hypothesis check: |x|^{1.1} eta bounded on the unit scales; compares
    the smallest-radius sample against the r = 1 scale."""
    base = None
    for r in (1.0, 0.1, 0.01, 1e-3):
        x = np.full((1, n), r / np.sqrt(n))
        val = float(np.max(np.abs(eta_fn(x)))) * r ** 1.1
        if base is None:
            base = max(val, 1e-30)
        elif val > bound_factor * base:
            return False
    return True


def log_mode_flux(eta_fn, radius=1e-2, samples=720):
    """a_0 = (1/2pi) circulation of the radial component on a small circle
    (d ln|x| carries unit flux). Smooth polynomial modes contribute O(r^2)
    flux, removed by Richardson extrapolation over a radius halving."""

    def flux(r):
        th = np.linspace(0.0, 2.0 * np.pi, samples, endpoint=False)
        ring = r * np.column_stack([np.cos(th), np.sin(th)])
        vals = eta_fn(ring)
        radial = np.sum(vals * ring, axis=1) / r    # <eta, r-hat>
        return float(np.mean(radial) * r)

    f1 = flux(radius)
    f2 = flux(radius / 2.0)
    return (4.0 * f2 - f1) / 3.0


def expand_initial(eta_fn, n, max_degree=12, quad_order=40, tail_tol=1e-8,
                   component=0, log_factor="half", extract_log=None):
    """Project a sampled exact 1-form on a plane component onto the drift
    eigenbasis in the Gaussian inner product.

    eta_fn: callable (m, n) -> (m, n). Truncation at total degree
    max_degree with the tail energy reported; raises TailEnergyError above
    tail_tol (relative). For n = 2 the d ln|x| coefficient is extracted
    first via its flux.
    """
    if extract_log is None:
        extract_log = (n == 2)
    if not _near_origin_growth_ok(eta_fn, n):
        raise ParameterError(
            "initial 1-form violates the |x|^{1.1} boundedness hypothesis "
            "near the origin")
    a0 = 0.0
    fn = eta_fn
    if extract_log and n == 2:
        a0 = log_mode_flux(eta_fn)
        if abs(a0) < 1e-12:
            a0 = 0.0
        else:
            def fn(x, _base=eta_fn, _a0=a0):
                x = np.atleast_2d(x)
                r2 = np.sum(x * x, axis=1)[:, None]
                return _base(x) - _a0 * x / r2
    nodes, weights = gauss_nodes(quad_order)
    grids = np.meshgrid(*([nodes] * n), indexing="ij")
    pts = np.column_stack([g.ravel() for g in grids])
    wgrids = np.meshgrid(*([weights] * n), indexing="ij")
    wts = np.ones(len(pts))
    for g in wgrids:
        wts = wts * g.ravel()
    vals = fn(pts)
    total_energy = float(np.sum(wts * np.sum(vals ** 2, axis=1)))
    entries = []
    captured = 0.0
    for alpha in _multi_indices(n, max_degree):
        if sum(alpha) == 0:
            continue
        mode = PlaneMode(component, alpha)
        basis_vals = mode.unit_dphi(pts)
        coeff = float(np.sum(wts * np.sum(vals * basis_vals, axis=1)))
        if abs(coeff) > 1e-14 * max(1.0, np.sqrt(total_energy)):
            entries.append(ModeEntry(float(sum(alpha)), coeff, mode))
        captured += coeff ** 2
    tail = max(total_energy - captured, 0.0)
    rel_tail = tail / max(total_energy, 1e-300)
    if rel_tail > tail_tol and total_energy > 1e-28:
        raise TailEnergyError(
            "expansion tail energy %.3e (relative %.3e) above %.1e; "
            "raise max_degree" % (tail, rel_tail, tail_tol),
            estimate=rel_tail)
    return ModeExpansion(n, entries, log_coeff=a0, log_factor=log_factor,
                         tail_energy=tail)


def _multi_indices(n, max_total):
    if n == 1:
        for k in range(max_total + 1):
            yield (k,)
        return
    for k in range(max_total + 1):
        for rest in _multi_indices(n - 1, max_total - k):
            yield (k,) + rest


# ---------------------------------------------------------------------------
# parabolic three-annulus lemma
# ---------------------------------------------------------------------------

def three_annulus_parabolic(expansion, d, lam1, lam2):
    """Clause report for the parabolic three-annulus dichotomy at unit time
    steps: growth clause (1), decay clause (2), and the no-degree-d
    dichotomy (3), evaluated on ||eta(0)||, ||eta(1)||, ||eta(2)||. The
    target rate d is compared against the growth exponents 1 - d_j/2."""
    norms = np.array([eta_norm(expansion, t) for t in (0.0, 1.0, 2.0)])
    rates = expansion.growth_exponents()
    has_d = bool(np.any(np.abs(rates - d) < 1e-12))
    return _annulus.evaluate_clauses(norms, rates, d, lam1, lam2,
                                     has_degree_d=has_d)


# ---------------------------------------------------------------------------
# pointwise derivative envelope
# ---------------------------------------------------------------------------

def _dphi_derivative_tensor(mode, x, order):
    """order-th derivative tensor of the 1-form d phi at points x; shape
    (m, n, n^order). Uses the Hermite ladder h_k' = sqrt(k/2) h_{k-1}."""
    x = np.atleast_2d(np.asarray(x, float))
    npts, n = x.shape
    kmax = max(mode.multi_index) + 1
    table = np.zeros((npts, n, order + 2, kmax + 1))
    for i, k in enumerate(mode.multi_index):
        for d in range(order + 2):
            kk = k - d
            if kk < 0:
                continue
            coef = 1.0
            for j in range(d):
                coef *= hermite_deriv_coeff(k - j)
            table[:, i, d, k] = coef * hermite_fn(kk, x[:, i])
    shape = (npts, n) + (n,) * order
    out = np.zeros(shape)
    for idx in np.ndindex(*((n,) * order)):
        for j in range(n):
            counts = [0] * n
            counts[j] += 1
            for ax in idx:
                counts[ax] += 1
            prod = np.ones(npts)
            for i, k in enumerate(mode.multi_index):
                prod = prod * table[:, i, counts[i], k]
            out[(slice(None), j) + idx] += prod
    return out


def pointwise_envelope_check(expansion, k, samples, p_grid=None,
                             envelope_constant=None):
    """Worst ratio |grad^k eta(1)|^2 / (max(|x|^{-k}, 1) e^{|x|^2/(4p)}
    ||eta(0)||^2) over the samples, with the witnessing p searched on a
    grid of values > 1. For n = 2 with a log mode the envelope applies to
    the smooth part eta_1 only."""
    if k > 2:
        raise ParameterError("envelope check supports k <= 2")
    if p_grid is None:
        p_grid = np.concatenate([np.linspace(1.05, 2.0, 20),
                                 np.linspace(2.1, 4.0, 10)])
    samples = np.atleast_2d(np.asarray(samples, float))
    norm0_sq = eta_norm(expansion, 0.0) ** 2
    if norm0_sq == 0.0:
        return {"worst_ratio": 0.0, "witnessing_p": float(p_grid[0]),
                "per_p": {float(p): 0.0 for p in p_grid}}
    ev = evolve(expansion, 1.0)
    grad_sq = np.zeros(len(samples))
    acc = None
    for e in ev.entries:
        if e.mode is None:
            raise ParameterError("expansion lacks concrete plane modes")
        unit = 1.0 / np.sqrt(e.degree / 2.0)
        tens = _dphi_derivative_tensor(e.mode, samples, k) * (e.coeff * unit)
        acc = tens if acc is None else acc + tens
    if acc is not None:
        grad_sq = np.sum(acc ** 2, axis=tuple(range(1, acc.ndim)))
    r = np.linalg.norm(samples, axis=1)
    radial = np.maximum(r ** (-k) if k > 0 else np.ones_like(r), 1.0)
    per_p = {}
    witness = None
    for p in p_grid:
        envelope = radial * np.exp(r * r / (4.0 * p)) * norm0_sq
        per_p[float(p)] = float(np.max(grad_sq / envelope))
        if witness is None and envelope_constant is not None \
                and per_p[float(p)] <= envelope_constant:
            witness = float(p)
    best_p = min(per_p, key=per_p.get)
    result = {"worst_ratio": per_p[best_p], "witnessing_p": best_p,
              "per_p": per_p}
    if envelope_constant is not None:
        result["witnessing_p_for_constant"] = witness
        result["envelope_satisfied"] = witness is not None
    return result
