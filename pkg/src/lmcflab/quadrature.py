"""Quadrature helpers: compactified improper integrals, cumulative profile
integrals, Gaussian tails, and sphere averages of functions of x_k^2.

Improper integrals over the real line are compactified with x = tan(s) and
handed to QUADPACK's adaptive Gauss-Kronrod rule; integrands here decay only
polynomially, so the substitution is what makes the adaptive rule efficient.
"""

import numpy as np
from scipy.integrate import quad
from scipy.special import gammaincc, gamma, roots_jacobi

from .errors import ToleranceError

GL4_NODES = np.array([-0.8611363115940526, -0.3399810435848563,
                      0.3399810435848563, 0.8611363115940526])
GL4_WEIGHTS = np.array([0.34785484513745385, 0.6521451548625461,
                        0.6521451548625461, 0.34785484513745385])


def integrate_real_line(f, epsabs=1e-12, epsrel=1e-12, limit=400):
    """Integrate f over (-inf, inf) via x = tan(s). Returns (value, err)."""
    def g(s):
        x = np.tan(s)
        return f(x) / np.cos(s) ** 2

    val, err = quad(g, -np.pi / 2, np.pi / 2, epsabs=epsabs, epsrel=epsrel,
                    limit=limit)
    if err > max(epsabs, epsrel * abs(val)) * 100:
        raise ToleranceError(
            "improper integral did not converge: error estimate %.3e" % err,
            estimate=err)
    return val, err


def integrate_tail(f, y0, epsabs=1e-12, limit=400):
    """Integrate f over (y0, inf) via x = y0 + tan(s)."""
    def g(s):
        x = y0 + np.tan(s)
        return f(x) / np.cos(s) ** 2

    val, err = quad(g, 0.0, np.pi / 2, epsabs=epsabs, epsrel=epsabs,
                    limit=limit)
    return val, err


def cumulative_gl4(fp, y):
    """Cumulative integral of callable fp on the grid y by per-cell 4-point
    Gauss-Legendre; returns array F with F[0] = 0, F[i] = int_{y0}^{yi} fp."""
    y = np.asarray(y, float)
    mid = 0.5 * (y[1:] + y[:-1])
    half = 0.5 * (y[1:] - y[:-1])
    nodes = mid[:, None] + half[:, None] * GL4_NODES[None, :]
    vals = fp(nodes.ravel()).reshape(nodes.shape)
    cell = half * (vals @ GL4_WEIGHTS)
    return np.concatenate([[0.0], np.cumsum(cell)])


def gaussian_tail_bound(n, R, area_ratio_bound=2.0):
    """Upper bound for the Gaussian-area mass outside radius R, for a surface
    with n-dimensional area ratios <= area_ratio_bound.

    Uses measure(L cap B_s) <= c s^n and integration by parts in the radius:
    (4 pi)^{-n/2} * c * n * int_R^inf s^{n-1} e^{-s^2/4} ds.
    """
    # int_R^inf s^(n-1) e^(-s^2/4) ds = 2^(n-1) Gamma(n/2) Q(n/2, R^2/4)
    tail = 2.0 ** (n - 1) * gamma(n / 2.0) * gammaincc(n / 2.0, R * R / 4.0)
    return area_ratio_bound * n * tail / (4.0 * np.pi) ** (n / 2.0)


def _beta_half_rule(b, order):
    """Gauss rule for E[g(t)] with t ~ Beta(1/2, b) on [0,1]."""
    from scipy.special import beta as beta_fn
    xj, wj = roots_jacobi(order, b - 1.0, -0.5)  # weight (1-x)^(b-1) x^(-1/2)
    t = 0.5 * (xj + 1.0)
    wt = wj * 0.5 ** (b - 0.5) / beta_fn(0.5, b)
    return t, wt


def sphere_quadrature_squares(n, order=24):
    """Quadrature rule for integrals over S^{n-1} of functions of x_1^2..x_n^2.

    Uses x_k^2 ~ Dirichlet(1/2,...,1/2) via stick breaking,
    s_j = t_j prod_{i<j}(1-t_i) with t_j ~ Beta(1/2, (n-j)/2), and tensorized
    Gauss-Jacobi nodes per level. Returns (s, w) with s of shape (m, n) on the
    unit simplex and sum(w) = area(S^{n-1}), so that
        int_{S^{n-1}} f(x_1^2,...,x_n^2) dsigma = sum_i w_i f(s_i).
    """
    area = 2.0 * np.pi ** (n / 2.0) / gamma(n / 2.0)
    if n == 1:
        return np.ones((1, 1)), np.array([area])
    cols = np.zeros((1, 0))
    w = np.array([1.0])
    remaining = np.ones(1)
    for level in range(n - 1):
        t, wt = _beta_half_rule((n - 1 - level) / 2.0, order)
        m_old = w.size
        new_col = (remaining[:, None] * t[None, :]).reshape(m_old * order, 1)
        cols = np.hstack([np.repeat(cols, order, axis=0), new_col])
        w = (w[:, None] * wt[None, :]).reshape(m_old * order)
        remaining = (remaining[:, None] * (1.0 - t)[None, :]).reshape(
            m_old * order)
    s = np.hstack([cols, remaining.reshape(-1, 1)])
    return s, w * area


def sphere_average_squares(f, n, order=24):
    """Average of f(x_1^2,...,x_n^2) over S^{n-1} (unit-mass normalization).

    f maps an (m, n) array of simplex rows to an (m,) array.
    """
    s, w = sphere_quadrature_squares(n, order)
    return np.sum(w * f(s)) / np.sum(w)


