import numpy as np
import pytest

from lmcflab.graphs import (c_graph_fit, Annulus, OneFormField,
                            linearize_graph, graph_frame)
from lmcflab.errors import GraphRepresentabilityError
from lmcflab.ambient import lagrangian_angle
from lmcflab import fixtures
from lmcflab.spectra import line_union


def test_graph_of_itself_has_zero_norm():
    W = line_union([0.3, -0.8])
    L = fixtures.line_pair(0.3)  # angles +-0.3 vs W at 0.3: use matching W
    W = line_union([0.3, -0.3])
    rep = c_graph_fit(L, W, Annulus(np.zeros(2), 0.5, 5.0), k0=1)
    assert rep.is_graph
    assert rep.norm < 1e-12


def test_translated_line_constant_offset():
    d = 0.37
    L = fixtures.line(0.0, offset=d)
    W = line_union([0.0])
    rep = c_graph_fit(L, W, Annulus(np.zeros(2), 1.0, 6.0), k0=0)
    assert rep.is_graph
    assert abs(rep.norm - d) < 1e-12


def test_figure_eight_not_a_graph_near_node():
    L = fixtures.figure_eight(scale=2.0)
    W = line_union([0.0])
    rep = c_graph_fit(L, W, Annulus(np.zeros(2), 0.0, 1.0), k0=0)
    assert rep.is_graph is False


def test_empty_region_gives_empty_report():
    L = fixtures.line(0.0, extent=5.0)
    rep = c_graph_fit(L, line_union([0.0]), Annulus(np.zeros(2), 50.0, 60.0))
    assert rep.empty


QUAD_EIGS = np.array([1.0, 2.0, -3.0])   # traceless, cubic sum nonzero


def quad_harmonic_field(eps):
    # f = (x1^2 + 2 x2^2 - 3 x3^2)/2 harmonic in R^3; eta = eps df
    def eta(x):
        x = np.atleast_2d(x)
        return eps * x * QUAD_EIGS[None, :]

    def jac(x):
        return eps * np.diag(QUAD_EIGS)
    return OneFormField(eta, jac)


def test_zero_form_has_zero_residuals():
    field = OneFormField(lambda x: np.zeros_like(np.atleast_2d(x)),
                         lambda x: np.zeros((3, 3)))
    closed, angle = linearize_graph(field, np.array([[0.3, -0.2, 0.1]]))
    assert closed < 1e-14 and angle < 1e-14


def test_quadratic_decay_of_angle_residual():
    # exact-normal graphs over a flat plane have an odd angle expansion, so
    # the remainder decays at least quadratically (here cubically) in eps
    samples = np.array([[0.4, 0.1, 0.0], [-0.3, 0.6, 0.2],
                        [1.0, -1.0, 0.5]])
    res = {}
    for eps in (1e-2, 1e-3):
        closed, angle = linearize_graph(quad_harmonic_field(eps), samples)
        assert closed < 1e-12     # identically zero over a flat reference
        res[eps] = angle
    ratio = res[1e-2] / max(res[1e-3], 1e-300)
    assert ratio >= 50.0          # O(eps^2) bound (measured decay is cubic)


def test_constant_laplacian_linear_angle_term():
    # eta = eps df with Delta f = c: theta_L = -eps c + O(eps^2) in the
    # orientation fixed by the graph convention (graph along -J eta-sharp)
    c = 1.4
    gaps = {}
    for eps in (1e-2, 5e-3):
        def eta(x, eps=eps):
            x = np.atleast_2d(x)
            return eps * (c / 2.0) * x

        field = OneFormField(eta, lambda x: eps * (c / 2.0) * np.eye(2))
        th = lagrangian_angle(graph_frame(field, np.array([0.2, 0.8])))
        gaps[eps] = abs(th - (-eps * c))
        assert gaps[eps] < 10.0 * eps ** 2 * c ** 2
    assert gaps[1e-2] / max(gaps[5e-3], 1e-300) > 3.0


def test_slope_threshold_enforced():
    with pytest.raises(GraphRepresentabilityError):
        linearize_graph(quad_harmonic_field(0.5),
                        np.array([[1.0, 1.0, 1.0]]))
