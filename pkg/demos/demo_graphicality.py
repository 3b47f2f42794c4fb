#!/usr/bin/env python3
"""Graphicality measurement and graph linearization.

Fits curves as c-graphs over line unions (the quantity behind the
graphicality window T_1), and checks the linearization of graphs of
1-forms over a plane: the pulled-back symplectic form matches d eta and
the Lagrangian angle matches d* eta to second order in the graph norm.
"""

import numpy as np

from lmcflab import fixtures
from lmcflab.graphs import (c_graph_fit, Annulus, OneFormField,
                            linearize_graph, graph_frame)
from lmcflab.ambient import lagrangian_angle
from lmcflab.spectra import line_union

print("-- c-graph fits over the two-line cone --")
W = fixtures.line_pair_cone(np.pi / 4)
region = Annulus(np.zeros(2), 0.5, 8.0)
for label, curve in (
        ("the cone itself", fixtures.line_pair(np.pi / 4)),
        ("rotated by 0.02", fixtures.line_pair(np.pi / 4 + 0.02)),
        ("desingularized neck 0.15",
         fixtures.twoline_desing(np.pi / 4, neck_scale=0.15))):
    rep = c_graph_fit(curve, W, region, k0=1)
    print("%-26s is_graph=%-5s C^1 norm %s"
          % (label, rep.is_graph,
             "%.4f" % rep.norm if rep.is_graph else "-"))

rep = c_graph_fit(fixtures.figure_eight(2.0), line_union([0.0]),
                  Annulus(np.zeros(2), 0.0, 1.0))
print("figure eight over one line near the node: is_graph=%s "
      "(two-to-one projection)" % rep.is_graph)

print("\n-- graph linearization over the plane R^3 in C^3 --")
eigs = np.array([1.0, 2.0, -3.0])   # traceless: harmonic quadratic


def field(eps):
    return OneFormField(lambda x: eps * np.atleast_2d(x) * eigs[None, :],
                        lambda x: eps * np.diag(eigs))


samples = np.array([[0.4, 0.1, 0.0], [-0.3, 0.6, 0.2], [1.0, -1.0, 0.5]])
print("eta = eps d(harmonic quadratic): residuals scale at least "
      "quadratically in eps")
for eps in (1e-2, 1e-3):
    closed, angle = linearize_graph(field(eps), samples)
    print("  eps = %-6g closedness %.2e, angle %.2e" % (eps, closed, angle))

c = 1.4
for eps in (1e-2, 1e-3):
    f = OneFormField(lambda x, e=eps: e * (c / 2.0) * np.atleast_2d(x),
                     lambda x, e=eps: e * (c / 2.0) * np.eye(2))
    th = lagrangian_angle(graph_frame(f, np.array([0.2, 0.8])))
    print("eta = eps df with Delta f = %.1f: theta = %+.6f vs d* eta = "
          "%+.6f (gap %.1e)" % (c, th, -eps * c, abs(th + eps * c)))
