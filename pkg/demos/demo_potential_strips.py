#!/usr/bin/env python3
"""Potential machinery: Floer degrees, strip areas, volume audits, and the
two-plane compactification chart.
"""

import numpy as np

from lmcflab import fixtures
from lmcflab import potential as pt
from lmcflab.ambient import plane_frame
from lmcflab.curves import ImmersedCurve, CurveComponent

phi = np.array([0.5, 1.1, np.pi - 1.6])
print("-- Floer degrees at the origin --")
d = pt.floer_degree(np.zeros(3), plane_frame(0.0, 3), plane_frame(phi),
                    0.0, float(np.sum(phi)))
print("mu(Pi_0, Pi_phi) = %g with characteristic angles %s"
      % (round(d.degree), np.round(d.alphas, 4)))
d = pt.floer_degree(np.zeros(3), plane_frame(phi), plane_frame(0.0, 3),
                    float(np.sum(phi)), 0.0)
print("mu(Pi_phi, Pi_0) = %g (= n)" % round(d.degree))

print("\n-- strip-area identity (Stokes, no holomorphicity assumed) --")
m = 1001
xs = np.linspace(0.0, np.pi, m)
soup = pt.bigon_strip(np.sin, m=m, layers=30)
upper = ImmersedCurve([CurveComponent(np.column_stack([xs, np.sin(xs)]))])
f_upper = pt.integrate_potential(upper).values[0]
rep = pt.strip_area(
    fixtures.line(0.0, extent=5.0, m=1001), upper,
    np.array([0.0 + 0.0j]), np.array([np.pi + 0.0j]), soup,
    (lambda q: 0.0,
     lambda q: float(np.interp(float(np.real(np.atleast_1d(q)[0])), xs,
                               f_upper))))
print("potential difference %.8f vs direct omega-area %.8f "
      "(discrepancy %.1e; smooth value 2)"
      % (rep["potential_difference"], rep["direct_area"],
         rep["discrepancy"]))

print("\n-- ball monotonicity with Lagrangian boundary --")
half = pt.ball_monotonicity_check(
    pt.FlatHalfDisc(np.zeros(1, complex), 1.0), None,
    np.zeros(1, complex), 1.0)
print("flat half-disc: min Area/r^2 = %.6f (pi/2 = %.6f)"
      % (half["min_ratio"], np.pi / 2.0))

print("\n-- volume monotonicity audits --")
two = pt.volume_monotonicity_audit(fixtures.line_pair(np.pi / 4,
                                                      extent=12.0, m=801),
                                   p=np.zeros(2), eps=0.0,
                                   radii=np.linspace(0.2, 5.0, 20))
print("two transverse lines at the node: volume ratio constant %.12f"
      % two["volume_ratio"][0])

print("\n-- equicontinuity detector --")
sep = 1e-3
xs = np.linspace(0.05, 6.0, 400)
sheets = ImmersedCurve([
    CurveComponent(np.column_stack([xs, 0.0 * xs])),
    CurveComponent(np.column_stack([xs[::-1], sep + 0.0 * xs]))])
field = pt.integrate_potential(sheets, anchors=[0.0, 1.0])
gap = np.abs(field.values[1][::-1] - field.values[0])
dist = np.linalg.norm(sheets.components[1].vertices[::-1]
                      - sheets.components[0].vertices, axis=1)
print("near-touching sheets with unit potential gap at separation 1e-3: "
      "modulus ratio %.0f (flagged)" % np.max(gap / dist))

print("\n-- compactification chart --")
phi3 = np.array([np.pi / 3.0] * 3)
z = np.array([1.0 + 0.1j, 0.5 - 0.2j, 0.3 + 0.0j])
ch = pt.compactify(z, phi3, T=2.0)
print("inside the cutoff: t = %.3f, eta = %g, h = %g (lambda-tilde = "
      "lambda there)" % (ch.t_value, ch.eta, ch.h))
print("d(lambda-tilde) = omega residual at a random point: %.2e"
      % pt.dlambda_tilde_residual(z, phi3, 2.0))
