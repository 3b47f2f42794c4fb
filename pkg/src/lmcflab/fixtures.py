"""Named initial curves for the flow testbed and the audits."""

import numpy as np

from .errors import ParameterError
from .curves import ImmersedCurve, CurveComponent
from .spectra import line_union


def circle(radius=2.0, m=400, center=(0.0, 0.0)):
    th = np.linspace(0.0, 2.0 * np.pi, m, endpoint=False)
    v = np.column_stack([np.cos(th), np.sin(th)]) * radius
    return ImmersedCurve([CurveComponent(v + np.asarray(center, float),
                                         closed=True)])


def line(angle=0.0, extent=14.0, m=561, offset=0.0):
    """Straight line through (or offset perpendicular from) the origin."""
    s = np.linspace(-extent, extent, m)
    d = np.array([np.cos(angle), np.sin(angle)])
    nrm = np.array([-np.sin(angle), np.cos(angle)])
    return ImmersedCurve([CurveComponent(s[:, None] * d[None, :]
                                         + offset * nrm[None, :])])


def line_pair(half_angle=np.pi / 4, extent=14.0, m=561):
    """Two transverse lines through the origin (a static cone), as two open
    components at angles +-half_angle."""
    return ImmersedCurve(line(half_angle, extent, m).components
                         + line(-half_angle, extent, m).components)


def line_pair_cone(half_angle=np.pi / 4):
    """The matching graded cone W_0 for line_pair."""
    return line_union([half_angle, -half_angle])


def twoline_desing(half_angle=np.pi / 4, neck_scale=0.25, extent=14.0,
                   m=741):
    """Embedded hyperbola-like desingularization of the two-line cone.

    Branches of x^2/a^2 - y^2/b^2 = 1 with b/a = tan(half_angle) asymptote
    to the lines at +-half_angle; neck_scale sets the waist distance.
    """
    if not (0 < half_angle < np.pi / 2):
        raise ParameterError("half_angle must be in (0, pi/2)")
    a = neck_scale * np.cos(half_angle)
    b = neck_scale * np.sin(half_angle)
    smax = np.arccosh(extent / a)
    s = np.linspace(-smax, smax, m)
    right = np.column_stack([a * np.cosh(s), b * np.sinh(s)])
    left = np.column_stack([-a * np.cosh(s), b * np.sinh(s)])
    return ImmersedCurve([CurveComponent(right), CurveComponent(left)])


def sine_perturbed_line(amplitude=0.05, wavelength=4.0, extent=14.0, m=701):
    s = np.linspace(-extent, extent, m)
    v = np.column_stack([s, amplitude * np.sin(2.0 * np.pi * s
                                               / wavelength)])
    return ImmersedCurve([CurveComponent(v)])


def figure_eight(scale=1.0, m=400):
    """Lemniscate-type curve crossing itself over the real axis."""
    t = np.linspace(0.0, 2.0 * np.pi, m, endpoint=False)
    v = scale * np.column_stack([np.sin(t), np.sin(t) * np.cos(t)])
    return ImmersedCurve([CurveComponent(v, closed=True)])


def shrinking_circle_trace(R0=2.0, m=400, dt=1e-3, until=None):
    """Exact shrinking-circle flow R(t) = sqrt(R0^2 - 2 t) sampled on a dt
    grid (an oracle trace that bypasses the numerical stepper); vanishes at
    t0 = R0^2 / 2."""
    from .flow import FlowTrace
    t0 = R0 * R0 / 2.0
    if until is None:
        until = 0.9 * t0
    times = np.arange(0.0, until + dt / 2.0, dt)
    states = []
    for t in times:
        c = circle(np.sqrt(R0 * R0 - 2.0 * t), m)
        c.t = float(t)
        states.append(c)
    return FlowTrace(states, dt, scheme="exact-circle-oracle")


FIXTURES = {
    "circle": circle,
    "line": line,
    "twoline": line_pair,
    "twoline-desing": twoline_desing,
    "sine-line": sine_perturbed_line,
    "figure-eight": figure_eight,
}
