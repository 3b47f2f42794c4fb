"""Polyline immersions in C = R^2: the n = 1 flow testbed geometry.

A curve component is an (m, 2) vertex array, open or closed. Per-vertex
channels: tangent angle theta on a continuous branch, optional Lagrangian
potential f. Curvature, Gaussian areas, and kernel-weighted functionals are
discretized with vertex lumping (each vertex owns half of its adjacent
segment lengths), which is second order on smoothly varying polylines.
"""

import numpy as np
from dataclasses import dataclass, field

from .errors import ParameterError, NonExactLoopError
from .ambient import check_truncation


@dataclass
class CurveComponent:
    vertices: np.ndarray          # (m, 2)
    closed: bool = False
    theta: np.ndarray = None
    f: np.ndarray = None

    def __post_init__(self):
        self.vertices = np.asarray(self.vertices, float)
        if self.vertices.ndim != 2 or self.vertices.shape[1] != 2:
            raise ParameterError("component vertices must be (m, 2)")
        seg = self.segment_lengths()
        if np.any(seg == 0):
            raise ParameterError("consecutive vertices must be distinct")
        if self.theta is None:
            self.theta = tangent_angles(self.vertices, self.closed)
        else:
            self.theta = np.asarray(self.theta, float)
            jumps = np.abs(np.diff(self.theta))
            if jumps.size and np.max(jumps) >= np.pi:
                raise ParameterError(
                    "theta branch discontinuous: neighbor jump %.3f >= pi"
                    % np.max(jumps))

    @property
    def m(self):
        return len(self.vertices)

    def as_complex(self):
        return self.vertices[:, 0] + 1j * self.vertices[:, 1]

    def segment_lengths(self):
        v = self.vertices
        d = np.diff(v, axis=0)
        seg = np.linalg.norm(d, axis=1)
        if self.closed:
            seg = np.append(seg, np.linalg.norm(v[0] - v[-1]))
        return seg

    def vertex_weights(self):
        """Lumped length measure per vertex."""
        seg = self.segment_lengths()
        w = np.zeros(self.m)
        if self.closed:
            w += 0.5 * seg
            w += 0.5 * np.roll(seg, 1)
        else:
            w[:-1] += 0.5 * seg
            w[1:] += 0.5 * seg
        return w

    def arclength(self):
        seg = self.segment_lengths()
        return np.concatenate([[0.0], np.cumsum(seg[:self.m - 1])])

    def length(self):
        return float(np.sum(self.segment_lengths()))

    def tangents(self):
        """Unit tangents per vertex (averaged adjacent segments)."""
        v = self.vertices
        if self.closed:
            d = np.roll(v, -1, axis=0) - np.roll(v, 1, axis=0)
        else:
            d = np.empty_like(v)
            d[1:-1] = v[2:] - v[:-2]
            d[0] = v[1] - v[0]
            d[-1] = v[-1] - v[-2]
        return d / np.linalg.norm(d, axis=1)[:, None]

    def curvature_vector(self):
        """Discrete curvature vector (second arclength difference)."""
        v = self.vertices
        m = self.m
        H = np.zeros_like(v)
        if self.closed:
            vp = np.roll(v, -1, axis=0)
            vm = np.roll(v, 1, axis=0)
            hp = np.linalg.norm(vp - v, axis=1)
            hm = np.linalg.norm(v - vm, axis=1)
            H = 2.0 / (hp + hm)[:, None] * ((vp - v) / hp[:, None]
                                            - (v - vm) / hm[:, None])
        else:
            hp = np.linalg.norm(v[2:] - v[1:-1], axis=1)
            hm = np.linalg.norm(v[1:-1] - v[:-2], axis=1)
            H[1:-1] = 2.0 / (hp + hm)[:, None] * (
                (v[2:] - v[1:-1]) / hp[:, None]
                - (v[1:-1] - v[:-2]) / hm[:, None])
            H[0] = H[1]
            H[-1] = H[-2]
        return H


def tangent_angles(vertices, closed, anchor=0.0):
    """Continuous-branch tangent angle per vertex."""
    v = np.asarray(vertices, float)
    if closed:
        d = np.roll(v, -1, axis=0) - np.roll(v, 1, axis=0)
    else:
        d = np.empty_like(v)
        d[1:-1] = v[2:] - v[:-2]
        d[0] = v[1] - v[0]
        d[-1] = v[-1] - v[-2]
    th = np.unwrap(np.arctan2(d[:, 1], d[:, 0]))
    th -= 2.0 * np.pi * np.round((th[0] - anchor) / (2.0 * np.pi))
    return th


@dataclass
class ImmersedCurve:
    """Union of polyline components with angle/potential channels."""

    components: list
    t: float = 0.0

    def __post_init__(self):
        if not self.components:
            raise ParameterError("curve needs at least one component")

    @property
    def n(self):
        return 1

    def total_length(self):
        return sum(c.length() for c in self.components)

    def all_vertices(self):
        return np.vstack([c.vertices for c in self.components])

    def translated(self, vec):
        vec = np.asarray(vec, float)
        return ImmersedCurve([CurveComponent(c.vertices - vec, c.closed,
                                             c.theta,
                                             None if c.f is None else c.f)
                              for c in self.components], t=self.t)

    def scaled(self, factor):
        return ImmersedCurve([CurveComponent(c.vertices * factor, c.closed,
                                             c.theta,
                                             None if c.f is None
                                             else c.f * factor ** 2)
                              for c in self.components], t=self.t)

    def max_radius(self, center=None):
        v = self.all_vertices()
        if center is not None:
            v = v - np.asarray(center, float)
        return float(np.max(np.linalg.norm(v, axis=1)))

    def truncation_radius(self, center=None):
        """Smallest endpoint radius over open components: beyond it the
        sampling may be a truncation of an unbounded curve. Closed
        components end nowhere, so they contribute no truncation."""
        c0 = np.zeros(2) if center is None else np.asarray(center, float)
        radii = [np.linalg.norm(comp.vertices[i] - c0)
                 for comp in self.components if not comp.closed
                 for i in (0, -1)]
        return float(np.min(radii)) if radii else np.inf

    def refined(self, max_seg, center=None, radius=np.inf):
        """Subdivide segments longer than max_seg (only those meeting the
        ball around center when radius is finite). Pure polyline refinement:
        the underlying piecewise-linear geometry is unchanged; channels are
        interpolated linearly."""
        c0 = np.zeros(2) if center is None else np.asarray(center, float)
        comps = []
        for comp in self.components:
            v = comp.vertices
            if comp.closed:
                v = np.vstack([v, v[:1]])
            seg = np.linalg.norm(np.diff(v, axis=0), axis=1)
            near = (np.linalg.norm(v[:-1] - c0, axis=1)
                    <= radius + seg) | (np.linalg.norm(v[1:] - c0, axis=1)
                                        <= radius + seg)
            pieces = [v[:1]]
            for i, (h, hit) in enumerate(zip(seg, near)):
                k = int(np.ceil(h / max_seg)) if hit else 1
                ts = np.linspace(0.0, 1.0, k + 1)[1:]
                pieces.append(v[i] + ts[:, None] * (v[i + 1] - v[i]))
            vv = np.vstack(pieces)
            if comp.closed:
                vv = vv[:-1]
            comps.append(CurveComponent(vv, comp.closed))
        return ImmersedCurve(comps, t=self.t)

    def _gaussian_area(self, center=None, scale=1.0, tol=1e-12,
                       area_ratio_bound=2.0):
        """(4 pi)^{-1/2} (1/r) int exp(-|x - x0|^2 / (4 r^2)) dH^1."""
        c0 = np.zeros(2) if center is None else np.asarray(center, float)
        check_truncation(1, self.truncation_radius(c0) / scale, tol,
                         area_ratio_bound)
        total = 0.0
        for comp in self.components:
            v = comp.vertices - c0
            # per-segment midpoint rule, second order within the lump scheme
            a = v[:-1]
            b = v[1:]
            if comp.closed:
                a = np.vstack([a, v[-1]])
                b = np.vstack([b, v[0]])
            mid = 0.5 * (a + b)
            seg = np.linalg.norm(b - a, axis=1)
            total += np.sum(seg * np.exp(-np.sum(mid ** 2, axis=1)
                                         / (4.0 * scale ** 2)))
        return float(total / (scale * np.sqrt(4.0 * np.pi)))

    def gaussian_integral(self, values_per_component, center=None,
                          scale=1.0):
        """sum over vertices of value * weight * exp(-|x-x0|^2/(4 scale^2)),
        the raw Gaussian-weighted line integral without the (4 pi)^{-1/2}
        normalization."""
        c0 = np.zeros(2) if center is None else np.asarray(center, float)
        total = 0.0
        for comp, vals in zip(self.components, values_per_component):
            w = comp.vertex_weights()
            r2 = np.sum((comp.vertices - c0) ** 2, axis=1)
            total += np.sum(vals * w * np.exp(-r2 / (4.0 * scale ** 2)))
        return float(total)

    def integrate_liouville(self, anchors=None, on_nonexact="raise"):
        """Per-component potential f with df = lambda|_L (exact segment
        integrals); anchors are starting values per component. Closed
        components must be exact, |loop integral| below 1e-10 * length;
        on_nonexact="none" returns None for such components instead of
        raising."""
        out = []
        for ci, comp in enumerate(self.components):
            z = comp.as_complex()
            dz = np.diff(z)
            mids = 0.5 * (z[1:] + z[:-1])
            incr = 0.5 * np.imag(np.conj(mids) * dz)
            f = np.concatenate([[0.0], np.cumsum(incr)])
            if comp.closed:
                period = f[-1] + 0.5 * np.imag(
                    np.conj(0.5 * (z[0] + z[-1])) * (z[0] - z[-1]))
                if abs(period) > 1e-10 * max(comp.length(), 1.0):
                    if on_nonexact == "none":
                        out.append(None)
                        continue
                    raise NonExactLoopError(
                        "component %d is not exact: Liouville period %.6e"
                        % (ci, period), loop_index=ci, period=float(period))
            a0 = 0.0 if anchors is None else anchors[ci]
            out.append(f + a0)
        return out
