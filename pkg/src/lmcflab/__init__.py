"""Numerical laboratory for the computable objects around Lagrangian mean
curvature flow singularities: Lawlor necks, special Lagrangian cones and
their drift spectra, linearized (drift heat) and nonlinear (curve
shortening) flows, and the Gaussian-density / potential / monotonicity
functionals that drive the singularity analysis.
"""

from . import ambient, annulus, config, curves, driftheat, errors, fixtures
from . import flow, graphs, lawlor, poisson, potential, quadrature
from . import serialization, spectra

__version__ = "0.1.0"
