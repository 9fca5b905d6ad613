"""Quasi-Mandelbrot sets of perturbed quadratic maps on the real plane."""

from .algebra import (AlgebraClass, AlgebraSpec, classify_algebra, complex_isomorphism_params,
                      induced_algebra_b, induced_algebra_epsilon)
from .engine import (MEMBER, EscapeGrid, EscapeParams, Viewport, compute_grid, detect_cycle, escape_time,
                     escape_times, orbit)
from .maps import MapFamily, ParamPoint, PlanePoint, characteristic_split, epsilon_transform, step
from .render import Raster, encode_image, escape_colormap, extract_boundary, membership_raster
from .sweep import SweepSpec, TransitionProfile, detect_discontinuity, generate_frames, transition_profile

__version__ = "0.1.0"
