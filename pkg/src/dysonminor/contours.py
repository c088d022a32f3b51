"""Complex quadrature over the three contour shapes used by the kernels.

* a circle around the origin (trapezoidal rule on equispaced angles,
  spectrally accurate for integrands analytic on an annulus),
* a truncated vertical line oriented from -i*inf to +i*inf, for
  integrands carrying a Gaussian factor exp(v^2),
* a straight segment (Gauss-Legendre), used by the bead kernel.

``double_contour`` assembles the tensor-product double integral of the
extended-kernel contour representation, with the prefactor 2/(2*pi*i)^2
applied and contours auto-sized so that |u| < decay * |v| holds at every
node pair.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Callable

import numpy as np
from scipy.special import roots_legendre

from .errors import ConfigurationError, ConvergenceError, TruncationError

__all__ = [
    "Circle",
    "VerticalLine",
    "Segment",
    "integrate_circle",
    "integrate_vertical",
    "integrate_segment",
    "double_contour",
    "double_contour_with_error",
]

_TAIL_EPS = 1e-14


@dataclass(frozen=True)
class Circle:
    radius: float
    nodes: int = 256

    def __post_init__(self):
        if self.radius <= 0:
            raise ConfigurationError("circle radius must be positive")
        if self.nodes < 8:
            raise ConfigurationError("circle rule needs at least 8 nodes")


@dataclass(frozen=True)
class VerticalLine:
    real_part: float
    half_height: float
    nodes: int = 512

    def __post_init__(self):
        if self.half_height <= 0:
            raise ConfigurationError("half_height must be positive")
        if self.nodes < 8:
            raise ConfigurationError("line rule needs at least 8 nodes")


@dataclass(frozen=True)
class Segment:
    start: complex
    end: complex
    nodes: int = 64

    def __post_init__(self):
        if self.nodes < 4:
            raise ConfigurationError("segment rule needs at least 4 nodes")


def integrate_circle(f: Callable, spec: Circle) -> complex:
    """Positively oriented ``oint f(u) du`` over the circle."""
    theta = 2.0 * math.pi * np.arange(spec.nodes) / spec.nodes
    u = spec.radius * np.exp(1j * theta)
    vals = f(u)
    return complex(np.sum(vals * 1j * u) * (2.0 * math.pi / spec.nodes))


def integrate_vertical(f: Callable, spec: VerticalLine,
                       tail_tol: float = 1e-9) -> complex:
    """``int f(v) dv`` along Re v = real_part, from -iY to +iY.

    Raises :class:`TruncationError` when the endpoint magnitudes suggest
    the neglected Gaussian tail exceeds ``tail_tol`` relative to the
    largest sampled value.
    """
    y = np.linspace(-spec.half_height, spec.half_height, spec.nodes)
    v = spec.real_part + 1j * y
    vals = np.asarray(f(v), dtype=complex)
    scale = float(np.max(np.abs(vals)))
    # for exp(v^2 - ...) integrands the tail beyond Y is ~ |f(c + iY)| / (2Y)
    tail = (abs(vals[0]) + abs(vals[-1])) / (2.0 * spec.half_height)
    if tail > tail_tol * max(scale, 1e-300):
        raise TruncationError(
            f"vertical-line tail estimate {tail:.3e} above tolerance "
            f"{tail_tol:.1e} * {scale:.3e}"
        )
    h = y[1] - y[0]
    w = np.full(spec.nodes, h)
    w[0] = w[-1] = 0.5 * h
    return complex(np.sum(vals * w) * 1j)


def integrate_segment(f: Callable, spec: Segment) -> complex:
    """Gauss-Legendre ``int f(z) dz`` along the straight segment."""
    nodes, weights = roots_legendre(spec.nodes)
    mid = 0.5 * (spec.start + spec.end)
    half = 0.5 * (spec.end - spec.start)
    z = mid + half * nodes
    return complex(np.sum(weights * np.asarray(f(z), dtype=complex)) * half)


def _default_abscissa(n: int, n_prime: int) -> float:
    return max(1.0, math.sqrt(max(n, n_prime, 1)))


def _double_contour_once(n, n_prime, x, x_prime, decay,
                         circle_nodes, line_nodes):
    c = _default_abscissa(n, n_prime)
    radius = 0.5 * c * decay
    half_height = math.sqrt(c * c + math.log(1.0 / _TAIL_EPS)) + 2.0

    theta = 2.0 * math.pi * np.arange(circle_nodes) / circle_nodes
    u = radius * np.exp(1j * theta)
    y = np.linspace(-half_height, half_height, line_nodes)
    v = c + 1j * y

    if radius >= decay * c:
        raise ConfigurationError(
            "contour separation violated: |u| must stay below decay*|v|"
        )

    fu = np.exp(-u * u + 2.0 * u * x) / u ** n          # (circle,)
    fv = np.exp(v * v - 2.0 * v * x_prime) * v ** n_prime  # (line,)
    denom = decay * v[None, :] - u[:, None]

    h = y[1] - y[0]
    wv = np.full(line_nodes, h)
    wv[0] = wv[-1] = 0.5 * h
    # du = i u dtheta, dv = i dy
    grid = (fu[:, None] * fv[None, :]) / denom
    total = np.sum(grid * (1j * u)[:, None] * (wv * 1j)[None, :]) \
        * (2.0 * math.pi / circle_nodes)
    # prefactor 2 / (2*pi*i)^2 = -1 / (2*pi^2)
    return complex(total * (-1.0 / (2.0 * math.pi ** 2)))


def double_contour_with_error(n: int, n_prime: int, x: float, x_prime: float,
                              decay: float,
                              scale_pair: tuple[float, float] = (1.0, 1.0),
                              circle_nodes: int = 256,
                              line_nodes: int = 512,
                              rel_tol: float = 1e-9,
                              abs_tol: float = 1e-12):
    """Tensor-product double contour integral plus a doubling error estimate.

    Returns ``(value, error_estimate)`` where the estimate is the change
    under one simultaneous node doubling.  A second doubling is attempted
    automatically when the first estimate misses the tolerance.
    """
    if decay <= 0:
        raise ConfigurationError("decay parameter must be positive")
    xs = x / scale_pair[0]
    xps = x_prime / scale_pair[1]
    coarse = _double_contour_once(n, n_prime, xs, xps, decay,
                                  circle_nodes, line_nodes)
    fine = _double_contour_once(n, n_prime, xs, xps, decay,
                                2 * circle_nodes, 2 * line_nodes)
    err = abs(fine - coarse)
    if err > max(abs_tol, rel_tol * abs(fine)):
        finer = _double_contour_once(n, n_prime, xs, xps, decay,
                                     4 * circle_nodes, 4 * line_nodes)
        err = abs(finer - fine)
        if err > max(abs_tol, 10.0 * rel_tol * abs(finer)):
            raise ConvergenceError(
                f"double contour not self-consistent: doubling moved the "
                f"value by {err:.3e}", partial=finer)
        return finer, err
    return fine, err


def double_contour(n: int, n_prime: int, x: float, x_prime: float,
                   decay: float,
                   scale_pair: tuple[float, float] = (1.0, 1.0),
                   circle_nodes: int = 256,
                   line_nodes: int = 512) -> complex:
    """See :func:`double_contour_with_error`; returns only the value."""
    value, _ = double_contour_with_error(
        n, n_prime, x, x_prime, decay, scale_pair, circle_nodes, line_nodes)
    return value
