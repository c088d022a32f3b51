"""Space-like path validation, determinantal correlations, gauge-proof
kernel comparison and Fredholm gap probabilities on a fixed slice.

Correlation functions are only meaningful along space-like paths (times
nondecreasing while levels nonincreasing); ``validate_spacelike`` is the
single gatekeeper every query goes through.
"""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass, field
from typing import Callable, Sequence

import numpy as np
from scipy.special import roots_legendre

from .errors import ConfigurationError
from .kernels import SpaceTimePoint
from .special import weighted_hermite_sequence

__all__ = [
    "SpacelikeViolation",
    "SpacelikePath",
    "CorrelationQuery",
    "validate_spacelike",
    "correlation_density",
    "gauge_compare",
    "GaugeCompareResult",
    "gap_probability",
    "det_small",
    "clamp_stats",
]

KernelFn = Callable[[SpaceTimePoint, SpaceTimePoint], float]


@dataclass(frozen=True)
class SpacelikeViolation:
    index: int
    reason: str


def validate_spacelike(nodes: Sequence[tuple[int, float]]) -> SpacelikeViolation | None:
    """None when (level, time) pairs follow a space-like path, else the
    first offending index with the broken monotonicity named."""
    if len(nodes) == 0:
        return SpacelikeViolation(0, "path is empty")
    for i in range(1, len(nodes)):
        if nodes[i][1] < nodes[i - 1][1]:
            return SpacelikeViolation(i, "time decreased")
        if nodes[i][0] > nodes[i - 1][0]:
            return SpacelikeViolation(i, "level increased")
    return None


@dataclass(frozen=True)
class SpacelikePath:
    """Validated monotone sequence of (level, time) pairs."""

    nodes: tuple[tuple[int, float], ...]

    def __post_init__(self):
        bad = validate_spacelike(self.nodes)
        if bad is not None:
            raise ValueError(
                f"not a space-like path at index {bad.index}: {bad.reason}")


@dataclass(frozen=True)
class CorrelationQuery:
    """A kernel plus query points whose (level, time) projection is
    space-like."""

    kernel: KernelFn
    points: tuple[SpaceTimePoint, ...]

    def __post_init__(self):
        proj = [(p.level, p.time) for p in self.points]
        bad = validate_spacelike(proj)
        if bad is not None:
            raise ValueError(
                f"query points not space-like at index {bad.index}: "
                f"{bad.reason}")
        for p in self.points:
            if not math.isfinite(p.position):
                raise ValueError("positions must be finite")


class _ClampStats:
    """Counts tiny negative correlation values clamped to zero."""

    def __init__(self):
        self.clamped = 0

    def reset(self):
        self.clamped = 0


clamp_stats = _ClampStats()


def det_small(matrix: np.ndarray) -> float:
    """Determinant by partially pivoted elimination in extended precision.

    The correlation matrices are tiny (k <= 8), so accuracy wins over
    speed; larger inputs fall back to LAPACK.
    """
    a = np.array(matrix, dtype=np.longdouble)
    k = a.shape[0]
    if k == 0:
        return 1.0
    if k > 8:
        return float(np.linalg.det(np.asarray(matrix, dtype=float)))
    sign = 1.0
    det = np.longdouble(1.0)
    for col in range(k):
        piv = col + int(np.argmax(np.abs(a[col:, col])))
        if a[piv, col] == 0:
            return 0.0
        if piv != col:
            a[[col, piv]] = a[[piv, col]]
            sign = -sign
        det *= a[col, col]
        a[col + 1:, col:] -= np.outer(a[col + 1:, col] / a[col, col],
                                      a[col, col:])
    return float(sign * det)


def correlation_density(query: CorrelationQuery,
                        clamp_tol: float = 1e-9) -> float:
    """det[K(p_i, p_j)] over the query points.

    Tiny negatives within ``clamp_tol`` are roundoff, reported as 0 and
    counted in ``clamp_stats``.
    """
    pts = query.points
    k = len(pts)
    mat = np.empty((k, k))
    for i in range(k):
        for j in range(k):
            mat[i, j] = query.kernel(pts[i], pts[j])
    rho = det_small(mat)
    if -clamp_tol <= rho < 0.0:
        clamp_stats.clamped += 1
        return 0.0
    return rho


@dataclass(frozen=True)
class GaugeCompareResult:
    passed: bool
    max_deviation: float
    worst_case: str = ""


def gauge_compare(kernel_a: KernelFn, kernel_b: KernelFn,
                  points: Sequence[SpaceTimePoint], tol: float,
                  max_order: int = 3) -> GaugeCompareResult:
    """Compare two kernels through gauge-invariant quantities only.

    Checks every k x k correlation determinant (k <= max_order) over the
    query points plus all cross products K(p,q) K(q,p); conjugated
    kernels (g(p)/g(q)) K(p,q) therefore compare equal.
    """
    pts = list(points)
    mat_a = np.empty((len(pts), len(pts)))
    mat_b = np.empty((len(pts), len(pts)))
    for i, p in enumerate(pts):
        for j, q in enumerate(pts):
            mat_a[i, j] = kernel_a(p, q)
            mat_b[i, j] = kernel_b(p, q)
    worst = 0.0
    label = ""
    for k in range(1, min(max_order, len(pts)) + 1):
        for idx in itertools.combinations(range(len(pts)), k):
            sel = np.ix_(idx, idx)
            dev = abs(det_small(mat_a[sel]) - det_small(mat_b[sel]))
            if dev > worst:
                worst, label = dev, f"det order {k} at {idx}"
    for i in range(len(pts)):
        for j in range(i + 1, len(pts)):
            dev = abs(mat_a[i, j] * mat_a[j, i] - mat_b[i, j] * mat_b[j, i])
            if dev > worst:
                worst, label = dev, f"cross product ({i},{j})"
    return GaugeCompareResult(bool(worst <= tol), float(worst), label)


def _slice_kernel(n: int, t: float, family: str):
    """Symmetrised fixed-(n, t) kernel of the chosen family.

    The DBM slice is the stationary minor kernel (t-independent); the
    warren slice is its sqrt(t)-dilation.
    """
    if family == "dbm":
        scale = 1.0
    elif family == "warren":
        if t <= 0:
            raise ValueError("warren slice requires t > 0")
        scale = math.sqrt(t)
    else:
        raise ValueError(f"unknown family {family!r}")

    def kern(x: np.ndarray, y: np.ndarray) -> np.ndarray:
        hx = np.stack([weighted_hermite_sequence(n - 1, xi / scale)
                       for xi in np.atleast_1d(x)])
        hy = np.stack([weighted_hermite_sequence(n - 1, yi / scale)
                       for yi in np.atleast_1d(y)])
        return (hx @ hy.T) / scale

    return kern


def gap_probability(n: int, t: float, interval: tuple[float, float],
                    nodes: int = 64, family: str = "dbm") -> float:
    """P[no particle of the level-n, time-t slice lies in the interval].

    Nystrom discretisation det(I - K) with Gauss-Legendre nodes; a
    half-infinite side is mapped in by y = b + u/(1-u), which the
    Gaussian decay makes spectrally accurate.
    """
    if n < 1:
        raise ValueError("level must be >= 1")
    if nodes < 4:
        raise ConfigurationError("gap_probability needs at least 4 nodes")
    lo, hi = interval
    if not lo < hi:
        raise ValueError("interval must be nonempty")
    base, weights = roots_legendre(nodes)
    u = 0.5 * (base + 1.0)          # on (0, 1)
    wu = 0.5 * weights
    if math.isinf(lo) and math.isinf(hi):
        raise ValueError("doubly infinite gap interval not supported")
    if math.isinf(hi):
        x = lo + u / (1.0 - u)
        w = wu / (1.0 - u) ** 2
    elif math.isinf(lo):
        x = hi - u / (1.0 - u)
        w = wu / (1.0 - u) ** 2
    else:
        x = lo + (hi - lo) * u
        w = (hi - lo) * wu
    kern = _slice_kernel(n, t, family)
    mat = kern(x, x)
    sw = np.sqrt(w)
    return float(np.linalg.det(np.eye(nodes) - mat * np.outer(sw, sw)))
