"""Normalised Hermite polynomials, transition densities and scale factors.

Two families are supported throughout the package:

* the *starred* family: polynomials ``h*_n`` orthonormal w.r.t.
  ``w*(x) = exp(-x^2)``, paired with the Ornstein-Uhlenbeck transition
  density and the scale factors ``q*_t = r*_t = exp(-t)``,
  ``sigma* = 1/sqrt(2)``;
* the *time-indexed* family: ``h_n^(t)(x) = h*_n(x / sqrt(t))`` orthogonal
  w.r.t. ``w^(t)(x) = exp(-x^2 / t)``, paired with the Brownian transition
  density of variance ``t/2`` and ``q_s^(t) = sqrt(t / (s + t))``,
  ``r == 1``, ``sigma(t) = sqrt(t/2)``.

Negative-degree polynomials evaluate to zero by convention.  Factorial
ratios are taken in log space so levels of several hundred stay finite.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np
from scipy.special import erfc

from .errors import DegreeOverflowError

__all__ = [
    "HermiteBasis",
    "ScaleAlgebra",
    "DeltaAntiderivative",
    "hermite_eval",
    "heaviside_power",
    "transition_density",
    "scale_factor",
    "normalized_hermite_sequence",
    "weighted_hermite_sequence",
    "gaussian_tail_moment",
    "weight_heaviside_integral",
    "gauss_hermite",
]

_QUARTER_PI = math.pi ** -0.25
SQRT_PI = math.sqrt(math.pi)


# ---------------------------------------------------------------------------
# domain types
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class HermiteBasis:
    """Normalised Hermite family up to a fixed degree.

    ``time is None`` selects the starred family; a positive ``time``
    selects the time-indexed family ``h_n^(time)``.
    """

    max_degree: int
    time: float | None = None

    def __post_init__(self):
        if self.max_degree < 0:
            raise ValueError("max_degree must be nonnegative")
        if self.time is not None and self.time <= 0:
            raise ValueError("time-indexed family requires time > 0")

    @property
    def is_starred(self) -> bool:
        return self.time is None


@dataclass(frozen=True)
class ScaleAlgebra:
    """The (q, r, sigma) factor algebra of one family.

    ``kind`` is ``"star"`` or ``"warren"``.  All three factors obey the
    composition laws

        q^(t1)_{t2-t1} q^(t2)_{t3-t2} = q^(t1)_{t3-t1},
        r_t r_s = r_{t+s},
        q^(s)_{t-s} / sigma(s) = r_{t-s} / sigma(t),

    exactly (they are closed forms).
    """

    kind: str

    def __post_init__(self):
        if self.kind not in ("star", "warren"):
            raise ValueError(f"unknown scale algebra kind {self.kind!r}")

    def q(self, s: float, base: float | None = None) -> float:
        """Decay factor over an increment ``s``; warren needs ``base`` > 0."""
        if self.kind == "star":
            return math.exp(-s)
        if base is None or base <= 0:
            raise ValueError("warren q requires a positive base time")
        return math.sqrt(base / (s + base))

    def r(self, s: float) -> float:
        return math.exp(-s) if self.kind == "star" else 1.0

    def sigma(self, t: float | None = None) -> float:
        if self.kind == "star":
            return 1.0 / math.sqrt(2.0)
        if t is None or t <= 0:
            raise ValueError("warren sigma requires a positive time")
        return math.sqrt(t / 2.0)


STAR_ALGEBRA = ScaleAlgebra("star")
WARREN_ALGEBRA = ScaleAlgebra("warren")


@dataclass(frozen=True)
class DeltaAntiderivative:
    """The n-th anti-derivative H^n of the Dirac delta.

    Order 0 is the delta itself and is never evaluated pointwise; every
    formula containing it collapses the enclosing integral analytically.
    """

    order: int

    def __post_init__(self):
        if self.order < 0:
            raise ValueError("order must be nonnegative")

    def __call__(self, x: float) -> float:
        if self.order == 0:
            raise ValueError(
                "H^0 is the Dirac delta and has no pointwise value; "
                "collapse the surrounding integral instead"
            )
        return heaviside_power(self.order, x)


# ---------------------------------------------------------------------------
# operations
# ---------------------------------------------------------------------------

def heaviside_power(n: int, x: float) -> float:
    """``x^(n-1)/(n-1)!`` for x >= 0 and 0 otherwise (n >= 1)."""
    if n < 1:
        raise ValueError("heaviside_power requires n >= 1; H^0 is the delta")
    if x < 0:
        return 0.0
    if n == 1:
        return 1.0
    if x == 0.0:
        return 0.0
    # log form keeps large orders finite
    return math.exp((n - 1) * math.log(x) - math.lgamma(n))


def normalized_hermite_sequence(max_degree: int, x: float) -> np.ndarray:
    """All ``h*_k(x)`` for k = 0..max_degree by the orthonormal recurrence."""
    out = np.empty(max_degree + 1)
    out[0] = _QUARTER_PI
    if max_degree == 0:
        return out
    out[1] = math.sqrt(2.0) * x * out[0]
    for k in range(1, max_degree):
        out[k + 1] = (
            math.sqrt(2.0 / (k + 1)) * x * out[k]
            - math.sqrt(k / (k + 1.0)) * out[k - 1]
        )
    return out


def weighted_hermite_sequence(max_degree: int, x: float) -> np.ndarray:
    """All ``h*_k(x) exp(-x^2/2)`` for k = 0..max_degree.

    The weight satisfies the same three-term recurrence, which keeps the
    values bounded for any x and degree (the log-stable evaluation route
    used by the kernel series).
    """
    out = np.empty(max_degree + 1)
    out[0] = _QUARTER_PI * math.exp(-0.5 * x * x)
    if max_degree == 0:
        return out
    out[1] = math.sqrt(2.0) * x * out[0]
    for k in range(1, max_degree):
        out[k + 1] = (
            math.sqrt(2.0 / (k + 1)) * x * out[k]
            - math.sqrt(k / (k + 1.0)) * out[k - 1]
        )
    return out


def hermite_eval(basis: HermiteBasis, n: int, x: float) -> float:
    """Evaluate the degree-n member of ``basis`` at x.

    Negative degrees return 0; degrees above ``basis.max_degree`` raise
    :class:`DegreeOverflowError`.
    """
    if n > basis.max_degree:
        raise DegreeOverflowError(
            f"degree {n} exceeds basis max_degree {basis.max_degree}"
        )
    if n < 0:
        return 0.0
    xi = x if basis.is_starred else x / math.sqrt(basis.time)
    return float(normalized_hermite_sequence(n, xi)[n])


def transition_density(kind: str, t: float, x: float, y: float) -> float:
    """Transition density ``p*_t(x, y)`` (OU) or ``p_t(x, y)`` (BM).

    The OU density is stationary with invariant weight exp(-y^2); the BM
    density has variance t/2.  Both integrate to 1 in y.
    """
    if t <= 0:
        raise ValueError("transition_density requires t > 0")
    if kind == "ou":
        q = math.exp(-t)
        var = 1.0 - q * q
        return math.exp(-((y - q * x) ** 2) / var) / math.sqrt(math.pi * var)
    if kind == "bm":
        return math.exp(-((y - x) ** 2) / t) / math.sqrt(math.pi * t)
    raise ValueError(f"unknown transition kind {kind!r}; use 'ou' or 'bm'")


def scale_factor(alg: ScaleAlgebra, which: str, *args: float) -> float:
    """Dispatch to q / r / sigma of ``alg`` (flat form used by the CLI)."""
    if which == "q":
        return alg.q(*args)
    if which == "r":
        return alg.r(*args)
    if which == "sigma":
        return alg.sigma(*args) if args else alg.sigma()
    raise ValueError(f"unknown scale factor {which!r}")


# ---------------------------------------------------------------------------
# Gaussian integral helpers shared by the kernel formulas
# ---------------------------------------------------------------------------

def gaussian_tail_moment(k: int, mu: float, s: float) -> float:
    """``int_0^inf u^k exp(-(u - mu)^2 / s) du`` for k >= 0, s > 0.

    Forward recursion seeded by the erfc integral; every phi-term and
    weighted Heaviside integral in the kernels reduces to this.
    """
    if s <= 0:
        raise ValueError("gaussian_tail_moment requires s > 0")
    root = math.sqrt(s)
    g_prev = 0.5 * math.sqrt(math.pi * s) * erfc(-mu / root)
    if k == 0:
        return g_prev
    gauss0 = math.exp(-mu * mu / s)
    g_cur = mu * g_prev + 0.5 * s * gauss0
    for j in range(2, k + 1):
        g_cur, g_prev = mu * g_cur + 0.5 * s * (j - 1) * g_prev, g_cur
    return g_cur


def weight_heaviside_integral(m: int, z: float, t: float = 1.0) -> float:
    """``int w^(t)(y) H^m(y - z) dy`` for m >= 1 (starred family: t = 1)."""
    if m < 1:
        raise ValueError("weight_heaviside_integral requires m >= 1")
    return gaussian_tail_moment(m - 1, -z, t) / math.gamma(m)


def gauss_hermite(nodes: int = 64):
    """Gauss-Hermite nodes/weights for ``int f(x) exp(-x^2) dx``."""
    return np.polynomial.hermite.hermgauss(nodes)
