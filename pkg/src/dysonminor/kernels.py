"""Extended correlation kernels of the minor processes.

Four kernels are provided, each a function of two (level, time, position)
points:

* ``kernel_dbm``   -- the Dyson Brownian minor kernel (OU dynamics),
* ``kernel_warren``-- the kernel of Warren's interlaced Brownian system,
* ``kernel_bead``  -- the time-dependent bead kernel with drift parameter
  ``a`` in (-1, 1), the bulk scaling limit of ``kernel_dbm``,
* ``kernel_adbm``  -- the anti-symmetric variant (series only).

Every kernel has a Hermite series representation; the DBM and Warren
kernels additionally have a double-contour representation, and the two
agree exactly.  Series evaluation uses weighted Hermite functions and
log-space factorial ratios, so levels of several hundred (needed by the
bead-limit sweep) stay finite.

The two-sided branch structure is governed by the space-like ordering

    (n, t) < (n', t')   iff   n > n', or n = n' and t < t'.

The one-sided ``phi_term`` is zero unless the first point precedes the
second in this order.
"""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass, field
from typing import Callable, Union

import numpy as np
from scipy.special import gammaln

from . import contours
from .errors import ConvergenceError
from .special import (
    gaussian_tail_moment,
    heaviside_power,
    normalized_hermite_sequence,
    transition_density,
    weight_heaviside_integral,
)

__all__ = [
    "SpaceTimePoint",
    "Ordering",
    "SeriesRep",
    "ContourRep",
    "KernelEvalConfig",
    "BeadParam",
    "spacelike_compare",
    "kernel_dbm",
    "kernel_warren",
    "kernel_bead",
    "kernel_adbm",
    "phi_term",
    "step_expansion",
    "scaled_minor_kernel",
]

_QUARTER_PI = math.pi ** -0.25


# ---------------------------------------------------------------------------
# domain types
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class SpaceTimePoint:
    """A (level, time, position) triple, the argument of every kernel."""

    level: int
    time: float
    position: float


class Ordering(enum.Enum):
    LESS = "less"
    GEQ = "geq_or_equal"


def _is_less(n: int, t: float, n_prime: int, t_prime: float) -> bool:
    return n > n_prime or (n == n_prime and t < t_prime)


def spacelike_compare(p: SpaceTimePoint, p_prime: SpaceTimePoint) -> Ordering:
    """Three-case ordering on (level, time) pairs; positions are ignored."""
    if _is_less(p.level, p.time, p_prime.level, p_prime.time):
        return Ordering.LESS
    return Ordering.GEQ


@dataclass(frozen=True)
class SeriesRep:
    """Truncated-series evaluation policy.

    The infinite branch stops once the last three terms fall below
    ``term_tol`` times the running maximum term and a ratio-test tail
    bound does the same.  When the ratio stalls near 1 (which happens at
    t = t' with n > n', where decay is only polynomial) the DBM/Warren
    kernels fall back to their contour representation automatically.
    """

    l_max: int = 500
    term_tol: float = 1e-12
    allow_contour_fallback: bool = True

    def __post_init__(self):
        if self.l_max < 1:
            raise ValueError("l_max must be >= 1")
        if self.term_tol <= 0:
            raise ValueError("term_tol must be positive")


@dataclass(frozen=True)
class ContourRep:
    circle_nodes: int = 256
    line_nodes: int = 512


@dataclass(frozen=True)
class KernelEvalConfig:
    representation: Union[SeriesRep, ContourRep] = field(default_factory=SeriesRep)
    # None keeps the kernels exactly as the theorems print them ("raw");
    # a callable g conjugates to (g(p)/g(p')) * K(p, p').
    gauge: Callable[[SpaceTimePoint], float] | None = None


DEFAULT_CONFIG = KernelEvalConfig()


@dataclass(frozen=True)
class BeadParam:
    """Bead drift parameter; the saddle points a +- i sqrt(1-a^2) sit on
    the unit circle and bound the segment contour."""

    a: float

    def __post_init__(self):
        if not -1.0 < self.a < 1.0:
            raise ValueError("bead parameter must lie in (-1, 1)")

    @property
    def u_plus(self) -> complex:
        return complex(self.a, math.sqrt(1.0 - self.a * self.a))

    @property
    def u_minus(self) -> complex:
        return complex(self.a, -math.sqrt(1.0 - self.a * self.a))


# ---------------------------------------------------------------------------
# weighted-Hermite series machinery
# ---------------------------------------------------------------------------

class _HermiteLadder:
    """Grows the weighted values h*_k(x) exp(-x^2/2) on demand."""

    def __init__(self, x: float):
        self.x = x
        self._vals = np.empty(128)
        self._vals[0] = _QUARTER_PI * math.exp(-0.5 * x * x)
        self._vals[1] = math.sqrt(2.0) * x * self._vals[0]
        self._count = 2

    def upto(self, k: int) -> np.ndarray:
        """Values for degrees 0..k inclusive (a view; do not mutate)."""
        if k >= self._count:
            need = k + 1
            cap = len(self._vals)
            while cap < need:
                cap *= 2
            if cap != len(self._vals):
                grown = np.empty(cap)
                grown[: self._count] = self._vals[: self._count]
                self._vals = grown
            vals = self._vals
            x = self.x
            for j in range(self._count, need):
                # h_{j} from h_{j-1}, h_{j-2}
                vals[j] = (
                    math.sqrt(2.0 / j) * x * vals[j - 1]
                    - math.sqrt((j - 1) / j) * vals[j - 2]
                )
            self._count = need
        return self._vals[: k + 1]


def _finite_branch(n, n_prime, xi, xi_prime, lam, step):
    """Sum over l = -min(n, n')//step .. -1 of the bilinear terms.

    ``lam`` is the log-decay per unit l (so the weight is exp(-lam * l)),
    and the constant exp((xi^2 - xi'^2)/2) restores the unweighted
    h(xi) h(xi') exp(-xi'^2) normalisation.
    """
    l_min = -(min(n, n_prime) // step)
    if l_min >= 0:
        return 0.0
    ls = np.arange(l_min, 0)
    k1 = n + step * ls
    k2 = n_prime + step * ls
    h1 = _HermiteLadder(xi).upto(int(k1.max()))
    h2 = _HermiteLadder(xi_prime).upto(int(k2.max()))
    logw = (-lam * ls
            + 0.5 * (gammaln(k2 + 1) - gammaln(k1 + 1))
            + 0.5 * (xi * xi - xi_prime * xi_prime))
    return float(np.sum(np.exp(logw) * h1[k1] * h2[k2]))


def _infinite_branch(n, n_prime, xi, xi_prime, lam, step, l_max, term_tol):
    """Sum over l >= 0; returns (value, converged, ratio_estimate).

    Convergence is declared when the last three terms sit below
    ``term_tol`` times the running maximum term and a chunk-envelope
    geometric bound on the remaining tail does too.  Chunk envelopes
    (the max |term| over blocks of a few thousand indices) smooth out
    the beat patterns of the Hermite products, which make pointwise
    term ratios useless as decay estimates.
    """
    base = 0.5 * (xi * xi - xi_prime * xi_prime)
    ladder1 = _HermiteLadder(xi)
    ladder2 = _HermiteLadder(xi_prime)
    total = 0.0
    run_max = 0.0
    prev_env = None
    last3 = np.empty(0)
    chunk = 512
    start = 0
    q_exp = math.exp(-lam)
    ratio = q_exp
    while start <= l_max:
        stop = min(start + chunk, l_max + 1)
        ls = np.arange(start, stop)
        k1 = n + step * ls
        k2 = n_prime + step * ls
        h1 = ladder1.upto(int(k1[-1]))
        h2 = ladder2.upto(int(k2[-1]))
        logw = -lam * ls + 0.5 * (gammaln(k2 + 1) - gammaln(k1 + 1)) + base
        terms = np.exp(logw) * h1[k1] * h2[k2]
        total += float(np.sum(terms))
        abs_terms = np.abs(terms)
        env = float(abs_terms.max(initial=0.0))
        run_max = max(run_max, env)
        width = stop - start
        last3 = abs_terms[-3:] if width >= 3 else np.concatenate(
            [last3, abs_terms])[-3:]
        scale = max(run_max, 1e-300)
        if env == 0.0 and np.all(last3 == 0.0):
            return total, True, ratio  # tail underflowed to exact zero
        if np.all(last3 < term_tol * scale):
            # (a) exponential bound: on the less branch n >= n', so the
            # factorial and Hermite-amplitude factors only decay and the
            # tail mass is at most env * sum_j exp(-lam j)
            if lam > 0 and env * q_exp / (1.0 - q_exp) < term_tol * scale:
                return total, True, q_exp
            # (b) measured chunk-envelope bound, immune to beat patterns
            if prev_env is not None and prev_env > 0 and width == chunk:
                env_ratio = env / prev_env
                if env_ratio < 1.0:
                    ratio = max(q_exp, env_ratio ** (1.0 / chunk))
                    if env * env_ratio / (1.0 - env_ratio) < term_tol * scale:
                        return total, True, ratio
        if width == chunk:
            prev_env = env
        start = stop
    return total, False, ratio


def _series_kernel(n, n_prime, xi, xi_prime, lam, less, rep, step=1,
                   what="kernel"):
    """Common series evaluator; raises or reports fallback on stall."""
    if not less:
        return _finite_branch(n, n_prime, xi, xi_prime, lam, step), True
    if lam < 0:
        raise ValueError(
            f"{what}: series diverges for (n,t) < (n',t') with decreasing "
            "time; query points must follow a space-like path")
    value, converged, ratio = _infinite_branch(
        n, n_prime, xi, xi_prime, lam, step, rep.l_max, rep.term_tol)
    return -value, converged


# ---------------------------------------------------------------------------
# phi terms and step expansion
# ---------------------------------------------------------------------------

def _phi_core(m: int, mu: float, s: float, norm: float) -> float:
    """``int H^m(x - y) * C exp(-((x-y) - mu)^2 / s) dy`` for m >= 1."""
    return norm * gaussian_tail_moment(m - 1, mu, s) / math.gamma(m)


def phi_term(kind: str, p: SpaceTimePoint, p_prime: SpaceTimePoint,
             a: float | BeadParam | None = None) -> float:
    """One-sided term of the contour representations.

    Zero unless (n, t) < (n', t').  On the less branch it is the stated
    convolution of H^(n-n') with the family's transition density:

    * dbm:    2^((n-n')/2) e^(n'(t'-t)) int H^(n-n')(x-y) p*_(t'-t)(y, x') dy
    * warren: sqrt(t'^n' / t^n)        int H^(n-n')(x-y) p_(t'-t)(y, x') dy
    * bead:                            int H^(n-n')(x-y) p_(2(t'-t))(y, x' + a(t'-t)) dy

    H^0 collapses the integral to the density itself; at t = t' the
    density degenerates to a point mass and the term is H^(n-n')(x - x').
    """
    n, t, x = p.level, p.time, p.position
    n_prime, t_prime, x_prime = p_prime.level, p_prime.time, p_prime.position
    if not _is_less(n, t, n_prime, t_prime):
        return 0.0
    m = n - n_prime
    tau = t_prime - t
    if kind == "dbm":
        pref = 2.0 ** (0.5 * m) * math.exp(n_prime * tau)
        if m == 0:
            return pref * transition_density("ou", tau, x, x_prime)
        if tau == 0.0:
            return pref * heaviside_power(m, x - x_prime)
        q = math.exp(-tau)
        var = 1.0 - q * q
        return pref * _phi_core(
            m, x - x_prime / q, var / (q * q),
            1.0 / math.sqrt(math.pi * var))
    if kind == "warren":
        if t <= 0 or t_prime <= 0:
            raise ValueError("warren phi requires positive times")
        pref = math.exp(0.5 * (n_prime * math.log(t_prime) - n * math.log(t)))
        if m == 0:
            return pref * transition_density("bm", tau, x, x_prime)
        if tau == 0.0:
            return pref * heaviside_power(m, x - x_prime)
        return pref * _phi_core(
            m, x - x_prime, tau, 1.0 / math.sqrt(math.pi * tau))
    if kind == "bead":
        bead = a if isinstance(a, BeadParam) else BeadParam(float(a))
        target = x_prime + bead.a * tau
        if m == 0:
            return transition_density("bm", 2.0 * tau, x, target)
        if tau == 0.0:
            return heaviside_power(m, x - x_prime)
        return _phi_core(
            m, x - target, 2.0 * tau, 1.0 / math.sqrt(2.0 * math.pi * tau))
    raise ValueError(f"unknown phi kind {kind!r}")


def step_expansion(n: int, s: float, t: float, x: float, z: float,
                   trunc: int = 400, family: str = "warren",
                   term_tol: float = 1e-12) -> float:
    """``int H^n(x - y) p_(t-s)(y, z) dy`` as the two-part Hermite series.

    The k < n part pairs h_k at the earlier scale with closed-form
    weighted Heaviside integrals; the k >= n part is a geometrically
    decaying bilinear tail truncated at ``trunc`` with a ratio-test bound.
    The warren family needs t > s > 0; the starred family any t > s.
    """
    if n < 1:
        raise ValueError("step_expansion requires n >= 1")
    if t <= s:
        raise ValueError("step_expansion requires t > s")
    if family == "warren":
        if s <= 0:
            raise ValueError("warren family requires s > 0")
        q = math.sqrt(s / t)
        r = 1.0
        sigma_s, sigma_t = math.sqrt(s / 2.0), math.sqrt(t / 2.0)
        xi, zeta = x / math.sqrt(s), z / math.sqrt(t)
        w_time = t
        # the time-indexed time-step relation carries one extra factor
        # sigma(s)/sigma(t) = q relative to the starred one (where the
        # ratio is 1); it enters each expansion coefficient once
        sigma_ratio = q
    elif family == "star":
        q = math.exp(-(t - s))
        r = q
        sigma_s = sigma_t = 1.0 / math.sqrt(2.0)
        xi, zeta = x, z
        w_time = 1.0
        sigma_ratio = 1.0
    else:
        raise ValueError(f"unknown family {family!r}")

    pi_quarter = math.pi ** 0.25
    hx = normalized_hermite_sequence(max(n - 1, 0), xi)
    finite = 0.0
    for k in range(n):
        coeff = (sigma_ratio * hx[k] * sigma_t ** k * q ** k
                 / (r ** n * sigma_s
                    * math.sqrt(2.0 * math.gamma(k + 1)) * pi_quarter))
        finite += coeff * weight_heaviside_integral(n - k, z, w_time)

    # bilinear tail: h^(s)_k(x) h^(t)_{k-n}(z) w^(t)(z) written with the
    # weighted functions, the leftover exponent carried in log space
    pref = sigma_ratio * sigma_t ** n / (math.sqrt(2.0) * sigma_s * r ** n)
    lad_x = _HermiteLadder(xi)
    lad_z = _HermiteLadder(zeta)
    exp_shift = 0.5 * xi * xi - 0.5 * zeta * zeta
    total = 0.0
    last_nonzero = 0.0
    converged = False
    for k in range(n, n + trunc + 1):
        hxk = lad_x.upto(k)[k]
        hzk = lad_z.upto(k - n)[k - n]
        logw = (0.5 * (gammaln(k - n + 1) - gammaln(k + 1))
                + k * math.log(q) + exp_shift)
        term = math.exp(logw) * hxk * hzk
        total += term
        at = abs(term)
        scale = max(abs(total), abs(finite), 1e-300)
        if at > 0:
            tail_bound = at * q / (1.0 - q)
            if at < term_tol * scale and tail_bound < term_tol * scale:
                converged = True
                break
            last_nonzero = at
    if not converged and last_nonzero * q / (1.0 - q) > term_tol * max(
            abs(total), abs(finite), 1e-300):
        raise ConvergenceError(
            f"step_expansion tail not below tolerance after {trunc} terms",
            partial=finite + pref * total)
    return finite + pref * total


# ---------------------------------------------------------------------------
# the four kernels
# ---------------------------------------------------------------------------

def kernel_dbm(p: SpaceTimePoint, p_prime: SpaceTimePoint,
               cfg: KernelEvalConfig = DEFAULT_CONFIG) -> float:
    """Dyson Brownian minor kernel.

    Series form: the bilinear Hermite sum with weight exp(-l(t'-t)) and
    the starred family at unit scale; contour form: -phi + the double
    contour integral with decay exp(-(t'-t)).  The two agree exactly.
    """
    if p.level < 1 or p_prime.level < 1:
        raise ValueError("kernel_dbm requires levels >= 1")
    if p.time < 0 or p_prime.time < 0:
        raise ValueError("kernel_dbm requires times >= 0")
    n, t, x = p.level, p.time, p.position
    n_prime, t_prime, x_prime = p_prime.level, p_prime.time, p_prime.position
    less = _is_less(n, t, n_prime, t_prime)
    tau = t_prime - t
    rep = cfg.representation
    if isinstance(rep, SeriesRep):
        value, converged = _series_kernel(
            n, n_prime, x, x_prime, tau, less, rep, what="kernel_dbm")
        if not converged:
            if rep.allow_contour_fallback:
                value = _kernel_dbm_contour(p, p_prime, ContourRep())
            else:
                raise ConvergenceError(
                    "kernel_dbm series did not converge within l_max",
                    partial=value)
    else:
        value = _kernel_dbm_contour(p, p_prime, rep)
    return _apply_gauge(value, p, p_prime, cfg)


def _kernel_dbm_contour(p, p_prime, rep: ContourRep) -> float:
    n, t, x = p.level, p.time, p.position
    n_prime, t_prime, x_prime = p_prime.level, p_prime.time, p_prime.position
    decay = math.exp(-(t_prime - t))
    integral = contours.double_contour(
        n, n_prime, x, x_prime, decay,
        circle_nodes=rep.circle_nodes, line_nodes=rep.line_nodes)
    value = (-phi_term("dbm", p, p_prime)
             + 2.0 ** (0.5 * (n_prime - n)) * integral.real)
    return value


def kernel_warren(p: SpaceTimePoint, p_prime: SpaceTimePoint,
                  cfg: KernelEvalConfig = DEFAULT_CONFIG) -> float:
    """Kernel of Warren's process (Brownian variance t/2 convention).

    The series uses the time-indexed Hermite family; per-step decay is
    sqrt(t/t').  The contour route evaluates 2^((n-n')/2) K and removes
    the prefactor; it is the DBM contour form under the exact change of
    variables (level, x, t) -> (level, x / sqrt(t), ln(t) / 2), so the
    contour separation constraint reads |u| < sqrt(t/t') |v|.
    """
    if p.level < 1 or p_prime.level < 1:
        raise ValueError("kernel_warren requires levels >= 1")
    if p.time <= 0 or p_prime.time <= 0:
        raise ValueError("kernel_warren requires times > 0")
    n, t, x = p.level, p.time, p.position
    n_prime, t_prime, x_prime = p_prime.level, p_prime.time, p_prime.position
    less = _is_less(n, t, n_prime, t_prime)
    lam = 0.5 * (math.log(t_prime) - math.log(t))
    xi, xi_prime = x / math.sqrt(t), x_prime / math.sqrt(t_prime)
    rep = cfg.representation
    if isinstance(rep, SeriesRep):
        value, converged = _series_kernel(
            n, n_prime, xi, xi_prime, lam, less, rep, what="kernel_warren")
        value /= math.sqrt(t)
        if not converged:
            if rep.allow_contour_fallback:
                value = _kernel_warren_contour(p, p_prime, ContourRep())
            else:
                raise ConvergenceError(
                    "kernel_warren series did not converge within l_max",
                    partial=value)
    else:
        value = _kernel_warren_contour(p, p_prime, rep)
    return _apply_gauge(value, p, p_prime, cfg)


def _kernel_warren_contour(p, p_prime, rep: ContourRep) -> float:
    n, t, x = p.level, p.time, p.position
    n_prime, t_prime, x_prime = p_prime.level, p_prime.time, p_prime.position
    s, s_prime = 0.5 * math.log(t), 0.5 * math.log(t_prime)
    # the DBM kernel depends on times only through their difference;
    # shift into its t >= 0 domain
    shift = max(0.0, -min(s, s_prime))
    ou_p = SpaceTimePoint(n, s + shift, x / math.sqrt(t))
    ou_p_prime = SpaceTimePoint(
        n_prime, s_prime + shift, x_prime / math.sqrt(t_prime))
    decay = math.exp(-(s_prime - s))  # = sqrt(t / t')
    integral = contours.double_contour(
        n, n_prime, ou_p.position, ou_p_prime.position, decay,
        circle_nodes=rep.circle_nodes, line_nodes=rep.line_nodes)
    value = (-phi_term("dbm", ou_p, ou_p_prime)
             + 2.0 ** (0.5 * (n_prime - n)) * integral.real)
    return value / math.sqrt(t)


def kernel_bead(a: float | BeadParam, p: SpaceTimePoint,
                p_prime: SpaceTimePoint, segment_nodes: int = 128) -> float:
    """Time-dependent bead kernel with parameter a.

    -phi + (1/2 pi i) int_(u-)^(u+) u^(n'-n)
          exp((t'-t)(u^2 - 2 a u)/2 + u (x - x')) du,
    the straight segment joining the saddle points a -+ i sqrt(1-a^2).
    Levels are relative (any integers).  At a = 0 with n > n' the segment
    passes through the pole of u^(n'-n) at the origin and the kernel is
    not defined.
    """
    bead = a if isinstance(a, BeadParam) else BeadParam(float(a))
    n, t, x = p.level, p.time, p.position
    n_prime, t_prime, x_prime = p_prime.level, p_prime.time, p_prime.position
    power = n_prime - n
    if bead.a == 0.0 and power < 0:
        raise ValueError(
            "bead kernel undefined at a = 0 with n > n': the segment "
            "passes through the origin pole")
    tau = t_prime - t
    dx = x - x_prime

    def integrand(u):
        return u ** float(power) * np.exp(
            0.5 * tau * (u * u - 2.0 * bead.a * u) + u * dx)

    seg = contours.integrate_segment(
        integrand, contours.Segment(bead.u_minus, bead.u_plus, segment_nodes))
    value = (seg / (2j * math.pi)).real
    return value - phi_term("bead", p, p_prime, a=bead)


def kernel_adbm(p: SpaceTimePoint, p_prime: SpaceTimePoint,
                cfg: KernelEvalConfig = DEFAULT_CONFIG) -> float:
    """Anti-symmetric minor kernel: step-2 level indices (n + 2l) and
    decay exp(-2l(t'-t)).  Series representation only."""
    if p.level < 1 or p_prime.level < 1:
        raise ValueError("kernel_adbm requires levels >= 1")
    n, t, x = p.level, p.time, p.position
    n_prime, t_prime, x_prime = p_prime.level, p_prime.time, p_prime.position
    less = _is_less(n, t, n_prime, t_prime)
    rep = cfg.representation
    if not isinstance(rep, SeriesRep):
        raise ValueError("kernel_adbm has no contour representation")
    value, converged = _series_kernel(
        n, n_prime, x, x_prime, 2.0 * (t_prime - t), less, rep, step=2,
        what="kernel_adbm")
    if not converged:
        raise ConvergenceError(
            "kernel_adbm series did not converge within l_max", partial=value)
    return _apply_gauge(value, p, p_prime, cfg)


def _apply_gauge(value, p, p_prime, cfg):
    if cfg.gauge is not None:
        value *= cfg.gauge(p) / cfg.gauge(p_prime)
    return value


# ---------------------------------------------------------------------------
# bulk scaling toward the bead kernel
# ---------------------------------------------------------------------------

def scaled_minor_kernel(big_n: int, a: float | BeadParam,
                        p: SpaceTimePoint, p_prime: SpaceTimePoint) -> float:
    """The bead-rescaled DBM kernel at finite matrix size ``big_n``.

    Evaluates K^DBM at levels big_n + n, positions sqrt(2 big_n) a +
    x / sqrt(2 big_n) and times t / (2 big_n), multiplied by
    exp(-big_n dtau) * big_n^((n-n')/2) / sqrt(2 big_n) where dtau is the
    difference of the rescaled time arguments.  As big_n grows this
    converges to ``kernel_bead(a, p, p_prime)``.  (The level prefactor is
    the gauge-normalised form; the printed (4 big_n)^((n-n')/2) variant
    converges to the 2^(n-n')-conjugated kernel instead.)
    """
    bead = a if isinstance(a, BeadParam) else BeadParam(float(a))
    n, t, x = p.level, p.time, p.position
    n_prime, t_prime, x_prime = p_prime.level, p_prime.time, p_prime.position
    if big_n + min(n, n_prime) < 1:
        raise ValueError("big_n too small for the requested relative levels")
    tau, tau_prime = t / (2.0 * big_n), t_prime / (2.0 * big_n)
    root = math.sqrt(2.0 * big_n)
    big_p = SpaceTimePoint(big_n + n, tau, root * bead.a + x / root)
    big_p_prime = SpaceTimePoint(
        big_n + n_prime, tau_prime, root * bead.a + x_prime / root)
    # series truncation must reach past the slow exp(-l (t'-t)/(2N)) decay
    lam = tau_prime - tau
    l_max = 2000 if lam <= 0 else max(2000, int(45.0 / lam))
    cfg = KernelEvalConfig(SeriesRep(l_max=l_max, term_tol=1e-11,
                                     allow_contour_fallback=False))
    value = kernel_dbm(big_p, big_p_prime, cfg)
    pref = (math.exp(-big_n * (tau_prime - tau))
            * big_n ** (0.5 * (n - n_prime)) / root)
    return pref * value
