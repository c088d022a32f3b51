"""Simulators for the two particle systems and empirical correlation
estimators.

The Hermitian matrix process is sampled exactly: the OU transition is
Gaussian, so time stepping exists only to hit observation times and
carries no discretisation error.  Warren's reflected system has no exact
sampler; it is approximated by Euler steps plus sequential mirror
reflection ordered from level 1 upward, which preserves the
|Brownian-motion|-like local behaviour of touching levels (clipping would
not).

Randomness comes from counter-based Philox streams keyed by
(seed, path-chunk, purpose); results are bit-reproducible for a fixed
SimConfig and independent of how chunks are scheduled, so chunks may run
in worker threads.
"""

from __future__ import annotations

import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from typing import Sequence

import numpy as np

from .errors import NumericalError

__all__ = [
    "HermitianState",
    "SimConfig",
    "EmpiricalHistogram",
    "EmpiricalEstimate",
    "sample_gue",
    "evolve_ou",
    "minor_eigenvalues",
    "simulate_warren",
    "dbm_minor_samples",
    "nonintersecting_density",
    "empirical_correlation",
    "histogram_from_samples",
]

PATH_CHUNK = 1 << 14


def _chunk_rng(seed: int, chunk: int, tag: int) -> np.random.Generator:
    key = np.random.SeedSequence((seed, chunk, tag)).generate_state(2, np.uint64)
    return np.random.Generator(np.random.Philox(key=key))


# ---------------------------------------------------------------------------
# domain types
# ---------------------------------------------------------------------------

@dataclass
class HermitianState:
    """Batched Hermitian matrices: N real diagonals plus the strict upper
    triangle, stored column-compressed.  Hermitian symmetry is implicit."""

    diag: np.ndarray          # (..., N)
    upper: np.ndarray         # (..., N (N - 1) / 2) complex

    @property
    def dimension(self) -> int:
        return self.diag.shape[-1]

    def to_matrices(self) -> np.ndarray:
        n = self.dimension
        batch = self.diag.shape[:-1]
        out = np.zeros(batch + (n, n), dtype=complex)
        iu = np.triu_indices(n, k=1)
        out[..., iu[0], iu[1]] = self.upper
        out += np.conj(np.swapaxes(out, -1, -2))
        out[..., np.arange(n), np.arange(n)] = self.diag
        return out


@dataclass(frozen=True)
class SimConfig:
    """Description of one Monte Carlo run."""

    dimension: int
    times: tuple[float, ...]
    paths: int
    seed: int
    euler_step: float | None = None

    def __post_init__(self):
        if self.paths < 1:
            raise ValueError("paths must be >= 1")
        if list(self.times) != sorted(self.times):
            raise ValueError("observation times must be nondecreasing")
        if any(t < 0 for t in self.times):
            raise ValueError("observation times must be nonnegative")
        if self.euler_step is not None and self.euler_step <= 0:
            raise ValueError("euler_step must be positive")


@dataclass(frozen=True)
class EmpiricalHistogram:
    """Binned density estimate with per-bin standard errors."""

    edges: np.ndarray
    counts: np.ndarray
    paths: int

    @property
    def widths(self) -> np.ndarray:
        return np.diff(self.edges)

    @property
    def density(self) -> np.ndarray:
        return self.counts / (self.paths * self.widths)

    @property
    def std_error(self) -> np.ndarray:
        # Poisson model: se(count) ~ sqrt(count)
        return np.sqrt(np.maximum(self.density, 0)
                       / (self.paths * self.widths))

    @property
    def centers(self) -> np.ndarray:
        return 0.5 * (self.edges[:-1] + self.edges[1:])


@dataclass(frozen=True)
class EmpiricalEstimate:
    value: float
    std_error: float
    hits: int
    one_sided: bool = False


# ---------------------------------------------------------------------------
# GUE / OU matrix dynamics
# ---------------------------------------------------------------------------

def sample_gue(dimension: int, rng: np.random.Generator,
               paths: int | None = None) -> HermitianState:
    """Stationary GUE draw: diagonal N(0, 1/2), off-diagonal re/im N(0, 1/4)."""
    if dimension < 1:
        raise ValueError("dimension must be >= 1")
    batch = () if paths is None else (paths,)
    m = dimension * (dimension - 1) // 2
    diag = rng.normal(0.0, math.sqrt(0.5), batch + (dimension,))
    upper = (rng.normal(0.0, 0.5, batch + (m,))
             + 1j * rng.normal(0.0, 0.5, batch + (m,)))
    return HermitianState(diag=diag, upper=upper)


def evolve_ou(state: HermitianState, dt: float,
              rng: np.random.Generator) -> HermitianState:
    """Exact OU transition: every free component c becomes
    q c + sqrt(1 - q^2) * (fresh stationary draw), q = exp(-dt)."""
    if dt <= 0:
        raise ValueError("dt must be positive")
    q = math.exp(-dt)
    mix = math.sqrt(1.0 - q * q)
    fresh_d = rng.normal(0.0, math.sqrt(0.5), state.diag.shape)
    fresh_u = (rng.normal(0.0, 0.5, state.upper.shape)
               + 1j * rng.normal(0.0, 0.5, state.upper.shape))
    return HermitianState(diag=q * state.diag + mix * fresh_d,
                          upper=q * state.upper + mix * fresh_u)


def minor_eigenvalues(state: HermitianState,
                      interlace_tol: float = 1e-8) -> list[np.ndarray]:
    """Ascending eigenvalues of every top-left principal minor.

    Each Hermitian block X + iY is embedded as the real symmetric
    [[X, -Y], [Y, X]] whose doubled spectrum is deduplicated by pairing
    consecutive values.  Cauchy interlacing across levels is asserted as
    a runtime check.
    """
    n = state.dimension
    if n > 64:
        raise ValueError("minor_eigenvalues capped at dimension 64")
    full = state.to_matrices()
    out: list[np.ndarray] = []
    for k in range(1, n + 1):
        block = full[..., :k, :k]
        x, y = block.real, block.imag
        emb = np.block([[x, -y], [y, x]])
        try:
            doubled = np.linalg.eigvalsh(emb)
        except np.linalg.LinAlgError as exc:  # pragma: no cover - not seen
            raise NumericalError(f"eigen iteration failed: {exc}") from exc
        lam = 0.5 * (doubled[..., 0::2] + doubled[..., 1::2])
        out.append(lam)
    for k in range(n - 1):
        low, high = out[k], out[k + 1]
        scale = 1.0 + np.abs(high).max(initial=0.0)
        if (np.any(high[..., :-1] > low + interlace_tol * scale)
                or np.any(low > high[..., 1:] + interlace_tol * scale)):
            raise NumericalError(
                f"Cauchy interlacing violated between minors {k+1}, {k+2}")
    return out


def _run_chunks(worker, n_chunks: int, threads: int):
    """Chunks write disjoint output slices, so any schedule is safe; the
    chunk-keyed RNG makes results schedule-independent."""
    if threads > 1 and n_chunks > 1:
        with ThreadPoolExecutor(max_workers=threads) as pool:
            list(pool.map(worker, range(n_chunks)))
    else:
        for c in range(n_chunks):
            worker(c)


def dbm_minor_samples(config: SimConfig,
                      threads: int = 1) -> dict[float, list[np.ndarray]]:
    """Minor eigenvalues of the stationary OU matrix process.

    Returns {time: [level-1 array (paths, 1), ..., level-N array
    (paths, N)]}.  The matrix starts in its GUE stationary law at t = 0
    and is evolved exactly between observation times.
    """
    times = list(config.times)
    out: dict[float, list[np.ndarray]] = {
        t: [np.empty((config.paths, k)) for k in range(1, config.dimension + 1)]
        for t in times}
    n_chunks = (config.paths + PATH_CHUNK - 1) // PATH_CHUNK

    def run_chunk(c: int):
        lo = c * PATH_CHUNK
        hi = min(lo + PATH_CHUNK, config.paths)
        rng = _chunk_rng(config.seed, c, tag=0)
        state = sample_gue(config.dimension, rng, paths=hi - lo)
        t_now = 0.0
        for t in times:
            if t > t_now:
                state = evolve_ou(state, t - t_now, rng)
                t_now = t
            for k, lam in enumerate(minor_eigenvalues(state)):
                out[t][k][lo:hi] = lam

    _run_chunks(run_chunk, n_chunks, threads)
    return out


# ---------------------------------------------------------------------------
# Warren's interlaced system
# ---------------------------------------------------------------------------

def _reflect_into(x: np.ndarray, lower: np.ndarray,
                  upper: np.ndarray) -> np.ndarray:
    """Mirror x into [lower, upper] (entries may be -inf/+inf)."""
    out = x.copy()
    both = np.isfinite(lower) & np.isfinite(upper)
    if np.any(both):
        a, b = lower[both], upper[both]
        width = b - a
        safe = width > 0
        y = np.where(safe, np.mod(out[both] - a, 2 * np.where(safe, width, 1.0)), 0.0)
        folded = a + np.minimum(y, 2 * width - y)
        out[both] = np.where(safe, folded, a)
    lo_only = np.isfinite(lower) & ~np.isfinite(upper)
    if np.any(lo_only):
        a = lower[lo_only]
        v = out[lo_only]
        out[lo_only] = np.where(v < a, 2 * a - v, v)
    hi_only = ~np.isfinite(lower) & np.isfinite(upper)
    if np.any(hi_only):
        b = upper[hi_only]
        v = out[hi_only]
        out[hi_only] = np.where(v > b, 2 * b - v, v)
    return out


def simulate_warren(n_max: int, config: SimConfig,
                    threads: int = 1) -> dict[float, list[np.ndarray]]:
    """Interlaced Brownian system, levels 1..n_max, started at the origin.

    Every particle receives independent N(0, step/2) increments; after
    each step interlacing is restored level by level from level 1 upward,
    reflecting overshoot off the already-updated neighbours one level
    down.  Observations: {time: [(paths, 1), ..., (paths, n_max)]}.
    """
    if config.euler_step is None:
        raise ValueError("simulate_warren needs config.euler_step")
    times = list(config.times)
    if any(t <= 0 for t in times):
        raise ValueError("warren observation times must be positive")
    gaps = np.diff([0.0] + times)
    if config.euler_step > min(g for g in gaps if g > 0):
        raise ValueError("euler_step must not exceed the observation spacing")
    out: dict[float, list[np.ndarray]] = {
        t: [np.empty((config.paths, k)) for k in range(1, n_max + 1)]
        for t in times}
    n_chunks = (config.paths + PATH_CHUNK - 1) // PATH_CHUNK

    def run_chunk(c: int):
        lo = c * PATH_CHUNK
        hi = min(lo + PATH_CHUNK, config.paths)
        npaths = hi - lo
        rng = _chunk_rng(config.seed, c, tag=1)
        levels = [np.zeros((npaths, k)) for k in range(1, n_max + 1)]
        t_now = 0.0
        for t in times:
            span = t - t_now
            if span > 0:
                n_sub = max(1, int(math.ceil(span / config.euler_step)))
                h = span / n_sub
                sd = math.sqrt(0.5 * h)
                for _ in range(n_sub):
                    for k in range(n_max):
                        prop = levels[k] + rng.normal(0.0, sd, levels[k].shape)
                        if k == 0:
                            levels[0] = prop
                            continue
                        below = levels[k - 1]
                        pad = np.full((npaths, 1), np.inf)
                        upper = np.concatenate([below, pad], axis=1)
                        lower = np.concatenate([-pad, below], axis=1)
                        levels[k] = _reflect_into(prop, lower, upper)
                t_now = t
            for k in range(n_max):
                out[t][k][lo:hi] = levels[k]

    _run_chunks(run_chunk, n_chunks, threads)
    return out


# ---------------------------------------------------------------------------
# validation densities and estimators
# ---------------------------------------------------------------------------

def nonintersecting_density(n: int, t: float, x: Sequence[float],
                            y: Sequence[float]) -> float:
    """Karlin-McGregor style h-transformed density
    Delta(y)/Delta(x) * det[exp(-(x_i - y_j)^2 / t)].

    Unnormalised (the n = 1 case is sqrt(pi t) times the transition
    density); used for shape validation only.
    """
    if t <= 0:
        raise ValueError("t must be positive")
    xv = np.asarray(x, float)
    yv = np.asarray(y, float)
    if np.any(np.diff(xv) <= 0) or np.any(np.diff(yv) <= 0):
        raise ValueError("coordinates must be strictly increasing")
    vand_x = np.prod([xv[j] - xv[i] for i in range(n) for j in range(i + 1, n)]) \
        if n > 1 else 1.0
    vand_y = np.prod([yv[j] - yv[i] for i in range(n) for j in range(i + 1, n)]) \
        if n > 1 else 1.0
    if vand_x == 0:
        raise ValueError("coincident x coordinates")
    mat = np.exp(-(xv[:, None] - yv[None, :]) ** 2 / t)
    return float(vand_y / vand_x * np.linalg.det(mat))


def histogram_from_samples(samples: np.ndarray, edges: np.ndarray,
                           paths: int) -> EmpiricalHistogram:
    """Bin all particle positions in ``samples`` (any shape; first axis
    is the path axis)."""
    counts, _ = np.histogram(samples.reshape(-1), bins=edges)
    return EmpiricalHistogram(edges=np.asarray(edges, float),
                              counts=counts.astype(float), paths=paths)


def empirical_correlation(samples: dict[tuple[int, float], np.ndarray],
                          points: Sequence[tuple[int, float, float]],
                          bin_width: float | Sequence[float]) -> EmpiricalEstimate:
    """Estimate rho_k at the given (level, time, position) points.

    ``samples`` maps (level, time) to a (paths, level) position array.
    The estimate is the joint frequency of one particle in each bin
    [x - w/2, x + w/2), divided by the bin volume, with a binomial
    standard error; bins at a shared (level, time) must not overlap.
    """
    widths = ([float(bin_width)] * len(points)
              if np.isscalar(bin_width) else [float(w) for w in bin_width])
    if len(widths) != len(points):
        raise ValueError("need one bin width per query point")
    by_slice: dict[tuple[int, float], list[tuple[float, float]]] = {}
    for (lvl, t, x), w in zip(points, widths):
        by_slice.setdefault((lvl, t), []).append((x - w / 2, x + w / 2))
    for bins in by_slice.values():
        bins.sort()
        for (lo1, hi1), (lo2, hi2) in zip(bins, bins[1:]):
            if hi1 > lo2:
                raise ValueError("overlapping bins at one (level, time)")
    paths = None
    joint = None
    for (lvl, t, x), w in zip(points, widths):
        try:
            arr = samples[(lvl, t)]
        except KeyError:
            raise ValueError(f"no samples for level {lvl} at time {t}")
        if paths is None:
            paths = arr.shape[0]
            joint = np.ones(paths, dtype=bool)
        hit = np.any((arr >= x - w / 2) & (arr < x + w / 2), axis=1)
        joint &= hit
    hits = int(np.count_nonzero(joint))
    volume = math.prod(widths)
    p_hat = hits / paths
    value = p_hat / volume
    if hits == 0:
        return EmpiricalEstimate(0.0, 1.0 / (paths * volume), 0, one_sided=True)
    se = math.sqrt(p_hat * (1.0 - p_hat) / paths) / volume
    return EmpiricalEstimate(value, se, hits)
