"""Brute-force discrete L-ensemble oracle.

Everything the analytic kernels claim is checked here from first
principles: a space-like path is discretised on a uniform grid, the block
L-matrix with virtual-particle columns is assembled literally, and the
correlation kernel falls out of one dense solve,

    K* = 1_N - (1_N + L)^{-1} |_N .

No Hermite-series knowledge enters; agreement with the analytic kernels
is established at the determinant level (gauge_compare), since the two
sides differ by conjugating factors that cancel in determinants.
"""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass, field
from typing import Sequence

import numpy as np

from .errors import ConditioningError
from .special import normalized_hermite_sequence

__all__ = [
    "Grid",
    "PathDescriptor",
    "BlockLEnsemble",
    "DiscretizedKernel",
    "fredholm_expansion_check",
    "projected_kernel",
    "em_block_kernel",
    "assemble_equal_count_l",
    "block_inverse",
    "discretized_minor_kernel",
]

_MAX_DIMENSION = 2000
_COND_LIMIT = 1e12


# ---------------------------------------------------------------------------
# domain types
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class Grid:
    """Uniform discretisation of an interval of the real line."""

    points: np.ndarray
    cell_weight: float

    def __post_init__(self):
        pts = np.asarray(self.points, dtype=float)
        object.__setattr__(self, "points", pts)
        if len(pts) < 2:
            raise ValueError("grid needs at least 2 points")
        gaps = np.diff(pts)
        if np.any(gaps <= 0):
            raise ValueError("grid points must be strictly increasing")
        if np.max(np.abs(gaps - gaps[0])) > 1e-12:
            raise ValueError("grid spacing must be uniform")
        if self.cell_weight <= 0:
            raise ValueError("cell_weight must be positive")

    @classmethod
    def uniform(cls, lo: float, hi: float, count: int) -> "Grid":
        pts = np.linspace(lo, hi, count)
        return cls(pts, (hi - lo) / (count - 1))

    def __len__(self):
        return len(self.points)


@dataclass(frozen=True)
class PathDescriptor:
    """Space-like (level, time) nodes normalised to unit down-steps.

    ``query_slices`` maps each requested node to its index in the
    normalised node list (extra nodes are inserted when a request drops
    more than one level at a time or stops above level 1).
    """

    levels: tuple[int, ...]
    times: tuple[float, ...]
    query_slices: tuple[int, ...]

    @classmethod
    def from_nodes(cls, nodes: Sequence[tuple[int, float]]) -> "PathDescriptor":
        if not nodes:
            raise ValueError("path needs at least one (level, time) node")
        for lvl, _ in nodes:
            if lvl < 1:
                raise ValueError("levels must be >= 1")
        for i in range(1, len(nodes)):
            if nodes[i][1] < nodes[i - 1][1]:
                raise ValueError(f"time decreases at node {i}")
            if nodes[i][0] > nodes[i - 1][0]:
                raise ValueError(f"level increases at node {i}")
        levels: list[int] = []
        times: list[float] = []
        query: list[int] = []
        for lvl, t in nodes:
            if levels:
                # bridge multi-level drops with same-time intermediate nodes
                while levels[-1] - lvl > 1:
                    levels.append(levels[-1] - 1)
                    times.append(t)
            if levels and levels[-1] == lvl and times[-1] == t:
                query.append(len(levels) - 1)
                continue
            levels.append(lvl)
            times.append(t)
            query.append(len(levels) - 1)
        # the machinery ends at level 1 (the final virtual down-step to
        # level 0 is implicit)
        while levels[-1] > 1:
            levels.append(levels[-1] - 1)
            times.append(times[-1])
        return cls(tuple(levels), tuple(times), tuple(query))

    @property
    def node_count(self) -> int:
        return len(self.levels)

    def down_step_indices(self) -> list[int]:
        """tau_k for k = 1..n_0: the index of the k-th down step.

        Step m joins node m to node m+1; the final step (index N-1) drops
        from level 1 to the empty level 0.
        """
        n0 = self.levels[0]
        taus = [m for m in range(self.node_count - 1)
                if self.levels[m] - self.levels[m + 1] == 1]
        taus.append(self.node_count - 1)
        assert len(taus) == n0, "path bookkeeping broken"
        return taus


@dataclass(frozen=True)
class BlockLEnsemble:
    """Assembled block L-matrix over phantom indices + grid copies."""

    grid: Grid
    path: PathDescriptor
    u: float
    family: str
    l_matrix: np.ndarray
    phantom: int

    def copy_slice(self, m: int) -> slice:
        g = len(self.grid)
        return slice(self.phantom + m * g, self.phantom + (m + 1) * g)


# ---------------------------------------------------------------------------
# structural operations
# ---------------------------------------------------------------------------

def fredholm_expansion_check(matrix: np.ndarray) -> tuple[float, float]:
    """(det(1 + M), sum over all principal minors det M_X).

    Subset enumeration is 2^size, refused above 12.
    """
    m = np.asarray(matrix, dtype=float)
    size = m.shape[0]
    if size > 12:
        raise ValueError("fredholm_expansion_check refuses size > 12")
    lhs = float(np.linalg.det(np.eye(size) + m))
    rhs = 0.0
    for r in range(size + 1):
        for subset in itertools.combinations(range(size), r):
            if r == 0:
                rhs += 1.0
            else:
                sel = np.ix_(subset, subset)
                rhs += float(np.linalg.det(m[sel]))
    return lhs, rhs


def projected_kernel(l_matrix: np.ndarray,
                     retained: Sequence[int]) -> np.ndarray:
    """K* = 1_(N) - (1_(N) + L)^{-1} restricted to the retained indices.

    1_(N) is the identity with ones only on the retained (non-phantom)
    diagonal.  Probabilities are Pr[all of X occupied] = det K*_X.
    """
    l = np.asarray(l_matrix, dtype=float)
    size = l.shape[0]
    if size > _MAX_DIMENSION:
        raise ValueError(f"oracle instances capped at {_MAX_DIMENSION}")
    retained = np.asarray(retained, dtype=int)
    a = l.copy()
    a[retained, retained] += 1.0
    cond = np.linalg.cond(a)
    if not np.isfinite(cond) or cond > _COND_LIMIT:
        raise ConditioningError(
            f"1_(N) + L too ill-conditioned (cond ~ {cond:.2e})",
            condition=float(cond))
    inv = np.linalg.inv(a)
    sel = np.ix_(retained, retained)
    return np.eye(len(retained)) - inv[sel]


def block_inverse(a, b, c, d):
    """Blocks of [[A, B], [C, D]]^{-1} via M = B D^{-1} C - A.

    Returns (top-left, top-right, bottom-left, bottom-right); the
    identity behind the projected-kernel algebra.
    """
    a = np.atleast_2d(np.asarray(a, float))
    b = np.atleast_2d(np.asarray(b, float))
    c = np.atleast_2d(np.asarray(c, float))
    d = np.atleast_2d(np.asarray(d, float))
    d_inv = np.linalg.inv(d)
    m = b @ d_inv @ c - a
    m_inv = np.linalg.inv(m)
    tl = -m_inv
    tr = m_inv @ b @ d_inv
    bl = d_inv @ c @ m_inv
    br = d_inv - d_inv @ c @ m_inv @ b @ d_inv
    return tl, tr, bl, br


def em_block_kernel(phi: np.ndarray, ws: Sequence[np.ndarray],
                    psi: np.ndarray) -> list[list[np.ndarray]]:
    """Correlation kernel blocks of the equal-particle-count chain.

    K*_{n,m} = W_{[n,N)} Psi M^{-1} Phi W_{[0,m)} - W_{[n,m)} with
    M = Phi W_0 ... W_{N-1} Psi; an empty product is the identity when it
    multiplies Psi or Phi and zero when subtracted.
    """
    phi = np.asarray(phi, float)
    psi = np.asarray(psi, float)
    ws = [np.asarray(w, float) for w in ws]
    n_steps = len(ws)

    def w_interval(n: int, m: int) -> np.ndarray | None:
        if n >= m:
            return None
        out = ws[n]
        for j in range(n + 1, m):
            out = out @ ws[j]
        return out

    m_mat = phi.copy()
    for w in ws:
        m_mat = m_mat @ w
    m_mat = m_mat @ psi
    cond = np.linalg.cond(m_mat)
    if not np.isfinite(cond) or cond > _COND_LIMIT:
        raise ConditioningError(
            f"M = Phi W ... Psi not invertible (cond ~ {cond:.2e})",
            condition=float(cond))
    m_inv = np.linalg.inv(m_mat)

    left = []
    for n in range(n_steps + 1):
        w_nn = w_interval(n, n_steps)
        left.append(psi if w_nn is None else w_nn @ psi)
    right = []
    for m in range(n_steps + 1):
        w_0m = w_interval(0, m)
        right.append(phi if w_0m is None else phi @ w_0m)

    blocks: list[list[np.ndarray]] = []
    for n in range(n_steps + 1):
        row = []
        for m in range(n_steps + 1):
            block = left[n] @ m_inv @ right[m]
            w_nm = w_interval(n, m)
            if w_nm is not None:
                block = block - w_nm
            row.append(block)
        blocks.append(row)
    return blocks


def assemble_equal_count_l(phi: np.ndarray, ws: Sequence[np.ndarray],
                           psi: np.ndarray) -> tuple[np.ndarray, list[int]]:
    """The equal-count block L-matrix (Phi top row, -W superdiagonal, Psi
    bottom-left); returns (L, retained indices of the grid copies)."""
    phi = np.asarray(phi, float)
    psi = np.asarray(psi, float)
    ws = [np.asarray(w, float) for w in ws]
    p = phi.shape[0]
    sizes = [phi.shape[1]] + [w.shape[1] for w in ws]
    total = p + sum(sizes)
    l = np.zeros((total, total))
    offs = [p]
    for s in sizes[:-1]:
        offs.append(offs[-1] + s)
    l[:p, offs[0]:offs[0] + sizes[0]] = phi
    for m, w in enumerate(ws):
        l[offs[m]:offs[m] + sizes[m],
          offs[m + 1]:offs[m + 1] + sizes[m + 1]] = -w
    l[offs[-1]:offs[-1] + sizes[-1], :p] = psi
    return l, list(range(p, total))


# ---------------------------------------------------------------------------
# the minor-process oracle
# ---------------------------------------------------------------------------

def _assemble(path: PathDescriptor, grid: Grid, u: float,
              family: str) -> BlockLEnsemble:
    if family not in ("ou", "warren"):
        raise ValueError(f"unknown family {family!r}; use 'ou' or 'warren'")
    if family == "warren" and path.times[0] <= 0:
        raise ValueError("warren paths need strictly positive times")
    pts = grid.points
    g = len(pts)
    n0 = path.levels[0]
    n_copies = path.node_count
    total = n0 + n_copies * g
    if total > _MAX_DIMENSION:
        raise ValueError(
            f"instance dimension {total} exceeds cap {_MAX_DIMENSION}")
    delta = grid.cell_weight
    l = np.zeros((total, total))

    # initial block: row l holds the degree (n0 - l) member times the
    # weight, sampled on the grid; cell weight folded in
    t0 = path.times[0]
    if family == "ou":
        xi = pts
        weight = np.exp(-pts ** 2)
    else:
        xi = pts / math.sqrt(t0)
        weight = np.exp(-pts ** 2 / t0)
    herm = np.stack([normalized_hermite_sequence(n0 - 1, v) for v in xi])
    for row in range(n0):
        degree = n0 - (row + 1)
        l[row, n0:n0 + g] = herm[:, degree] * weight * delta

    # transition blocks between consecutive copies
    x_col = pts[:, None]
    y_row = pts[None, :]
    for m in range(n_copies - 1):
        dst = slice(n0 + m * g, n0 + (m + 1) * g)
        nxt = slice(n0 + (m + 1) * g, n0 + (m + 2) * g)
        if path.levels[m] - path.levels[m + 1] == 1:
            w = (x_col >= y_row).astype(float)
        else:
            dt = path.times[m + 1] - path.times[m]
            if dt <= 0:
                raise ValueError(
                    f"zero-length time step at node {m}; merge the nodes")
            if family == "ou":
                q = math.exp(-dt)
                var = 1.0 - q * q
                w = np.exp(-(y_row - q * x_col) ** 2 / var) \
                    / math.sqrt(math.pi * var)
            else:
                w = np.exp(-(y_row - x_col) ** 2 / dt) \
                    / math.sqrt(math.pi * dt)
        l[dst, nxt] = -w * delta

    # virtual-particle columns: the k-th down step supplies phantom
    # column (n0 + 1 - k) with H(x - u) sampled on the grid
    taus = path.down_step_indices()
    for k, tau in enumerate(taus, start=1):
        col = n0 - k  # zero-based phantom column n0 + 1 - k
        rows = slice(n0 + tau * g, n0 + (tau + 1) * g)
        l[rows, col] = (pts >= u).astype(float)

    return BlockLEnsemble(grid=grid, path=path, u=u, family=family,
                          l_matrix=l, phantom=n0)


@dataclass(frozen=True)
class DiscretizedKernel:
    """Projected kernel mapped back to (level, time, position) samples."""

    ensemble: BlockLEnsemble
    k_star: np.ndarray
    condition: float

    @property
    def grid(self) -> Grid:
        return self.ensemble.grid

    @property
    def path(self) -> PathDescriptor:
        return self.ensemble.path

    def _offset(self, slice_index: int) -> int:
        return slice_index * len(self.grid)

    def kernel_entry(self, slice_a: int, i: int, slice_b: int, j: int) -> float:
        """Continuum-normalised kernel sample K(point_a, point_b)."""
        a = self._offset(slice_a) + i
        b = self._offset(slice_b) + j
        return self.k_star[a, b] / self.grid.cell_weight

    def rho1(self, slice_index: int) -> np.ndarray:
        """One-point density on the grid at the given path node."""
        off = self._offset(slice_index)
        g = len(self.grid)
        return np.diag(self.k_star)[off:off + g] / self.grid.cell_weight

    def rho2(self, slice_a: int, slice_b: int) -> np.ndarray:
        """Two-point densities rho_2(x_i at node a, y_j at node b)."""
        g = len(self.grid)
        oa, ob = self._offset(slice_a), self._offset(slice_b)
        kaa = np.diag(self.k_star)[oa:oa + g]
        kbb = np.diag(self.k_star)[ob:ob + g]
        kab = self.k_star[oa:oa + g, ob:ob + g]
        kba = self.k_star[ob:ob + g, oa:oa + g]
        return (np.outer(kaa, kbb) - kab * kba.T) / self.grid.cell_weight ** 2

    def diagnostics(self) -> dict:
        path = self.path
        return {
            "family": self.ensemble.family,
            "u": self.ensemble.u,
            "grid_points": len(self.grid),
            "grid_lo": float(self.grid.points[0]),
            "grid_hi": float(self.grid.points[-1]),
            "cell_weight": self.grid.cell_weight,
            "levels": list(path.levels),
            "times": list(path.times),
            "query_slices": list(path.query_slices),
            "condition": self.condition,
        }


def discretized_minor_kernel(path: PathDescriptor | Sequence[tuple[int, float]],
                             grid: Grid, u: float = -8.0,
                             family: str = "ou") -> DiscretizedKernel:
    """Assemble the block L-ensemble and project out the phantom indices.

    ``u`` must sit below the grid by a margin; the remainder it induces is
    O(exp(-u^2/2)), far below the grid discretisation error at u = -8.
    """
    if not isinstance(path, PathDescriptor):
        path = PathDescriptor.from_nodes(path)
    if u > grid.points[0] - 2.0:
        raise ValueError("virtual particle u must sit >= 2 below the grid")
    ens = _assemble(path, grid, u, family)
    retained = list(range(ens.phantom, ens.l_matrix.shape[0]))
    a = ens.l_matrix.copy()
    idx = np.asarray(retained)
    a[idx, idx] += 1.0
    cond = float(np.linalg.cond(a))
    if not np.isfinite(cond) or cond > _COND_LIMIT:
        raise ConditioningError(
            f"oracle system ill-conditioned (cond ~ {cond:.2e})",
            condition=cond)
    inv = np.linalg.inv(a)
    sel = np.ix_(idx, idx)
    k_star = np.eye(len(retained)) - inv[sel]
    return DiscretizedKernel(ensemble=ens, k_star=k_star, condition=cond)
