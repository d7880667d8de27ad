"""Converse: upper-bound the covert rate by a minimum KL over maximal couplings.

A coupling assigns each true output y a conditional law v[x, y] over surrogate
outputs yhat, but mass may flow from y to yhat only if input x attains the
maximum of q(x', yhat) / q(x', y) over x'.  Subject to that support rule the
Y-marginal stays pinned to the channel, and the bound is

    t * min over couplings of D(m1 || m0),    m_x = sum_y W(y|x) v[x, y].

The diagonal coupling (yhat = y) is always admissible, so the minimum never
exceeds D(P1 || P0).  The minimum is found by Frank-Wolfe over the product of
per-(x, y) simplices, run on a smoothed objective D(m1 || (1-eps) m0 + eps u)
for a decreasing eps schedule with warm starts; a composition-lattice search
provides an independent certification oracle.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from functools import lru_cache

import numpy as np

from .core import (
    TIE_TOL,
    Bdmc,
    CovertInstance,
    DecodingMetric,
    DimensionError,
    DomainError,
    ProbVector,
    ResourceLimitError,
    kl_divergence,
    require_valid,
    weight_parameter,
)

_TINY = 1e-300        # clamp inside logs; never influences a finite optimum
_NEG_CLAMP = -1e18    # stands in for log(0) in the grid oracle, excludes the point


@dataclass(frozen=True)
class MaximalSetTable:
    """For every (y, yhat), which inputs x attain max_x q(x, yhat) / q(x, y).

    ``allowed[x, y, yhat]`` is True when x is an argmax (ties within TIE_TOL in
    the log domain count for both).  The diagonal yhat = y is always allowed
    for both inputs since both ratios are 1.
    """

    allowed: np.ndarray

    def allowed_targets(self, x: int, y: int) -> np.ndarray:
        """Indices yhat that may receive mass from y under input x."""
        return np.flatnonzero(self.allowed[x, y])


def maximal_sets(q: DecodingMetric) -> MaximalSetTable:
    """Compute the argmax table S_q in the log domain with TIE_TOL ties."""
    lq = np.log(q.q)                      # (2, Y)
    d = lq[:, None, :] - lq[:, :, None]   # d[x, y, yhat] = log q(x,yhat) - log q(x,y)
    dmax = d.max(axis=0)
    allowed = d >= dmax[None, :, :] - TIE_TOL
    allowed.setflags(write=False)
    return MaximalSetTable(allowed=allowed)


@dataclass(frozen=True)
class JointConditional:
    """A maximal coupling: per-(x, y) conditional laws over allowed targets.

    ``v[x, y, :]`` must be a distribution, with exactly zero mass outside the
    table's allowed set.  The Y-marginal of the implied joint is W by
    construction, so it is never stored.
    """

    wy: Bdmc
    table: MaximalSetTable
    v: np.ndarray

    def __post_init__(self):
        v = np.asarray(self.v, dtype=float)
        ny = self.wy.num_outputs
        if v.shape != (2, ny, ny):
            raise DimensionError(f"coupling must have shape (2, {ny}, {ny}), got {v.shape}")
        if np.any(v < 0.0) or np.any(np.abs(v.sum(axis=2) - 1.0) > 1e-12):
            raise DomainError("coupling rows must be probability distributions")
        if np.any(v[~self.table.allowed] != 0.0):
            raise DomainError("coupling places mass outside the allowed maximal sets")
        v = v.copy()
        v.setflags(write=False)
        object.__setattr__(self, "v", v)

    def marginals(self) -> tuple[np.ndarray, np.ndarray]:
        """Surrogate-output laws (m0, m1), one per channel input."""
        m = np.einsum("xy,xyz->xz", self.wy.w, self.v)
        return m[0], m[1]


def verify_maximal(jc: JointConditional, table: MaximalSetTable, wy: Bdmc) -> bool:
    """Check a coupling against an externally supplied argmax table and channel.

    True iff the implied joint W(y|x) * v[x, y](yhat) is zero outside
    ``table``'s allowed set and its Y-marginal equals ``wy`` within 1e-10.
    The table argument matters: a coupling built against a permissive table
    can place mass a stricter metric forbids.
    """
    v = jc.v
    if v.shape != (2, wy.num_outputs, wy.num_outputs):
        return False
    joint = jc.wy.w[:, :, None] * v
    if np.any(joint[~table.allowed] != 0.0):
        return False
    y_marginal = jc.wy.w * v.sum(axis=2)
    return bool(np.all(np.abs(y_marginal - wy.w) <= 1e-10))


def diagonal_coupling(wy: Bdmc, table: MaximalSetTable) -> JointConditional:
    """The identity coupling yhat = y; always feasible."""
    ny = wy.num_outputs
    v = np.zeros((2, ny, ny))
    v[:, np.arange(ny), np.arange(ny)] = 1.0
    return JointConditional(wy=wy, table=table, v=v)


def objective_kl(jc: JointConditional) -> float:
    """D(m1 || m0) between the coupling's surrogate marginals; +inf if undominated."""
    m0, m1 = jc.marginals()
    mask = m1 > 0.0
    if np.any(m0[mask] <= 0.0):
        return float("inf")
    return float(np.sum(m1[mask] * (np.log(m1[mask]) - np.log(m0[mask]))))


def _lmo(grad: np.ndarray, allowed: np.ndarray) -> np.ndarray:
    # vertex minimizing <grad, v>: per (x, y) all mass on the allowed yhat
    # with the smallest gradient coordinate, smallest index on exact ties
    masked = np.where(allowed, grad, np.inf)
    idx = np.argmin(masked, axis=2)  # first occurrence = smallest index
    vertex = np.zeros_like(grad)
    x_ix, y_ix = np.indices(idx.shape)
    vertex[x_ix, y_ix, idx] = 1.0
    return vertex


def fw_linear_oracle(gradient: np.ndarray, table: MaximalSetTable, wy: Bdmc) -> JointConditional:
    """Vertex of the coupling polytope minimizing <gradient, v>."""
    if gradient.shape != table.allowed.shape:
        raise DimensionError(
            f"gradient shape {gradient.shape} does not match table shape {table.allowed.shape}"
        )
    return JointConditional(wy=wy, table=table, v=_lmo(np.asarray(gradient, dtype=float), table.allowed))


@dataclass(frozen=True)
class UpperBoundResult:
    """Converse bound t * kl_value with the coupling that achieves it.

    ``oracle_gap`` is filled in only when a grid-oracle cross-check was run;
    it is kl_value minus the oracle's lattice minimum.
    """

    value: float
    kl_value: float
    minimizer: JointConditional
    fw_gap: float
    t_delta: float
    oracle_gap: float | None = None


def _smoothed_objective(m1: np.ndarray, m0t: np.ndarray) -> float:
    mask = m1 > 0.0
    return float(np.sum(m1[mask] * (np.log(m1[mask]) - np.log(m0t[mask]))))


def _line_search(m1, d1, m0t, d0, eps: float, gmax: float = 1.0) -> float:
    """Exact minimization over gamma in [0, gmax] along a FW segment.

    The objective restricted to the segment is convex; 30 bisection steps on
    its derivative locate the minimum to ~1e-9 of the interval.
    """

    def dphi(g: float) -> float:
        a1 = m1 + g * d1
        a0 = m0t + g * (1.0 - eps) * d0
        term1 = d1 * (np.log(np.maximum(a1, _TINY)) - np.log(a0) + 1.0)
        term2 = (1.0 - eps) * (a1 / a0) * d0
        return float(term1.sum() - term2.sum())

    if dphi(0.0) >= 0.0:
        return 0.0
    if dphi(gmax) <= 0.0:
        return gmax
    lo, hi = 0.0, gmax
    for _ in range(30):
        mid = 0.5 * (lo + hi)
        if dphi(mid) < 0.0:
            lo = mid
        else:
            hi = mid
    return 0.5 * (lo + hi)


def upper_bound(
    inst: CovertInstance,
    tol: float = 1e-8,
    eps_schedule: tuple[float, ...] = (1e-3, 1e-5, 1e-7),
    max_iters: int = 20000,
) -> UpperBoundResult:
    """Minimize D(m1 || m0) over maximal couplings; returns t * minimum.

    Pairwise Frank-Wolfe with exact line search on the smoothed objective
    D(m1 || (1-eps) m0 + eps uniform), run once per eps in ``eps_schedule``
    (warm-started), each stage stopping at duality gap < ``tol`` or
    ``max_iters``.  Each step moves mass from the worst vertex of the current
    convex decomposition onto the linear-oracle vertex, which avoids the
    zig-zag stall of plain conditional gradients when the optimum sits on a
    face.  The reported kl_value is the raw (unsmoothed) objective at the
    final iterate, or at the diagonal coupling if that is better; the diagonal
    guarantee caps kl_value at D(P1 || P0).
    """
    require_valid(inst)
    wp = weight_parameter(inst.delta, inst.q0, inst.q1)
    table = maximal_sets(inst.q)
    w = inst.wy.w
    ny = inst.wy.num_outputs
    allowed = table.allowed
    uniform = 1.0 / ny
    x_ix, y_ix = np.indices((2, ny))

    def vertex_from(idx: np.ndarray) -> np.ndarray:
        vert = np.zeros((2, ny, ny))
        vert[x_ix, y_ix, idx] = 1.0
        return vert

    # current point and its convex decomposition over one-hot vertices,
    # each keyed by the flat tuple of chosen targets
    diag_idx = np.tile(np.arange(ny), (2, 1))
    v = vertex_from(diag_idx)
    weights: dict[tuple, float] = {tuple(diag_idx.ravel()): 1.0}

    gap = math.inf
    for eps in eps_schedule:
        for _ in range(max_iters):
            m = np.einsum("xy,xyz->xz", w, v)
            m0, m1 = m[0], m[1]
            m0t = (1.0 - eps) * m0 + eps * uniform
            logterm = np.log(np.maximum(m1, _TINY)) - np.log(m0t)
            g1 = w[1][:, None] * (logterm + 1.0)[None, :]
            g0 = -(1.0 - eps) * w[0][:, None] * (m1 / m0t)[None, :]
            grad = np.stack([g0, g1])
            masked = np.where(allowed, grad, np.inf)
            idx_to = np.argmin(masked, axis=2)  # first occurrence = smallest index
            gap = float(np.sum(grad * v) - grad[x_ix, y_ix, idx_to].sum())
            if gap < tol:
                break
            # away vertex: the active one the gradient most wants to leave
            away_key = max(weights, key=lambda key: grad[x_ix, y_ix, np.reshape(key, (2, ny))].sum())
            idx_from = np.array(away_key).reshape(2, ny)
            gmax = weights[away_key]
            direction = vertex_from(idx_to) - vertex_from(idx_from)
            dm = np.einsum("xy,xyz->xz", w, direction)
            gamma = _line_search(m1, dm[1], m0t, dm[0], eps, gmax)
            if gamma <= 0.0:
                break
            v = v + gamma * direction
            to_key = tuple(idx_to.ravel())
            weights[to_key] = weights.get(to_key, 0.0) + gamma
            left = gmax - gamma
            if left <= 1e-15:
                del weights[away_key]
                np.maximum(v, 0.0, out=v)  # scrub the dropped vertex's float dust
            else:
                weights[away_key] = left

    # exact renormalization before wrapping; off-allowed entries are exact zeros
    v = v / v.sum(axis=2, keepdims=True)
    iterate = JointConditional(wy=inst.wy, table=table, v=v)
    kl_iter = objective_kl(iterate)

    diag = diagonal_coupling(inst.wy, table)
    kl_diag = objective_kl(diag)  # = D(P1 || P0), always finite under A3
    if kl_iter <= kl_diag:
        best, kl_best = iterate, kl_iter
    else:
        best, kl_best = diag, kl_diag

    return UpperBoundResult(
        value=wp.t * kl_best,
        kl_value=kl_best,
        minimizer=best,
        fw_gap=gap,
        t_delta=wp.t,
    )


@lru_cache(maxsize=None)
def _compositions(total: int, parts: int) -> tuple[tuple[int, ...], ...]:
    if parts == 1:
        return ((total,),)
    out = []
    for first in range(total + 1):
        for rest in _compositions(total - first, parts - 1):
            out.append((first,) + rest)
    return tuple(out)


def _lattice_marginals(
    w_row: np.ndarray, allowed_x: np.ndarray, grid_g: int, max_points: int
) -> np.ndarray:
    """All marginals m_x reachable when every v[x, y] lies on the 1/grid_g lattice."""
    ny = w_row.size
    m = np.zeros((1, ny))
    count = 1
    for y in range(ny):
        if w_row[y] == 0.0:
            continue  # this cell cannot move any mass
        targets = np.flatnonzero(allowed_x[y])
        comps = np.array(_compositions(grid_g, targets.size), dtype=float) / grid_g
        count *= comps.shape[0]
        if count > max_points:
            raise ResourceLimitError(
                f"grid oracle lattice exceeds {max_points} points per input; "
                f"lower grid_g or raise max_points"
            )
        cell = np.zeros((comps.shape[0], ny))
        cell[:, targets] = w_row[y] * comps
        m = (m[:, None, :] + cell[None, :, :]).reshape(-1, ny)
    return m


def upper_bound_grid_oracle(
    inst: CovertInstance, grid_g: int, max_points: int = 5_000_000
) -> float:
    """Certification oracle: exact minimum of D(m1 || m0) over the composition lattice.

    Every conditional row is restricted to coordinates that are multiples of
    1/grid_g; the true minimum is at most the returned value.  Enumeration is
    factored through the two marginal families, so cost is (#m1 points) x
    (#m0 points) inner products rather than a walk over raw couplings.
    Raises ResourceLimitError when a marginal family would exceed
    ``max_points``.
    """
    if grid_g < 1:
        raise DomainError(f"grid_g must be a positive integer, got {grid_g!r}")
    require_valid(inst)
    table = maximal_sets(inst.q)
    m0s = _lattice_marginals(inst.wy.w[0], table.allowed[0], grid_g, max_points)
    m1s = _lattice_marginals(inst.wy.w[1], table.allowed[1], grid_g, max_points)

    log_m0 = np.where(m0s > 0.0, np.log(np.maximum(m0s, _TINY)), _NEG_CLAMP)
    self_term = np.sum(np.where(m1s > 0.0, m1s * np.log(np.maximum(m1s, _TINY)), 0.0), axis=1)

    best = math.inf
    chunk = max(1, int(5_000_000 // max(1, m0s.shape[0])))
    for start in range(0, m1s.shape[0], chunk):
        block = m1s[start : start + chunk]
        cross = block @ log_m0.T  # (chunk, N0); exact zeros kill clamped entries
        d = self_term[start : start + chunk, None] - cross
        best = min(best, float(d.min()))
    return max(best, 0.0)
