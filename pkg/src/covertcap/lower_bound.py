"""Achievable covert rates for a fixed decoding metric.

The achievable rate is t * sup_{s >= 0} f(s), where

    f(s) = s * E_P1[rhat(Y)] - log E_P0[exp(s * rhat(Y))],
    rhat(y) = log q(1, y) / q(0, y),

t is the covertness weight, P0/P1 the receiver's output laws when idle and
when sending.  f is concave with f(0) = 0; its slope at infinity is
E_P1[rhat] - max_{P0 > 0} rhat, which is never positive, so the supremum is
either attained at a finite s (located by bracketing plus golden section) or
approached in the limit s -> inf (erasure-like metrics).  Everything here is
log-domain; no exp of a positive quantity is ever taken unshifted.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .core import (
    CovertInstance,
    DecodingMetric,
    DimensionError,
    DomainError,
    ProbVector,
    WeightParam,
    kl_divergence,
    require_valid,
    weight_parameter,
)

AT_INFINITY = math.inf       # s_star marker when the sup is a limit, not a max
SLOPE_TOL = 1e-12            # |slope at infinity| below this is treated as zero
ARGMAX_TOL = 1e-9            # rhat values this close to the max share the limit mass
BRACKET_CAP = float(2**40)   # doubling beyond this means the slope test lied
GOLDEN_WIDTH = 1e-10         # final bracket width of the golden-section search

_INVPHI = (math.sqrt(5.0) - 1.0) / 2.0


@dataclass(frozen=True)
class TiltFunction:
    """Precomputed ingredients of f(s) for one (metric, P0, P1) triple.

    ``log_ratio`` is rhat per output symbol; ``mean_under_p1`` is E_P1[rhat];
    ``rmax`` is the largest rhat on the support of P0 and ``limit_mass`` the
    P0-mass of symbols within ``ARGMAX_TOL`` of it.
    """

    log_ratio: np.ndarray
    p0: ProbVector
    p1: ProbVector
    mean_under_p1: float
    rmax: float
    limit_mass: float


def tilt_function(q: DecodingMetric, p0: ProbVector, p1: ProbVector) -> TiltFunction:
    """Build the TiltFunction for metric q and receiver laws (p0, p1)."""
    if q.num_outputs != len(p0) or len(p0) != len(p1):
        raise DimensionError("metric and output laws must share one alphabet")
    rhat = np.log(q.q[1]) - np.log(q.q[0])
    supp0 = p0.probs > 0.0
    if not np.any(supp0):
        raise DomainError("P0 has empty support")
    rmax = float(np.max(rhat[supp0]))
    near = supp0 & (rhat >= rmax - ARGMAX_TOL)
    return TiltFunction(
        log_ratio=rhat,
        p0=p0,
        p1=p1,
        mean_under_p1=float(np.dot(p1.probs, rhat)),
        rmax=rmax,
        limit_mass=float(np.sum(p0.probs[near])),
    )


def f_s(tf: TiltFunction, s: float) -> float:
    """Evaluate f(s).  Stable for any s >= 0, including very large values."""
    if s < 0.0:
        raise DomainError(f"f is only defined for s >= 0, got {s!r}")
    if s == 0.0:
        # exp(0) = 1 and p0 is a pmf, so f(0) = -log 1; skip the float noise
        return 0.0
    supp = tf.p0.probs > 0.0
    # shift by s*rmax so every exponent is <= 0
    z = np.exp(s * (tf.log_ratio[supp] - tf.rmax))
    return s * (tf.mean_under_p1 - tf.rmax) - float(np.log(np.dot(tf.p0.probs[supp], z)))


def slope_at_infinity(tf: TiltFunction) -> tuple[float, float]:
    """Asymptotic slope of f and, when that slope is zero, lim_{s->inf} f(s).

    A vanishing slope (within SLOPE_TOL) means f climbs toward
    -log of the P0-mass of the rhat-argmax set; a strictly negative slope
    means f eventually decreases, the limit is -inf, and the sup is interior.
    """
    slope = tf.mean_under_p1 - tf.rmax
    if abs(slope) <= SLOPE_TOL:
        return slope, -math.log(tf.limit_mass)
    return slope, -math.inf


@dataclass(frozen=True)
class LowerBoundResult:
    """Achievable rate t * sup f, with where and whether the sup is attained."""

    value: float
    s_star: float
    f_at_s_star: float
    attained: bool
    t_delta: float


def _golden_max(f, a: float, b: float, width: float) -> tuple[float, float]:
    # golden-section maximization of a concave function on [a, b]
    c = b - _INVPHI * (b - a)
    d = a + _INVPHI * (b - a)
    fc, fd = f(c), f(d)
    while (b - a) > width:
        if fc >= fd:
            b, d, fd = d, c, fc
            c = b - _INVPHI * (b - a)
            fc = f(c)
        else:
            a, c, fc = c, d, fd
            d = a + _INVPHI * (b - a)
            fd = f(d)
    s = 0.5 * (a + b)
    return s, f(s)


def lower_bound(inst: CovertInstance, tol: float = GOLDEN_WIDTH) -> LowerBoundResult:
    """Best achievable covert rate for the instance's metric, t * sup_{s>=0} f(s).

    When the slope at infinity vanishes the sup is the limiting value and is
    reported with ``attained=False`` and ``s_star=AT_INFINITY``; otherwise the
    maximizer is bracketed by doubling from s=1 and pinned down by golden
    section to an interval of width ``tol``.
    """
    require_valid(inst)
    wp = weight_parameter(inst.delta, inst.q0, inst.q1)
    tf = tilt_function(inst.q, inst.p0, inst.p1)
    slope, limit = slope_at_infinity(tf)

    f = lambda s: f_s(tf, s)

    if abs(slope) <= SLOPE_TOL:
        # f is (numerically) nondecreasing; the limit wins unless roundoff
        # produced a strictly better interior point on a coarse grid.
        grid = [0.0] + [2.0**k for k in range(-4, 21)]
        vals = [f(s) for s in grid]
        best = int(np.argmax(vals))
        if vals[best] > limit + 1e-12:
            lo = grid[best - 1] if best > 0 else 0.0
            hi = grid[best + 1] if best + 1 < len(grid) else grid[best] * 2.0
            s_star, f_star = _golden_max(f, lo, hi, tol)
            return LowerBoundResult(wp.t * f_star, s_star, f_star, True, wp.t)
        return LowerBoundResult(wp.t * limit, AT_INFINITY, limit, False, wp.t)

    # slope < 0: finite maximizer. Double until f turns over.
    s = 1.0
    while f_s(tf, 2.0 * s) > f_s(tf, s):
        s *= 2.0
        if s > BRACKET_CAP:
            raise RuntimeError(
                "bracketing exceeded 2**40 yet the slope at infinity is negative; "
                "this contradicts concavity and indicates a numerical fault"
            )
    s_star, f_star = _golden_max(f, 0.0, 2.0 * s, tol)
    if f_star <= 0.0:
        # concavity and f(0)=0 make 0 the exact sup here
        s_star, f_star = 0.0, 0.0
    return LowerBoundResult(wp.t * f_star, s_star, f_star, True, wp.t)


def key_rate_threshold(lb: LowerBoundResult, t: WeightParam, q0: ProbVector, q1: ProbVector) -> float:
    """Secret key needed per sqrt(n): max(0, t * D(q1 || q0) - achievable rate).

    Zero means the adversary's observation is no more informative than the
    receiver's decoded payload, so no pre-shared key is required.
    """
    return max(0.0, t.t * kl_divergence(q1, q0) - lb.value)


def _log_odds_ratio(qq: np.ndarray) -> float:
    # log(q00*q11 / (q01*q10)); the sign decides which input a metric favours
    return math.log(qq[0, 0]) + math.log(qq[1, 1]) - math.log(qq[0, 1]) - math.log(qq[1, 0])


def binary_f_derivative(inst: CovertInstance, s: float) -> float:
    """Exact df/ds for a binary output alphabet.

    Equals log(rho) * (g(s) - P1(0)) with rho = q00*q11 / (q01*q10) and g(s)
    the tilted idle probability of symbol 0; agrees with the generic f_s by
    direct differentiation.
    """
    if inst.wy.num_outputs != 2:
        raise DimensionError("binary_f_derivative needs exactly two output symbols")
    if s < 0.0:
        raise DomainError(f"tilt argument must be >= 0, got {s!r}")
    pp0 = inst.p0.probs
    pp1 = inst.p1.probs
    log_rho = _log_odds_ratio(inst.q.q)
    # g(s) = tilted P0 mass on symbol 0, written as a logistic so large
    # s*log_rho cannot overflow
    if pp0[0] <= 0.0:
        g = 0.0
    elif pp0[1] <= 0.0:
        g = 1.0
    else:
        a = math.log(pp0[1] / pp0[0]) + s * log_rho
        g = 1.0 / (1.0 + math.exp(a)) if a <= 0.0 else math.exp(-a) / (1.0 + math.exp(-a))
    return log_rho * (g - pp1[0])


def binary_s0(inst: CovertInstance) -> float:
    """Stationary point of f for a binary alphabet (the maximizing s).

    Requires q00*q11 > q01*q10 and the orientation P0(0)+P1(1) >= P0(1)+P1(0)
    (relabel the two outputs first if needed); both are checked, not fixed up,
    so the returned root is always >= 0.  Returns +inf when P0(1)*P1(0) = 0
    (the maximizer escapes to infinity).
    """
    if inst.wy.num_outputs != 2:
        raise DimensionError("binary_s0 needs exactly two output symbols")
    pp0 = inst.p0.probs
    pp1 = inst.p1.probs
    if pp0[0] + pp1[1] < pp0[1] + pp1[0]:
        raise DomainError("binary_s0 needs the orientation P0(0)+P1(1) >= P0(1)+P1(0)")
    log_rho = _log_odds_ratio(inst.q.q)
    if log_rho <= 0.0:
        raise DomainError("binary_s0 needs q00*q11 > q01*q10")
    if pp0[1] * pp1[0] <= 0.0:
        return math.inf
    num = math.log(pp0[0]) + math.log(pp1[1]) - math.log(pp0[1]) - math.log(pp1[0])
    return num / log_rho
