"""Shared instance builders for the test suite.

All randomness is seeded and all generated distributions carry probability
floors, so every test is reproducible and no divergence sits on the edge of
an absolute-continuity failure.
"""

from __future__ import annotations

import numpy as np

from covertcap import Bdmc, CovertInstance, DecodingMetric

# the worked three-symbol example used throughout: receiver rows swap mass
# between symbols 0 and 2, the warden sees a noisier copy, delta = 0.1
WY1 = np.array([[0.6, 0.2, 0.2], [0.2, 0.2, 0.6]])
WZ1 = np.array([[0.8, 0.1, 0.1], [0.2, 0.3, 0.5]])


def example1(u: float = 3.0) -> CovertInstance:
    """The reference instance; ``u`` is the swept metric entry q(0, 0)."""
    q = np.array([[u, 1.0, 1.0], [1.0, 1.0, 3.0]])
    return CovertInstance(wy=Bdmc(WY1), wz=Bdmc(WZ1), q=DecodingMetric(q), delta=0.1)


def floored_simplex(rng: np.random.Generator, ny: int, floor: float = 0.05) -> np.ndarray:
    """A random pmf with every entry at least ``floor`` (needs ny*floor < 1)."""
    p = rng.dirichlet(np.ones(ny))
    return (1.0 - ny * floor) * p + floor


def random_warden(rng: np.random.Generator, nz: int = 3, floor: float = 0.05) -> Bdmc:
    """Two floored rows kept apart so chi2(Q1 || Q0) is never degenerate."""
    while True:
        w = np.stack([floored_simplex(rng, nz, floor), floored_simplex(rng, nz, floor)])
        if np.max(np.abs(w[0] - w[1])) > 0.01:
            return Bdmc(w)


def random_metric(rng: np.random.Generator, ny: int) -> DecodingMetric:
    """Log-uniform entries in [0.2, 5]."""
    return DecodingMetric(np.exp(rng.uniform(np.log(0.2), np.log(5.0), size=(2, ny))))


def random_instance(
    rng: np.random.Generator, ny: int = 3, nz: int = 3, floor: float = 0.05
) -> CovertInstance:
    wy = Bdmc(np.stack([floored_simplex(rng, ny, floor), floored_simplex(rng, ny, floor)]))
    return CovertInstance(
        wy=wy,
        wz=random_warden(rng, nz, floor),
        q=random_metric(rng, ny),
        delta=float(rng.uniform(0.05, 0.3)),
    )


def random_binary_instance(rng: np.random.Generator) -> CovertInstance:
    return random_instance(rng, ny=2, nz=2, floor=0.1)


def matched_instance(rng: np.random.Generator, ny: int = 3) -> CovertInstance:
    """Metric rows proportional to the channel rows (independent row scales)."""
    wy = Bdmc(np.stack([floored_simplex(rng, ny), floored_simplex(rng, ny)]))
    scales = rng.uniform(0.5, 2.0, size=2)
    return CovertInstance(
        wy=wy,
        wz=random_warden(rng),
        q=DecodingMetric(scales[:, None] * wy.w),
        delta=float(rng.uniform(0.05, 0.3)),
    )


def erasure_channel(rng: np.random.Generator, ny: int, n_dead: int) -> Bdmc:
    """A receiver channel whose sending row is zero on ``n_dead`` symbols."""
    p0 = floored_simplex(rng, ny)
    p1 = np.zeros(ny)
    live = rng.permutation(ny)[n_dead:]
    p1[live] = floored_simplex(rng, live.size, floor=0.1)
    return Bdmc(np.stack([p0, p1]))
