"""Position-modulated covert codes: construction, decoding, and diagnostics.

A length-n codeword is split into l chunks of w symbols (w = n // l, tail of
r = n - w*l symbols always idle); each chunk carries exactly one active symbol
whose position is the payload.  With l ~ t*sqrt(n) active symbols the code
meets the adversary's divergence budget while carrying Theta(sqrt(n)) nats.

Randomness is counter-based (Philox): every codeword, decode trial, and
Monte-Carlo sample sits on a substream indexed by (master seed, purpose tag,
pair index, trial index), so regenerating any piece is bit-identical no matter
the iteration order or thread schedule.
"""

from __future__ import annotations

import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass

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
    chi2_divergence,
)

TIE = -1  # decoder verdict when the top metric score is shared

# purpose tags keep Philox substreams for different jobs disjoint
_TAG_CODEBOOK = 1
_TAG_ERROR = 2
_TAG_COVERT = 3
_TAG_SSTAT = 4
_TAG_OUTPUT_KL = 5

_MASK64 = (1 << 64) - 1


def _stream(seed: int, tag: int, c1: int = 0, c2: int = 0) -> np.random.Generator:
    """Generator on the Philox substream keyed by (seed, tag) at counter (0, c1, c2, 0)."""
    key = np.array([seed & _MASK64, tag], dtype=np.uint64)
    counter = np.array([0, c1 & _MASK64, c2 & _MASK64, 0], dtype=np.uint64)
    return np.random.Generator(np.random.Philox(key=key, counter=counter))


def _sample_symbols(cum: np.ndarray, u: np.ndarray) -> np.ndarray:
    # inverse-CDF sampling; cum[-1] is pinned to 1 so u in [0,1) never overflows
    return np.searchsorted(cum, u, side="right")


def _cumulative(p: np.ndarray) -> np.ndarray:
    cum = np.cumsum(p)
    cum[-1] = 1.0
    return cum


@dataclass(frozen=True)
class PpmParams:
    """Chunk schedule (n, l, w, r): l chunks of width w, idle tail of length r."""

    n: int
    l: int
    w: int
    r: int

    def __post_init__(self):
        n, l, w, r = self.n, self.l, self.w, self.r
        if min(n, l, w) < 1 or r < 0:
            raise DomainError(f"need n, l, w >= 1 and r >= 0, got {(n, l, w, r)}")
        if w != n // l or r != n - w * l:
            raise DimensionError(f"inconsistent schedule: n={n}, l={l} imply w={n // l}, r={n - (n // l) * l}")


def _slack(n: int, delta: float) -> float:
    return 2.0 * delta - n ** (-1.0 / 3.0)


def _min_n_positive_slack(delta: float) -> int:
    # smallest n with 2*delta > n^(-1/3); float-safe integer scan near (2 delta)^-3
    n = max(1, int((2.0 * delta) ** (-3.0)) - 2)
    while _slack(n, delta) <= 0.0:
        n += 1
    return n


def _min_n_for_one_chunk(delta: float, c2: float) -> int:
    # smallest admissible n with floor(sqrt(slack*n/chi2)) >= 1, by doubling + bisection
    lo = _min_n_positive_slack(delta)
    ok = lambda n: _slack(n, delta) > 0.0 and _slack(n, delta) * n / c2 >= 1.0
    hi = lo
    while not ok(hi):
        hi *= 2
    while lo < hi:
        mid = (lo + hi) // 2
        if ok(mid):
            hi = mid
        else:
            lo = mid + 1
    return lo


def ppm_params(n: int, delta: float, q0: ProbVector, q1: ProbVector) -> PpmParams:
    """Chunk schedule meeting the divergence budget delta against warden (q0, q1).

    l = floor(sqrt((2 delta - n^(-1/3)) n / chi2(q1 || q0))), w = n // l,
    r = n - w l.  Raises DomainError, naming the smallest workable n, when the
    budget leaves no slack at this blocklength or when it admits no chunk.
    """
    if n < 1 or n != int(n):
        raise DomainError(f"n must be a positive integer, got {n!r}")
    if not (delta > 0.0 and math.isfinite(delta)):
        raise DomainError(f"delta must be a positive real, got {delta!r}")
    c2 = chi2_divergence(q1, q0)
    if c2 == 0.0 or not math.isfinite(c2):
        raise DomainError("warden marginals must differ and q1 must be dominated by q0")
    slack = _slack(n, delta)
    if slack <= 0.0:
        raise DomainError(
            f"n={n} is too small for delta={delta}: need 2*delta > n^(-1/3), "
            f"i.e. n >= {_min_n_positive_slack(delta)}"
        )
    l = int(math.floor(math.sqrt(slack * n / c2)))
    if l < 1:
        raise DomainError(
            f"n={n} admits no chunk at delta={delta} (chi2={c2:.6g}); "
            f"smallest workable n is {_min_n_for_one_chunk(delta, c2)}"
        )
    w = n // l
    if w < 1:
        raise DomainError(
            f"schedule degenerate at n={n}, delta={delta}: more chunks than symbols (l={l})"
        )
    return PpmParams(n=n, l=l, w=w, r=n - w * l)


@dataclass(frozen=True)
class PpmCodebook:
    """Codewords for every (key, message) pair, with their original message ids.

    ``codewords[k, j]`` is the length-n binary word for the j-th retained
    message of sub-code k, whose public identity is ``message_ids[k, j]``.
    Expurgation produces books whose retained sets differ per key.  Words are
    not forced to the chunk structure here so that degenerate books (hand-built
    or weight-0) remain expressible in tests; ``generate_codebook`` guarantees
    the structure for the books it makes.
    """

    params: PpmParams
    num_messages: int
    num_keys: int
    seed: int
    codewords: np.ndarray
    message_ids: np.ndarray

    def __post_init__(self):
        cw = np.asarray(self.codewords, dtype=np.uint8)
        ids = np.asarray(self.message_ids, dtype=np.int64)
        shape = (self.num_keys, self.num_messages, self.params.n)
        if cw.shape != shape:
            raise DimensionError(f"codewords must have shape {shape}, got {cw.shape}")
        if ids.shape != shape[:2]:
            raise DimensionError(f"message_ids must have shape {shape[:2]}, got {ids.shape}")
        if np.any((cw != 0) & (cw != 1)):
            raise DomainError("codewords must be binary")
        cw.setflags(write=False)
        ids.setflags(write=False)
        object.__setattr__(self, "codewords", cw)
        object.__setattr__(self, "message_ids", ids)

    def flat_words(self) -> np.ndarray:
        """All retained codewords as one (num_keys * num_messages, n) matrix."""
        return self.codewords.reshape(-1, self.params.n)


def sample_codeword(params: PpmParams, rng: np.random.Generator) -> np.ndarray:
    """One chunk-structured word: a uniform active position per chunk, idle tail."""
    pos = rng.integers(0, params.w, size=params.l)
    word = np.zeros(params.n, dtype=np.uint8)
    word[np.arange(params.l) * params.w + pos] = 1
    return word


def generate_codebook(params: PpmParams, num_messages: int, num_keys: int, seed: int) -> PpmCodebook:
    """Independent uniform chunk positions for every (key, message) pair.

    Word (m, k) is a pure function of (seed, m, k): regeneration is
    bit-identical no matter the order pairs are visited in.
    """
    if num_messages < 1 or num_keys < 1:
        raise DomainError("need at least one message and one key")
    cw = np.empty((num_keys, num_messages, params.n), dtype=np.uint8)
    for k in range(num_keys):
        for m in range(num_messages):
            cw[k, m] = sample_codeword(params, _stream(seed, _TAG_CODEBOOK, c1=k, c2=m))
    ids = np.tile(np.arange(num_messages, dtype=np.int64), (num_keys, 1))
    return PpmCodebook(
        params=params,
        num_messages=num_messages,
        num_keys=num_keys,
        seed=seed,
        codewords=cw,
        message_ids=ids,
    )


def _log_ratio(metric: DecodingMetric) -> np.ndarray:
    return np.log(metric.q[1]) - np.log(metric.q[0])


def q_decode(codebook: PpmCodebook, k: int, y: np.ndarray, metric: DecodingMetric) -> int:
    """Decode one output block within sub-code k; returns a message id or TIE.

    The winning word maximizes sum_i log q(x_i, y_i); because all words share
    the term sum_i log q(0, y_i), only the active positions' log-ratios are
    scored.  A top score shared within TIE_TOL is a TIE (counted as an error
    by callers).
    """
    y = np.asarray(y)
    if y.shape != (codebook.params.n,):
        raise DimensionError(f"output block must have length {codebook.params.n}")
    rhat_y = _log_ratio(metric)[y]
    scores = codebook.codewords[k].astype(np.float64) @ rhat_y
    top = float(scores.max())
    winners = np.flatnonzero(scores >= top - TIE_TOL)
    if winners.size > 1:
        return TIE
    return int(codebook.message_ids[k, winners[0]])


@dataclass(frozen=True)
class ErrorReport:
    """Per-pair decoding-error estimates with binomial 95% half-widths.

    ``p_hat[k, j]`` estimates the error of the j-th retained message of
    sub-code k (public id ``message_ids[k, j]``); ``ci95`` holds the matching
    per-pair half-widths and ``ci95_halfwidth`` the one at the worst pair.
    """

    trials_per_pair: int
    errors: np.ndarray
    p_hat: np.ndarray
    ci95: np.ndarray
    message_ids: np.ndarray
    avg_per_key: np.ndarray
    max_per_key: np.ndarray
    max_overall: float
    ci95_halfwidth: float


def _pair_errors(inst, codebook, k, j, trials, seed, cum0, cum1, rhat, chunk=1024):
    """Error count for pair (k, j) over its Philox substream; chunking is stream-neutral."""
    x = codebook.codewords[k, j]
    words = codebook.codewords[k].astype(np.float64)
    pair = k * codebook.num_messages + j
    gen = _stream(seed, _TAG_ERROR, c1=pair)
    n = codebook.params.n
    failures = 0
    done = 0
    while done < trials:
        t = min(chunk, trials - done)
        u = gen.random((t, n))
        y = np.where(x[None, :] == 1, _sample_symbols(cum1, u), _sample_symbols(cum0, u))
        scores = rhat[y] @ words.T
        top = scores.max(axis=1)
        at_top = (scores >= top[:, None] - TIE_TOL).sum(axis=1)
        ok = (at_top == 1) & (scores[:, j] >= top - TIE_TOL)
        failures += int(t - ok.sum())
        done += t
    return failures


def estimate_error(
    inst: CovertInstance,
    codebook: PpmCodebook,
    trials_per_pair: int,
    seed: int,
    workers: int = 1,
) -> ErrorReport:
    """Monte-Carlo decoding-error probability for every (key, message) pair.

    Each pair's trials live on the Philox substream indexed by
    (seed, pair index, trial index), so the report is identical for any
    ``workers`` count and any execution order.  ci95 is the normal-approximation
    half-width 1.96 sqrt(p(1-p)/trials).
    """
    if trials_per_pair < 1:
        raise DomainError("trials_per_pair must be >= 1")
    cum0 = _cumulative(inst.wy.w[0])
    cum1 = _cumulative(inst.wy.w[1])
    rhat = _log_ratio(inst.q)
    K, M = codebook.num_keys, codebook.num_messages
    pairs = [(k, j) for k in range(K) for j in range(M)]

    def run(p):
        k, j = p
        return _pair_errors(inst, codebook, k, j, trials_per_pair, seed, cum0, cum1, rhat)

    if workers > 1:
        with ThreadPoolExecutor(max_workers=workers) as pool:
            counts = list(pool.map(run, pairs))
    else:
        counts = [run(p) for p in pairs]

    errors = np.array(counts, dtype=np.int64).reshape(K, M)
    p_hat = errors / float(trials_per_pair)
    ci95 = 1.96 * np.sqrt(p_hat * (1.0 - p_hat) / trials_per_pair)
    worst = np.unravel_index(int(np.argmax(p_hat)), p_hat.shape)
    return ErrorReport(
        trials_per_pair=trials_per_pair,
        errors=errors,
        p_hat=p_hat,
        ci95=ci95,
        message_ids=codebook.message_ids.copy(),
        avg_per_key=p_hat.mean(axis=1),
        max_per_key=p_hat.max(axis=1),
        max_overall=float(p_hat[worst]),
        ci95_halfwidth=float(ci95[worst]),
    )


def expurgate(report: ErrorReport, codebook: PpmCodebook, fraction: float = 1.0 / 16.0) -> PpmCodebook:
    """Drop the ceil(fraction * |M|) worst messages of every sub-code.

    Worst means highest estimated error; exact ties are broken toward the
    smaller message id, so the result is deterministic.  Sub-codes keep equal
    sizes.  Any prior error report refers to the old book and must be redone.
    """
    if not (0.0 <= fraction < 1.0):
        raise DomainError(f"fraction must lie in [0, 1), got {fraction!r}")
    if report.p_hat.shape != (codebook.num_keys, codebook.num_messages):
        raise DimensionError("error report does not match the codebook's shape")
    drop = math.ceil(fraction * codebook.num_messages)
    keep = codebook.num_messages - drop
    if keep < 1:
        raise DomainError(f"expurgating {drop} of {codebook.num_messages} messages leaves nothing")
    if drop == 0:
        return codebook

    new_words = np.empty((codebook.num_keys, keep, codebook.params.n), dtype=np.uint8)
    new_ids = np.empty((codebook.num_keys, keep), dtype=np.int64)
    for k in range(codebook.num_keys):
        # sort worst-first: high p_hat, then low id; drop the head
        order = sorted(range(codebook.num_messages), key=lambda j: (-report.p_hat[k, j], codebook.message_ids[k, j]))
        kept = sorted(order[drop:])
        new_words[k] = codebook.codewords[k, kept]
        new_ids[k] = codebook.message_ids[k, kept]
    return PpmCodebook(
        params=codebook.params,
        num_messages=keep,
        num_keys=codebook.num_keys,
        seed=codebook.seed,
        codewords=new_words,
        message_ids=new_ids,
    )


METHOD_EXACT = "EXACT"
METHOD_MC = "MONTE_CARLO"


@dataclass(frozen=True)
class CovertnessReport:
    """An adversary-divergence figure D(Qhat || Q0^n), exact or estimated.

    ``stderr`` is None for exact enumerations; ``samples`` counts Monte-Carlo
    draws, or enumerated states for the exact method.
    """

    method: str
    kl_estimate: float
    stderr: float | None
    samples: int


def _warden_deltas(wz: Bdmc) -> tuple[np.ndarray, np.ndarray, np.ndarray]:
    """(active symbol set, base log-probs, active-vs-idle log ratios)."""
    qz0, qz1 = wz.w[0], wz.w[1]
    active = np.flatnonzero(qz0 > 0.0)
    return active, np.log(qz0[active]), np.log(qz1[active]) - np.log(qz0[active])


def covertness_exact(codebook: PpmCodebook, wz: Bdmc, max_states: int = 2**24) -> CovertnessReport:
    """Exact D(Qhat || Q0^n) of the code's output mixture by full enumeration.

    Qhat is the uniform mixture over all retained (key, message) words pushed
    through the adversary channel.  Raises ResourceLimitError when |Z|^n
    exceeds ``max_states``; below the cap, only supp(Q0)^n is walked (the rest
    carries no Qhat mass, or makes the divergence infinite, which is detected
    up front).  Returns +inf when an active word can emit a symbol Q0 never
    emits.
    """
    n = codebook.params.n
    if wz.num_outputs**n > max_states:
        raise ResourceLimitError(
            f"exact covertness needs {wz.num_outputs}^{n} = {wz.num_outputs**n} states, "
            f"above the cap {max_states}; use covertness_mc"
        )
    qz0, qz1 = wz.w[0], wz.w[1]
    words = codebook.flat_words()
    if np.any((qz1 > 0.0) & (qz0 <= 0.0)) and np.any(words.sum(axis=1) > 0):
        return CovertnessReport(METHOD_EXACT, float("inf"), None, 0)
    active, base_logs, d = _warden_deltas(wz)
    a = active.size
    states = a**n
    wmat = words.astype(np.float64)
    log_c = math.log(wmat.shape[0])
    kl = 0.0
    block = 1 << 14
    digits_pow = a ** np.arange(n - 1, -1, -1, dtype=np.int64)
    for start in range(0, states, block):
        idx = np.arange(start, min(start + block, states), dtype=np.int64)
        z = (idx[:, None] // digits_pow[None, :]) % a  # digits over the active alphabet
        base = base_logs[z].sum(axis=1)
        scores = d[z] @ wmat.T
        log_qhat = base + _logsumexp_rows(scores) - log_c
        kl += float(np.sum(np.exp(log_qhat) * (log_qhat - base)))
    return CovertnessReport(METHOD_EXACT, max(kl, 0.0), None, int(states))


def _logsumexp_rows(m: np.ndarray) -> np.ndarray:
    top = m.max(axis=1)
    return top + np.log(np.exp(m - top[:, None]).sum(axis=1))


def covertness_mc(codebook: PpmCodebook, wz: Bdmc, samples: int, seed: int) -> CovertnessReport:
    """Unbiased Monte-Carlo estimate of D(Qhat || Q0^n).

    Draws (key, message) uniformly, pushes the word through the adversary
    channel, and averages log Qhat(z) - log Q0^n(z); the mixture likelihood is
    evaluated exactly over all retained words, so the estimator's only error
    is sampling noise (stderr is reported).
    """
    if samples < 100:
        raise DomainError(f"need at least 100 samples, got {samples!r}")
    n = codebook.params.n
    qz0, qz1 = wz.w[0], wz.w[1]
    words = codebook.flat_words()
    if np.any((qz1 > 0.0) & (qz0 <= 0.0)) and np.any(words.sum(axis=1) > 0):
        return CovertnessReport(METHOD_MC, float("inf"), None, samples)
    wmat = words.astype(np.float64)
    log_c = math.log(wmat.shape[0])
    d_full = np.where(qz0 > 0.0, np.log(np.maximum(qz1, 1e-300)) - np.log(np.maximum(qz0, 1e-300)), 0.0)
    cum0 = _cumulative(qz0)
    cum1 = _cumulative(qz1)
    gen = _stream(seed, _TAG_COVERT)
    vals = np.empty(samples)
    done = 0
    block = max(1, min(samples, (1 << 22) // max(1, n)))
    while done < samples:
        t = min(block, samples - done)
        choice = gen.integers(0, wmat.shape[0], size=t)
        u = gen.random((t, n))
        x = words[choice]
        z = np.where(x == 1, _sample_symbols(cum1, u), _sample_symbols(cum0, u))
        scores = d_full[z] @ wmat.T
        vals[done : done + t] = _logsumexp_rows(scores) - log_c
        done += t
    est = float(vals.mean())
    stderr = float(vals.std(ddof=1) / math.sqrt(samples))
    return CovertnessReport(METHOD_MC, est, stderr, samples)


def ppm_output_kl(
    params: PpmParams,
    q0: ProbVector,
    q1: ProbVector,
    method: str = "exact",
    samples: int = 100_000,
    seed: int = 0,
    max_states: int = 2**24,
) -> CovertnessReport:
    """Divergence of the ensemble-average PPM output law from Q0^n.

    The ensemble law factorizes over chunks, so the full-block divergence is
    l times the single-chunk divergence D(P_chunk || Q0^w); the idle tail
    contributes nothing.  "exact" enumerates the chunk alphabet, "mc" draws
    chunk samples and averages the log-ratio (unbiased; stderr reported).
    """
    w, l = params.w, params.l
    method = method.lower()
    if method not in ("exact", "mc"):
        raise DomainError(f"method must be 'exact' or 'mc', got {method!r}")
    if np.any((q1.probs > 0.0) & (q0.probs <= 0.0)):
        return CovertnessReport(METHOD_EXACT if method == "exact" else METHOD_MC, float("inf"), None, 0)
    active = np.flatnonzero(q0.probs > 0.0)
    base_logs = np.log(q0.probs[active])
    d = np.log(np.maximum(q1.probs[active], 1e-300)) - base_logs
    a = active.size
    log_w = math.log(w)
    if method == "exact":
        if len(q0) ** w > max_states:
            raise ResourceLimitError(
                f"exact chunk law needs {len(q0)}^{w} = {len(q0)**w} states, "
                f"above the cap {max_states}; use method='mc'"
            )
        states = a**w
        digits_pow = a ** np.arange(w - 1, -1, -1, dtype=np.int64)
        kl = 0.0
        block = 1 << 14
        for start in range(0, states, block):
            idx = np.arange(start, min(start + block, states), dtype=np.int64)
            z = (idx[:, None] // digits_pow[None, :]) % a
            base = base_logs[z].sum(axis=1)
            ratio = _logsumexp_rows(d[z]) - log_w
            kl += float(np.sum(np.exp(base + ratio) * ratio))
        return CovertnessReport(METHOD_EXACT, max(kl, 0.0) * l, None, int(states))
    if samples < 2:
        raise DomainError("need at least 2 samples for a standard error")
    gen = _stream(seed, _TAG_OUTPUT_KL)
    cum0 = _cumulative(q0.probs)
    cum1 = _cumulative(q1.probs)
    d_full = np.where(q0.probs > 0.0, np.log(np.maximum(q1.probs, 1e-300)) - np.log(np.maximum(q0.probs, 1e-300)), 0.0)
    vals = np.empty(samples)
    done = 0
    block = max(1, min(samples, (1 << 22) // max(1, w)))
    while done < samples:
        t = min(block, samples - done)
        j = gen.integers(0, w, size=t)
        u = gen.random((t, w))
        z = _sample_symbols(cum0, u)
        z[np.arange(t), j] = _sample_symbols(cum1, u[np.arange(t), j])
        vals[done : done + t] = _logsumexp_rows(d_full[z]) - log_w
        done += t
    est = float(vals.mean()) * l
    stderr = float(vals.std(ddof=1) / math.sqrt(samples)) * l
    return CovertnessReport(METHOD_MC, est, stderr, samples)


@dataclass(frozen=True)
class SStatReport:
    """Sampled chunk statistic with its analytic support bounds."""

    mean: float
    stderr: float
    sample_min: float
    sample_max: float
    bound_low: float
    bound_high: float


def sample_s_statistic(
    q: DecodingMetric,
    p0: ProbVector,
    p1: ProbVector,
    w: int,
    s: float,
    samples: int,
    seed: int,
) -> SStatReport:
    """Draw the per-chunk decoding exponent S and report mean, spread, and bounds.

    One chunk has its active output Y1 ~ p1 and w-1 idle outputs ~ p0;
    S = -log[(1/w) sum_j exp(s (rhat(Yj) - rhat(Y1)))] with the j=1 term equal
    to 1.  Every sample lies in the closed interval [bound_low, bound_high]
    determined by the extreme metric ratios over the supports of p1 and p0;
    the mean approaches the tilt value f(s) as w grows.
    """
    if w < 2:
        raise DomainError(f"w must be at least 2, got {w!r}")
    if s < 0.0:
        raise DomainError(f"s must be nonnegative, got {s!r}")
    if samples < 2:
        raise DomainError("need at least 2 samples for a standard error")
    if q.num_outputs != len(p0) or len(p0) != len(p1):
        raise DimensionError("metric and output laws must share one alphabet")
    rhat = _log_ratio(q)
    supp0, supp1 = p0.support(), p1.support()
    if supp1.size == 0 or supp0.size == 0:
        raise DomainError("both output laws need nonempty support")
    # Sharp support interval: the j=1 term of the average is always exp(0)=1,
    # the other w-1 exponents range over s*(rhat(idle) - rhat(active)).
    a = s * (float(rhat[supp1].max()) - float(rhat[supp0].min()))
    b = s * (float(rhat[supp0].max()) - float(rhat[supp1].min()))
    log_w1 = math.log(w - 1)
    bound_high = math.log(w) - float(np.logaddexp(0.0, log_w1 - a))
    bound_low = math.log(w) - float(np.logaddexp(0.0, log_w1 + b))

    gen = _stream(seed, _TAG_SSTAT)
    cum0 = _cumulative(p0.probs)
    cum1 = _cumulative(p1.probs)
    vals = np.empty(samples)
    done = 0
    block = max(1, min(samples, (1 << 22) // max(1, w)))
    while done < samples:
        t = min(block, samples - done)
        y1 = _sample_symbols(cum1, gen.random(t))
        rest = _sample_symbols(cum0, gen.random((t, w - 1)))
        r_all = np.concatenate([rhat[y1][:, None], rhat[rest]], axis=1)
        terms = s * (r_all - rhat[y1][:, None])
        vals[done : done + t] = -(_logsumexp_rows(terms) - math.log(w))
        done += t
    return SStatReport(
        mean=float(vals.mean()),
        stderr=float(vals.std(ddof=1) / math.sqrt(samples)),
        sample_min=float(vals.min()),
        sample_max=float(vals.max()),
        bound_low=bound_low,
        bound_high=bound_high,
    )


def prescribed_log_sizes(rate: float, t: float, kl_warden: float, n: int, eta1: float = 0.05, eta2: float = 0.05) -> tuple[float, float]:
    """Reference (log |M|, log |K|) for blocklength n at achievable rate ``rate``.

    The payload carries sqrt(n) (rate - eta1) nats; the key tops the total up
    to sqrt(n) (t * kl_warden + eta2) when the adversary's channel is the more
    informative one.  Purely advisory for sizing simulations.
    """
    root = math.sqrt(n)
    log_m = max(0.0, root * (rate - eta1))
    log_mk = max(log_m, root * (t * kl_warden + eta2))
    return log_m, log_mk - log_m
