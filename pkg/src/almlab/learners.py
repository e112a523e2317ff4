"""Query-based learning procedures over finite hypothesis classes.

All learners consume label oracles that count every request against a hard
budget; results carry the exact query count, consistency flags, and an
optional trace.  Sample-size formulas accept a multiplicative
``constant_scale`` so desk-scale runs keep the algorithms' structure while
shrinking their populations; stopping thresholds that control correctness
(the sigma test and per-point query caps) are recomputed but never scaled.
"""
from __future__ import annotations

import itertools
import math
from dataclasses import dataclass, field
from typing import Callable, Sequence

import numpy as np

from .complexity import FinDiscreteMarginal, teaching_dim
from .core import HypothesisClass, LabeledSample, SizeCapExceeded, induced_labelings, vc_dimension
from .noise import JointDistribution, StreamSampler

__all__ = [
    "BudgetExhausted",
    "QueryOracle",
    "MembershipOracle",
    "SplitOracle",
    "LearnerResult",
    "Alg1Params",
    "Partition",
    "erm_passive",
    "cal",
    "memb_halving2",
    "epsilon_net_select",
    "partition_J",
    "partition_sample_size",
    "algorithm0",
    "subroutine1",
    "algorithm1",
    "gamma_hat_default",
    "C0",
    "C_COVER",
    "C_NET",
    "C_COMPRESS",
    "C_COMPRESS_NET",
]

# Universal constants: C0 is pinned by the relative-deviation corollary the
# sample bounds build on; the others follow from it except C_COMPRESS, which
# the source bounds never pin numerically (chosen here, overridable).
C0 = 2 ** 14
C_COVER = 10 * C0
C_NET = max(10 * C0, 6 * C_COVER)
C_COMPRESS = 4
C_COMPRESS_NET = max(8 * C_COMPRESS, 128)


def _log(x: float) -> float:
    """max(ln x, 1) with ln(0) = -inf conventions folded in."""
    if x <= 0:
        return 1.0
    return max(math.log(x), 1.0)


class BudgetExhausted(RuntimeError):
    """A label request arrived after the query budget was spent."""


class QueryOracle:
    """Label source over a lazily sampled unlabeled stream.

    Every ``request`` counts against the budget, including repeats at the
    same index (repeat requests return the cached draw: labels are functions
    of the index once sampled).
    """

    def __init__(self, dist: JointDistribution, seed: int, budget: int):
        if budget < 0:
            raise ValueError("budget must be >= 0")
        self.sampler = StreamSampler(dist, seed)
        self.budget = int(budget)
        self.used = 0
        self._label_cache: dict[int, int] = {}

    def point(self, i: int) -> int:
        return self.sampler.point(i)

    def points_block(self, lo: int, hi: int) -> np.ndarray:
        return self.sampler.points_at(np.arange(lo, hi, dtype=np.int64))

    def request(self, i: int) -> int:
        if self.used >= self.budget:
            raise BudgetExhausted(f"budget of {self.budget} labels spent")
        self.used += 1
        y = self._label_cache.get(i)
        if y is None:
            y = self.sampler.label(i)
            self._label_cache[i] = y
        return y


class MembershipOracle:
    """Budgeted label source answering at domain points.

    Labels come from a fixed target labeling, or are drawn once per point
    from Bernoulli(eta) and cached (each point carries a single hidden
    label).
    """

    def __init__(self, budget: int, *, target: np.ndarray | None = None,
                 dist: JointDistribution | None = None, seed: int = 0):
        if (target is None) == (dist is None):
            raise ValueError("provide exactly one of target or dist")
        self.budget = int(budget)
        self.used = 0
        self._target = None if target is None else np.asarray(target)
        self._dist = dist
        self._cache: dict[int, int] = {}
        if dist is not None:
            from .rng import UniformStream

            self._us = UniformStream(seed, 2)
            self._eta_by_point = {x: e for x, e in zip(dist.support, dist.eta)}

    def label_at(self, x: int) -> int:
        if self.used >= self.budget:
            raise BudgetExhausted(f"budget of {self.budget} labels spent")
        self.used += 1
        y = self._cache.get(x)
        if y is None:
            if self._target is not None:
                y = int(self._target[x])
            else:
                eta = self._eta_by_point.get(x, 0.0)
                y = 1 if self._us.at(x) < eta else -1
            self._cache[x] = y
        return y


def _cantor(a: int, b: int) -> int:
    return (a + b) * (a + b + 1) // 2 + b


class SplitOracle:
    """Three disjoint interleavings of one i.i.d. stream, with label counting.

    The stream is split round-robin into sub-streams 1..3 (triples of
    consecutive indices); the third is re-indexed two-dimensionally through
    the Cantor pairing so each outer index m owns an unbounded inner stream.
    All indices here are 1-based to match the interleaving arithmetic.
    """

    def __init__(self, dist: JointDistribution, seed: int, budget: int):
        self.sampler = StreamSampler(dist, seed)
        self.budget = int(budget)
        self.used = 0
        self._label_cache: dict[int, int] = {}

    def x1(self, m: int) -> int:
        return self.sampler.point(3 * (m - 1))

    def x1_block(self, m_lo: int, m_hi: int) -> np.ndarray:
        idx = 3 * (np.arange(m_lo, m_hi, dtype=np.int64) - 1)
        return self.sampler.points_at(idx)

    def x2(self, m: int) -> int:
        return self.sampler.point(3 * (m - 1) + 1)

    def _x3_global(self, m: int, l: int) -> int:
        return 3 * _cantor(m - 1, l - 1) + 2

    def x3_block(self, m: int, l_lo: int, l_hi: int) -> np.ndarray:
        ls = np.arange(l_lo, l_hi, dtype=np.int64)
        s = (m - 1) + (ls - 1)
        idx = 3 * (s * (s + 1) // 2 + (ls - 1)) + 2
        return self.sampler.points_at(idx)

    def request_label3(self, m: int, l: int) -> int:
        if self.used >= self.budget:
            raise BudgetExhausted(f"budget of {self.budget} labels spent")
        self.used += 1
        gi = self._x3_global(m, l)
        y = self._label_cache.get(gi)
        if y is None:
            y = self.sampler.label(gi)
            self._label_cache[gi] = y
        return y


@dataclass
class LearnerResult:
    """Outcome of one learner run."""

    hypothesis: int
    queries: int
    unlabeled: int
    consistent: bool = True
    flags: tuple[str, ...] = ()
    trace: tuple | None = None


# -- passive baseline --------------------------------------------------------


def erm_passive(sample, C: HypothesisClass) -> LearnerResult:
    """Empirical risk minimizer over the class; ties go to the lowest row."""
    pairs = list(sample)
    errs = np.zeros(C.n_hypotheses, dtype=np.int64)
    for x, y in pairs:
        errs += C.labels[:, int(x)] != int(y)
    h = int(np.argmin(errs))
    return LearnerResult(hypothesis=h, queries=len(pairs), unlabeled=len(pairs))


# -- disagreement-based stream learner ---------------------------------------


def _dis_mask(C: HypothesisClass, member_mask: np.ndarray) -> np.ndarray:
    sub = C.labels[member_mask]
    return sub.max(axis=0) != sub.min(axis=0)


def cal(oracle: QueryOracle, C: HypothesisClass, max_unlabeled: int,
        *, want_trace: bool = False) -> LearnerResult:
    """Query each stream point iff the surviving hypotheses disagree on it.

    Inconsistent answers (the version space empties) fall back to the lowest
    empirical-risk survivor over the queried labels, flagged.
    """
    member_mask = np.ones(C.n_hypotheses, dtype=bool)
    dis = _dis_mask(C, member_mask)
    queried: list[tuple[int, int]] = []
    flags: list[str] = []
    examined = 0
    chunk = 1024
    points: np.ndarray | None = None
    chunk_lo = 0
    for i in range(max_unlabeled):
        examined = i + 1
        if points is None or i >= chunk_lo + chunk:
            chunk_lo = i
            points = oracle.points_block(chunk_lo, min(chunk_lo + chunk, max_unlabeled))
        x = int(points[i - chunk_lo])
        if not dis[x]:
            continue
        try:
            y = oracle.request(i)
        except BudgetExhausted:
            examined -= 1
            flags.append("budget-exhausted")
            break
        queried.append((x, y))
        new_mask = member_mask & (C.labels[:, x] == y)
        if not new_mask.any():
            res = erm_passive(queried, C)
            return LearnerResult(res.hypothesis, oracle.used, examined, consistent=False,
                                 flags=("inconsistent",),
                                 trace=tuple(queried) if want_trace else None)
        member_mask = new_mask
        dis = _dis_mask(C, member_mask)
        if not dis.any():
            break
    h = int(np.flatnonzero(member_mask)[0])
    return LearnerResult(h, oracle.used, examined, flags=tuple(flags),
                         trace=tuple(queried) if want_trace else None)


# -- exact-identification halving over a fixed pool --------------------------


def memb_halving2(C: HypothesisClass, U: Sequence[int], oracle: MembershipOracle,
                  budget: int | None = None, *, want_trace: bool = False) -> LearnerResult:
    """Majority-vote halving with minimal specifying sets over the pool U.

    Each outer pass queries points of a minimal specifying set for the
    current majority vote, ordered by fewest agreeing survivors, until the
    vote is contradicted or a single representative remains.
    """
    pts = [int(x) for x in U]
    budget = oracle.budget if budget is None else min(budget, oracle.budget)
    V = induced_labelings(C, pts)
    reps0 = list(V)
    trace: list[tuple[int, int]] = []
    flags: list[str] = []
    answers: dict[int, int] = {}
    while len(V) >= 2 and oracle.used < budget:
        sub = C.labels[V]
        maj = np.full(C.n_points, 1, dtype=np.int8)
        for x in pts:
            pos = int((sub[:, x] > 0).sum())
            maj[x] = 1 if pos * 2 >= len(V) else -1  # ties vote +1
        k, spec_set = teaching_dim(maj, C, pts)
        if k == 0:
            break
        while True:
            counts = [(int((C.labels[V, j] == maj[j]).sum()), j) for j in spec_set]
            _, j_hat = min(counts)
            try:
                y = oracle.label_at(j_hat)
            except BudgetExhausted:
                flags.append("budget-exhausted")
                break
            answers[j_hat] = y
            trace.append((j_hat, y))
            V = [g for g in V if C.labels[g, j_hat] == y]
            if maj[j_hat] != y or len(V) <= 1 or oracle.used >= budget:
                break
        if "budget-exhausted" in flags:
            break
    if V:
        h = V[0]
        consistent = True
    else:
        h = reps0[0]
        consistent = False
        flags.append("inconsistent")
    return LearnerResult(int(h), oracle.used, len(pts), consistent=consistent,
                         flags=tuple(flags), trace=tuple(trace) if want_trace else None)


# -- block selection producing an eps-net -------------------------------------


def epsilon_net_select(sampler: StreamSampler, C: HypothesisClass, eps: float,
                       delta: float, constant_scale: float = 1.0,
                       *, d: int | None = None,
                       net_constant: float = C_NET) -> tuple[list[int], int, dict]:
    """Pick, among candidate unlabeled blocks, one whose empty-trace pairs stay rare.

    Draws ceil(log2(2/delta)) blocks of size m plus one validation block of
    size l, and returns the block minimizing the worst validation
    disagreement count over pairs of classifiers agreeing throughout the
    block.  Returns (block points, block index, diagnostics).
    """
    if d is None:
        d = vc_dimension(C)
    m = math.ceil(constant_scale * net_constant * d / eps * _log(1.0 / eps))
    l = math.ceil(constant_scale * net_constant / eps * (d * _log(1.0 / eps) + _log(1.0 / delta)))
    n_blocks = math.ceil(math.log2(2.0 / delta))
    m = max(m, 1)
    l = max(l, 1)
    total = m * n_blocks + l
    pts = sampler.points_at(np.arange(total, dtype=np.int64))
    val = pts[m * n_blocks:]
    best_i, best_score = 0, None
    for i in range(n_blocks):
        block = pts[m * i: m * (i + 1)]
        groups: dict[bytes, list[int]] = {}
        for g in range(C.n_hypotheses):
            groups.setdefault(C.labels[g, block].tobytes(), []).append(g)
        score = 0
        for rows in groups.values():
            if len(rows) < 2:
                continue
            A = C.labels[np.asarray(rows)][:, val]
            # max validation disagreement among pairs agreeing on the block
            dmat = (A[:, None, :] != A[None, :, :]).sum(axis=2)
            score = max(score, int(dmat.max()))
        if best_score is None or score < best_score:
            best_i, best_score = i, score
    chosen = [int(x) for x in pts[m * best_i: m * (best_i + 1)]]
    return chosen, best_i, {"m": m, "l": l, "n_blocks": n_blocks, "score": best_score}


# -- nearly-constant cell partition -------------------------------------------


@dataclass(frozen=True)
class Partition:
    """Domain partition by the joint sign pattern of the pool representatives."""

    cell_of: tuple[int, ...]
    n_cells: int

    def cells(self) -> list[list[int]]:
        out: list[list[int]] = [[] for _ in range(self.n_cells)]
        for x, c in enumerate(self.cell_of):
            out[c].append(x)
        return out


def partition_sample_size(tau: float, delta: float, d: int,
                          constant_scale: float = 1.0,
                          cover_constant: float = C_COVER) -> int:
    return max(1, math.ceil(constant_scale * cover_constant / tau
                            * (d * _log(1.0 / tau) + _log(1.0 / delta))))


def partition_J(sample_points: Sequence[int], C: HypothesisClass) -> Partition:
    """Cells on which every representative of C over the sample is constant."""
    pts = [int(x) for x in sample_points]
    reps = induced_labelings(C, pts) if pts else [0]
    sig = C.labels[reps]
    seen: dict[bytes, int] = {}
    cell_of = []
    for x in range(C.n_points):
        key = sig[:, x].tobytes()
        if key not in seen:
            seen[key] = len(seen)
        cell_of.append(seen[key])
    return Partition(tuple(cell_of), len(seen))


# -- round-based realizable learner -------------------------------------------


def algorithm0(oracle: QueryOracle, C: HypothesisClass, s_value: int, eps: float,
               delta: float, constant_scale: float = 1.0,
               *, compress_constant: float = C_COMPRESS_NET,
               want_trace: bool = False) -> LearnerResult:
    """Round-based learner querying compression-selected blocks of stream points.

    Per round it scans fresh points for members of the current disagreement
    region, early-returning when they have become rare, otherwise queries the
    candidate block whose surviving equivalence classes leave the least
    validation disagreement.  The block score maximizes over the distinct
    restrictions of C to the block: any label tuple whose induced version
    space avoids disagreement on the block pins down exactly one such
    restriction class, and a tuple of at most s_value indices realizing it
    always exists because compression size never exceeds min(s, block size).
    """
    if s_value < 1:
        raise ValueError("s_value must be >= 1")
    n = oracle.budget
    delta_p = delta / (2.0 * math.ceil(math.log2(max(1.0 / eps, 2.0))))
    l = max(1, math.ceil(constant_scale * 2 * compress_constant
                         * (s_value * _log(3 * compress_constant) + _log(1.0 / delta_p))))
    m = max(1, math.ceil(constant_scale * 2 * compress_constant * s_value))
    n_blocks = math.ceil(math.log2(2.0 / delta_p))
    need = m * n_blocks + l
    j_tilde = math.ceil((2 * m * n_blocks + 2 * l) / eps)

    member_mask = np.ones(C.n_hypotheses, dtype=bool)
    dis = _dis_mask(C, member_mask)
    cursor = 0
    flags: list[str] = []
    trace: list = []
    for _round in range(n // m):
        window = oracle.points_block(cursor, cursor + j_tilde)
        hit_pos = np.flatnonzero(dis[window])
        if len(hit_pos) < need:
            break  # disagreement region has become rare on the stream
        hits = hit_pos[:need]
        hit_idx = cursor + hits           # stream indices of the kept hits
        hit_pts = window[hits]
        cursor = int(hit_idx[-1]) + 1
        val_pts = hit_pts[m * n_blocks:]
        best_i, best_score = 0, None
        for i in range(n_blocks):
            block_pts = hit_pts[m * i: m * (i + 1)]
            score = 0
            for r in induced_labelings(C, list(block_pts)):
                vmask = np.all(C.labels[:, block_pts] == C.labels[r, block_pts][None, :], axis=1)
                sub = C.labels[vmask]
                dis_r = sub.max(axis=0) != sub.min(axis=0)
                score = max(score, int(dis_r[val_pts].sum()))
            if best_score is None or score < best_score:
                best_i, best_score = i, score
        block_slice = slice(m * best_i, m * (best_i + 1))
        # request the chosen block's labels and restrict the version space
        new_mask = member_mask.copy()
        exhausted = False
        for stream_i, x in zip(hit_idx[block_slice], hit_pts[block_slice]):
            try:
                y = oracle.request(int(stream_i))
            except BudgetExhausted:
                flags.append("budget-exhausted")
                exhausted = True
                break
            new_mask &= C.labels[:, int(x)] == y
            if want_trace:
                trace.append((int(stream_i), int(x), int(y)))
        if exhausted:
            break
        if not new_mask.any():
            flags.append("inconsistent")
            break
        member_mask = new_mask
        dis = _dis_mask(C, member_mask)
        if not dis.any():
            break
    h = int(np.flatnonzero(member_mask)[0])
    return LearnerResult(h, oracle.used, cursor, flags=tuple(flags),
                         trace=tuple(trace) if want_trace else None)


# -- repeated-query noisy learner ---------------------------------------------


@dataclass
class Alg1Params:
    """Accuracy/confidence inputs and the derived schedule for the noisy learner.

    All population sizes are recomputed from the formulas and multiplied by
    ``constant_scale``; the sigma stopping threshold and the per-point query
    cap ladder are recomputed from the scaled populations but never scaled
    themselves (they control correctness, not sample volume).
    """

    eps: float
    delta: float
    gamma_hat: float
    d: int
    constant_scale: float = 1.0
    cover_constant: float = C_COVER
    scan_cap: int = 1_000_000
    # ceiling on the partition sample: for finitely supported marginals a
    # sample covering the support already makes every class member exactly
    # constant per cell, so the formula value (astronomical at desk scales,
    # since tau shrinks with m_tilde) is clamped rather than followed.
    partition_cap: int = 20_000

    def __post_init__(self):
        if not (0.0 < self.eps < 1.0) or not (0.0 < self.delta < 1.0):
            raise ValueError("eps and delta must lie in (0,1)")
        if not (self.eps / 2.0 - 1e-12 <= self.gamma_hat <= 1.0):
            raise ValueError("gamma_hat must lie in [eps/2, 1]")
        self.k_eps = math.ceil(math.log2(8.0 / self.gamma_hat))
        base = 16.0 * max(self.cover_constant, 8.0) * self.k_eps / self.eps
        self.m_tilde_k = {}
        for k in range(2, self.k_eps + 1):
            raw = (base / 2 ** k) * (self.d * _log(2.0 * self.k_eps / self.eps)
                                     + _log(64.0 * self.k_eps / self.delta))
            self.m_tilde_k[k] = max(1, math.ceil(self.constant_scale * raw))
        self.m_tilde_k[self.k_eps + 1] = 0
        self.m_tilde = self.m_tilde_k[2]
        self.q_eps_delta = 2 + math.ceil(
            2 ** (2 * self.k_eps + 4)
            * math.log(32.0 * self.m_tilde * 2 ** (2 * self.k_eps + 3) / self.delta)
        )
        self.tau = self.delta * self.eps / (512.0 * self.m_tilde)
        self.ln_term = math.log(32.0 * self.m_tilde * self.q_eps_delta / self.delta)

    def k_tilde(self, m: int) -> int:
        ks = [k for k in range(2, self.k_eps + 1) if m <= self.m_tilde_k[k]]
        return max(ks) if ks else 2

    def q_tilde(self, m: int) -> float:
        return 2 ** (3 + 2 * self.k_tilde(m)) * self.ln_term

    def sigma_threshold(self, q: int) -> float:
        return 3.0 * math.sqrt(2.0 * q * self.ln_term)


def subroutine1(oracle: SplitOracle, m: int, budget: int, params: Alg1Params,
                partition: Partition) -> tuple[int, int, tuple[str, ...]]:
    """Poll repeated labels from the cell of the m-th decision point.

    Requests labels of third-substream points landing in the cell until the
    running sum crosses the significance threshold (return its sign) or the
    query allowance min(budget, cap ladder) is spent (return 0).  A finite
    scan cap guards against cells the stream never revisits.
    """
    cell = partition.cell_of[oracle.x2(m)]
    cell_of = np.asarray(partition.cell_of)
    sigma = 0
    q = 0
    q_cap = min(float(budget), params.q_tilde(m))
    l_next = 1
    scanned = 0
    batch = 2048
    while True:
        pts = oracle.x3_block(m, l_next, l_next + batch)
        match = np.flatnonzero(cell_of[pts] == cell)
        for off in match:
            y = oracle.request_label3(m, l_next + int(off))
            sigma += y
            q += 1
            if abs(sigma) >= params.sigma_threshold(q):
                return q, (1 if sigma > 0 else -1), ()
            if q >= q_cap:
                return q, 0, ()
        l_next += batch
        scanned += batch
        if scanned >= params.scan_cap:
            return q, 0, ("starved",)


def algorithm1(oracle: SplitOracle, C: HypothesisClass, budget: int,
               params: Alg1Params, *, partition: Partition | None = None,
               want_trace: bool = False) -> LearnerResult:
    """Disagreement-driven learner with repeated queries inside noisy cells.

    The first sub-stream builds a partition on whose cells the class is
    nearly constant; decision points come from the second sub-stream; labels
    are only ever requested from the third, inside the decision point's cell,
    through subroutine1.  The version space is restricted only by confident
    (nonzero) answers some survivor can realize, so it never empties.
    """
    if partition is None:
        m_part = min(
            partition_sample_size(params.tau, params.delta / 2.0, params.d,
                                  params.constant_scale, params.cover_constant),
            params.partition_cap,
        )
        pts = oracle.x1_block(1, m_part + 1)
        partition = partition_J([int(x) for x in pts], C)
    member_mask = np.ones(C.n_hypotheses, dtype=bool)
    dis = _dis_mask(C, member_mask)
    t = 0
    m = 0
    flags: list[str] = []
    trace: list = []
    while t < budget and m < params.m_tilde:
        m += 1
        x = oracle.x2(m)
        if not dis[x]:
            continue
        q, y, sub_flags = subroutine1(oracle, m, budget - t, params, partition)
        t += q
        flags.extend(sub_flags)
        if want_trace:
            trace.append((m, x, q, y))
        if y != 0:
            new_mask = member_mask & (C.labels[:, x] == y)
            if new_mask.any():
                member_mask = new_mask
                dis = _dis_mask(C, member_mask)
    h = int(np.flatnonzero(member_mask)[0])
    return LearnerResult(h, oracle.used, m, flags=tuple(sorted(set(flags))),
                         trace=tuple(trace) if want_trace else None)


def gamma_hat_default(model: str, eps: float, *, beta: float | None = None,
                      a: float | None = None, alpha: float | None = None,
                      aprime: float | None = None, nu: float | None = None) -> float:
    """Default noise-margin surrogate per noise model."""
    model = model.upper()
    if model == "BN":
        if beta is None:
            raise ValueError("BN needs beta")
        return max(0.5 - beta, eps / 2.0)
    if model == "TN":
        if alpha is None or (a is None and aprime is None):
            raise ValueError("TN needs alpha and a or aprime")
        if aprime is None:
            from .noise import tsybakov_aprime

            aprime = tsybakov_aprime(a, alpha)
        return max((eps / (2.0 * aprime)) ** (1.0 - alpha), eps / 2.0)
    if model == "BE":
        if nu is None:
            raise ValueError("BE needs nu")
        return max(eps / (4.0 * nu + 2.0 * eps), eps / 2.0)
    raise ValueError(f"unknown noise model {model!r}; supply gamma_hat explicitly")
