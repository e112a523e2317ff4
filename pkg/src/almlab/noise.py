"""Joint distributions with explicit conditional label probabilities.

A distribution is a finitely supported marginal plus eta(x) = P(Y=+1 | X=x)
per support point.  This module provides the label-noise model checkers and
generators, error-rate arithmetic (sign(0) = +1 throughout), and i.i.d.
sampling that is deterministic given (seed, draw index).
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Sequence

import numpy as np

from .complexity import FinDiscreteMarginal, StarWitness
from .core import HypothesisClass, LabeledSample
from .rng import UniformStream

__all__ = [
    "JointDistribution",
    "GammaProfile",
    "NoiseReport",
    "bayes",
    "error_rate",
    "excess_error",
    "gamma_profile",
    "classify_noise",
    "make_realizable",
    "rr_family",
    "sample_stream",
    "StreamSampler",
    "tsybakov_aprime",
    "DEFAULT_ALPHA_GRID",
    "DEFAULT_A_GRID",
]

DEFAULT_ALPHA_GRID = tuple(round(0.1 * k, 1) for k in range(1, 10))
DEFAULT_A_GRID = (1.0, 2.0, 4.0, 8.0, 16.0)


@dataclass(frozen=True)
class JointDistribution:
    """Marginal over domain points plus P(Y=+1|X=x) per support point."""

    marginal: FinDiscreteMarginal
    eta: tuple[float, ...]

    def __post_init__(self):
        if len(self.eta) != len(self.marginal.support):
            raise ValueError("eta must align with the marginal support")
        if any(not (0.0 <= e <= 1.0) for e in self.eta):
            raise ValueError("eta values must lie in [0,1]")

    @property
    def support(self) -> tuple[int, ...]:
        return self.marginal.support

    @property
    def weights(self) -> tuple[float, ...]:
        return self.marginal.weights

    def gamma_x(self) -> np.ndarray:
        """Pointwise margin |eta - 1/2| over the support."""
        return np.abs(np.asarray(self.eta) - 0.5)

    def to_text(self) -> str:
        lines = [f"almdist v1 |supp|={len(self.support)}"]
        for x, w, e in zip(self.support, self.weights, self.eta):
            lines.append(f"{x} {w!r} {e!r}")
        return "\n".join(lines) + "\n"

    @classmethod
    def from_text(cls, text: str) -> "JointDistribution":
        lines = [ln for ln in text.splitlines() if ln.strip()]
        if not lines or not lines[0].startswith("almdist v1"):
            raise ValueError("not an almdist v1 file")
        n = int(lines[0].split("=")[1])
        if len(lines) - 1 != n:
            raise ValueError(f"expected {n} support lines, found {len(lines) - 1}")
        pts, ws, es = [], [], []
        for ln in lines[1:]:
            p, w, e = ln.split()
            pts.append(int(p))
            ws.append(float(w))
            es.append(float(e))
        return cls(FinDiscreteMarginal(tuple(pts), tuple(ws)), tuple(es))


@dataclass(frozen=True)
class GammaProfile:
    """Pointwise noise margins and the critical level at accuracy eps."""

    gamma_x: tuple[float, ...]
    gamma_eps: float


@dataclass(frozen=True)
class NoiseReport:
    """Noise-model membership flags with their tightest parameters."""

    realizable: bool
    bounded_beta: float | None        # tightest beta, None if not a member
    tsybakov_feasible: tuple[tuple[float, float], ...]   # (a, alpha) grid points
    bernstein_feasible: tuple[tuple[float, float], ...]  # (a, alpha) grid points
    benign_nu: float | None           # Bayes error when f* in C, else None
    agnostic_nu: float                # best achievable error in C
    bayes_labels: tuple[int, ...]     # over the support, sign(0) = +1
    bayes_error: float


def bayes(dist: JointDistribution) -> tuple[np.ndarray, float]:
    """Bayes-optimal labeling over the support (+1 where eta >= 1/2) and its error."""
    eta = np.asarray(dist.eta)
    labels = np.where(eta >= 0.5, 1, -1).astype(np.int8)
    err = float(np.dot(np.minimum(eta, 1.0 - eta), np.asarray(dist.weights)))
    return labels, err


def _labels_on_support(labels, dist: JointDistribution) -> np.ndarray:
    arr = np.asarray(labels, dtype=np.int8)
    if arr.shape == (len(dist.support),):
        return arr
    return arr[list(dist.support)]


def error_rate(labels, dist: JointDistribution) -> float:
    """P(h(X) != Y) for a labeling given over the support or the full domain."""
    h = _labels_on_support(labels, dist)
    eta = np.asarray(dist.eta)
    per_point = np.where(h > 0, 1.0 - eta, eta)
    return float(np.dot(per_point, np.asarray(dist.weights)))


def excess_error(labels, dist: JointDistribution, C: HypothesisClass) -> float:
    """error_rate(labels) minus the best error rate achievable inside C."""
    best = min(error_rate(C.labels[g], dist) for g in range(C.n_hypotheses))
    return error_rate(labels, dist) - best


def gamma_profile(dist: JointDistribution, eps: float) -> GammaProfile:
    """Largest margin level gamma in (0,1/2] with gamma*P(gamma_x <= gamma) <= eps/2.

    The mass P(gamma_x <= gamma) is a right-continuous step function jumping
    at the distinct margin levels, so the supremum is resolved interval by
    interval; it may sit at a jump where the constraint itself fails (the
    supremum of a set open on the right).
    """
    if not (0.0 < eps < 1.0):
        raise ValueError("eps must lie in (0,1)")
    gx = dist.gamma_x()
    w = np.asarray(dist.weights)
    levels = sorted({float(g) for g in gx} | {0.5})
    half = eps / 2.0
    best = 0.0
    lo = 0.0
    for lv in levels:
        # on (lo, lv): P(gamma_x <= gamma) equals the mass at levels <= lo
        mass = float(w[gx <= lo + 1e-15].sum())
        if mass <= 0.0:
            best = max(best, min(lv, 0.5))
        else:
            best = max(best, min(half / mass, lv, 0.5))
        lo = lv
        if lo >= 0.5:
            break
    return GammaProfile(tuple(float(g) for g in gx), float(max(best, eps / 2.0)))


def tsybakov_aprime(a: float, alpha: float) -> float:
    """The margin-condition constant paired with (a, alpha)."""
    return (1.0 - alpha) * (2.0 * alpha) ** (alpha / (1.0 - alpha)) * a ** (1.0 / (1.0 - alpha))


def _bayes_in_class(dist: JointDistribution, C: HypothesisClass) -> bool:
    """Whether some class row matches the Bayes labeling on every positive-mass point."""
    blab, _ = bayes(dist)
    w = np.asarray(dist.weights)
    cols = [x for x, wx in zip(dist.support, w) if wx > 0]
    want = np.asarray([b for b, wx in zip(blab, w) if wx > 0])
    return any(np.array_equal(C.labels[g, cols], want) for g in range(C.n_hypotheses))


def classify_noise(dist: JointDistribution, C: HypothesisClass,
                   alpha_grid: Sequence[float] = DEFAULT_ALPHA_GRID,
                   a_grid: Sequence[float] = DEFAULT_A_GRID) -> NoiseReport:
    """Exact membership in each noise model, with tightest parameters.

    Realizable: Bayes labeling realized in C and eta in {0,1} almost surely.
    Bounded: margins bounded away from 1/2 almost surely (tightest beta).
    Tsybakov / Bernstein: feasibility reported on the (a, alpha) grid; the
    Tsybakov mass condition is checked at the finitely many margin levels
    (the mass is a step function and the bound is increasing in between, so
    violations always surface at a level).
    """
    w = np.asarray(dist.weights)
    eta = np.asarray(dist.eta)
    gx = dist.gamma_x()
    live = w > 0
    blab, berr = bayes(dist)

    f_star_in_C = _bayes_in_class(dist, C)
    realizable = f_star_in_C and bool(np.all((eta[live] <= 1e-15) | (eta[live] >= 1 - 1e-15)))

    bounded_beta = None
    if f_star_in_C and live.any():
        min_gamma = float(gx[live].min())
        if min_gamma > 1e-15:
            bounded_beta = max(0.0, 0.5 - min_gamma)

    # Tsybakov: forall gamma > 0, P(gamma_x <= gamma) <= a' * gamma^(alpha/(1-alpha))
    levels = sorted({float(g) for g in gx[live]} | {0.5}) if live.any() else [0.5]
    masses = [float(w[(gx <= lv + 1e-15) & live].sum()) for lv in levels]
    tn_feasible = []
    if f_star_in_C:
        zero_mass = float(w[(gx <= 1e-15) & live].sum())
        for a in a_grid:
            for alpha in alpha_grid:
                if zero_mass > 0:
                    continue
                ap = tsybakov_aprime(a, alpha)
                expo = alpha / (1.0 - alpha)
                if all(m <= ap * lv ** expo + 1e-12 for lv, m in zip(levels, masses)):
                    tn_feasible.append((float(a), float(alpha)))

    # Bernstein: exists h_P in C with P(h != h_P) <= a*(er(h) - er(h_P))^alpha for all h
    ers = [error_rate(C.labels[g], dist) for g in range(C.n_hypotheses)]
    dists_to = []
    cols = list(dist.support)
    for g in range(C.n_hypotheses):
        diff = (C.labels[:, cols] != C.labels[g, cols][None, :]) * w[None, :]
        dists_to.append(diff.sum(axis=1))
    bc_feasible = []
    for a in a_grid:
        for alpha in alpha_grid:
            ok = False
            for g in range(C.n_hypotheses):
                if any(e < ers[g] - 1e-12 for e in ers):
                    continue
                if all(
                    dists_to[g][h] <= a * max(ers[h] - ers[g], 0.0) ** alpha + 1e-12
                    for h in range(C.n_hypotheses)
                ):
                    ok = True
                    break
            if ok:
                bc_feasible.append((float(a), float(alpha)))

    benign_nu = berr if f_star_in_C else None
    agnostic_nu = float(min(ers))

    return NoiseReport(
        realizable=realizable,
        bounded_beta=bounded_beta,
        tsybakov_feasible=tuple(tn_feasible),
        bernstein_feasible=tuple(bc_feasible),
        benign_nu=benign_nu,
        agnostic_nu=agnostic_nu,
        bayes_labels=tuple(int(b) for b in blab),
        bayes_error=berr,
    )


def make_realizable(C: HypothesisClass, target: int,
                    marginal: FinDiscreteMarginal) -> JointDistribution:
    """Noise-free distribution whose labels follow the given class row."""
    eta = tuple(1.0 if C.labels[int(target), x] > 0 else 0.0 for x in marginal.support)
    return JointDistribution(marginal, eta)


def rr_family(C: HypothesisClass, witness: StarWitness, k: int, zeta: float,
              beta: float) -> list[JointDistribution]:
    """Hard family: mass zeta on k star points, flip probability beta.

    Member t concentrates label agreement with the t-th witness classifier:
    P(Y = h_t(X) | X = x_i) = 1-beta on each of the k star points and 1 on an
    anchor point where all involved classifiers agree (the next witness point
    when available, else any point of common agreement).
    """
    if not (0.0 < zeta <= 1.0):
        raise ValueError("zeta must lie in (0,1]")
    if not (0.0 <= beta < 0.5):
        raise ValueError("beta must lie in [0,1/2)")
    if k < 1 or k > len(witness.points):
        raise ValueError("need 1 <= k <= number of witness points")
    if k > math.floor(1.0 / zeta) + 1e-9:
        raise ValueError("need k <= floor(1/zeta)")
    pts = list(witness.points[:k])
    hs = list(witness.witnesses[:k])
    if len(witness.points) > k:
        anchor = int(witness.points[k])
    else:
        rows = C.labels[[witness.center] + hs]
        agree_everywhere = np.flatnonzero(
            (rows.max(axis=0) == rows.min(axis=0))
            & ~np.isin(np.arange(C.n_points), pts)
        )
        if len(agree_everywhere) == 0:
            raise ValueError("no anchor point where all involved classifiers agree")
        anchor = int(agree_everywhere[0])
    support = tuple(pts + [anchor])
    weights = tuple([zeta] * k + [1.0 - zeta * k])
    marginal = FinDiscreteMarginal(support, weights)
    out = []
    for t in range(k):
        ht = C.labels[hs[t]]
        eta = [
            (1.0 - beta) if ht[x] > 0 else beta
            for x in pts
        ]
        eta.append(1.0 if ht[anchor] > 0 else 0.0)
        out.append(JointDistribution(marginal, tuple(eta)))
    return out


class StreamSampler:
    """Lazily sampled i.i.d. stream from a joint distribution.

    Point and label draws are pure functions of (seed, index); indices are
    0-based.  Labels are Bernoulli(eta(X_i)) using an independent uniform per
    index, so peeking at a point never perturbs any label.
    """

    def __init__(self, dist: JointDistribution, seed: int):
        self.dist = dist
        self.seed = int(seed)
        self._xs = UniformStream(self.seed, 0)
        self._ys = UniformStream(self.seed, 1)
        self._cum = np.cumsum(np.asarray(dist.weights))
        self._support = np.asarray(dist.support, dtype=np.int64)
        self._eta = np.asarray(dist.eta)

    def point(self, i: int) -> int:
        j = int(np.searchsorted(self._cum, self._xs.at(i), side="right"))
        j = min(j, len(self._support) - 1)
        return int(self._support[j])

    def points_at(self, indices: np.ndarray) -> np.ndarray:
        u = self._xs.at_many(indices)
        j = np.minimum(np.searchsorted(self._cum, u, side="right"), len(self._support) - 1)
        return self._support[j]

    def support_index(self, i: int) -> int:
        j = int(np.searchsorted(self._cum, self._xs.at(i), side="right"))
        return min(j, len(self._support) - 1)

    def support_indices_at(self, indices: np.ndarray) -> np.ndarray:
        u = self._xs.at_many(indices)
        return np.minimum(np.searchsorted(self._cum, u, side="right"), len(self._support) - 1)

    def label(self, i: int) -> int:
        j = self.support_index(i)
        return 1 if self._ys.at(i) < self._eta[j] else -1


def sample_stream(dist: JointDistribution, seed: int, count: int) -> LabeledSample:
    """First ``count`` labeled draws of the stream for (dist, seed)."""
    if count < 0:
        raise ValueError("count must be >= 0")
    s = StreamSampler(dist, seed)
    pairs = tuple((s.point(i), s.label(i)) for i in range(count))
    return LabeledSample(pairs)
