"""Exact combinatorial complexity measures for finite hypothesis classes.

All routines are exact within explicit size caps (SizeCapExceeded carries the
best bound otherwise), deterministic (ties broken by lowest point index, then
lowest hypothesis index), and cross-validated in the test suite against
independent brute-force oracles.
"""
from __future__ import annotations

import itertools
import math
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Sequence

import numpy as np

from .core import (
    DEFAULT_MAX_STATES,
    HypothesisClass,
    SizeCapExceeded,
    induced_labelings,
)

__all__ = [
    "FinDiscreteMarginal",
    "StarWitness",
    "ComplexityReport",
    "star_number",
    "is_star_set",
    "teaching_dim",
    "td",
    "xtd",
    "xptd",
    "vs_compression_size",
    "disagreement_coefficient",
    "split_count",
    "is_splittable",
    "ring_rho",
    "covering_number",
    "doubling_dimension",
]

_EPS = 1e-12


@dataclass(frozen=True)
class FinDiscreteMarginal:
    """Finitely supported probability measure over domain points."""

    support: tuple[int, ...]
    weights: tuple[float, ...]

    def __post_init__(self):
        if len(self.support) != len(self.weights):
            raise ValueError("support and weights must align")
        if len(set(self.support)) != len(self.support):
            raise ValueError("support points must be distinct")
        if any(w < 0 for w in self.weights):
            raise ValueError("weights must be nonnegative")
        if abs(sum(self.weights) - 1.0) > 1e-12:
            raise ValueError("weights must sum to 1")

    @classmethod
    def uniform(cls, points: Sequence[int]) -> "FinDiscreteMarginal":
        pts = tuple(int(p) for p in points)
        return cls(pts, tuple(1.0 / len(pts) for _ in pts))

    def weight_of(self, point: int) -> float:
        try:
            return self.weights[self.support.index(point)]
        except ValueError:
            return 0.0

    def distance(self, C: HypothesisClass, f: int, g: int) -> float:
        """Mass of the region where rows f and g disagree."""
        cols = list(self.support)
        diff = C.labels[f, cols] != C.labels[g, cols]
        return float(np.dot(diff, np.asarray(self.weights)))


@dataclass(frozen=True)
class StarWitness:
    """A point set where each point is privately flippable against the center.

    ``witnesses[i]`` differs from ``center`` at ``points[i]`` and agrees with
    it on every other point of the set.
    """

    center: int
    points: tuple[int, ...]
    witnesses: tuple[int, ...]


@dataclass(frozen=True)
class ComplexityReport:
    """Result of a measure computation with an honest exactness flag."""

    measure: str
    value: float | int
    exactness: str  # "exact" | "lower-bound" | "greedy-upper"
    witness: object | None = None
    details: dict = field(default_factory=dict)

    def to_json_dict(self) -> dict:
        w = self.witness
        if isinstance(w, StarWitness):
            w = {"center": w.center, "points": list(w.points), "witnesses": list(w.witnesses)}
        val = self.value
        if isinstance(val, Fraction):
            val = {"num": val.numerator, "den": val.denominator}
        return {
            "measure": self.measure,
            "value": val,
            "exactness": self.exactness,
            "witness": w,
            "details": {k: (str(v) if isinstance(v, Fraction) else v) for k, v in self.details.items()},
        }


# -- star sets -------------------------------------------------------------


def _diff_masks(C: HypothesisClass, center_labels: np.ndarray) -> list[int]:
    """Per-hypothesis bitmask of points where the row differs from the center."""
    diff = C.labels != center_labels[None, :]
    masks = []
    weights = 1 << np.arange(C.n_points, dtype=object)
    for row in diff:
        masks.append(int(np.dot(row.astype(object), weights)))
    return masks


def _is_run(mask: int) -> bool:
    lo = (mask & -mask).bit_length() - 1
    return mask == ((1 << (lo + mask.bit_count())) - (1 << lo))


def _max_star_runs(masks: list[int], n_points: int) -> tuple[int, tuple[int, ...], tuple[int, ...]]:
    """Exact maximum star set when every difference mask is one contiguous run.

    A contiguous run witnessing a star-set point only needs to dodge the
    point's two neighbors in the sorted set, so the maximum star set is a
    longest chain over consecutive point pairs: O(n^3) instead of subset
    search.
    """
    NONE = n_points + 1
    runs_at: list[list[tuple[int, int, int]]] = [[] for _ in range(n_points)]  # (lo, hi, hypothesis)
    for mid, m in enumerate(masks):
        if m == 0:
            continue
        lo = (m & -m).bit_length() - 1
        hi = m.bit_length() - 1
        for x in range(lo, hi + 1):
            runs_at[x].append((lo, hi, mid))
    pts = [x for x in range(n_points) if runs_at[x]]
    if not pts:
        return 0, (), ()
    # min_hi[x][a+1]: tightest right end over runs containing x with lo >= a+1
    min_hi: dict[int, list[int]] = {}
    for x in pts:
        by_lo = [NONE] * (n_points + 1)
        for lo, hi, _mid in runs_at[x]:
            if hi < by_lo[lo]:
                by_lo[lo] = hi
        arr = [NONE] * (n_points + 1)
        acc = NONE
        for a1 in range(n_points, -1, -1):
            if a1 < n_points and by_lo[a1] < acc:
                acc = by_lo[a1]
            arr[a1] = acc
        min_hi[x] = arr

    best_len, best_chain = 1, (pts[0],)
    # g[a][b]: (length, chain) of the best chain ending with the pair a -> b;
    # processing first elements in ascending order sees every insertion, since
    # transitions only ever extend a -> b into b -> c with b > a.
    g: dict[int, dict[int, tuple[int, tuple[int, ...]]]] = {a: {} for a in pts}
    for bi, b in enumerate(pts):
        for a in pts[:bi]:
            if min_hi[a][0] < b:        # a closable: some run ends before b
                g[a][b] = (2, (a, b))
    for a in pts:
        for b, (length, chain) in sorted(g[a].items()):
            if min_hi[b][a + 1] < NONE and length > best_len:
                best_len, best_chain = length, chain   # b closable on the right
            lim = min_hi[b][a + 1]
            for c in pts:
                if c <= b:
                    continue
                if lim < c:             # b's run fits strictly inside (a, c)
                    cur = g[b].get(c)
                    if cur is None or cur[0] < length + 1:
                        g[b][c] = (length + 1, chain + (c,))
    wits = []
    for i, x in enumerate(best_chain):
        left = best_chain[i - 1] if i > 0 else -1
        right = best_chain[i + 1] if i + 1 < len(best_chain) else NONE
        cand = [(mid, hi) for lo, hi, mid in runs_at[x] if lo > left and hi < right]
        wits.append(min(cand)[0])
    return best_len, best_chain, tuple(wits)


def _greedy_color_bound(cands: list[int], compat, cap: int) -> int:
    """Greedy proper coloring of the compatibility graph, stopping past ``cap``.

    Any proper coloring uses at least max-clique many colors, so the count is
    a sound upper bound on how many mutually compatible candidates remain; the
    scan aborts as soon as the bound can no longer trigger a prune.
    """
    colors: list[list[int]] = []
    for i in cands:
        placed = False
        for cls in colors:
            if all(not compat(i, j) for j in cls):
                cls.append(i)
                placed = True
                break
        if not placed:
            colors.append([i])
            if len(colors) > cap:
                return cap + 1
    return len(colors)


def _max_star_bb(masks: list[int], n_points: int, best_so_far: int,
                 node_budget: list[int]) -> tuple[int, tuple[int, ...], tuple[int, ...]]:
    """Largest star set for a fixed center via depth-first branch and bound.

    Star sets are downward closed for a fixed center, so the search adds
    points in increasing index order.  Witness availability per point is a
    bit set over the deduplicated difference masks, filtered by one AND per
    step; branches are cut by candidate count and by a greedy-coloring bound
    on the pairwise-compatibility graph of the remaining candidates.
    """
    uniq: dict[int, int] = {}
    for m in masks:
        if m and m not in uniq:
            uniq[m] = len(uniq)
    if not uniq:
        return 0, (), ()
    mask_list = list(uniq)
    k = len(mask_list)
    contain = [0] * n_points     # bit set of mask ids containing x
    avoid = [0] * n_points       # bit set of mask ids avoiding x
    full = (1 << k) - 1
    for mid, m in enumerate(mask_list):
        mm = m
        while mm:
            low = mm & -mm
            contain[low.bit_length() - 1] |= 1 << mid
            mm ^= low
    for x in range(n_points):
        avoid[x] = full & ~contain[x]

    best = [best_so_far, (), ()]

    def witness_ids(bitset: int) -> int:
        return (bitset & -bitset).bit_length() - 1

    def dfs(chosen: list[int], chosen_w: list[int], cand: list[tuple[int, int]]):
        node_budget[0] -= 1
        if node_budget[0] < 0:
            raise SizeCapExceeded("star search node budget exhausted")
        if len(chosen) > best[0]:
            best[0] = len(chosen)
            best[1] = tuple(chosen)
            best[2] = tuple(mask_list[witness_ids(w)] for w in chosen_w)
        if len(chosen) + len(cand) <= best[0]:
            return
        cap = best[0] - len(chosen)
        if chosen and len(cand) > cap >= 1:
            wmap = dict(cand)

            def compat(y, z):
                return bool(wmap[y] & avoid[z]) and bool(wmap[z] & avoid[y])

            if _greedy_color_bound([x for x, _ in cand], compat, cap) <= cap:
                return
        for idx, (x, wx) in enumerate(cand):
            if len(chosen) + (len(cand) - idx) <= best[0]:
                return
            av = avoid[x]
            new_chosen_w = []
            ok = True
            for w in chosen_w:
                w &= av
                if not w:
                    ok = False
                    break
                new_chosen_w.append(w)
            if not ok:
                continue
            new_chosen_w.append(wx)
            new_cand = []
            for y, wy in cand[idx + 1:]:
                wy &= av
                if wy:
                    new_cand.append((y, wy))
            dfs(chosen + [x], new_chosen_w, new_cand)

    dfs([], [], [(x, contain[x]) for x in range(n_points) if contain[x]])
    size, pts, wit_masks = best
    if size <= best_so_far:
        return size, (), ()
    # map chosen witness masks back to hypothesis indices later (caller side)
    return size, pts, wit_masks


def star_number(C: HypothesisClass, *, max_states: int = DEFAULT_MAX_STATES) -> ComplexityReport:
    """Largest star set size over all centers, with its witness.

    Exact when the branch-and-bound completes within ``max_states`` nodes;
    otherwise the report is flagged ``lower-bound`` and still carries a valid
    witness for the best set found.
    """
    n = C.n_points
    best_size = 0
    best_witness = StarWitness(0, (), ())
    node_budget = [max_states]
    exact = True
    for c in range(C.n_hypotheses):
        masks = _diff_masks(C, C.labels[c])
        if all(m == 0 or _is_run(m) for m in masks):
            size, pts, wits = _max_star_runs(masks, n)
        else:
            try:
                size, pts, wit_masks = _max_star_bb(masks, n, best_size, node_budget)
            except SizeCapExceeded:
                exact = False
                break
            first_h = {}
            for h, m in enumerate(masks):
                if m and m not in first_h:
                    first_h[m] = h
            wits = tuple(first_h[m] for m in wit_masks)
        if size > best_size:
            best_size = size
            best_witness = StarWitness(c, pts, wits)
        if best_size == n:
            break
    return ComplexityReport(
        measure="star",
        value=best_size,
        exactness="exact" if exact else "lower-bound",
        witness=best_witness,
        details={"nodes_used": max_states - node_budget[0]},
    )


def is_star_set(C: HypothesisClass, T: Sequence[int], center=None) -> tuple[bool, StarWitness | None]:
    """Check the private-flippability property of T, finding witnesses.

    ``center`` may be a row index, an explicit ±1 labeling (treated as an
    extra classifier added to the class, as needed when testing specifying
    sets for labelings outside it), or None to search all rows.
    """
    pts = [int(x) for x in T]
    if len(set(pts)) != len(pts):
        raise ValueError("star-set points must be distinct")
    if not pts:
        return True, StarWitness(0, (), ())

    def check(center_labels: np.ndarray, center_id: int) -> StarWitness | None:
        wits = []
        for x in pts:
            rest = [p for p in pts if p != x]
            cand = np.flatnonzero(
                (C.labels[:, x] != center_labels[x])
                & np.all(C.labels[:, rest] == center_labels[rest], axis=1)
            )
            if len(cand) == 0:
                return None
            wits.append(int(cand[0]))
        return StarWitness(center_id, tuple(pts), tuple(wits))

    if center is None:
        for c in range(C.n_hypotheses):
            w = check(C.labels[c], c)
            if w is not None:
                return True, w
        return False, None
    if isinstance(center, (int, np.integer)):
        w = check(C.labels[int(center)], int(center))
    else:
        lab = np.asarray(center, dtype=np.int8)
        if lab.shape != (C.n_points,):
            raise ValueError("center labeling must cover the domain")
        w = check(lab, -1)
    return (w is not None), w


# -- teaching dimensions ---------------------------------------------------


def _as_labeling(C: HypothesisClass, h) -> np.ndarray:
    if isinstance(h, (int, np.integer)):
        return C.labels[int(h)]
    lab = np.asarray(h, dtype=np.int8)
    if lab.shape != (C.n_points,):
        raise ValueError("labeling must cover the domain")
    return lab


def _min_subset_search(universe: list[int], valid, greedy_pick, *,
                       max_states: int, upper_hint: int | None = None) -> tuple[int, tuple[int, ...]]:
    """Smallest subset of ``universe`` passing ``valid``, lexicographically first.

    Seeds with a greedy cover for the upper bound, then searches subsets in
    increasing cardinality.  Raises SizeCapExceeded carrying the greedy bound
    if the enumeration would outgrow ``max_states``.
    """
    if valid(()):
        return 0, ()
    greedy: list[int] = []
    while not valid(tuple(greedy)):
        x = greedy_pick(tuple(greedy))
        if x is None or x in greedy:
            greedy = None  # greedy stalled; fall back to full search bound
            break
        greedy.append(x)
    upper = len(greedy) if greedy is not None else (upper_hint or len(universe))
    states = 0
    for t in range(1, upper + 1):
        states += math.comb(len(universe), t)
        if states > max_states:
            raise SizeCapExceeded(
                f"subset search would enumerate > {max_states} states",
                best_bound=upper,
                witness=tuple(sorted(greedy)) if greedy is not None else None,
            )
        for S in itertools.combinations(universe, t):
            if valid(S):
                return t, S
    return upper, tuple(sorted(greedy)) if greedy is not None else tuple(universe)


def teaching_dim(h, C: HypothesisClass, U: Sequence[int], *,
                 max_states: int = DEFAULT_MAX_STATES) -> tuple[int, tuple[int, ...]]:
    """Size (and lexicographically first example) of a minimal specifying set.

    A specifying set S ⊆ U leaves at most one representative of the distinct
    restrictions of C to U consistent with ``h`` on S.
    """
    pts = [int(x) for x in U]
    if not pts:
        raise ValueError("U must be nonempty")
    lab = _as_labeling(C, h)
    reps = induced_labelings(C, pts)
    k = len(reps)
    # bitmask over representatives agreeing with h at each point of U
    agree_at: dict[int, int] = {}
    for x in sorted(set(pts)):
        m = 0
        for j, r in enumerate(reps):
            if C.labels[r, x] == lab[x]:
                m |= 1 << j
        agree_at[x] = m
    full = (1 << k) - 1
    candidates = sorted(x for x in set(pts) if agree_at[x] != full)

    def survivors(S: tuple[int, ...]) -> int:
        m = full
        for x in S:
            m &= agree_at[x]
        return m

    def valid(S: tuple[int, ...]) -> bool:
        return survivors(S).bit_count() <= 1

    def greedy_pick(S: tuple[int, ...]):
        m = survivors(S)
        best_x, best_left = None, None
        for x in candidates:
            if x in S:
                continue
            left = (m & agree_at[x]).bit_count()
            if best_left is None or left < best_left:
                best_x, best_left = x, left
        return best_x

    return _min_subset_search(candidates, valid, greedy_pick, max_states=max_states)


def _distinct_subsets_upto(n: int, m: int):
    for t in range(1, min(m, n) + 1):
        yield from itertools.combinations(range(n), t)


def td(C: HypothesisClass, m: int, *, max_states: int = DEFAULT_MAX_STATES) -> int:
    """Worst-case minimal specifying-set size over class members and m-point sets.

    Repeated points never change a specifying set, so the maximization runs
    over distinct-point subsets of size at most m.
    """
    if m < 1:
        raise ValueError("m must be >= 1")
    best = 0
    for U in _distinct_subsets_upto(C.n_points, m):
        for r in induced_labelings(C, list(U)):
            k, _ = teaching_dim(r, C, list(U), max_states=max_states)
            best = max(best, k)
    return best


def xtd(C: HypothesisClass, m: int, *, max_states: int = DEFAULT_MAX_STATES) -> int:
    """As td(), but maximized over all ±1 labelings of each point set."""
    if m < 1:
        raise ValueError("m must be >= 1")
    best = 0
    for U in _distinct_subsets_upto(C.n_points, m):
        if (1 << len(U)) > max_states:
            raise SizeCapExceeded("too many labelings of U", best_bound=best)
        for bits in range(1 << len(U)):
            lab = np.full(C.n_points, -1, dtype=np.int8)
            for j, x in enumerate(U):
                lab[x] = 1 if (bits >> j) & 1 else -1
            k, _ = teaching_dim(lab, C, list(U), max_states=max_states)
            best = max(best, k)
    return best


def xptd(h, H: HypothesisClass, U: Sequence[int], delta: float, *,
         max_states: int = DEFAULT_MAX_STATES) -> tuple[int, tuple[int, ...]]:
    """Partial specifying-set size: leave at most delta·|H[U]| + 1 survivors."""
    if not (0.0 <= delta <= 1.0):
        raise ValueError("delta must lie in [0,1]")
    pts = [int(x) for x in U]
    if not pts:
        raise ValueError("U must be nonempty")
    lab = _as_labeling(H, h)
    reps = induced_labelings(H, pts)
    k = len(reps)
    threshold = delta * k + 1.0 + _EPS
    agree_at: dict[int, int] = {}
    for x in sorted(set(pts)):
        mask = 0
        for j, r in enumerate(reps):
            if H.labels[r, x] == lab[x]:
                mask |= 1 << j
        agree_at[x] = mask
    full = (1 << k) - 1
    candidates = sorted(x for x in set(pts) if agree_at[x] != full)

    def survivors(S):
        m = full
        for x in S:
            m &= agree_at[x]
        return m

    def valid(S) -> bool:
        return survivors(S).bit_count() <= threshold

    def greedy_pick(S):
        m = survivors(S)
        best_x, best_left = None, None
        for x in candidates:
            if x in S:
                continue
            left = (m & agree_at[x]).bit_count()
            if best_left is None or left < best_left:
                best_x, best_left = x, left
        return best_x

    return _min_subset_search(candidates, valid, greedy_pick, max_states=max_states)


def vs_compression_size(h: int, C: HypothesisClass, U: Sequence[int], *,
                        max_states: int = DEFAULT_MAX_STATES) -> tuple[int, tuple[int, ...]]:
    """Smallest S ⊆ U inducing the same version space as all of U for row h."""
    pts = [int(x) for x in U]
    if not pts:
        raise ValueError("U must be nonempty")
    lab = C.labels[int(h)]
    nC = C.n_hypotheses
    agree_at: dict[int, int] = {}
    for x in sorted(set(pts)):
        m = 0
        for g in range(nC):
            if C.labels[g, x] == lab[x]:
                m |= 1 << g
        agree_at[x] = m
    full = (1 << nC) - 1
    target = full
    for x in set(pts):
        target &= agree_at[x]
    candidates = sorted(x for x in set(pts) if agree_at[x] != full)

    def consistent(S) -> int:
        m = full
        for x in S:
            m &= agree_at[x]
        return m

    def valid(S) -> bool:
        return consistent(S) == target

    def greedy_pick(S):
        m = consistent(S)
        best_x, best_left = None, None
        for x in candidates:
            if x in S:
                continue
            left = (m & agree_at[x]).bit_count()
            if best_left is None or left < best_left:
                best_x, best_left = x, left
        return best_x

    return _min_subset_search(candidates, valid, greedy_pick, max_states=max_states)


# -- disagreement coefficient ----------------------------------------------


def _dis_mass(C: HypothesisClass, members: np.ndarray, P: FinDiscreteMarginal) -> float:
    if len(members) == 0:
        return 0.0
    cols = list(P.support)
    sub = C.labels[np.asarray(members)][:, cols]
    dis = sub.max(axis=0) != sub.min(axis=0)
    return float(np.dot(dis, np.asarray(P.weights)))


def disagreement_coefficient(C: HypothesisClass, h: int, P: FinDiscreteMarginal,
                             r0: float) -> float:
    """sup over r > r0 of P(DIS(ball of radius r around h))/r, floored at 1.

    The mass of the disagreement region of the ball is a right-continuous
    step function of r jumping only at the distances {P(g ≠ h)}, so the
    supremum is attained in the limit r ↓ r* at a candidate r* among those
    distances exceeding r0 — plus r0 itself when r0 > 0.  At r0 = 0 the
    zero-radius ball has null disagreement mass on a finite class, so the
    positive-distance candidates carry the whole supremum.
    """
    if r0 < 0:
        raise ValueError("r0 must be >= 0")
    dists = np.array([P.distance(C, h, g) for g in range(C.n_hypotheses)])
    candidates = sorted({float(d) for d in dists if d > r0 + _EPS})
    if r0 > 0:
        candidates.append(float(r0))
    best = 1.0
    for r in candidates:
        ball = np.flatnonzero(dists <= r + _EPS)
        mass = _dis_mass(C, ball, P)
        if r > 0:
            best = max(best, mass / r)
    return best


# -- splitting -------------------------------------------------------------


def split_count(C: HypothesisClass, Q, x: int) -> int:
    """Pairs guaranteed eliminated by querying x: |Q| minus the largest
    same-label-agreeing subset."""
    pairs = [tuple(sorted(p)) for p in Q]
    if len(set(pairs)) != len(pairs):
        raise ValueError("Q must contain distinct unordered pairs")
    n_plus = n_minus = 0
    for f, g in pairs:
        a, b = C.labels[f, x], C.labels[g, x]
        if a == b == 1:
            n_plus += 1
        elif a == b == -1:
            n_minus += 1
    return len(pairs) - max(n_plus, n_minus)


def is_splittable(C: HypothesisClass, H: Sequence[int], rho: float, Delta: float,
                  tau: float, P: FinDiscreteMarginal, *,
                  max_states: int = DEFAULT_MAX_STATES) -> bool:
    """Whether every pair set at distance >= Delta within H splits well.

    True iff every finite Q of pairs from H with P-distance at least Delta has
    mass at least tau of points eliminating a rho fraction of Q.
    """
    members = [int(i) for i in H]
    pairs = [
        (f, g)
        for f, g in itertools.combinations(members, 2)
        if P.distance(C, f, g) >= Delta - _EPS
    ]
    if len(pairs) and (1 << len(pairs)) > max_states:
        raise SizeCapExceeded(f"2^{len(pairs)} pair subsets exceed the cap")
    w = np.asarray(P.weights)
    # per pair and support point: +1/-1 if both agree with that label, 0 if split
    profiles = []
    for f, g in pairs:
        cols = list(P.support)
        a, b = C.labels[f, cols], C.labels[g, cols]
        profiles.append(np.where(a != b, 0, a))
    for bits in range(1, 1 << len(pairs)):
        chosen = [profiles[i] for i in range(len(pairs)) if (bits >> i) & 1]
        qn = len(chosen)
        stack = np.stack(chosen)
        agree_plus = (stack == 1).sum(axis=0)
        agree_minus = (stack == -1).sum(axis=0)
        split = qn - np.maximum(agree_plus, agree_minus)
        mass = float(np.dot(split >= rho * qn - _EPS, w))
        if mass < tau - _EPS:
            return False
    return True


def ring_rho(C: HypothesisClass, P: FinDiscreteMarginal, *,
             max_states: int = DEFAULT_MAX_STATES) -> Fraction:
    """Worst-case guaranteed split fraction over the support, as an exact rational.

    Minimum over nonempty pair sets Q (pairs disagreeing somewhere on the
    support) of max over support points of split_count(Q,x)/|Q|.  Pairs with
    identical agree/disagree profiles on the support are interchangeable, so
    the enumeration runs over profile multiplicity vectors.
    """
    cols = list(P.support)
    profile_counts: dict[tuple, int] = {}
    for f, g in itertools.combinations(range(C.n_hypotheses), 2):
        a, b = C.labels[f, cols], C.labels[g, cols]
        if np.all(a == b):
            continue
        key = tuple(int(v) for v in np.where(a != b, 0, a))
        profile_counts[key] = profile_counts.get(key, 0) + 1
    if not profile_counts:
        raise ValueError("no pair disagrees on the support")
    profiles = list(profile_counts)
    counts = [profile_counts[p] for p in profiles]
    states = 1
    for c in counts:
        states *= c + 1
    plus = np.array([[1 if v == 1 else 0 for v in p] for p in profiles], dtype=np.int64)
    minus = np.array([[1 if v == -1 else 0 for v in p] for p in profiles], dtype=np.int64)
    if states > max_states:
        # every singleton Q scores exactly 1, an upper estimate on the minimum
        raise SizeCapExceeded(f"{states} profile multisets exceed the cap",
                              best_bound=Fraction(1, 1))

    best_num, best_den = 1, 1  # value 1 achieved by any single pair
    vectors = itertools.product(*(range(c + 1) for c in counts))
    chunk: list[tuple[int, ...]] = []

    def flush(chunk_list):
        nonlocal best_num, best_den
        if not chunk_list:
            return
        M = np.asarray(chunk_list, dtype=np.int64)
        qn = M.sum(axis=1)
        keep = qn > 0
        if not keep.any():
            return
        M, qn = M[keep], qn[keep]
        agree = np.maximum(M @ plus, M @ minus)
        max_split = qn - agree.min(axis=1)
        # minimize max_split/qn by exact cross-multiplication
        for ms, q in zip(max_split.tolist(), qn.tolist()):
            if ms * best_den < best_num * q:
                best_num, best_den = ms, q

    for vec in vectors:
        chunk.append(vec)
        if len(chunk) >= 65536:
            flush(chunk)
            chunk = []
    flush(chunk)
    return Fraction(best_num, best_den)


# -- covers and doubling ---------------------------------------------------


def covering_number(C: HypothesisClass, H: Sequence[int], r: float,
                    P: FinDiscreteMarginal, *, exact_cap: int = 48,
                    max_states: int = DEFAULT_MAX_STATES) -> ComplexityReport:
    """Smallest number of members of H within distance r of everyone in H.

    Covers are internal (centers drawn from H): internal covers are what the
    packing argument bounds from above, and every lower-bound argument for
    arbitrary-center covers applies to them a fortiori.  Exact via set-cover
    branch and bound up to ``exact_cap`` members, greedy farthest-point above
    it (flagged "greedy-upper").
    """
    members = [int(i) for i in H]
    k = len(members)
    if k == 0:
        raise ValueError("H must be nonempty")
    cols = list(P.support)
    w = np.asarray(P.weights)
    sub = C.labels[members][:, cols]
    dist = np.zeros((k, k))
    for i in range(k):
        dist[i] = ((sub != sub[i][None, :]) * w[None, :]).sum(axis=1)
    covers = dist <= r + _EPS  # covers[i, j]: center i covers member j

    if k > exact_cap:
        order = _greedy_cover(covers)
        return ComplexityReport("cover", len(order), "greedy-upper",
                                witness=tuple(members[i] for i in order))

    best_order = _greedy_cover(covers)
    best = [len(best_order), best_order]
    cover_masks = []
    for i in range(k):
        m = 0
        for j in range(k):
            if covers[i, j]:
                m |= 1 << j
        cover_masks.append(m)
    full = (1 << k) - 1
    nodes = [max_states]

    def dfs(covered: int, chosen: list[int]):
        nodes[0] -= 1
        if nodes[0] < 0:
            raise SizeCapExceeded("set-cover node budget exhausted", best_bound=best[0])
        if covered == full:
            if len(chosen) < best[0]:
                best[0] = len(chosen)
                best[1] = list(chosen)
            return
        if len(chosen) + 1 >= best[0]:
            # even one more center cannot beat the incumbent unless it finishes
            remaining = full & ~covered
            for i in range(k):
                if cover_masks[i] & remaining == remaining:
                    if len(chosen) + 1 < best[0]:
                        best[0] = len(chosen) + 1
                        best[1] = chosen + [i]
                    return
            return
        # branch on the uncovered element with fewest available centers
        remaining = full & ~covered
        pick, pick_opts = None, None
        mm = remaining
        while mm:
            low = mm & -mm
            j = low.bit_length() - 1
            opts = [i for i in range(k) if covers[i, j]]
            if pick_opts is None or len(opts) < len(pick_opts):
                pick, pick_opts = j, opts
            mm ^= low
        for i in pick_opts:
            dfs(covered | cover_masks[i], chosen + [i])

    dfs(0, [])
    return ComplexityReport("cover", best[0], "exact",
                            witness=tuple(members[i] for i in best[1]))


def _greedy_cover(covers: np.ndarray) -> list[int]:
    k = covers.shape[0]
    uncovered = set(range(k))
    chosen: list[int] = []
    while uncovered:
        gains = [(len(uncovered & {j for j in range(k) if covers[i, j]}), -i) for i in range(k)]
        gain, neg_i = max(gains)
        i = -neg_i
        if gain == 0:
            raise RuntimeError("greedy cover stalled")  # cannot happen: i covers itself
        chosen.append(i)
        uncovered -= {j for j in range(k) if covers[i, j]}
    return chosen


def doubling_dimension(C: HypothesisClass, h: int, P: FinDiscreteMarginal,
                       eps: float, *, exact_cap: int = 48,
                       max_states: int = DEFAULT_MAX_STATES) -> ComplexityReport:
    """max over r >= eps of log2 of the (r/2)-covering number of the radius-r ball.

    The ball is constant between consecutive distances and its covering number
    only shrinks as r grows within such an interval, so the candidate radii
    are eps plus the distances P(g ≠ h) at least eps.
    """
    if not (0.0 < eps <= 1.0):
        raise ValueError("eps must lie in (0,1]")
    dists = np.array([P.distance(C, g, h) for g in range(C.n_hypotheses)])
    candidates = sorted({float(eps)} | {float(d) for d in dists if d >= eps - _EPS})
    best = 0.0
    exact = True
    best_r = eps
    for r in candidates:
        ball = [int(g) for g in np.flatnonzero(dists <= r + _EPS)]
        rep = covering_number(C, ball, r / 2.0, P, exact_cap=exact_cap, max_states=max_states)
        if rep.exactness != "exact":
            exact = False
        val = math.log2(rep.value)
        if val > best:
            best = val
            best_r = r
    return ComplexityReport("doubling", best, "exact" if exact else "greedy-upper",
                            details={"radius": best_r})
