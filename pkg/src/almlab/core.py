"""Finite instance domains, hypothesis classes, and version spaces.

Everything in this package works over a finite ordered instance domain whose
points are the integers ``0..n-1``.  A hypothesis class is a dense matrix of
``{-1,+1}`` labels, one row per classifier; all combinatorial quantities are
computed exactly on that matrix (with explicit size caps on the exponential
searches).  Values are immutable after construction and safe to share.
"""
from __future__ import annotations

import itertools
from dataclasses import dataclass
from typing import Iterable, Sequence

import numpy as np

__all__ = [
    "SizeCapExceeded",
    "InstanceDomain",
    "HypothesisClass",
    "VersionSpace",
    "LabeledSample",
    "uniform_grid",
    "build_thresholds",
    "build_intervals",
    "build_min_width_intervals",
    "build_gap_upper",
    "build_gap_lower",
    "build_singletons_plus_allneg",
    "version_space",
    "disagreement_region",
    "induced_labelings",
    "vc_dimension",
]

# Exponential searches are permitted only below these defaults; beyond them the
# exact routines raise SizeCapExceeded carrying their best established bound.
DEFAULT_MAX_CLASS = 4096
DEFAULT_MAX_STATES = 1 << 24


class SizeCapExceeded(RuntimeError):
    """An exact combinatorial search hit its configured cap.

    ``best_bound`` carries the best bound (and optional witness) established
    before the search was cut off.
    """

    def __init__(self, message: str, best_bound=None, witness=None):
        super().__init__(message)
        self.best_bound = best_bound
        self.witness = witness


@dataclass(frozen=True)
class InstanceDomain:
    """Finite ordered instance space; points are the integers 0..size-1.

    ``coords`` optionally attaches a strictly increasing real coordinate to
    each point, used by the geometric class constructors.
    """

    size: int
    coords: tuple[float, ...] | None = None

    def __post_init__(self):
        if self.size < 1:
            raise ValueError("domain must contain at least one point")
        if self.coords is not None:
            if len(self.coords) != self.size:
                raise ValueError("coords length must equal domain size")
            if any(b <= a for a, b in zip(self.coords, self.coords[1:])):
                raise ValueError("coords must be strictly increasing")

    @property
    def points(self) -> range:
        return range(self.size)

    def coord(self, x: int) -> float:
        if self.coords is None:
            raise ValueError("domain has no coordinates")
        return self.coords[x]


def uniform_grid(n: int, lo: float = 0.0, hi: float = 1.0) -> InstanceDomain:
    """Evenly spaced n-point domain on [lo, hi]."""
    if n == 1:
        return InstanceDomain(1, (lo,))
    step = (hi - lo) / (n - 1)
    return InstanceDomain(n, tuple(lo + i * step for i in range(n)))


class HypothesisClass:
    """Finite set of ±1 classifiers over a finite domain, stored densely.

    Rows of ``labels`` are the classifiers; duplicate rows are rejected so the
    matrix is a faithful quotient of whatever construction produced it.
    """

    def __init__(self, domain: InstanceDomain, labels, names: Sequence[str] | None = None):
        labels = np.asarray(labels, dtype=np.int8)
        if labels.ndim != 2 or labels.shape[1] != domain.size:
            raise ValueError("labels must be a (hypotheses x points) matrix")
        if labels.shape[0] < 2:
            raise ValueError("a hypothesis class needs at least 2 classifiers")
        if not np.all(np.abs(labels) == 1):
            raise ValueError("labels must be -1 or +1")
        seen: dict[bytes, int] = {}
        for i, row in enumerate(labels):
            key = row.tobytes()
            if key in seen:
                raise ValueError(f"duplicate classifier rows {seen[key]} and {i}")
            seen[key] = i
        if names is not None and len(names) != labels.shape[0]:
            raise ValueError("names length must match hypothesis count")
        self.domain = domain
        self.labels = labels
        self.labels.setflags(write=False)
        self.names = tuple(names) if names is not None else None

    @property
    def n_hypotheses(self) -> int:
        return self.labels.shape[0]

    @property
    def n_points(self) -> int:
        return self.labels.shape[1]

    def row(self, h: int) -> np.ndarray:
        return self.labels[h]

    def name(self, h: int) -> str:
        return self.names[h] if self.names is not None else f"h{h}"

    def __len__(self) -> int:
        return self.n_hypotheses

    def __repr__(self) -> str:
        return f"HypothesisClass(|X|={self.n_points}, |C|={self.n_hypotheses})"

    # -- serialization: header line, one +/- row per hypothesis -------------

    def to_text(self) -> str:
        lines = [f"almclass v1 |X|={self.n_points} |C|={self.n_hypotheses}"]
        if self.domain.coords is not None:
            lines.append("coords: " + " ".join(repr(c) for c in self.domain.coords))
        for row in self.labels:
            lines.append("".join("+" if v > 0 else "-" for v in row))
        return "\n".join(lines) + "\n"

    @classmethod
    def from_text(cls, text: str) -> "HypothesisClass":
        lines = [ln for ln in text.splitlines() if ln.strip()]
        if not lines or not lines[0].startswith("almclass v1"):
            raise ValueError("not an almclass v1 file")
        header = lines[0].split()
        n = int(header[2].split("=")[1])
        m = int(header[3].split("=")[1])
        body = lines[1:]
        coords = None
        if body and body[0].startswith("coords:"):
            coords = tuple(float(tok) for tok in body[0].split()[1:])
            body = body[1:]
        if len(body) != m:
            raise ValueError(f"expected {m} rows, found {len(body)}")
        rows = []
        for ln in body:
            if len(ln) != n or set(ln) - {"+", "-"}:
                raise ValueError(f"bad row {ln!r}")
            rows.append([1 if ch == "+" else -1 for ch in ln])
        return cls(InstanceDomain(n, coords), np.array(rows, dtype=np.int8))


@dataclass(frozen=True)
class LabeledSample:
    """Ordered list of (point, label) pairs with labels in {-1,+1}."""

    pairs: tuple[tuple[int, int], ...]

    def __post_init__(self):
        for x, y in self.pairs:
            if y not in (-1, 1):
                raise ValueError(f"label at point {x} must be -1 or +1, got {y}")

    def __iter__(self):
        return iter(self.pairs)

    def __len__(self) -> int:
        return len(self.pairs)


@dataclass(frozen=True)
class VersionSpace:
    """Members of a class consistent with every constraint that induced it."""

    klass: HypothesisClass
    members: tuple[int, ...]
    constraints: tuple[tuple[int, int], ...]

    def __len__(self) -> int:
        return len(self.members)


def _pairs(sample) -> list[tuple[int, int]]:
    return [(int(x), int(y)) for x, y in sample]


def version_space(C: HypothesisClass, sample) -> VersionSpace:
    """Exact subset of C agreeing with every (point, label) pair; may be empty."""
    pairs = _pairs(sample)
    keep = np.ones(C.n_hypotheses, dtype=bool)
    for x, y in pairs:
        keep &= C.labels[:, x] == y
    return VersionSpace(C, tuple(int(i) for i in np.flatnonzero(keep)), tuple(pairs))


def disagreement_region(V: VersionSpace) -> tuple[int, ...]:
    """Points where some pair of version-space members disagrees."""
    if not V.members:
        raise ValueError("empty version space has no disagreement region")
    sub = V.klass.labels[list(V.members)]
    dis = sub.max(axis=0) != sub.min(axis=0)
    return tuple(int(x) for x in np.flatnonzero(dis))


def induced_labelings(C: HypothesisClass, U: Sequence[int]) -> list[int]:
    """One representative row index per distinct restriction of C to U.

    Representatives are the lowest original row index realizing each
    restriction, listed in increasing row order.
    """
    if len(U) == 0:
        raise ValueError("U must be nonempty")
    cols = C.labels[:, list(U)]
    seen: dict[bytes, int] = {}
    for i, row in enumerate(cols):
        key = row.tobytes()
        if key not in seen:
            seen[key] = i
    return sorted(seen.values())


def vc_dimension(C: HypothesisClass, *, max_states: int = DEFAULT_MAX_STATES) -> int:
    """Exact VC dimension via level-wise shattering search.

    A set can be shattered only if all its subsets are, so level k+1 extends
    only the shatterable k-sets.  Raises SizeCapExceeded (carrying the best
    lower bound) if the frontier outgrows ``max_states``.
    """
    n = C.n_points
    m = C.n_hypotheses
    # level 1: points where both labels occur
    frontier = [
        (x,) for x in range(n)
        if C.labels[:, x].max() > C.labels[:, x].min()
    ]
    if not frontier:
        return 0
    d = 1
    frontier_set = set(frontier)
    while True:
        if (1 << (d + 1)) > m:
            return d  # fewer rows than labelings needed for a (d+1)-set
        nxt = []
        states = 0
        for S in frontier:
            for x in range(S[-1] + 1, n):
                states += 1
                if states > max_states:
                    raise SizeCapExceeded(
                        f"vc_dimension frontier exceeded {max_states} states",
                        best_bound=d,
                    )
                cand = S + (x,)
                if any(cand[:i] + cand[i + 1:] not in frontier_set for i in range(len(S))):
                    continue
                cols = C.labels[:, list(cand)]
                if len(np.unique(cols, axis=0)) == 1 << len(cand):
                    nxt.append(cand)
        if not nxt:
            return d
        frontier = nxt
        frontier_set = set(nxt)
        d += 1
        if d == n:
            return d


# -- class constructors ---------------------------------------------------


def _dedupe_rows(rows: Iterable[Sequence[int]]) -> np.ndarray:
    out = []
    seen = set()
    for row in rows:
        arr = np.asarray(row, dtype=np.int8)
        key = arr.tobytes()
        if key not in seen:
            seen.add(key)
            out.append(arr)
    return np.array(out, dtype=np.int8)


def build_thresholds(grid: InstanceDomain) -> HypothesisClass:
    """Monotone cut classifiers: +1 from some grid point rightward.

    One hypothesis per cut position plus the all-negative labeling (cut above
    the grid); n+1 classifiers for an n-point grid.
    """
    if grid.coords is None:
        raise ValueError("thresholds need a coordinate grid")
    n = grid.size
    rows = [[1 if j >= i else -1 for j in range(n)] for i in range(n)]
    rows.append([-1] * n)
    return HypothesisClass(grid, _dedupe_rows(rows))


def build_intervals(grid: InstanceDomain) -> HypothesisClass:
    """+1 exactly on a window of consecutive grid points, plus all-negative.

    n(n+1)/2 + 1 classifiers for an n-point grid.
    """
    if grid.coords is None:
        raise ValueError("intervals need a coordinate grid")
    n = grid.size
    rows = []
    for a in range(n):
        for b in range(a, n):
            rows.append([1 if a <= j <= b else -1 for j in range(n)])
    rows.append([-1] * n)
    return HypothesisClass(grid, _dedupe_rows(rows))


def build_min_width_intervals(grid: InstanceDomain, w: float, *, refine: int = 2) -> HypothesisClass:
    """Grid labelings of real intervals [a,b] with b-a >= w.

    Interval endpoints live on a finite lattice: the grid coordinates with
    each gap subdivided ``refine`` times, plus anchor endpoints beyond both
    ends of the grid so intervals may protrude past the domain (a width-w
    interval strictly left of the grid realizes the all-negative labeling).
    """
    if grid.coords is None:
        raise ValueError("min-width intervals need a coordinate grid")
    if not (0.0 < w < 1.0):
        raise ValueError("width must lie strictly between 0 and 1")
    if refine < 1:
        raise ValueError("refine must be >= 1")
    coords = np.asarray(grid.coords, dtype=float)
    lo, hi = float(coords[0]), float(coords[-1])
    lattice: list[float] = []
    for a, b in zip(coords, coords[1:]):
        for t in range(refine):
            lattice.append(a + (b - a) * t / refine)
    lattice.append(hi)
    # anchors allowing overhang past either end of the grid
    lattice = [lo - 1.0 - w, lo - 1.0] + lattice + [hi + 1.0, hi + 1.0 + w]
    lattice_arr = np.array(sorted(set(lattice)))
    rows = []
    for i, a in enumerate(lattice_arr):
        for b in lattice_arr[i:]:
            if b - a < w:
                continue
            rows.append(np.where((coords >= a) & (coords <= b), 1, -1).astype(np.int8))
    rows.append(np.full(grid.size, -1, dtype=np.int8))
    return HypothesisClass(grid, _dedupe_rows(rows))


def build_gap_upper(s: int, d: int, *, max_class: int = DEFAULT_MAX_CLASS) -> HypothesisClass:
    """Indicators of all subsets of an s-point domain with at most d elements."""
    if not (1 <= d <= s):
        raise ValueError("need 1 <= d <= s")
    count = sum(_binom(s, k) for k in range(d + 1))
    if count > max_class:
        raise SizeCapExceeded(f"class would have {count} > {max_class} hypotheses")
    rows = []
    for k in range(d + 1):
        for S in itertools.combinations(range(s), k):
            row = np.full(s, -1, dtype=np.int8)
            row[list(S)] = 1
            rows.append(row)
    return HypothesisClass(InstanceDomain(s), np.array(rows, dtype=np.int8))


def build_gap_lower(s: int, d: int, *, max_class: int = DEFAULT_MAX_CLASS) -> HypothesisClass:
    """Indicators of every subset of the first d points, plus the remaining singletons."""
    if not (1 <= d <= s):
        raise ValueError("need 1 <= d <= s")
    if (1 << d) + max(0, s - d) > max_class:
        raise SizeCapExceeded(f"class would exceed {max_class} hypotheses")
    rows = []
    for k in range(d + 1):
        for S in itertools.combinations(range(d), k):
            row = np.full(s, -1, dtype=np.int8)
            row[list(S)] = 1
            rows.append(row)
    for i in range(d, s):
        row = np.full(s, -1, dtype=np.int8)
        row[i] = 1
        rows.append(row)
    return HypothesisClass(InstanceDomain(s), _dedupe_rows(rows))


def build_singletons_plus_allneg(n: int) -> HypothesisClass:
    """n singleton indicators plus the all-negative classifier."""
    if n < 1:
        raise ValueError("need n >= 1")
    rows = [np.full(n, -1, dtype=np.int8)]
    for i in range(n):
        row = np.full(n, -1, dtype=np.int8)
        row[i] = 1
        rows.append(row)
    return HypothesisClass(InstanceDomain(n), np.array(rows, dtype=np.int8))


def _binom(n: int, k: int) -> int:
    import math

    return math.comb(n, k)
