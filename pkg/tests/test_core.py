import itertools

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

import almlab as al
from almlab.core import SizeCapExceeded


def random_class(rng, max_points=6, max_hyps=8):
    n = int(rng.integers(2, max_points + 1))
    while True:
        m = int(rng.integers(2, max_hyps + 1))
        rows = rng.choice([-1, 1], size=(m, n))
        rows = np.unique(rows, axis=0)
        if rows.shape[0] >= 2:
            return al.HypothesisClass(al.InstanceDomain(n), rows)


def test_domain_validation():
    with pytest.raises(ValueError):
        al.InstanceDomain(0)
    with pytest.raises(ValueError):
        al.InstanceDomain(3, (0.0, 0.0, 1.0))
    d = al.uniform_grid(5)
    assert d.coords[0] == 0.0 and d.coords[-1] == 1.0


def test_class_rejects_duplicates_and_bad_labels():
    dom = al.InstanceDomain(3)
    with pytest.raises(ValueError):
        al.HypothesisClass(dom, [[1, 1, 1], [1, 1, 1]])
    with pytest.raises(ValueError):
        al.HypothesisClass(dom, [[1, 0, 1], [1, 1, 1]])
    with pytest.raises(ValueError):
        al.HypothesisClass(dom, [[1, 1, 1]])


def test_thresholds_counts_and_structure():
    C = al.build_thresholds(al.uniform_grid(3))
    assert C.n_hypotheses == 4
    assert al.vc_dimension(C) == 1
    # rows are monotone nondecreasing left to right in the +1 region
    for row in C.labels:
        seen_pos = False
        for v in row:
            if v > 0:
                seen_pos = True
            else:
                assert not seen_pos


def test_intervals_count():
    for n in (1, 2, 4, 7):
        C = al.build_intervals(al.uniform_grid(n))
        assert C.n_hypotheses == n * (n + 1) // 2 + 1


def test_intervals_vc_2():
    C = al.build_intervals(al.uniform_grid(5))
    assert al.vc_dimension(C) == 2


def test_min_width_tiny_w_equals_intervals():
    grid = al.uniform_grid(6)
    small = 1.0 / 12
    A = al.build_min_width_intervals(grid, small)
    B = al.build_intervals(grid)
    rows_a = {r.tobytes() for r in A.labels}
    rows_b = {r.tobytes() for r in B.labels}
    assert rows_a == rows_b


def test_min_width_rejects_bad_width():
    grid = al.uniform_grid(8)
    with pytest.raises(ValueError):
        al.build_min_width_intervals(grid, 0.0)
    with pytest.raises(ValueError):
        al.build_min_width_intervals(grid, 1.0)


def test_gap_classes_counts():
    assert al.build_gap_upper(5, 1).n_hypotheses == 6
    assert al.build_gap_upper(4, 4).n_hypotheses == 16
    assert al.build_gap_lower(6, 2).n_hypotheses == 8
    up = al.build_gap_upper(4, 4)
    lo = al.build_gap_lower(4, 4)
    assert {r.tobytes() for r in up.labels} == {r.tobytes() for r in lo.labels}


def test_gap_cap():
    with pytest.raises(SizeCapExceeded):
        al.build_gap_upper(30, 15, max_class=100)


def test_singletons():
    C = al.build_singletons_plus_allneg(3)
    assert C.n_hypotheses == 4
    assert al.vc_dimension(C) == 1


def test_vc_against_bruteforce():
    rng = np.random.default_rng(42)

    def naive_vc(C):
        best = 0
        for k in range(1, C.n_points + 1):
            for S in itertools.combinations(range(C.n_points), k):
                if len(np.unique(C.labels[:, S], axis=0)) == 2 ** k:
                    best = max(best, k)
        return best

    for _ in range(40):
        C = random_class(rng)
        assert al.vc_dimension(C) == naive_vc(C)


def test_gap_vc_values():
    for s, d in [(5, 2), (6, 2), (7, 3), (6, 1)]:
        assert al.vc_dimension(al.build_gap_upper(s, d)) == d
        assert al.vc_dimension(al.build_gap_lower(s, d)) == d


def test_version_space_and_disagreement():
    C = al.build_thresholds(al.uniform_grid(3))
    V = al.version_space(C, [])
    assert len(V) == C.n_hypotheses
    assert set(al.disagreement_region(V)) == {0, 1, 2}
    # full labeling pins down a single hypothesis
    target = 1
    full = [(x, int(C.labels[target, x])) for x in range(3)]
    V1 = al.version_space(C, full)
    assert V1.members == (target,)
    with pytest.raises(ValueError):
        al.disagreement_region(al.version_space(C, [(0, 1), (0, -1)]))
    assert al.disagreement_region(V1) == ()


def test_version_space_matches_row_filter():
    rng = np.random.default_rng(7)
    for _ in range(25):
        C = random_class(rng)
        k = int(rng.integers(0, C.n_points + 1))
        pts = rng.choice(C.n_points, size=k, replace=False)
        sample = [(int(x), int(rng.choice([-1, 1]))) for x in pts]
        V = al.version_space(C, sample)
        expected = [
            g for g in range(C.n_hypotheses)
            if all(C.labels[g, x] == y for x, y in sample)
        ]
        assert list(V.members) == expected


@given(st.data())
@settings(max_examples=40, deadline=None)
def test_version_space_antitone(data):
    rng = np.random.default_rng(data.draw(st.integers(0, 10 ** 6)))
    C = random_class(rng)
    pts = list(range(C.n_points))
    sample = [(x, int(rng.choice([-1, 1]))) for x in pts[: C.n_points // 2 + 1]]
    prefix = sample[: len(sample) // 2]
    assert set(al.version_space(C, sample).members) <= set(al.version_space(C, prefix).members)


def test_induced_labelings_matches_hash_grouping():
    rng = np.random.default_rng(3)
    for _ in range(25):
        C = random_class(rng)
        k = int(rng.integers(1, C.n_points + 1))
        U = sorted(int(x) for x in rng.choice(C.n_points, size=k, replace=False))
        reps = al.induced_labelings(C, U)
        seen = {}
        for i in range(C.n_hypotheses):
            seen.setdefault(C.labels[i, U].tobytes(), i)
        assert sorted(seen.values()) == reps
        # each realized restriction appears exactly once among representatives
        patterns = [C.labels[r, U].tobytes() for r in reps]
        assert len(set(patterns)) == len(patterns)
        assert set(patterns) == set(C.labels[i, U].tobytes() for i in range(C.n_hypotheses))


def test_induced_labelings_sauer_bound():
    C = al.build_gap_upper(6, 2)
    d = al.vc_dimension(C)
    for k in (2, 3, 4):
        U = list(range(k))
        reps = al.induced_labelings(C, U)
        assert len(reps) <= (np.e * max(len(U), d) / d) ** d + 1e-9


def test_serialization_roundtrip():
    for C in (
        al.build_thresholds(al.uniform_grid(4)),
        al.build_gap_lower(5, 2),
        al.build_min_width_intervals(al.uniform_grid(6), 0.4),
    ):
        text = C.to_text()
        D = al.HypothesisClass.from_text(text)
        assert np.array_equal(C.labels, D.labels)
        assert D.to_text() == text
        if C.domain.coords is not None:
            assert D.domain.coords == C.domain.coords


def test_serialization_rejects_garbage():
    with pytest.raises(ValueError):
        al.HypothesisClass.from_text("not a class\n++\n--\n")
