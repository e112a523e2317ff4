"""Acceptance suite: one test per criterion, each printing a PASS line.

Statistical criteria pin their seeds and scales here; combinatorial criteria
are exact.  Run with `pytest -s tests/test_acceptance.py` to see the lines.
"""
import itertools
import math
import time
from fractions import Fraction

import numpy as np
import pytest

import almlab as al
from almlab import harness
from almlab.complexity import FinDiscreteMarginal
from almlab.harness import ExperimentConfig
from almlab.learners import MembershipOracle, QueryOracle


def report(num, name, ok, extra=""):
    status = "PASS" if ok else "FAIL"
    print(f"[acceptance {num:02d}] {name}: {status} {extra}")
    assert ok, f"criterion {num} ({name}) failed: {extra}"


def random_class(rng, max_points, max_hyps, min_points=2):
    n = int(rng.integers(min_points, max_points + 1))
    while True:
        m = int(rng.integers(2, max_hyps + 1))
        rows = np.unique(rng.choice([-1, 1], size=(m, n)), axis=0)
        if rows.shape[0] >= 2:
            return al.HypothesisClass(al.InstanceDomain(n), rows)


def star_oracle(C):
    n, m = C.n_points, C.n_hypotheses
    best = 0
    for bits in range(1 << n):
        T = [x for x in range(n) if (bits >> x) & 1]
        if len(T) <= best:
            continue
        for c in range(m):
            ok = True
            for x in T:
                if not any(
                    C.labels[h, x] != C.labels[c, x]
                    and all(C.labels[h, y] == C.labels[c, y] for y in T if y != x)
                    for h in range(m)
                ):
                    ok = False
                    break
            if ok:
                best = len(T)
                break
    return best


def test_criterion_01_star_oracle_equivalence():
    rng = np.random.default_rng(20240101)
    t0 = time.time()
    for _ in range(200):
        C = random_class(rng, max_points=7, max_hyps=12)
        rep = al.star_number(C)
        assert rep.exactness == "exact"
        assert rep.value == star_oracle(C)
    elapsed = time.time() - t0
    report(1, "star-number oracle equivalence (200 classes)", elapsed < 60.0,
           f"elapsed={elapsed:.1f}s")


def test_criterion_02_worked_examples():
    ok = True
    notes = []
    for n in (4, 16, 64):
        s = al.star_number(al.build_thresholds(al.uniform_grid(n))).value
        ok &= s == 2
        notes.append(f"thr({n})={s}")
    for n in (4, 8, 16):
        s = al.star_number(al.build_intervals(al.uniform_grid(n))).value
        ok &= s == n
        notes.append(f"int({n})={s}")
    for w in (0.5, 2.0 / 3.0):
        C = al.build_min_width_intervals(al.uniform_grid(64), w)
        rep = al.star_number(C)
        lo, hi = math.floor(2.0 / w), math.floor(2.0 / w) + 2
        ok &= rep.exactness == "exact" and lo <= rep.value <= hi
        notes.append(f"wid({w:.2f})={rep.value} in [{lo},{hi}]")
    report(2, "worked star-number examples", ok, " ".join(notes))


def _theorem7_suite():
    rng = np.random.default_rng(777)
    cases = [
        al.build_thresholds(al.uniform_grid(8)),
        al.build_gap_lower(6, 2),
        al.build_gap_upper(5, 2),
    ]
    cases += [random_class(rng, max_points=5, max_hyps=8) for _ in range(100)]
    return cases


SUITE_RECORDS = []   # (C, U, h_labels, h_is_row, row, k, S) gathered for reuse


def test_criterion_03_theorem7_identity():
    SUITE_RECORDS.clear()
    ok = True
    first_fail = ""
    for ci, C in enumerate(_theorem7_suite()):
        s = int(al.star_number(C).value)
        for m in range(1, 7):
            v_td = al.td(C, m)
            v_xtd = al.xtd(C, m)
            if not (v_td == v_xtd == min(s, m)):
                ok = False
                first_fail = first_fail or f"class#{ci} m={m} td={v_td} xtd={v_xtd} want={min(s, m)}"
        # gather specifying sets on a few subsets for criteria 4 and 5
        rng = np.random.default_rng(1000 + ci)
        for _ in range(3):
            size = int(rng.integers(1, min(C.n_points, 6) + 1))
            U = sorted(int(x) for x in rng.choice(C.n_points, size=size, replace=False))
            for r in al.induced_labelings(C, U):
                k, S = al.teaching_dim(r, C, U)
                SUITE_RECORDS.append((C, U, C.labels[r], True, r, k, S))
            bits = int(rng.integers(0, 1 << size))
            lab = np.full(C.n_points, -1, dtype=np.int8)
            for j, x in enumerate(U):
                lab[x] = 1 if (bits >> j) & 1 else -1
            k, S = al.teaching_dim(lab, C, U)
            SUITE_RECORDS.append((C, U, lab, False, -1, k, S))
    report(3, "teaching-dimension growth identity", ok, first_fail)


def test_criterion_04_specifying_sets_are_star_sets():
    assert SUITE_RECORDS, "criterion 3 must run first"
    violations = 0
    for C, U, lab, _, _, k, S in SUITE_RECORDS:
        good, _ = al.is_star_set(C, S, center=lab)
        violations += not good
    report(4, f"minimal specifying sets are star sets ({len(SUITE_RECORDS)} sets)",
           violations == 0, f"violations={violations}")


def test_criterion_05_compression_identity():
    assert SUITE_RECORDS, "criterion 3 must run first"
    checked = 0
    ok = True
    for C, U, lab, is_row, row, k, S in SUITE_RECORDS:
        if not is_row:
            continue
        kc, _ = al.vs_compression_size(row, C, U)
        ok &= kc == k
        checked += 1
    report(5, f"compression equals empirical teaching dimension ({checked} cases)", ok)


def test_criterion_06_disagreement_coefficient():
    ok = True
    notes = []
    for m in (2, 4, 8):
        C = al.build_singletons_plus_allneg(m)
        star = al.star_number(C).witness
        P = FinDiscreteMarginal.uniform(star.points)
        for eps in (1.0 / 3.0, 0.1):
            theta = al.disagreement_coefficient(C, star.center, P, eps)
            want = min(m, 1.0 / eps)
            if abs(theta - want) > 1e-12:
                ok = False
                notes.append(f"m={m} eps={eps:.3f} theta={theta} want={want}")
    G = al.build_gap_lower(6, 2)
    s = int(al.star_number(G).value)
    rng = np.random.default_rng(606)
    for _ in range(500):
        size = int(rng.integers(1, 7))
        pts = sorted(int(x) for x in rng.choice(6, size=size, replace=False))
        w = rng.random(size) + 1e-3
        w /= w.sum()
        w[-1] += 1.0 - w.sum()
        P = FinDiscreteMarginal(tuple(pts), tuple(float(v) for v in w))
        h = int(rng.integers(0, G.n_hypotheses))
        for eps in (1.0 / 3.0, 0.1):
            theta = al.disagreement_coefficient(G, h, P, eps)
            if theta > min(s, 1.0 / eps) + 1e-9:
                ok = False
                notes.append(f"random P: theta={theta} bound={min(s, 1.0 / eps)}")
    report(6, "disagreement coefficient: star exact + 500 sampled bounds", ok,
           "; ".join(notes[:3]))


def test_criterion_07_splitting():
    ok = True
    notes = []
    for m in (2, 3, 4):
        C = al.build_singletons_plus_allneg(m + 2)
        star = al.star_number(C).witness
        P = FinDiscreteMarginal.uniform(star.points[:m])
        rows = sorted({star.center, *star.witnesses[:m]})
        sub = al.HypothesisClass(C.domain, C.labels[rows])
        val = al.ring_rho(sub, P)
        if val != Fraction(1, m):
            ok = False
            notes.append(f"star m={m}: {val}")
    rng = np.random.default_rng(707)
    done = 0
    while done < 100:
        C = random_class(rng, max_points=5, max_hyps=5)
        s = int(al.star_number(C).value)
        size = int(rng.integers(1, C.n_points + 1))
        pts = sorted(int(x) for x in rng.choice(C.n_points, size=size, replace=False))
        P = FinDiscreteMarginal.uniform(pts)
        try:
            val = al.ring_rho(C, P)
        except ValueError:
            continue
        if val < Fraction(1, s):
            ok = False
            notes.append(f"support {pts}: {val} < 1/{s}")
        done += 1
    report(7, "splitting: star support exact 1/m + 100 sampled lower bounds", ok,
           "; ".join(notes[:3]))


def test_criterion_08_doubling():
    ok = True
    notes = []
    instances = 0
    for m in (2, 3, 4, 5, 6):
        C = al.build_singletons_plus_allneg(m)
        star = al.star_number(C).witness
        d = al.vc_dimension(C)
        for eps in (1.0 / m, 1.0 / (2 * m)):
            P = FinDiscreteMarginal.uniform(star.points)
            rep = al.doubling_dimension(C, star.center, P, eps)
            theta = al.disagreement_coefficient(C, star.center, P, eps)
            instances += 1
            if rep.exactness != "exact":
                ok = False
                notes.append(f"star m={m} not exact")
            if rep.value < math.log2(m + 1) - 1e-9:
                ok = False
                notes.append(f"star m={m}: D={rep.value} < log2({m + 1})")
            if rep.value > 2 * d * math.log2(22 * math.e ** 2 * theta) + 1e-9:
                ok = False
                notes.append(f"star m={m}: upper bound broken")
    rng = np.random.default_rng(808)
    while instances < 50:
        C = random_class(rng, max_points=5, max_hyps=7)
        d = al.vc_dimension(C)
        size = int(rng.integers(1, C.n_points + 1))
        pts = sorted(int(x) for x in rng.choice(C.n_points, size=size, replace=False))
        P = FinDiscreteMarginal.uniform(pts)
        h = int(rng.integers(0, C.n_hypotheses))
        eps = float(rng.choice([0.15, 0.3]))
        rep = al.doubling_dimension(C, h, P, eps)
        theta = al.disagreement_coefficient(C, h, P, eps)
        instances += 1
        if rep.exactness != "exact":
            ok = False
            notes.append("random instance not exact")
        if rep.value > 2 * d * math.log2(22 * math.e ** 2 * theta) + 1e-9:
            ok = False
            notes.append(f"random: D={rep.value} theta={theta} d={d}")
    report(8, f"doubling dimension bounds ({instances} exact instances)", ok,
           "; ".join(notes[:3]))


def test_criterion_09_memb_halving_bound():
    C = al.build_gap_lower(8, 2)
    U = list(range(8))
    reps = al.induced_labelings(C, U)
    xtd_u = 0
    for bits in range(1 << len(U)):
        lab = np.full(C.n_points, -1, dtype=np.int8)
        for j, x in enumerate(U):
            lab[x] = 1 if (bits >> j) & 1 else -1
        k, _ = al.teaching_dim(lab, C, U)
        xtd_u = max(xtd_u, k)
    bound = 2 * (xtd_u / max(1, math.log2(xtd_u))) * math.log2(len(reps))
    rng = np.random.default_rng(909)
    ok = True
    worst_q = 0
    for trial in range(100):
        t = int(rng.integers(0, C.n_hypotheses))
        order = [int(x) for x in rng.permutation(8)]
        oracle = MembershipOracle(math.ceil(bound), target=C.labels[t])
        res = al.memb_halving2(C, order, oracle)
        worst_q = max(worst_q, res.queries)
        if not np.array_equal(C.labels[res.hypothesis, U], C.labels[t, U]):
            ok = False
        if res.queries > bound:
            ok = False
    report(9, "membership halving identifies within the query bound", ok,
           f"bound={bound:.2f} worst={worst_q}")


def test_criterion_10_algorithm1_statistical():
    t0 = time.time()
    C = al.build_singletons_plus_allneg(16)
    star = al.star_number(C).witness
    eps, delta, beta = 0.1, 0.1, 0.2
    k, zeta = 4, 0.1
    members = al.rr_family(C, star, k, zeta, beta)
    gamma_hat = al.gamma_hat_default("BN", eps, beta=beta)
    scale = 1e-5
    params_probe = al.Alg1Params(eps=eps, delta=delta, gamma_hat=gamma_hat, d=1,
                                 constant_scale=scale)
    assert params_probe.m_tilde <= 5000, params_probe.m_tilde
    cfg = ExperimentConfig(
        algo="alg1", C=C, class_label="singletons:16",
        members=members, member_labels=[f"rr:t{t}" for t in range(k)],
        eps_list=[eps], delta=delta, trials=400, seed=1001,
        constant_scale=scale, search_trials=40, budget_cap=1 << 17,
        learner_options={"gamma_hat": gamma_hat, "d": 1},
    )
    lc = harness.measure_label_complexity(cfg)
    est = lc.per_eps[eps]
    elapsed = time.time() - t0
    ok = est.wilson_lb >= 1 - delta and est.trials >= 400 and not est.capped
    report(10, "repeated-query learner statistical correctness", ok,
           f"n_hat={est.n_hat} success={est.successes}/{est.trials} "
           f"wilson_lb={est.wilson_lb:.4f} m_tilde={params_probe.m_tilde} "
           f"elapsed={elapsed:.0f}s")
    assert elapsed < 600


def test_criterion_11_cal_scaling_split():
    # thresholds: budget grows additively/logarithmically in 1/eps
    C = al.build_thresholds(al.uniform_grid(1 << 10))
    marg = FinDiscreteMarginal.uniform(range(C.n_points))
    targets = [256, 512, 768]
    members = [al.make_realizable(C, t, marg) for t in targets]
    eps = 1.0 / 16
    cfg = ExperimentConfig(
        algo="cal", C=C, class_label="thresholds:1024",
        members=members, member_labels=[f"t{t}" for t in targets],
        eps_list=[eps, eps / 4], delta=0.2, trials=40, seed=2002,
        search_trials=40, budget_cap=1 << 12,
        learner_options={"max_unlabeled": 4096},
    )
    lc = harness.measure_label_complexity(cfg)
    n_base = lc.per_eps[eps].n_hat
    n_fine = lc.per_eps[eps / 4].n_hat
    ok_thr = (n_fine - n_base) <= 0.25 * n_base * math.log2(4) + 1e-9
    # singletons: budget scales multiplicatively in 1/eps
    S = al.build_singletons_plus_allneg(64)
    w = np.array([1.0 / (i + 1) for i in range(64)])
    w /= w.sum()
    w[-1] += 1.0 - w.sum()
    margS = FinDiscreteMarginal(tuple(range(64)), tuple(float(v) for v in w))
    membersS = [al.make_realizable(S, 0, margS)]   # all-negative target: worst case
    cfgS = ExperimentConfig(
        algo="cal", C=S, class_label="singletons:64",
        members=membersS, member_labels=["allneg"],
        eps_list=[1.0 / 16, 1.0 / 32, 1.0 / 64], delta=0.2, trials=40, seed=2003,
        search_trials=40, budget_cap=1 << 12,
        learner_options={"max_unlabeled": 4096},
    )
    lcS = harness.measure_label_complexity(cfgS)
    r1 = lcS.per_eps[1.0 / 32].n_hat / max(lcS.per_eps[1.0 / 16].n_hat, 1)
    r2 = lcS.per_eps[1.0 / 64].n_hat / max(lcS.per_eps[1.0 / 32].n_hat, 1)
    ok_sing = r1 >= 1.5 and r2 >= 1.5
    report(11, "scaling split: log-like vs linear-like budget growth",
           ok_thr and ok_sing,
           f"thresholds {n_base}->{n_fine}; singletons ratios {r1:.2f},{r2:.2f}")


CONFIG_TMPL = """
[class]
kind = thresholds
n = 16

[dist]
kind = realizable
target = 7

[learner]
algo = cal
max_unlabeled = 256

[run]
eps = 0.25,0.125
delta = 0.2
trials = 25
seed = 99
out_csv = {csv}
out_json = {json}
"""


def test_criterion_12_determinism(tmp_path, monkeypatch):
    blobs = []
    for threads in ("1", "8", "1", "8"):
        monkeypatch.setenv("ALMLAB_THREADS", threads)
        csv_path = tmp_path / f"d{len(blobs)}.csv"
        cfg = tmp_path / f"c{len(blobs)}.conf"
        cfg.write_text(CONFIG_TMPL.format(csv=csv_path, json=tmp_path / f"r{len(blobs)}.json"))
        assert harness.run_config(str(cfg)) == 0
        blobs.append(csv_path.read_bytes())
    ok = all(b == blobs[0] for b in blobs)
    report(12, "byte-identical simulate output across reruns and thread counts", ok)
