"""Experiment runner: empirical label-complexity curves and theorem checks.

Trials are embarrassingly parallel; every trial derives its random stream
from (master seed, member, trial) alone, so results are byte-identical under
any thread count.  Statistical acceptance uses Wilson lower confidence
bounds on the success rate, never point estimates.
"""
from __future__ import annotations

import csv
import io
import json
import math
import os
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Callable, Sequence

import numpy as np

from . import complexity as cx
from . import core, learners, noise
from .core import HypothesisClass
from .noise import JointDistribution

__all__ = [
    "ExperimentConfig",
    "TrialRecord",
    "EmpiricalLC",
    "EpsEstimate",
    "wilson_lower_bound",
    "measure_label_complexity",
    "verify_equivalences",
    "run_config",
    "parse_config",
    "build_class",
    "build_distributions",
    "max_threads",
]

SCHEMA = "almlab-report-1"
CSV_HEADER = ["algo", "class", "noise", "eps", "delta", "trial", "budget", "queries", "excess", "success"]


def max_threads() -> int:
    env = os.environ.get("ALMLAB_THREADS")
    if env:
        return max(1, int(env))
    return min(8, os.cpu_count() or 1)


def wilson_lower_bound(successes: int, trials: int, z: float = 1.96) -> float:
    if trials == 0:
        return 0.0
    p = successes / trials
    denom = 1.0 + z * z / trials
    center = p + z * z / (2 * trials)
    rad = z * math.sqrt(p * (1 - p) / trials + z * z / (4 * trials * trials))
    return max(0.0, (center - rad) / denom)


@dataclass
class TrialRecord:
    trial: int
    budget: int
    queries: int
    excess: float
    success: bool


@dataclass
class EpsEstimate:
    eps: float
    n_hat: int
    successes: int
    trials: int
    wilson_lb: float
    search_trace: tuple[tuple[int, int, int], ...]   # (budget, successes, trials)
    capped: bool = False


@dataclass
class EmpiricalLC:
    """Worst-case empirical budget needs over a distribution family."""

    per_eps: dict[float, EpsEstimate]
    per_member: dict[float, dict[int, int]]   # eps -> member -> n_hat
    records: list[tuple[str, float, TrialRecord]] = field(default_factory=list)


@dataclass
class ExperimentConfig:
    algo: str
    C: HypothesisClass
    class_label: str
    members: list[JointDistribution]
    member_labels: list[str]
    eps_list: list[float]
    delta: float
    trials: int
    seed: int
    constant_scale: float = 1.0
    search_trials: int | None = None
    budget_cap: int = 1 << 20
    learner_options: dict = field(default_factory=dict)

    def __post_init__(self):
        if self.trials < 1:
            raise ValueError("trials must be >= 1")
        if any(not (0.0 < e < 1.0) for e in self.eps_list):
            raise ValueError("eps values must lie in (0,1)")
        if 1 < self.trials < math.ceil(10.0 / self.delta):
            import warnings

            warnings.warn(f"trials={self.trials} is below the recommended "
                          f"ceil(10/delta)={math.ceil(10.0 / self.delta)}")


def _derive_seed(master: int, *parts: int) -> int:
    ss = np.random.SeedSequence(entropy=int(master), spawn_key=tuple(int(p) for p in parts))
    return int(ss.generate_state(1, np.uint64)[0])


def _run_single_trial(cfg: ExperimentConfig, dist: JointDistribution, eps: float,
                      member: int, n: int, trial: int) -> TrialRecord:
    seed = _derive_seed(cfg.seed, member, trial)
    algo = cfg.algo
    opts = cfg.learner_options
    C = cfg.C
    if algo == "erm":
        sample = noise.sample_stream(dist, seed, n)
        res = learners.erm_passive(sample, C)
    elif algo == "cal":
        oracle = learners.QueryOracle(dist, seed, n)
        res = learners.cal(oracle, C, opts.get("max_unlabeled", 4096))
    elif algo == "halving":
        pool = opts.get("pool") or sorted(set(dist.support))
        oracle = learners.MembershipOracle(n, dist=dist, seed=seed)
        res = learners.memb_halving2(C, pool, oracle, n)
    elif algo == "alg0":
        oracle = learners.QueryOracle(dist, seed, n)
        res = learners.algorithm0(oracle, C, opts["s_value"], eps, cfg.delta,
                                  cfg.constant_scale)
    elif algo == "alg1":
        params = learners.Alg1Params(
            eps=eps, delta=cfg.delta, gamma_hat=opts["gamma_hat"], d=opts["d"],
            constant_scale=cfg.constant_scale)
        oracle = learners.SplitOracle(dist, seed, n)
        res = learners.algorithm1(oracle, C, n, params)
    else:
        raise ValueError(f"unknown algo {algo!r}")
    excess = noise.excess_error(C.labels[res.hypothesis], dist, C)
    return TrialRecord(trial=trial, budget=n, queries=res.queries,
                       excess=excess, success=excess <= eps + 1e-12)


def _success_at(cfg: ExperimentConfig, dist: JointDistribution, eps: float,
                member: int, n: int, trials: int, pool: ThreadPoolExecutor,
                sink: list) -> tuple[int, int]:
    runs = list(pool.map(
        lambda t: _run_single_trial(cfg, dist, eps, member, n, t), range(trials)))
    for rec in runs:
        sink.append((cfg.member_labels[member], eps, rec))
    return sum(r.success for r in runs), trials


def measure_label_complexity(cfg: ExperimentConfig) -> EmpiricalLC:
    """Doubling-then-bisection search for the least budget passing the target.

    For each accuracy value and family member, finds the smallest budget n
    whose Wilson 95% lower confidence bound on the success rate reaches
    1 - delta; the family estimate is the worst member's.
    """
    target = 1.0 - cfg.delta
    search_trials = cfg.search_trials or cfg.trials
    per_eps: dict[float, EpsEstimate] = {}
    per_member: dict[float, dict[int, int]] = {}
    records: list = []
    with ThreadPoolExecutor(max_workers=max_threads()) as pool:
        for eps in cfg.eps_list:
            per_member[eps] = {}
            family_trace: list[tuple[int, int, int]] = []
            for mi, dist in enumerate(cfg.members):
                n = 1
                capped = False
                trace: list[tuple[int, int, int]] = []
                while True:
                    succ, tot = _success_at(cfg, dist, eps, mi, n, search_trials, pool, records)
                    trace.append((n, succ, tot))
                    if wilson_lower_bound(succ, tot) >= target:
                        break
                    if n >= cfg.budget_cap:
                        capped = True
                        break
                    n = min(2 * n, cfg.budget_cap)
                if capped:
                    per_member[eps][mi] = cfg.budget_cap
                    family_trace.extend(trace)
                    continue
                hi = n
                lo = trace[-2][0] if len(trace) >= 2 else 0
                while hi - lo > 1:
                    mid = (lo + hi) // 2
                    succ, tot = _success_at(cfg, dist, eps, mi, mid, search_trials, pool, records)
                    trace.append((mid, succ, tot))
                    if wilson_lower_bound(succ, tot) >= target:
                        hi = mid
                    else:
                        lo = mid
                per_member[eps][mi] = hi
                family_trace.extend(trace)
            worst_member = max(per_member[eps], key=lambda m: per_member[eps][m])
            n_hat = per_member[eps][worst_member]
            succ, tot = _success_at(cfg, cfg.members[worst_member], eps, worst_member,
                                    n_hat, cfg.trials, pool, records)
            per_eps[eps] = EpsEstimate(
                eps=eps, n_hat=n_hat, successes=succ, trials=tot,
                wilson_lb=wilson_lower_bound(succ, tot),
                search_trace=tuple(family_trace),
                capped=any(per_member[eps][m] >= cfg.budget_cap for m in per_member[eps]),
            )
    return EmpiricalLC(per_eps=per_eps, per_member=per_member, records=records)


# -- equivalence-theorem verification ----------------------------------------


@dataclass
class VerifyLimits:
    m_max: int = 4
    random_instances: int = 10
    marginal_samples: int = 25
    eps_values: tuple[float, ...] = (1.0 / 3.0, 0.1)
    delta_values: tuple[float, ...] = (0.0, 0.2, 0.4)


def _random_marginal(rng: np.random.Generator, n_points: int) -> cx.FinDiscreteMarginal:
    size = int(rng.integers(1, n_points + 1))
    pts = tuple(int(x) for x in sorted(rng.choice(n_points, size=size, replace=False)))
    w = rng.random(size) + 1e-3
    w /= w.sum()
    w[-1] += 1.0 - w.sum()  # absorb rounding so the weights sum exactly
    return cx.FinDiscreteMarginal(pts, tuple(float(v) for v in w))


def verify_equivalences(C: HypothesisClass, limits: VerifyLimits | None = None,
                        seed: int = 0) -> dict:
    """Run the identity and bracket checks tying every measure to the star number."""
    limits = limits or VerifyLimits()
    rng = np.random.Generator(np.random.Philox(np.random.SeedSequence(seed)))
    report: dict[str, dict] = {}
    star = cx.star_number(C)
    s = int(star.value)
    witness = star.witness

    def record(name: str, ok: bool, **details):
        report[name] = {"pass": bool(ok), **details}

    # growth-function identity and its companions
    ok, fails = True, []
    spec_sets: list[tuple] = []
    for m in range(1, limits.m_max + 1):
        v_td = cx.td(C, m)
        v_xtd = cx.xtd(C, m)
        if not (v_td == v_xtd == min(s, m)):
            ok = False
            fails.append({"m": m, "td": v_td, "xtd": v_xtd, "expected": min(s, m)})
    record("teaching-dim-identity", ok, failures=fails, star=s)

    # specifying sets are star sets centered at their labeling
    ok, fails = True, []
    n = C.n_points
    for size in range(1, min(limits.m_max, n) + 1):
        subsets = [tuple(sorted(rng.choice(n, size=size, replace=False)))
                   for _ in range(min(limits.random_instances, 8))]
        for U in subsets:
            for r in core.induced_labelings(C, list(U)):
                k, S = cx.teaching_dim(r, C, list(U))
                good, _ = cx.is_star_set(C, S, center=r)
                if not good:
                    ok = False
                    fails.append({"U": U, "h": int(r), "S": S})
                k2, S2 = cx.vs_compression_size(r, C, list(U))
                if k2 != k:
                    ok = False
                    fails.append({"U": U, "h": int(r), "td": k, "compression": k2})
    record("specifying-sets-and-compression", ok, failures=fails)

    # disagreement coefficient: exact on the star construction, bounded elsewhere
    ok, fails = True, []
    for eps in limits.eps_values:
        if witness.points:
            mstar = min(len(witness.points), max(1, math.floor(1.0 / eps)))
            P = cx.FinDiscreteMarginal.uniform(witness.points[:mstar])
            theta = cx.disagreement_coefficient(C, witness.center, P, eps)
            want = min(mstar, 1.0 / eps)
            if abs(theta - want) > 1e-9:
                ok = False
                fails.append({"eps": eps, "theta": theta, "expected": want})
        for _ in range(limits.marginal_samples):
            P = _random_marginal(rng, n)
            h = int(rng.integers(0, C.n_hypotheses))
            theta = cx.disagreement_coefficient(C, h, P, eps)
            if theta > min(s, 1.0 / eps) + 1e-9:
                ok = False
                fails.append({"eps": eps, "h": h, "theta": theta, "bound": min(s, 1.0 / eps)})
    record("disagreement-coefficient", ok, failures=fails)

    # splitting: star support achieves 1/m; every support stays >= 1/star,
    # checked on small random subclasses to keep the pair enumeration exact
    ok, fails = True, []
    if witness.points:
        mstar = min(len(witness.points), 4)
        rows = sorted({witness.center, *witness.witnesses[:mstar]})
        star_sub = HypothesisClass(C.domain, C.labels[rows])
        P = cx.FinDiscreteMarginal.uniform(witness.points[:mstar])
        val = cx.ring_rho(star_sub, P)
        if val != Fraction(1, mstar):
            ok = False
            fails.append({"support": "star", "value": str(val), "expected": f"1/{mstar}"})
    for _ in range(min(limits.marginal_samples, 10)):
        size = int(rng.integers(2, min(C.n_hypotheses, 5) + 1))
        rows = sorted(int(r) for r in rng.choice(C.n_hypotheses, size=size, replace=False))
        sub = HypothesisClass(C.domain, C.labels[rows])
        s_sub = int(cx.star_number(sub).value)
        supp_size = int(rng.integers(1, min(n, 4) + 1))
        pts = sorted(int(x) for x in rng.choice(n, size=supp_size, replace=False))
        P = cx.FinDiscreteMarginal.uniform(pts)
        try:
            val = cx.ring_rho(sub, P)
        except (ValueError, core.SizeCapExceeded):
            continue
        if val < Fraction(1, s_sub):
            ok = False
            fails.append({"rows": rows, "support": P.support, "value": str(val)})
    record("splitting", ok, failures=fails)

    # partial specifying sets: bracket around (1-O(delta)) * min(s, m)
    ok, fails = True, []
    if witness.points:
        for delta in limits.delta_values:
            if delta > 0.5:
                continue
            mstar = min(len(witness.points), limits.m_max)
            U = list(witness.points[:mstar])
            rows = [witness.center] + [witness.witnesses[i] for i in range(mstar)]
            sub = HypothesisClass(C.domain, C.labels[sorted(set(rows))])
            k, _ = cx.xptd(_row_of(sub, C.labels[witness.center]), sub, U, delta)
            lo = math.ceil((1 - 2 * delta) * mstar)
            hi = math.ceil((1 - delta / (1 + delta)) * mstar)
            if not (lo <= k <= hi):
                ok = False
                fails.append({"delta": delta, "xptd": k, "bracket": (lo, hi)})
    record("partial-teaching-bracket", ok, failures=fails)

    # doubling: star construction forces log2(m+1); cover-vs-theta inequality
    ok, fails = True, []
    d = core.vc_dimension(C)
    for eps in limits.eps_values:
        if witness.points:
            mstar = min(len(witness.points), max(1, math.floor(1.0 / eps)))
            P = cx.FinDiscreteMarginal.uniform(witness.points[:mstar])
            rep = cx.doubling_dimension(C, witness.center, P, eps)
            if rep.exactness == "exact" and rep.value < math.log2(mstar + 1) - 1e-9:
                ok = False
                fails.append({"eps": eps, "doubling": rep.value, "lower": math.log2(mstar + 1)})
        for _ in range(min(limits.marginal_samples, 10)):
            P = _random_marginal(rng, n)
            h = int(rng.integers(0, C.n_hypotheses))
            rep = cx.doubling_dimension(C, h, P, eps)
            if rep.exactness != "exact":
                continue
            theta = cx.disagreement_coefficient(C, h, P, eps)
            bound = 2 * d * math.log2(22 * math.e ** 2 * theta)
            if rep.value > bound + 1e-9:
                ok = False
                fails.append({"eps": eps, "h": h, "doubling": rep.value, "bound": bound})
    record("doubling-dimension", ok, failures=fails)

    # random subclasses satisfy the same growth identity with their own star number
    ok, fails = True, []
    for _ in range(limits.random_instances):
        size = int(rng.integers(2, min(C.n_hypotheses, 8) + 1))
        rows = sorted(int(r) for r in rng.choice(C.n_hypotheses, size=size, replace=False))
        sub = HypothesisClass(C.domain, C.labels[rows])
        s_sub = int(cx.star_number(sub).value)
        for m in (1, 2, 3):
            if cx.xtd(sub, m) != min(s_sub, m) or cx.td(sub, m) != min(s_sub, m):
                ok = False
                fails.append({"rows": rows, "m": m})
    record("random-subclasses", ok, failures=fails)

    report["all_pass"] = all(v["pass"] for k, v in report.items() if isinstance(v, dict))
    return report


def _row_of(sub: HypothesisClass, labels: np.ndarray) -> int:
    for i in range(sub.n_hypotheses):
        if np.array_equal(sub.labels[i], labels):
            return i
    raise ValueError("row not found in subclass")


# -- config files -------------------------------------------------------------

_REQUIRED = {
    "class": {"kind"},
    "dist": {"kind"},
    "learner": {"algo"},
    "run": {"eps", "delta", "trials", "seed", "out_csv", "out_json"},
}
_KNOWN = {
    "class": {"kind", "n", "d", "w", "path", "refine"},
    "dist": {"kind", "target", "marginal", "k", "zeta", "beta", "path"},
    "learner": {"algo", "max_unlabeled", "gamma_hat", "scale", "s_value"},
    "run": {"eps", "delta", "trials", "search_trials", "seed", "budget_cap",
            "out_csv", "out_json", "svg"},
}


class ConfigError(ValueError):
    pass


def parse_config(text: str) -> dict[str, dict[str, str]]:
    """Flat key=value sections; unknown sections or keys are errors."""
    sections: dict[str, dict[str, str]] = {}
    current: str | None = None
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        if line.startswith("[") and line.endswith("]"):
            current = line[1:-1].strip()
            if current not in _KNOWN:
                raise ConfigError(f"line {lineno}: unknown section [{current}]")
            sections.setdefault(current, {})
            continue
        if current is None or "=" not in line:
            raise ConfigError(f"line {lineno}: expected 'key = value' inside a section")
        key, value = (part.strip() for part in line.split("=", 1))
        if key not in _KNOWN[current]:
            raise ConfigError(f"line {lineno}: unknown key '{key}' in [{current}]")
        sections[current][key] = value
    for sec, required in _REQUIRED.items():
        if sec not in sections:
            raise ConfigError(f"missing section [{sec}]")
        missing = required - sections[sec].keys()
        if missing:
            raise ConfigError(f"section [{sec}] missing required key '{sorted(missing)[0]}'")
    return sections


def build_class(cfg: dict[str, str]) -> tuple[HypothesisClass, str]:
    kind = cfg["kind"]
    if kind == "file":
        with open(cfg["path"], encoding="utf-8") as fh:
            return HypothesisClass.from_text(fh.read()), f"file:{cfg['path']}"
    n = int(cfg.get("n", "8"))
    if kind == "thresholds":
        return core.build_thresholds(core.uniform_grid(n)), f"thresholds:{n}"
    if kind == "intervals":
        return core.build_intervals(core.uniform_grid(n)), f"intervals:{n}"
    if kind == "minwidth":
        w = float(cfg["w"])
        refine = int(cfg.get("refine", "2"))
        return (core.build_min_width_intervals(core.uniform_grid(n), w, refine=refine),
                f"minwidth:{n}:{w}")
    if kind == "gap_upper":
        d = int(cfg["d"])
        return core.build_gap_upper(n, d), f"gap_upper:{n}:{d}"
    if kind == "gap_lower":
        d = int(cfg["d"])
        return core.build_gap_lower(n, d), f"gap_lower:{n}:{d}"
    if kind == "singletons":
        return core.build_singletons_plus_allneg(n), f"singletons:{n}"
    raise ConfigError(f"unknown class kind '{kind}'")


def _marginal_for(C: HypothesisClass, name: str) -> cx.FinDiscreteMarginal:
    n = C.n_points
    if name == "uniform":
        return cx.FinDiscreteMarginal.uniform(range(n))
    if name == "harmonic":
        w = np.array([1.0 / (i + 1) for i in range(n)])
        w /= w.sum()
        return cx.FinDiscreteMarginal(tuple(range(n)), tuple(float(v) for v in w))
    raise ConfigError(f"unknown marginal '{name}'")


def build_distributions(cfg: dict[str, str], C: HypothesisClass) -> tuple[list[JointDistribution], list[str], str]:
    kind = cfg["kind"]
    if kind == "file":
        with open(cfg["path"], encoding="utf-8") as fh:
            d = JointDistribution.from_text(fh.read())
        return [d], [f"file:{cfg['path']}"], f"file:{cfg['path']}"
    if kind == "realizable":
        marg = _marginal_for(C, cfg.get("marginal", "uniform"))
        target = cfg.get("target", "0")
        rows = range(C.n_hypotheses) if target == "all" else [int(target)]
        dists = [noise.make_realizable(C, r, marg) for r in rows]
        labels = [f"re:t{r}" for r in rows]
        return dists, labels, f"realizable:{target}"
    if kind == "rr":
        k = int(cfg["k"])
        zeta = float(cfg["zeta"])
        beta = float(cfg["beta"])
        star = cx.star_number(C)
        dists = noise.rr_family(C, star.witness, k, zeta, beta)
        labels = [f"rr:k{k}:t{t}" for t in range(len(dists))]
        return dists, labels, f"rr:{k}:{zeta}:{beta}"
    raise ConfigError(f"unknown dist kind '{kind}'")


def _fmt(v) -> str:
    if isinstance(v, bool):
        return "1" if v else "0"
    if isinstance(v, float):
        return repr(v)
    return str(v)


def run_config(path: str) -> int:
    """Execute a config file; returns a process exit status."""
    try:
        with open(path, encoding="utf-8") as fh:
            sections = parse_config(fh.read())
        C, class_label = build_class(sections["class"])
        members, member_labels, noise_label = build_distributions(sections["dist"], C)
        run = sections["run"]
        learner_sec = sections["learner"]
        algo = learner_sec["algo"]
        opts: dict = {}
        if "max_unlabeled" in learner_sec:
            opts["max_unlabeled"] = int(learner_sec["max_unlabeled"])
        if algo == "alg0":
            opts["s_value"] = int(learner_sec.get("s_value") or cx.star_number(C).value)
        if algo == "alg1":
            opts["d"] = core.vc_dimension(C)
            gh = learner_sec.get("gamma_hat")
            if gh is None:
                raise ConfigError("section [learner] missing required key 'gamma_hat' for alg1")
            opts["gamma_hat"] = float(gh)
        cfg = ExperimentConfig(
            algo=algo,
            C=C,
            class_label=class_label,
            members=members,
            member_labels=member_labels,
            eps_list=[float(tok) for tok in run["eps"].split(",")],
            delta=float(run["delta"]),
            trials=int(run["trials"]),
            seed=int(run["seed"]),
            constant_scale=float(learner_sec.get("scale", "1.0")),
            search_trials=int(run["search_trials"]) if "search_trials" in run else None,
            budget_cap=int(run.get("budget_cap", str(1 << 20))),
        )
        cfg.learner_options = opts
        lc = measure_label_complexity(cfg)
        _write_csv(run["out_csv"], cfg, lc)
        _write_json(run["out_json"], cfg, lc)
        if "svg" in run:
            _write_svg(run["svg"], lc)
    except KeyError as exc:
        print(f"error: missing required key {exc}")
        return 2
    except (ConfigError, OSError, ValueError) as exc:
        print(f"error: {exc}")
        return 2
    return 0


def _write_csv(path: str, cfg: ExperimentConfig, lc: EmpiricalLC) -> None:
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(CSV_HEADER)
    for member_label, eps, rec in lc.records:
        writer.writerow([
            cfg.algo, cfg.class_label, member_label, _fmt(eps), _fmt(cfg.delta),
            rec.trial, rec.budget, rec.queries, _fmt(rec.excess), _fmt(rec.success),
        ])
    with open(path, "w", encoding="utf-8", newline="") as fh:
        fh.write(buf.getvalue())


def _write_json(path: str, cfg: ExperimentConfig, lc: EmpiricalLC) -> None:
    doc = {
        "schema": SCHEMA,
        "algo": cfg.algo,
        "class": cfg.class_label,
        "delta": cfg.delta,
        "seed": cfg.seed,
        "estimates": {
            _fmt(eps): {
                "n_hat": est.n_hat,
                "successes": est.successes,
                "trials": est.trials,
                "wilson_lb": est.wilson_lb,
                "capped": est.capped,
                "search_trace": list(map(list, est.search_trace)),
                "per_member": {str(m): n for m, n in lc.per_member[eps].items()},
            }
            for eps, est in lc.per_eps.items()
        },
        "note": "empirical worst-case over family",
    }
    with open(path, "w", encoding="utf-8") as fh:
        json.dump(doc, fh, indent=2, sort_keys=True)
        fh.write("\n")


def _write_svg(path: str, lc: EmpiricalLC) -> None:
    """n_hat against 1/eps on log-log axes, as a bare polyline."""
    pts = sorted((1.0 / eps, est.n_hat) for eps, est in lc.per_eps.items())
    if not pts:
        return
    W, H, pad = 480, 320, 40
    xs = [math.log10(p[0]) for p in pts]
    ys = [math.log10(max(p[1], 1)) for p in pts]
    x0, x1 = min(xs), max(xs) or 1.0
    y0, y1 = min(ys), max(ys) or 1.0
    sx = lambda v: pad + (W - 2 * pad) * ((v - x0) / (x1 - x0) if x1 > x0 else 0.5)
    sy = lambda v: H - pad - (H - 2 * pad) * ((v - y0) / (y1 - y0) if y1 > y0 else 0.5)
    poly = " ".join(f"{sx(a):.1f},{sy(b):.1f}" for a, b in zip(xs, ys))
    svg = (
        f'<svg xmlns="http://www.w3.org/2000/svg" width="{W}" height="{H}">'
        f'<rect width="{W}" height="{H}" fill="white"/>'
        f'<polyline points="{poly}" fill="none" stroke="black" stroke-width="1.5"/>'
        + "".join(f'<circle cx="{sx(a):.1f}" cy="{sy(b):.1f}" r="3" fill="black"/>'
                  for a, b in zip(xs, ys))
        + f'<text x="{W//2}" y="{H-8}" font-size="12" text-anchor="middle">log10(1/eps)</text>'
        + f'<text x="12" y="{H//2}" font-size="12" transform="rotate(-90 12 {H//2})" text-anchor="middle">log10(n)</text>'
        + "</svg>\n"
    )
    with open(path, "w", encoding="utf-8") as fh:
        fh.write(svg)
