"""Command-line interface: complexity measures, noise reports, learner runs,
experiment simulation, and equivalence verification."""
from __future__ import annotations

import argparse
import dataclasses
import json
import sys

import numpy as np

from . import complexity as cx
from . import core, harness, learners, noise


def _load_class(spec: str) -> tuple[core.HypothesisClass, str]:
    if spec.startswith("builtin:"):
        parts = spec.split(":")[1:]
        kind = parts[0]
        cfg = {"kind": kind}
        if kind in ("thresholds", "intervals", "singletons"):
            cfg["n"] = parts[1]
        elif kind == "minwidth":
            cfg["n"], cfg["w"] = parts[1], parts[2]
            if len(parts) > 3:
                cfg["refine"] = parts[3]
        elif kind in ("gap_upper", "gap_lower"):
            cfg["n"], cfg["d"] = parts[1], parts[2]
        else:
            raise SystemExit(f"unknown builtin class '{kind}'")
        return harness.build_class(cfg)
    with open(spec, encoding="utf-8") as fh:
        return core.HypothesisClass.from_text(fh.read()), f"file:{spec}"


def _load_marginal(path: str | None, C: core.HypothesisClass) -> cx.FinDiscreteMarginal:
    if path is None:
        return cx.FinDiscreteMarginal.uniform(range(C.n_points))
    dist = noise.JointDistribution.from_text(open(path, encoding="utf-8").read())
    return dist.marginal


def _emit(doc, as_json: bool) -> None:
    if as_json:
        print(json.dumps(doc, indent=2, sort_keys=True, default=str))
    else:
        for k, v in doc.items():
            print(f"{k}: {v}")


def _cmd_complexity(args) -> int:
    C, label = _load_class(args.klass)
    measure = args.measure
    if measure == "star":
        rep = cx.star_number(C)
    elif measure == "vc":
        rep = cx.ComplexityReport("vc", core.vc_dimension(C), "exact")
    elif measure in ("td", "xtd"):
        if args.m is None:
            raise SystemExit(f"--m is required for {measure}")
        fn = cx.td if measure == "td" else cx.xtd
        rep = cx.ComplexityReport(measure, fn(C, args.m), "exact", details={"m": args.m})
    elif measure == "xptd":
        if args.m is None or args.delta is None:
            raise SystemExit("--m and --delta are required for xptd")
        star = cx.star_number(C)
        pts = list(star.witness.points[: args.m])
        if not pts:
            raise SystemExit("class has an empty star witness")
        k, S = cx.xptd(star.witness.center, C, pts, args.delta)
        rep = cx.ComplexityReport("xptd", k, "exact", witness=S,
                                  details={"m": args.m, "delta": args.delta})
    elif measure == "theta":
        P = _load_marginal(args.marginal, C)
        h = args.hypothesis or 0
        val = cx.disagreement_coefficient(C, h, P, args.eps or 0.0)
        rep = cx.ComplexityReport("theta", val, "exact", details={"r0": args.eps or 0.0, "h": h})
    elif measure == "rho":
        P = _load_marginal(args.marginal, C)
        val = cx.ring_rho(C, P)
        rep = cx.ComplexityReport("rho", val, "exact")
    elif measure == "doubling":
        P = _load_marginal(args.marginal, C)
        h = args.hypothesis or 0
        rep = cx.doubling_dimension(C, h, P, args.eps or 0.1)
    else:
        raise SystemExit(f"unknown measure '{measure}'")
    doc = rep.to_json_dict()
    doc["class"] = label
    _emit(doc, args.json)
    return 0


def _cmd_noise_classify(args) -> int:
    C, label = _load_class(args.klass)
    dist = noise.JointDistribution.from_text(open(args.dist, encoding="utf-8").read())
    rep = noise.classify_noise(dist, C)
    doc = dataclasses.asdict(rep)
    doc["class"] = label
    _emit(doc, args.json)
    return 0


def _cmd_learn(args) -> int:
    C, label = _load_class(args.klass)
    if args.dist.startswith("realizable:"):
        target = int(args.dist.split(":")[1])
        marg = cx.FinDiscreteMarginal.uniform(range(C.n_points))
        dist = noise.make_realizable(C, target, marg)
    else:
        dist = noise.JointDistribution.from_text(open(args.dist, encoding="utf-8").read())
    cfg = harness.ExperimentConfig(
        algo=args.algo, C=C, class_label=label, members=[dist], member_labels=["d0"],
        eps_list=[args.eps], delta=args.delta, trials=1, seed=args.seed,
        constant_scale=args.scale)
    opts: dict = {}
    if args.algo == "alg0":
        opts["s_value"] = int(cx.star_number(C).value)
    if args.algo == "alg1":
        opts["d"] = core.vc_dimension(C)
        opts["gamma_hat"] = args.gamma_hat if args.gamma_hat is not None else max(args.eps / 2, 0.25)
    if args.max_unlabeled:
        opts["max_unlabeled"] = args.max_unlabeled
    cfg.learner_options = opts
    rec = harness._run_single_trial(cfg, dist, args.eps, 0, args.budget, 0)
    doc = {
        "algo": args.algo, "class": label, "budget": args.budget,
        "queries": rec.queries, "excess": rec.excess, "success": bool(rec.success),
    }
    _emit(doc, args.json)
    return 0


def _cmd_simulate(args) -> int:
    return harness.run_config(args.config)


def _cmd_verify(args) -> int:
    C, label = _load_class(args.klass)
    report = harness.verify_equivalences(C, seed=args.seed)
    report["class"] = label
    _emit(report, args.json)
    return 0 if report["all_pass"] else 1


def main(argv=None) -> int:
    parser = argparse.ArgumentParser(prog="almlab")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("complexity", help="compute a complexity measure")
    p.add_argument("--class", dest="klass", required=True)
    p.add_argument("--measure", required=True,
                   choices=["star", "vc", "td", "xtd", "xptd", "theta", "rho", "doubling"])
    p.add_argument("--m", type=int)
    p.add_argument("--eps", type=float)
    p.add_argument("--delta", type=float)
    p.add_argument("--marginal")
    p.add_argument("--hypothesis", type=int)
    p.add_argument("--json", action="store_true")
    p.set_defaults(fn=_cmd_complexity)

    p = sub.add_parser("noise", help="noise-model tools")
    nsub = p.add_subparsers(dest="noise_command", required=True)
    pc = nsub.add_parser("classify", help="classify a distribution's noise models")
    pc.add_argument("--dist", required=True)
    pc.add_argument("--class", dest="klass", required=True)
    pc.add_argument("--json", action="store_true")
    pc.set_defaults(fn=_cmd_noise_classify)

    p = sub.add_parser("learn", help="run one learner once")
    p.add_argument("--algo", required=True, choices=["erm", "cal", "halving", "alg0", "alg1"])
    p.add_argument("--class", dest="klass", required=True)
    p.add_argument("--dist", required=True)
    p.add_argument("--eps", type=float, required=True)
    p.add_argument("--delta", type=float, required=True)
    p.add_argument("--budget", type=int, required=True)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--scale", type=float, default=1.0)
    p.add_argument("--gamma-hat", dest="gamma_hat", type=float)
    p.add_argument("--max-unlabeled", dest="max_unlabeled", type=int)
    p.add_argument("--trace", action="store_true")
    p.add_argument("--json", action="store_true")
    p.set_defaults(fn=_cmd_learn)

    p = sub.add_parser("simulate", help="run experiments from a config file")
    p.add_argument("--config", required=True)
    p.set_defaults(fn=_cmd_simulate)

    p = sub.add_parser("verify", help="verify the measure equivalences on a class")
    p.add_argument("--class", dest="klass", required=True)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--json", action="store_true")
    p.set_defaults(fn=_cmd_verify)

    args = parser.parse_args(argv)
    return args.fn(args)


if __name__ == "__main__":
    sys.exit(main())
