"""Command-line interface: ``opweak {check,sweep,search,decompose,davies}``.

Exit codes: 0 when every check passes, 1 on a violated inequality, 2 on a
usage or input error.
"""
from __future__ import annotations

import argparse
import datetime as _dt
import json
import sys
from pathlib import Path

import numpy as np

from . import __version__
from .absdiff import DELTA_FLOOR, decompose_abs_difference
from .constants import CONSTANTS
from .davies import (
    DiscreteMeasure,
    davies_bound_check,
    discretization_report,
    discretize,
    distorted_variation,
    measure_from_json,
    measure_to_json,
)
from .errors import OpweakError
from .harness import OBJECTIVES, STRUCTURES, TrialConfig, adversarial_search, run_sweep, search_to_json
from .matcore import hermitize, matrix_from_json
from .report import DEFAULT_SLACK
from .sampling import make_rng, sample_gue
from .suites import SUITES, run_suite

EXIT_OK, EXIT_VIOLATION, EXIT_USAGE = 0, 1, 2


def _stamp(doc: dict, args) -> dict:
    if not args.no_timestamp:
        doc = {"generated_at": _dt.datetime.now(_dt.timezone.utc).isoformat(timespec="seconds"), **doc}
    return doc


def _dump(doc, path: str | None) -> None:
    text = json.dumps(doc, indent=1, sort_keys=True, allow_nan=False, default=_json_default) + "\n"
    if path:
        Path(path).write_text(text)
    else:
        sys.stdout.write(text)


def _json_default(v):
    if isinstance(v, (np.floating, np.integer, np.bool_)):
        return v.item()
    raise TypeError(f"not serializable: {type(v).__name__}")


def _clean(v):
    """Replace non-finite floats so the JSON stays strict."""
    if isinstance(v, dict):
        return {k: _clean(x) for k, x in v.items()}
    if isinstance(v, (list, tuple)):
        return [_clean(x) for x in v]
    if isinstance(v, (float, np.floating)):
        v = float(v)
        if v != v:
            return "nan"
        if v in (float("inf"), float("-inf")):
            return "inf" if v > 0 else "-inf"
    return v


def _read_json(path: str) -> dict:
    try:
        return json.loads(Path(path).read_text())
    except OSError as exc:
        raise OpweakError(f"cannot read {path}: {exc.strerror}") from None
    except json.JSONDecodeError as exc:
        raise OpweakError(f"{path} is not valid JSON: {exc.msg}") from None


def cmd_check(args) -> int:
    names = SUITES if args.suite == "all" else (args.suite,)
    results = []
    for name in names:
        res = run_suite(name, seed=args.seed, trials=args.trials, max_n=args.max_n, slack=args.slack)
        status = "PASS" if res.passed else "FAIL"
        timing = "" if args.no_timestamp else f" in {res.elapsed_s:.1f}s"
        print(f"[{status}] {name}: {res.checks - res.failed}/{res.checks} checks{timing}")
        for f in res.failures:
            for v in f["violated"]:
                print(f"    violated: {v['name']} ({f['group']}): lhs={v['lhs']!r} rhs={v['rhs']!r}")
        results.append(res)
    ok = all(r.passed for r in results)
    doc = {"command": "check", "seed": args.seed, "passed": ok,
           "suites": [r.to_dict(timing=not args.no_timestamp) for r in results]}
    if args.out:
        _dump(_clean(_stamp(doc, args)), args.out)
    return EXIT_OK if ok else EXIT_VIOLATION


def cmd_sweep(args) -> int:
    cfg = TrialConfig(seed=args.seed, n=args.n, trials=args.trials, structure=args.structure,
                      perturb_scale=args.perturb_scale, tol_slack=args.slack)
    res = run_sweep(cfg, timing=not args.no_timestamp)
    Path(args.out).write_text(res.to_csv())
    s = res.summary
    print(f"{s['passed']}/{s['trials']} pass, max ratio {s['max_ratio']:.6g}, "
          f"mean ratio {s['mean_ratio']:.6g}, bound {CONSTANTS.c_main:.6g}")
    if res.failures:
        _dump(_clean({"failures": res.failures}), args.out + ".failures.json")
        print(f"failing instances written to {args.out}.failures.json", file=sys.stderr)
    return EXIT_OK if res.passed else EXIT_VIOLATION


def cmd_search(args) -> int:
    found = adversarial_search(args.n, args.budget, args.restarts, args.seed, args.objective)
    rec, cert = found.record(args.seed, args.slack)
    doc = search_to_json(found, args.seed, cert)
    ok = cert.passed and (args.objective != "weak_ratio" or found.best_value <= CONSTANTS.c_main)
    doc["passed"] = ok
    _dump(_clean(_stamp(doc, args)), args.out)
    print(f"best {args.objective} {found.best_value:.6g} after {found.evaluations} evaluations; "
          f"certificate {'passes' if cert.passed else 'FAILS'}")
    return EXIT_OK if ok else EXIT_VIOLATION


def cmd_decompose(args) -> int:
    a = matrix_from_json(_read_json(args.input))
    b = matrix_from_json(_read_json(args.input2))
    cert = decompose_abs_difference(a, b, delta_floor=args.delta_floor)
    rep = cert.invariant_report()
    rep.extend(cert.bound_report(args.slack).checks)
    doc = cert.to_json()
    doc["report"] = rep.to_dict()
    _dump(_clean(_stamp(doc, args)), args.out)
    print(f"residual {cert.residual:.3e}; {'all checks pass' if rep.passed else 'VIOLATION'}")
    for c in rep.failures:
        print(f"    violated: {c.name}: lhs={c.lhs!r} rhs={c.rhs!r}")
    return EXIT_OK if rep.passed else EXIT_VIOLATION


def cmd_davies(args) -> int:
    nu = measure_from_json(_read_json(args.measure))
    dv, brute = distorted_variation(nu)
    doc = {"measure": measure_to_json(nu), "dv": dv, "dv_brute_force": brute}
    ok = brute is None or brute == dv
    if isinstance(nu, DiscreteMeasure):
        target = nu
    else:
        # infinite DV: the bound is exercised on the finest discretization
        doc["discretizations"] = [discretization_report(nu, m, args.slack).to_dict() for m in (4, 16)]
        ok = ok and all(d["passed"] for d in doc["discretizations"])
        target = discretize(nu, 16)
        doc["checked_measure"] = measure_to_json(target)
    trials = []
    for i in range(args.trials):
        rng = make_rng(args.seed, i)
        a = sample_gue(args.n, rng)
        b = hermitize(a + 0.1 * sample_gue(args.n, rng))
        rep = davies_bound_check(target, a, b, args.slack)
        ok = ok and rep.passed
        trials.append({"trial": i, "passed": rep.passed, **rep.data,
                       "violated": [c.name for c in rep.failures]})
    doc.update(trials=trials, passed=ok)
    _dump(_clean(_stamp(doc, args)), args.out)
    return EXIT_OK if ok else EXIT_VIOLATION


def _positive(kind):
    def parse(text):
        v = kind(text)
        if v <= 0:
            raise argparse.ArgumentTypeError(f"must be positive, got {text}")
        return v
    return parse


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="opweak", description="Numerical certificates for weak-L1 bounds "
                                "on the matrix absolute value.")
    p.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    sub = p.add_subparsers(dest="command", required=True)

    def common(sp, seed=True):
        if seed:
            sp.add_argument("--seed", type=int, default=1)
        sp.add_argument("--slack", type=float, default=DEFAULT_SLACK)
        sp.add_argument("--no-timestamp", action="store_true",
                        help="omit wall-clock fields so reruns are byte-identical")

    c = sub.add_parser("check", help="run verification suites")
    c.add_argument("--suite", choices=("all", *SUITES), default="all")
    c.add_argument("--trials", type=_positive(int), help="instances per check group (default: full suite)")
    c.add_argument("--max-n", type=_positive(int), help="cap on matrix sizes")
    c.add_argument("--out", help="write the full JSON report here")
    common(c)
    c.set_defaults(func=cmd_check)

    s = sub.add_parser("sweep", help="certify random pairs and write CSV")
    s.add_argument("--n", type=_positive(int), required=True)
    s.add_argument("--trials", type=_positive(int), required=True)
    s.add_argument("--structure", choices=STRUCTURES, default="generic")
    s.add_argument("--perturb-scale", type=float, default=0.1)
    s.add_argument("--out", required=True)
    common(s)
    s.set_defaults(func=cmd_sweep)

    r = sub.add_parser("search", help="adversarial ratio search")
    r.add_argument("--n", type=_positive(int), required=True)
    r.add_argument("--budget", type=_positive(int), required=True)
    r.add_argument("--restarts", type=_positive(int), default=1)
    r.add_argument("--objective", choices=OBJECTIVES, default="weak_ratio")
    r.add_argument("--out", required=True)
    common(r)
    r.set_defaults(func=cmd_search)

    d = sub.add_parser("decompose", help="four-term decomposition of |A|-|B| for a symmetric pair")
    d.add_argument("--input", required=True, help="matrix JSON for A")
    d.add_argument("--input2", required=True, help="matrix JSON for B")
    d.add_argument("--delta-floor", type=float, default=DELTA_FLOOR)
    d.add_argument("--out", required=True)
    common(d, seed=False)
    d.set_defaults(func=cmd_decompose)

    v = sub.add_parser("davies", help="Davies-class bound for a measure")
    v.add_argument("--measure", required=True)
    v.add_argument("--n", type=_positive(int), required=True)
    v.add_argument("--trials", type=_positive(int), required=True)
    v.add_argument("--out")
    common(v)
    v.set_defaults(func=cmd_davies)
    return p


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code) if exc.code is not None else EXIT_OK
    if getattr(args, "seed", 0) < 0:
        parser.print_usage(sys.stderr)
        print("opweak: error: --seed must be nonnegative", file=sys.stderr)
        return EXIT_USAGE
    try:
        return args.func(args)
    except (OpweakError, ValueError) as exc:
        print(f"opweak: error: {exc}", file=sys.stderr)
        return EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())
