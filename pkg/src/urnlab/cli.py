"""urnlab command line.

Exit codes: 0 holds / success, 1 violation found, 2 usage or input error,
3 zero-probability conditioning, 4 cap exceeded or inconclusive verdict.
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import sys
from fractions import Fraction

from . import __version__
from . import verdict as V
from ._rational import fmt, to_fraction
from .errors import CapExceededError, UrnLabError, ZeroProbabilityError
from .measures import FiniteMeasure

EXIT_OK, EXIT_VIOLATION, EXIT_USAGE, EXIT_ZERO, EXIT_CAP = 0, 1, 2, 3, 4

PROPERTIES = ("nc", "cnc", "na", "cna", "rayleigh", "na_plus", "r_plus", "slc", "ulc",
              "app", "capp", "nmp", "dominance")


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise UsageError(message)


# -- parsing helpers ---------------------------------------------------------

def _load_json(path):
    if path == "-":
        return json.load(sys.stdin)
    if path.lstrip().startswith(("{", "[")):
        return json.loads(path)
    with open(path) as fh:
        return json.load(fh)


def _ints(text):
    text = (text or "").strip()
    return [int(x) for x in text.split(",") if x.strip()] if text else []


def _rationals(text):
    return [to_fraction(x) for x in text.split(",") if x.strip()]


def _window(text, n_other):
    """``a:b,a:b,...`` (one pair per non-target urn) into lists a, b."""
    pairs = [p for p in text.split(",") if p.strip()]
    if len(pairs) != n_other:
        raise UsageError(f"--window needs {n_other} a:b pairs, got {len(pairs)}")
    a, b = [], []
    for p in pairs:
        lo, _, hi = p.partition(":")
        a.append(int(lo))
        b.append(int(hi))
    return a, b


def _range(text):
    lo, _, hi = text.partition(":")
    return int(lo), int(hi or lo)


def _model(args):
    from .urns import UrnModel

    if not args.model:
        raise UsageError("--model is required")
    data = _load_json(args.model)
    return UrnModel.from_dict(data), data


def _spec(args, model, data):
    from .urns import IntervalSpec

    if args.thresholds is not None:
        return IntervalSpec.from_thresholds(model.m, _ints(args.thresholds))
    if args.intervals is not None:
        raw = _load_json(args.intervals)
        return _intervals(model, raw)
    if "thresholds" in data:
        return IntervalSpec.from_thresholds(model.m, data["thresholds"])
    if "intervals" in data:
        return _intervals(model, data["intervals"])
    raise UsageError("give --thresholds or --intervals (or put them in the model file)")


def _intervals(model, raw):
    from .urns import IntervalSpec

    if isinstance(raw, dict):
        cuts = []
        for j in range(model.n):
            c = raw.get(str(j), raw.get(j))
            cuts.append(c if c is not None else [0, model.m + 1])
    else:
        cuts = raw
    return IntervalSpec(model.m, cuts)


# -- output -----------------------------------------------------------------------

def _flatten(obj, prefix=""):
    if isinstance(obj, dict):
        for k in sorted(obj, key=str):
            yield from _flatten(obj[k], f"{prefix}.{k}" if prefix else str(k))
    elif isinstance(obj, list):
        for i, v in enumerate(obj):
            yield from _flatten(v, f"{prefix}[{i}]")
    else:
        yield prefix, obj


def _approx(value):
    if isinstance(value, str):
        try:
            q = Fraction(value)
        except (ValueError, ZeroDivisionError):
            return ""
        return f"{float(q):.12g}"
    if isinstance(value, int) and not isinstance(value, bool):
        return str(value)
    return ""


def emit(report: dict, fmt_: str, out=None):
    out = out or sys.stdout
    report = V.jsonable(report)
    if fmt_ == "csv":
        buf = io.StringIO()
        w = csv.writer(buf, lineterminator="\n")
        w.writerow(["key", "value", "approx_decimal"])
        for k, v in _flatten(report):
            w.writerow([k, "" if v is None else v, _approx(v)])
        out.write(buf.getvalue())
    else:
        out.write(json.dumps(report, sort_keys=True, indent=2) + "\n")


def _status_code(status):
    return {V.HOLDS: EXIT_OK, V.VIOLATED: EXIT_VIOLATION, V.INCONCLUSIVE: EXIT_CAP}[status]


def _verdict_report(v: V.Verdict, **extra):
    return dict(extra, verdict=v.to_dict()), _status_code(v.status)


# -- subcommands ------------------------------------------------------------------

def cmd_law(args):
    from .urns import occupancy_law, window_law

    model, _ = _model(args)
    rep = {"model": model.to_dict()}
    if args.window:
        a, b = _window(args.window, model.n - 1)
        law = window_law(model, a, b)
        rep.update(kind="window_law", a=a, b=b, law=[fmt(p) for p in law])
        if args.oracle:
            orc = _oracle_window(model, a, b, _oracle_fn(args))
            _assert_equal(law, orc)
            rep["oracle"] = "match"
        return rep, EXIT_OK
    mu = occupancy_law(model)
    rep.update(kind="occupancy_law", measure=mu.to_dict())
    if args.oracle:
        from .urns import occupancy

        orc = _oracle_fn(args)(model).pushforward(lambda s: occupancy(s, model.n), mu.space)
        _assert_equal(mu, orc)
        rep["oracle"] = "match"
    return rep, EXIT_OK


def _oracle_window(model, a, b, oracle):
    from .urns import occupancy

    law = oracle(model)
    seq = [Fraction(0)] * (model.m + 1)
    for sigma, p in law.mass.items():
        B = occupancy(sigma, model.n)
        if all(a[j] <= B[j] <= b[j] for j in range(model.n - 1)):
            seq[B[-1]] += p
    total = sum(seq)
    if total == 0:
        raise ZeroProbabilityError("window has probability zero")
    return [p / total for p in seq]


def _oracle_fn(args):
    from .urns import assignment_law_oracle

    if args.cap is None:
        return assignment_law_oracle
    return lambda model: assignment_law_oracle(model, cap=args.cap)


def _upset_kw(args):
    return {} if args.max_upsets is None else {"max_upsets": args.max_upsets}


def _assert_equal(x, y):
    if x != y:
        raise AssertionError("oracle mismatch: dynamic program and brute force disagree")


def cmd_measure(args):
    from .urns import interval_urn_measure, occupancy

    model, data = _model(args)
    spec = _spec(args, model, data)
    mu = interval_urn_measure(model, spec)
    rep = {"model": model.to_dict(), "spec": spec.to_dict(), "measure": mu.to_dict()}
    if args.oracle:
        orc = _oracle_fn(args)(model).pushforward(
            lambda s: tuple(spec.level(j, c) for j, c in enumerate(occupancy(s, model.n))),
            mu.space)
        _assert_equal(mu, orc)
        rep["oracle"] = "match"
    return rep, EXIT_OK


def cmd_check(args):
    from .correlation import check_cna, check_cnc, check_na, check_nc, falsify_fields
    from .dominance import check_normalized_matching, stochastic_dominance
    from .sequences import check_app, check_capp, check_slc, check_ulc, check_ulc_measure

    prop = args.property
    if prop in ("slc", "ulc") and args.sequence:
        seq = _rationals(args.sequence)
        v = check_slc(seq) if prop == "slc" else check_ulc(seq, args.n)
        return _verdict_report(v, sequence=[fmt(x) for x in seq])
    mu = _measure(args)
    if prop == "dominance":
        if not args.other:
            raise UsageError("dominance needs --other MEASURE")
        nu = FiniteMeasure.from_dict(_load_json(args.other))
        return _verdict_report(stochastic_dominance(mu, nu), mu=mu.to_dict(), nu=nu.to_dict())
    if prop in ("rayleigh", "na_plus", "r_plus"):
        if args.seed is None:
            raise UsageError(f"--seed is required for {prop}")
        v = falsify_fields(mu, prop, samples=args.budget or 200, seed=args.seed)
    else:
        na = lambda m: check_na(m, **_upset_kw(args))
        cna = lambda m: check_cna(m, **_upset_kw(args))
        v = {"nc": check_nc, "cnc": check_cnc, "na": na, "cna": cna,
             "slc": lambda m: check_slc(m.rank_sequence()), "ulc": check_ulc_measure,
             "app": check_app, "capp": check_capp, "nmp": check_normalized_matching}[prop](mu)
    return _verdict_report(v, measure=mu.to_dict())


def _measure(args):
    from .urns import interval_urn_measure

    if args.measure:
        return FiniteMeasure.from_dict(_load_json(args.measure))
    model, data = _model(args)
    return interval_urn_measure(model, _spec(args, model, data))


def cmd_verify(args):
    from .generators import random_models
    from .verify import THEOREMS, run_suite

    if args.theorem not in THEOREMS:
        raise UsageError(f"--theorem must be one of {', '.join(THEOREMS)}")
    kw = {}
    if args.model:
        model, _ = _model(args)
        models = [model]
        if args.window:
            if args.theorem != "mainthm-b":
                raise UsageError("--window applies to mainthm-b only")
            kw["a"], kw["b"] = _window(args.window, model.n - 1)
    else:
        if args.seed is None:
            raise UsageError("--seed is required when models are generated")
        models = random_models(args.seed, args.budget or 20, m_max=args.m_max, n_max=args.n_max)
    seed = args.seed if args.seed is not None else 0
    suite = run_suite(args.theorem, models, seed=seed, jobs=args.jobs, **kw)
    rep = suite.to_dict()
    if args.oracle:
        rep["oracle"] = _verify_oracle(args.theorem, models, kw, _oracle_fn(args))
    return rep, _status_code(suite.status)


def _verify_oracle(theorem, models, kw, oracle):
    """Recompute the laws a suite depends on by brute force and compare exactly."""
    import numpy as np

    from .urns import occupancy, window_law
    from .verify import occupancy_tensor

    for model in models:
        law = oracle(model)
        T = occupancy_tensor(model)
        total = int(T.sum())
        dp = {tuple(int(i) for i in idx): Fraction(int(T[idx]), total)
              for idx in zip(*np.nonzero(T))}
        pushed = {}
        for sigma, p in law.mass.items():
            B = occupancy(sigma, model.n)
            pushed[B] = pushed.get(B, Fraction(0)) + p
        _assert_equal(dp, pushed)
        if "a" in kw:
            _assert_equal(window_law(model, kw["a"], kw["b"]),
                          _oracle_window(model, kw["a"], kw["b"], oracle))
    return "match"


def cmd_orient(args):
    from .orientations import (BipartiteSystem, CoverHypergraph, Multigraph, count_gmaps,
                               count_gmaps_bruteforce, count_matchings, count_matchings_bruteforce,
                               count_orientations, count_orientations_bruteforce, gmap_ulc,
                               matching_ulc, verify_glemma, verify_gphcor, verify_hyplemma,
                               verify_hyplemma_all_alpha)

    what = args.what
    if what in ("count", "glemma", "gphcor", "matchings"):
        if not args.graph:
            raise UsageError(f"orient {what} needs --graph")
        G = Multigraph.from_dict(_load_json(args.graph))
        rep = {"graph": G.to_dict()}
        if what == "count":
            a, b = _ints(args.a) or [0] * G.n, _ints(args.b) or [0] * G.n
            N = count_orientations(G, a, b)
            rep.update(a=a, b=b, count=N)
            if args.oracle:
                _assert_equal(N, count_orientations_bruteforce(G, a, b))
                rep["oracle"] = "match"
            return rep, EXIT_OK
        if what == "matchings":
            phi = count_matchings((G.n, G.edges))
            if args.oracle:
                _assert_equal(phi, count_matchings_bruteforce((G.n, G.edges)))
                rep["oracle"] = "match"
            return _verdict_report(matching_ulc((G.n, G.edges)), **rep, phi=phi)
        v = verify_glemma(G) if what == "glemma" else verify_gphcor(G)
        return _verdict_report(v, **rep)
    if what == "hyplemma":
        if not args.hypergraph:
            raise UsageError("orient hyplemma needs --hypergraph")
        H = CoverHypergraph.from_dict(_load_json(args.hypergraph))
        v = verify_hyplemma(H) if H.alpha is not None else verify_hyplemma_all_alpha(H)
        return _verdict_report(v, hypergraph=H.to_dict())
    if what == "gmaps":
        if not args.bipartite:
            raise UsageError("orient gmaps needs --bipartite")
        B = BipartiteSystem.from_dict(_load_json(args.bipartite))
        s = count_gmaps(B)
        rep = {"system": B.to_dict(), "s": s}
        if args.oracle:
            _assert_equal(s, count_gmaps_bruteforce(B))
            rep["oracle"] = "match"
        return _verdict_report(gmap_ulc(B), **rep)
    raise UsageError(f"unknown orient target {what}")


def cmd_conjecture(args):
    from . import conjectures as C
    from .urns import ConditioningEvent

    what = args.what
    if what == "welsh":
        if args.scan_s:
            lo, hi = _range(args.scan_s)
            rep = C.welsh_scan(lo, hi, stop=False)
            rows = []
            for x in rep.instances:
                v = x["verdict"]
                vals = v.witness if v.violated else v.info
                rows.append({"s": x["s"], "satisfied": v.violated,
                             **{k: vals[k] for k in ("P_2", "P_012", "P_02", "P_12")}})
            return {"first_s": rep.summary["first_s"], "scan": rows}, EXIT_OK
        s = args.s or 1
        v = C.welsh_verdict(s)
        return _verdict_report(v, asymptotics=C.welsh_asymptotics(s))
    if what == "farr":
        if not args.graph:
            raise UsageError("conjecture farr needs --graph")
        g = _load_json(args.graph)
        v = C.farr_check((g["vertices"], g["edges"]), to_fraction(args.p), _ints(args.I),
                         _ints(args.J), _ints(args.K), args.n)
        return _verdict_report(v, graph=g)
    if what == "qq":
        model, _ = _model(args)
        raw = _load_json(args.parts) if args.parts else {"parts": [], "bounds": []}
        extra = _upset_kw(args)
        if args.cap is not None:
            extra["cap"] = args.cap
        v = C.qq_check(model, raw["parts"], raw["bounds"], **extra)
        return _verdict_report(v, model=model.to_dict(), parts=raw)
    if what == "nmp":
        model, _ = _model(args)
        Q = ConditioningEvent({int(j): tuple(w) for j, w in _load_json(args.Q).items()}) \
            if args.Q else ConditioningEvent({})
        extra = {} if args.cap is None else {"cap": args.cap}
        v = C.check_nmp_question(model, Q, _ints(args.K), **extra)
        return _verdict_report(v, model=model.to_dict(), Q=Q.to_dict())
    raise UsageError(f"unknown conjecture target {what}")


def cmd_search(args):
    from . import conjectures as C

    if args.seed is None:
        raise UsageError("--seed is required for search")
    budget = args.budget or 50
    fn = {"farr": lambda: C.farr_search(args.seed, budget),
          "welsh-family": lambda: C.farr_search(args.seed, budget, family="ideal"),
          "qcna": lambda: C.qcna_search(args.seed, budget),
          "nmp": lambda: C.nmp_search(args.seed, budget),
          "rayleigh": lambda: C.rayleigh_search(args.seed, budget)}[args.what]
    rep = fn()
    d = rep.to_dict(instances=args.verbose)
    if args.what == "rayleigh" and rep.status == V.VIOLATED:
        # finding a witness is the goal here
        return d, EXIT_VIOLATION
    return d, _status_code(rep.status)


# -- entry point ---------------------------------------------------------------------

def build_parser():
    p = _Parser(prog="urnlab", description="Exact computations for competing urns.")
    p.add_argument("--version", action="version", version=f"urnlab {__version__}")
    sub = p.add_subparsers(dest="cmd")

    def common(sp, model=True):
        if model:
            sp.add_argument("--model", help="model JSON file (or inline JSON)")
        sp.add_argument("--format", choices=("json", "csv"), default="json")
        sp.add_argument("--seed", type=int)
        sp.add_argument("--budget", type=int)
        sp.add_argument("--jobs", type=int, default=1)
        sp.add_argument("--oracle", action="store_true",
                        help="recompute by brute force and require exact equality")
        sp.add_argument("--cap", type=int, help="override the brute-force enumeration cap")
        sp.add_argument("--max-upsets", type=int, help="override the up-set cap for na/cna/qq")

    sp = sub.add_parser("law", help="occupancy law, or p(k,a,b) with --window")
    common(sp)
    sp.add_argument("--window", help="a:b per non-target urn, comma separated")
    sp.set_defaults(fn=cmd_law)

    sp = sub.add_parser("measure", help="threshold or interval urn measure")
    common(sp)
    sp.add_argument("--thresholds")
    sp.add_argument("--intervals", help="JSON {urn: [cuts]} or list of cut lists")
    sp.set_defaults(fn=cmd_measure)

    sp = sub.add_parser("check", help="run a property checker")
    common(sp)
    sp.add_argument("--property", required=True, choices=PROPERTIES)
    sp.add_argument("--measure", help="measure JSON")
    sp.add_argument("--other", help="second measure for dominance")
    sp.add_argument("--sequence", help="comma separated rationals for slc/ulc")
    sp.add_argument("--n", type=int, help="ambient length for ulc of a sequence")
    sp.add_argument("--thresholds")
    sp.add_argument("--intervals")
    sp.set_defaults(fn=cmd_check)

    sp = sub.add_parser("verify", help="theorem suites")
    common(sp)
    sp.add_argument("--theorem", required=True)
    sp.add_argument("--window")
    sp.add_argument("--m-max", type=int, default=5)
    sp.add_argument("--n-max", type=int, default=4)
    sp.set_defaults(fn=cmd_verify)

    sp = sub.add_parser("orient", help="orientation, partition, G-map and matching counts")
    common(sp, model=False)
    sp.add_argument("what", choices=("count", "glemma", "gphcor", "hyplemma", "gmaps", "matchings"))
    sp.add_argument("--graph")
    sp.add_argument("--hypergraph")
    sp.add_argument("--bipartite")
    sp.add_argument("--a")
    sp.add_argument("--b")
    sp.set_defaults(fn=cmd_orient)

    sp = sub.add_parser("conjecture", help="single-instance checks of open statements")
    common(sp)
    sp.add_argument("what", choices=("welsh", "farr", "qq", "nmp"))
    sp.add_argument("--s", type=int)
    sp.add_argument("--scan-s")
    sp.add_argument("--graph")
    sp.add_argument("--p", default="1/3")
    sp.add_argument("--n", type=int, default=2)
    sp.add_argument("--I", default="")
    sp.add_argument("--J", default="")
    sp.add_argument("--K", default="")
    sp.add_argument("--Q", help="JSON {urn: [S, T]}")
    sp.add_argument("--parts", help='JSON {"parts": [[[i, j], ...], ...], "bounds": [[a, b], ...]}')
    sp.set_defaults(fn=cmd_conjecture)

    sp = sub.add_parser("search", help="seeded counterexample campaigns")
    common(sp, model=False)
    sp.add_argument("what", choices=("farr", "welsh-family", "qcna", "nmp", "rayleigh"))
    sp.add_argument("--verbose", action="store_true", help="include every instance")
    sp.set_defaults(fn=cmd_search)
    return p


def _error(kind, message, code):
    sys.stderr.write(json.dumps({"error": kind, "message": message, "exit_code": code},
                                sort_keys=True) + "\n")
    return code


def run(argv=None, out=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
        if not getattr(args, "cmd", None):
            raise UsageError("a subcommand is required")
        report, code = args.fn(args)
        emit(report, args.format, out)
        return code
    except UsageError as exc:
        return _error("usage", str(exc), EXIT_USAGE)
    except ZeroProbabilityError as exc:
        return _error("zero_probability", str(exc), EXIT_ZERO)
    except CapExceededError as exc:
        return _error("cap_exceeded", str(exc), EXIT_CAP)
    except (UrnLabError, ValueError, TypeError, KeyError, OSError, json.JSONDecodeError) as exc:
        return _error("input", f"{type(exc).__name__}: {exc}", EXIT_USAGE)


def main():
    sys.exit(run())


if __name__ == "__main__":
    main()
