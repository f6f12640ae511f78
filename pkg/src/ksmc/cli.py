"""Command-line interface.

Exit codes: 0 the query answered true (or plain success), 1 the query
answered false (a counterexample state is printed for realization checks),
2 usage or parse errors, 3 a resource cap was exceeded.  Diagnostics go to
stderr; reports are written atomically.
"""

from __future__ import annotations

import argparse
import json
import sys

from . import evaluate, group, kripke, lang, pal, suite
from .boolfn import BoolFnError, EnumerationCapError
from .dimacs import to_dimacs, write_atomic
from .kstruct import KStructError, KnowledgeStructure, NonStateError
from .lang import LangError


class UsageError(Exception):
    pass


def _read_text(path: str) -> str:
    with open(path, "r", encoding="utf-8") as fh:
        return fh.read()


def _load_model(args) -> KnowledgeStructure:
    if not args.model:
        raise UsageError("--model is required")
    order = None
    if getattr(args, "var_order", "decl") != "decl":
        spec = args.var_order
        if not spec.startswith("@"):
            raise UsageError("--var-order takes 'decl' or '@<file>'")
        order = [ln.strip() for ln in _read_text(spec[1:]).splitlines() if ln.strip()]
    return lang.parse_model(_read_text(args.model), engine=args.engine, var_order=order)


def _load_formula(text: str) -> lang.Formula:
    if text.startswith("@"):
        text = _read_text(text[1:])
    return lang.parse_formula(text)


def _emit(args, payload: dict) -> None:
    text = json.dumps(payload, indent=2, sort_keys=False) + "\n"
    if getattr(args, "out", None):
        write_atomic(args.out, text)
    else:
        sys.stdout.write(text)


def _state_arg(F: KnowledgeStructure, text: str):
    names = [n.strip() for n in text.split(",") if n.strip()]
    return F.check_state(names)


def cmd_check(args) -> int:
    F = _load_model(args)
    f = _load_formula(args.formula)
    if args.mode == "state" or args.state is not None:
        if args.state is None:
            raise UsageError("--mode state needs --state")
        s = _state_arg(F, args.state)
        ok = evaluate.scenario_check(F, s, f)
        _emit(args, {"query": str(f), "state": sorted(s), "holds": ok})
        return 0 if ok else 1
    ok = evaluate.realized(F, f)
    payload = {"query": str(f), "realized": ok}
    if not ok:
        cex = evaluate.find_countermodel(F, f)
        payload["counterexample"] = sorted(cex)
        print(f"state: {','.join(sorted(cex))}", file=sys.stderr)
    _emit(args, payload)
    return 0 if ok else 1


def cmd_truthset(args) -> int:
    F = _load_model(args)
    f = _load_formula(args.formula)
    ts = evaluate.truth_set(F, f)
    _emit(args, {"query": str(f), "truth_set": str(lang.formula_from_boolfn(ts.set))})
    return 0


def _condition_cmd(args, kind: str) -> int:
    F = _load_model(args)
    f = _load_formula(args.formula)
    alpha = lang.to_boolfn(f, F.store)
    if kind == "wsc":
        res = F.wsc(args.agent, alpha)
    else:
        res = F.snc(args.agent, alpha)
    _emit(args, {kind: str(lang.formula_from_boolfn(res)), "agent": args.agent})
    return 0


def cmd_common(args) -> int:
    F = _load_model(args)
    f = _load_formula(args.formula)
    ctx = group.mk_context(F, [a.strip() for a in args.agents.split(",") if a.strip()])
    ts = evaluate.truth_set(F, f)
    res = group.common_set(ctx, ts.set)
    _emit(args, {"common": str(lang.formula_from_boolfn(res)), "agents": list(ctx.delta)})
    return 0


def cmd_announce(args) -> int:
    F = _load_model(args)
    announcements = [_load_formula(t) for t in args.announce]
    try:
        trace = pal.announce_iterate(F, announcements)
    except pal.VacuousAnnouncementError as e:
        print(f"vacuous announcement at index {e.index}", file=sys.stderr)
        return 1
    payload = {
        "theories": [str(lang.formula_from_boolfn(t)) for t in trace.thetas],
        "states": trace.result.state_count(),
    }
    if args.formula:
        f = _load_formula(args.formula)
        payload["realized"] = evaluate.realized(trace.result, f)
        _emit(args, payload)
        return 0 if payload["realized"] else 1
    _emit(args, payload)
    return 0


def cmd_translate(args) -> int:
    F = _load_model(args)
    f = _load_formula(args.formula)
    pt = evaluate.positive_translate(F, f, per_occurrence=args.fresh_per_occurrence)
    payload = {
        "translated": str(pt.translated_formula),
        "fresh": {f"K[{a}] {sub}": list(names) for (a, sub), names in pt.fresh_map.items()},
        "realized": F.store.is_valid(F.theta.implies(pt.translated)),
    }
    if args.dimacs:
        check = lang.And(F.theta_formula, lang.Not(pt.translated_formula))
        to_dimacs(lang.expand_quantifiers(check), args.dimacs)
        payload["dimacs"] = args.dimacs
    _emit(args, payload)
    return 0 if payload["realized"] else 1


def cmd_kripke_export(args) -> int:
    F = _load_model(args)
    M = kripke.build_kripke(F, cap_worlds=args.cap_worlds)
    text = kripke.export_kripke(M)
    if args.out:
        write_atomic(args.out, text)
    else:
        sys.stdout.write(text)
    return 0


def cmd_kripke_import(args) -> int:
    M = kripke.parse_kripke(_read_text(args.infile))
    F, g = kripke.from_kripke(M, engine=args.engine)
    lines = [f"vars {', '.join(F.variables)}"]
    for a in F.agents:
        obs = ", ".join(sorted(F.observables(a)))
        lines.append(f"agent {a} obs {obs}".rstrip())
    lines.append(f"axiom {lang.formula_from_boolfn(F.theta)}")
    text = "\n".join(lines) + "\n"
    if args.out:
        write_atomic(args.out, text)
    else:
        sys.stdout.write(text)
    return 0


def cmd_bench_muddy(args) -> int:
    inst = suite.muddy_build(args.n, args.k, engine=args.engine)
    report = suite.muddy_run(inst)
    if args.csv:
        rows = []
        algs = [1, 2] if args.alg == "both" else [int(args.alg)]
        for a in algs:
            rows.extend(suite.muddy_time(inst, a, engine=args.engine))
        write_atomic(args.csv, suite.timing_csv(rows))
    text = report.to_json() + "\n"
    if args.out:
        write_atomic(args.out, text)
    else:
        sys.stdout.write(text)
    return 0 if report.claims_ok else 1


def cmd_verify_ns(args) -> int:
    inst = suite.ns_build(args.variant, repaired=not args.strict, engine=args.engine)
    report = suite.ns_verify(inst)
    text = report.to_json() + "\n"
    if args.out:
        write_atomic(args.out, text)
    else:
        sys.stdout.write(text)
    return 0 if (report.spec_a and report.spec_b) else 1


def cmd_gen_qbf(args) -> int:
    inst = suite.qbf_generate(args.m, args.seed, engine=args.engine)
    verdict = suite.qbf_check(inst)
    _emit(
        args,
        {
            "m": inst.m,
            "matrix": str(inst.matrix),
            "prefix": [f"{q} {v}" for q, v in inst.prefix],
            "target": str(inst.target),
            "realized": verdict,
        },
    )
    return 0 if verdict else 1


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="ksmc", description=__doc__)
    sub = ap.add_subparsers(dest="command", required=True)

    def common(p, model=True, formula=True):
        if model:
            p.add_argument("--model", help="knowledge-structure file (.eks)")
            p.add_argument("--var-order", default="decl", dest="var_order")
        if formula:
            p.add_argument("--formula", help="formula text, or @file")
        p.add_argument("--engine", choices=["bdd", "enum"], default="bdd")
        p.add_argument("--seed", type=int, default=0)
        p.add_argument("--cap-worlds", type=int, default=kripke.DEFAULT_WORLD_CAP)
        p.add_argument("--out", help="write the JSON report here (atomic)")

    p = sub.add_parser("check", help="evaluate a formula (realized or at a state)")
    common(p)
    p.add_argument("--state", help="comma list of true variables (others false)")
    p.add_argument("--mode", choices=["realized", "state"], default="realized")
    p.set_defaults(fn=cmd_check)

    p = sub.add_parser("truthset", help="print the states satisfying a formula")
    common(p)
    p.set_defaults(fn=cmd_truthset)

    for kind in ("wsc", "snc"):
        p = sub.add_parser(kind, help=f"{kind} of a formula over one agent's observables")
        common(p)
        p.add_argument("--agent", required=True)
        p.set_defaults(fn=lambda a, k=kind: _condition_cmd(a, k))

    p = sub.add_parser("common", help="common-knowledge truth set for an agent group")
    common(p)
    p.add_argument("--agents", required=True, help="comma list")
    p.set_defaults(fn=cmd_common)

    p = sub.add_parser("announce", help="apply public announcements")
    common(p)
    p.add_argument("--announce", action="append", default=[], required=True)
    p.set_defaults(fn=cmd_announce)

    p = sub.add_parser("translate", help="positive-fragment propositional translation")
    common(p)
    p.add_argument("--dimacs", help="also export theta & ~translation as CNF")
    p.add_argument("--fresh-per-occurrence", action="store_true")
    p.set_defaults(fn=cmd_translate)

    p = sub.add_parser("kripke-export", help="expand the model into an explicit Kripke file")
    common(p, formula=False)
    p.set_defaults(fn=cmd_kripke_export)

    p = sub.add_parser("kripke-import", help="encode a Kripke file as a knowledge structure")
    common(p, model=False, formula=False)
    p.add_argument("--in", dest="infile", required=True)
    p.set_defaults(fn=cmd_kripke_import)

    p = sub.add_parser("bench-muddy", help="run and time a muddy-children instance")
    common(p, model=False, formula=False)
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--k", type=int, required=True)
    p.add_argument("--alg", choices=["1", "2", "both"], default="both")
    p.add_argument("--csv", help="write timing rows here")
    p.set_defaults(fn=cmd_bench_muddy)

    p = sub.add_parser("verify-ns", help="verify the Needham-Schroeder specs")
    common(p, model=False, formula=False)
    p.add_argument("--variant", choices=["revised", "original"], default="revised")
    p.add_argument("--strict", action="store_true", help="paper atoms only, no repair")
    p.set_defaults(fn=cmd_verify_ns)

    p = sub.add_parser("gen-qbf", help="generate and check one QBF-reduction instance")
    common(p, model=False, formula=False)
    p.add_argument("--m", type=int, required=True)
    p.set_defaults(fn=cmd_gen_qbf)

    return ap


def main(argv: list[str] | None = None) -> int:
    ap = build_parser()
    try:
        args = ap.parse_args(argv)
    except SystemExit as e:
        return 2 if e.code not in (0, None) else 0
    try:
        return args.fn(args)
    except EnumerationCapError as e:
        print(f"cap exceeded: {e}", file=sys.stderr)
        return 3
    except (UsageError, LangError, NonStateError, evaluate.BindError) as e:
        print(f"error: {e}", file=sys.stderr)
        return 2
    except (BoolFnError, KStructError, suite.SuiteError, kripke.KripkeError) as e:
        print(f"error: {e}", file=sys.stderr)
        return 2
    except OSError as e:
        print(f"io error: {e}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
