"""Command line front end and scenario runner.

Exit codes: 0 when every check passes (bounded passes included), 1 when a
check fails, 2 on input errors.
"""

from __future__ import annotations

import argparse
import json
import sys
import time
from pathlib import Path

from . import closure as rc
from . import fintop, subcat
from .errors import InputError
from .report import CheckResult, Report, emit_report, jsonable

CHECK_KINDS = ("closure", "compare", "hull", "diagonal", "axioms", "thm41", "epi-dense", "oracle-agreement")


class ScenarioError(InputError):
    pass


def _arg(args: dict, key: str, where: str, default=None, required=False):
    if key in args:
        return args[key]
    if required:
        raise ScenarioError(f"{where}.{key}: missing required argument")
    return default


def _universe(max_points, where: str) -> list:
    if not isinstance(max_points, int) or max_points < 0:
        raise ScenarioError(f"{where}: max_points must be a non-negative integer")
    ceiling = fintop.max_points()
    if max_points > ceiling:
        raise ScenarioError(f"{where}: max_points {max_points} exceeds the ceiling {ceiling}")
    return fintop.universe(max_points)


def _wrap(where: str, fn, *a):
    try:
        return fn(*a)
    except ScenarioError:
        raise
    except InputError as exc:
        raise ScenarioError(f"{where}: {exc}") from None


def _verdict(ok: bool, exact: bool = True) -> str:
    if not ok:
        return "fail"
    return "pass" if exact else "bounded-pass"


# ---------------------------------------------------------------------------
# checks; each returns a CheckResult


def check_closure(args: dict, where: str, max_points: int) -> CheckResult:
    X = _wrap(f"{where}.space", fintop.resolve_space, _arg(args, "space", where, required=True))
    A = _wrap(f"{where}.subcat", subcat.resolve_subcat, _arg(args, "subcat", where, required=True))
    subset = _arg(args, "subset", where, default=[])
    if isinstance(subset, str):
        subset = [s for s in subset.split(",") if s]
    m = _wrap(f"{where}.subset", fintop.subobject, X, subset)
    method = _arg(args, "method", where, default="both")
    if method not in ("formula", "brute", "both"):
        raise ScenarioError(f"{where}.method: expected formula, brute or both")
    details = {"subset": m.labels}
    results = []
    if method in ("formula", "both"):
        res = _wrap(f"{where}.subcat", rc.closure_formula, m, A)
        details["formula"] = res.closure.labels
        results.append(res)
    if method in ("brute", "both"):
        res = _wrap(where, rc.closure_bruteforce, m, A)
        details["bruteforce"] = res.closure.labels
        results.append(res)
    agree = len({r.closure.carrier for r in results}) == 1
    exact = all(r.exact for r in results)
    witnesses = [] if agree else [{"formula": details.get("formula"), "bruteforce": details.get("bruteforce")}]
    bound = None if exact else A.bound
    return CheckResult(f"closure {A.name}", _verdict(agree, exact), bound, witnesses, details)


def check_compare(args: dict, where: str, max_points: int) -> CheckResult:
    A = _wrap(f"{where}.a", subcat.resolve_subcat, _arg(args, "a", where, required=True))
    B = _wrap(f"{where}.b", subcat.resolve_subcat, _arg(args, "b", where, required=True))
    n = _arg(args, "max_points", where, default=max_points)
    U = _universe(n, f"{where}.max_points")
    cmp = _wrap(where, rc.same_closure, A, B, U)
    witnesses = [cmp.counterexample] if cmp.counterexample else []
    details = {"universe_max_points": n, "universe_size": cmp.universe_size, "exact": cmp.exact}
    return CheckResult(f"compare {A.name} vs {B.name}", _verdict(cmp.same, cmp.exact), None if cmp.exact else n, witnesses, details)


_HULLS = {
    "s": subcat.in_S_hull,
    "e": subcat.in_E_hull,
    "d": subcat.in_D_hull,
    "mono": subcat.in_mono_hull,
    "smallest": subcat.in_smallest_intermediate,
    "largest": subcat.in_largest_intermediate,
}


def check_hull(args: dict, where: str, max_points: int) -> CheckResult:
    which = str(_arg(args, "which", where, required=True)).lower()
    if which not in _HULLS:
        raise ScenarioError(f"{where}.which: expected one of {', '.join(_HULLS)}")
    A = _wrap(f"{where}.subcat", subcat.resolve_subcat, _arg(args, "subcat", where, required=True))
    X = _wrap(f"{where}.space", fintop.resolve_space, _arg(args, "space", where, required=True))
    bound = _arg(args, "bound", where)
    if bound is not None and (not isinstance(bound, int) or bound < 0):
        raise ScenarioError(f"{where}.bound: must be a non-negative integer")
    rep = _wrap(where, _HULLS[which], X, A, bound)
    witnesses = [jsonable(rep.witness)] if rep.witness else []
    if not rep.member and not witnesses:
        scope = "" if rep.bound is None else f" with at most {rep.bound} points"
        witnesses = [{"reason": f"no qualifying map into a member{scope}"}]
    details = {"hull": rep.hull, "member": rep.member, "space": fintop.canonical_form(X)}
    if rep.note:
        details["note"] = rep.note
    return CheckResult(f"hull {which} {A.name}", _verdict(rep.member, rep.exact), rep.bound, witnesses, details)


def check_diagonal(args: dict, where: str, max_points: int) -> CheckResult:
    A = _wrap(f"{where}.subcat", subcat.resolve_subcat, _arg(args, "subcat", where, required=True))
    X = _wrap(f"{where}.space", fintop.resolve_space, _arg(args, "space", where, required=True))
    d = subcat.diagonal(X)
    verdict = _wrap(where, rc.is_A_regular, d, A)
    res = rc.closure(d, A)
    details = {"regular": verdict.value, "member": A.contains(X), "method": verdict.method}
    witnesses = []
    if verdict.value:
        h, k, M = verdict.witness
        details["codomain"] = fintop.canonical_form(M)
    else:
        witnesses = [{"diagonal": d.labels, "closure": res.closure.labels}]
    return CheckResult(f"diagonal {A.name}", _verdict(verdict.value, verdict.exact), None, witnesses, details)


def check_axioms(args: dict, where: str, max_points: int) -> CheckResult:
    A = _wrap(f"{where}.subcat", subcat.resolve_subcat, _arg(args, "subcat", where, required=True))
    n = _arg(args, "max_points", where, default=min(max_points, 3))
    U = _universe(n, f"{where}.max_points")
    table = _wrap(where, rc.closure_operator_table, A, U)
    rep = rc.check_axioms(table)
    details = {}
    witnesses = []
    for name in ("extension", "monotonicity", "continuity", "idempotency"):
        chk = getattr(rep, name)
        details[name] = chk.ok
        if not chk.ok:
            witnesses.append({name: jsonable(chk.counterexample)})
    return CheckResult(f"axioms {A.name}", _verdict(rep.passed, table.exact), None if table.exact else n, witnesses, details)


def check_thm41(args: dict, where: str, max_points: int) -> CheckResult:
    A = _wrap(f"{where}.a", subcat.resolve_subcat, _arg(args, "a", where, default="t0"))
    B = _wrap(f"{where}.b", subcat.resolve_subcat, _arg(args, "b", where, required=True))
    n = _arg(args, "max_points", where, default=max_points)
    U = _universe(n, f"{where}.max_points")
    rep = _wrap(where, rc.thm41_sweep, A, B, U)
    table = [
        {"space": r.space, "P": r.alpha_mono, "a": r.diagonal_regular, "b": r.in_s_hull, "c": rep.c}
        for r in rep.rows
    ]
    details = {"P": rep.precondition, "a": rep.a, "b": rep.b, "c": rep.c, "table": table}
    witnesses = [jsonable(f) for f in rep.flags]
    return CheckResult(f"thm41 {A.name} vs {B.name}", _verdict(rep.consistent), None, witnesses, details)


def check_epi_dense(args: dict, where: str, max_points: int) -> CheckResult:
    A = _wrap(f"{where}.subcat", subcat.resolve_subcat, _arg(args, "subcat", where, required=True))
    n = _arg(args, "max_points", where, default=min(max_points, 3))
    U = _universe(n, f"{where}.max_points")
    rep = _wrap(where, rc.epi_dense_consistency, A, U)
    witnesses = [jsonable({"map": f, "cancellable": c, "dense": d}) for f, c, d in rep.violations]
    details = {"checked": rep.checked}
    return CheckResult(f"epi-dense {A.name}", _verdict(rep.passed), None, witnesses, details)


def check_oracle(args: dict, where: str, max_points: int) -> CheckResult:
    names = _arg(args, "subcats", where) or [_arg(args, "subcat", where, required=True)]
    n = _arg(args, "max_points", where, default=min(max_points, 3))
    U = _universe(n, f"{where}.max_points")
    witnesses = []
    total = 0
    for name in names:
        A = _wrap(f"{where}.subcat", subcat.resolve_subcat, name)
        for form, mask, f, b in _wrap(where, rc.oracle_agreement, A, U):
            witnesses.append({"subcat": A.name, "space": form, "subset": mask, "formula": f, "bruteforce": b})
        total += sum(1 << X.n for X in U)
    details = {"subcats": list(names), "entries": total}
    return CheckResult("oracle-agreement", _verdict(not witnesses), None, witnesses, details)


CHECKS = {
    "closure": check_closure,
    "compare": check_compare,
    "hull": check_hull,
    "diagonal": check_diagonal,
    "axioms": check_axioms,
    "thm41": check_thm41,
    "epi-dense": check_epi_dense,
    "oracle-agreement": check_oracle,
}


def _timed(fn, args, where, max_points, timings: bool) -> CheckResult:
    start = time.perf_counter()
    res = fn(args, where, max_points)
    if timings:
        res.duration = round(time.perf_counter() - start, 3)
    return res


def run_scenario_obj(scn: dict, timings: bool = False, base: Path | None = None) -> Report:
    """Execute a parsed scenario; raises ScenarioError naming the offending field."""
    if not isinstance(scn, dict):
        raise ScenarioError("scenario: expected a JSON object")
    name = scn.get("name", "scenario")
    uni = scn.get("universe", {}) or {}
    if not isinstance(uni, dict):
        raise ScenarioError("universe: expected an object")
    max_points = uni.get("max_points", fintop.DEFAULT_MAX_POINTS)
    if not isinstance(max_points, int) or max_points < 0:
        raise ScenarioError("universe.max_points: must be a non-negative integer")
    if max_points > fintop.max_points():
        raise ScenarioError(f"universe.max_points: {max_points} exceeds the ceiling {fintop.max_points()}")
    bounds = scn.get("bounds", {}) or {}
    checks = scn.get("checks", [])
    if not isinstance(checks, list):
        raise ScenarioError("checks: expected an array")
    report = Report(str(name))
    for i, check in enumerate(checks):
        where = f"checks[{i}]"
        if not isinstance(check, dict):
            raise ScenarioError(f"{where}: expected an object")
        kind = check.get("kind")
        if kind not in CHECKS:
            raise ScenarioError(f"{where}.kind: unknown check kind {kind!r}")
        args = dict(check.get("args", {}) or {})
        if kind in bounds and "bound" not in args:
            args["bound"] = bounds[kind]
        if base is not None:
            space = args.get("space")
            if isinstance(space, str) and not Path(space).is_absolute() and (base / space).exists():
                args["space"] = str(base / space)
            for key in ("subcat", "a", "b"):
                v = args.get(key)
                if not isinstance(v, str):
                    continue
                prefix, ref = ("seh:", v[4:]) if v.startswith("seh:") else ("", v)
                if not Path(ref).is_absolute() and (base / ref).exists():
                    args[key] = prefix + str(base / ref)
        report.results.append(_timed(CHECKS[kind], args, f"{where}.args", max_points, timings))
    return report


def run_scenario(path, timings: bool = False) -> Report:
    path = Path(path)
    try:
        scn = json.loads(path.read_text())
    except OSError as exc:
        raise ScenarioError(f"scenario file: {exc}") from None
    except json.JSONDecodeError as exc:
        raise ScenarioError(f"scenario file: invalid JSON ({exc})") from None
    return run_scenario_obj(scn, timings, base=path.parent)


# ---------------------------------------------------------------------------
# argument parsing


def _add_format(p):
    p.add_argument("--format", choices=("text", "json"), default="text")
    p.add_argument("--timings", action="store_true", help="record wall-clock time per check")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="regclose", description="Regular closure operators on finite spaces.")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("validate", help="validate a space file and print its canonical form")
    p.add_argument("space_file")
    _add_format(p)

    p = sub.add_parser("spaces", help="list spaces up to homeomorphism")
    p.add_argument("--n", type=int, required=True)
    _add_format(p)

    p = sub.add_parser("closure", help="closure of a subset")
    p.add_argument("--space", required=True)
    p.add_argument("--subset", default="")
    p.add_argument("--subcat", required=True)
    p.add_argument("--method", choices=("formula", "brute", "both"), default="formula")
    _add_format(p)

    p = sub.add_parser("compare", help="do two subcategories induce the same closure?")
    p.add_argument("--a", required=True)
    p.add_argument("--b", required=True)
    p.add_argument("--max-points", type=int, default=fintop.DEFAULT_MAX_POINTS)
    _add_format(p)

    p = sub.add_parser("hull", help="hull membership")
    p.add_argument("--which", choices=tuple(_HULLS), required=True)
    p.add_argument("--subcat", required=True)
    p.add_argument("--space", required=True)
    p.add_argument("--bound", type=int)
    _add_format(p)

    p = sub.add_parser("diagonal", help="is the diagonal regular?")
    p.add_argument("--space", required=True)
    p.add_argument("--subcat", required=True)
    _add_format(p)

    p = sub.add_parser("axioms", help="closure-operator axioms over a universe")
    p.add_argument("--subcat", required=True)
    p.add_argument("--max-points", type=int, default=3)
    _add_format(p)

    p = sub.add_parser("scenario", help="run a scenario file")
    p.add_argument("file")
    _add_format(p)
    return parser


def _single(kind: str, args: dict, max_points: int, timings: bool) -> Report:
    report = Report(kind)
    report.results.append(_timed(CHECKS[kind], args, "args", max_points, timings))
    return report


def _validate(path: str) -> Report:
    X = fintop.load_space(path)
    details = {"form": fintop.canonical_form(X), "space": fintop.space_to_json(X), "t0": X.is_t0()}
    return Report("validate", [CheckResult("validate", "pass", None, [], details)])


def _spaces(n: int) -> Report:
    spaces = fintop.enumerate_spaces(n)
    forms = [fintop.canonical_form(X) for X in spaces]
    details = {"n": n, "count": len(spaces), "forms": forms}
    return Report("spaces", [CheckResult(f"spaces n={n}", "pass", None, [], details)])


def dispatch(ns) -> Report:
    cmd = ns.command
    ceiling = fintop.max_points()
    if cmd == "validate":
        return _validate(ns.space_file)
    if cmd == "spaces":
        return _spaces(ns.n)
    if cmd == "scenario":
        return run_scenario(ns.file, ns.timings)
    if cmd == "closure":
        args = {"space": ns.space, "subset": ns.subset, "subcat": ns.subcat, "method": ns.method}
        return _single("closure", args, ceiling, ns.timings)
    if cmd == "compare":
        return _single("compare", {"a": ns.a, "b": ns.b, "max_points": ns.max_points}, ceiling, ns.timings)
    if cmd == "hull":
        args = {"which": ns.which, "subcat": ns.subcat, "space": ns.space, "bound": ns.bound}
        return _single("hull", args, ceiling, ns.timings)
    if cmd == "diagonal":
        return _single("diagonal", {"space": ns.space, "subcat": ns.subcat}, ceiling, ns.timings)
    if cmd == "axioms":
        return _single("axioms", {"subcat": ns.subcat, "max_points": ns.max_points}, ceiling, ns.timings)
    raise InputError(f"unknown command {cmd!r}")


def main(argv=None) -> int:
    parser = build_parser()
    try:
        ns = parser.parse_args(argv)
    except SystemExit as exc:
        return 2 if exc.code else 0
    try:
        report = dispatch(ns)
    except InputError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    sys.stdout.buffer.write(emit_report(report, ns.format))
    sys.stdout.flush()
    return report.exit_code


if __name__ == "__main__":
    sys.exit(main())
