"""famkit command line: parse problem files, dispatch, emit JSON reports.

Exit codes: 0 success/feasible, 3 infeasible/not-integrable/not-jordan,
4 undecided, 2 input error.  Reports go to stdout, diagnostics to stderr;
output is deterministic for fixed input and flags.
"""

from __future__ import annotations

import argparse
import json
import sys

from .approx import approx_uniform, approx_uniform_small
from .boolalg import Partition
from .boxes import VolumeFam, make_box
from .cantor import DEFAULT_DEPTH_BUDGET, cantor_integrate, lebesgue_vitali_check, oscillation_cover
from .errors import FamkitError, InputError
from .extend import (
    PartialAssignment,
    amalgamate,
    compatible,
    extend_assignment,
    extend_with_filter,
    fam_with_constraints,
    fam_with_integral_constraints,
    three_way_extend,
    ultrafilter_with_limits,
    value_range,
)
from .fam import classify as classify_fam
from .fam import has_uap, uniformly_supported
from .integrate import (
    DEFAULT_BUDGET,
    as_table,
    inner_measure,
    integrate,
    integrate_over,
    is_jordan,
    measure_bracket,
    outer_measure,
)
from .jsonio import (
    algebra_json,
    fam_json,
    jsonable,
    parse_algebra,
    parse_fam,
    parse_fn,
    parse_ground,
    parse_partition,
    parse_rational,
    parse_region,
    parse_set,
    parse_table,
    parse_target,
    set_json,
    set_key,
)

EXIT_OK = 0
EXIT_INPUT = 2
EXIT_NEGATIVE = 3
EXIT_UNDECIDED = 4

STATUS_EXIT = {
    "feasible": EXIT_OK,
    "integrable": EXIT_OK,
    "infeasible": EXIT_NEGATIVE,
    "not_integrable": EXIT_NEGATIVE,
    "undecided": EXIT_UNDECIDED,
}


def _load(args) -> dict:
    if args.infile in (None, "-"):
        text = sys.stdin.read()
    else:
        try:
            with open(args.infile, "r", encoding="utf-8") as fh:
                text = fh.read()
        except OSError as exc:
            raise InputError(f"cannot read problem file: {exc}") from None
    try:
        data = json.loads(text)
    except json.JSONDecodeError as exc:
        raise InputError(f"bad JSON problem file: {exc}") from None
    if not isinstance(data, dict):
        raise InputError("problem file must be a JSON object")
    return data


def _emit(report: dict, args) -> None:
    if getattr(args, "format", "json") == "table":
        for key, value in report.items():
            print(f"{key}: {json.dumps(jsonable(value), sort_keys=True)}")
    else:
        print(json.dumps(jsonable(report), indent=2, sort_keys=True))


def _report_integral(rep, args) -> int:
    out = {
        "status": rep.status,
        "lower": rep.lower,
        "upper": rep.upper,
        "value": rep.value,
        "epsilon": rep.epsilon,
        "backend": rep.backend,
        "trace": [list(t) for t in rep.trace],
    }
    _emit(out, args)
    return STATUS_EXIT[rep.status]


# -- subcommand handlers -------------------------------------------------


def _cmd_algebra(args) -> int:
    data = _load(args)
    algebra = parse_algebra(data)
    _emit(
        {
            "algebra": algebra_json(algebra),
            "atom_count": algebra.atom_count,
            "size": algebra.size(),
        },
        args,
    )
    return EXIT_OK


def _cmd_fam_check(args) -> int:
    fam = parse_fam(_load(args))
    _emit({"fam": fam_json(fam), "total": fam.total}, args)
    return EXIT_OK


def _cmd_classify(args) -> int:
    fam = parse_fam(_load(args))
    flags = classify_fam(fam)
    witness = uniformly_supported(fam) if fam.total > 0 else None
    _emit(
        {
            "probability": flags.probability,
            "strictly_positive": flags.strictly_positive,
            "free": flags.free,
            "finite_sets_null": flags.finite_sets_null,
            "uap": has_uap(fam),
            "d": witness.d if witness else None,
            "support": [set_json(c) for c in witness.support.cells] if witness else None,
        },
        args,
    )
    return EXIT_OK


def _cmd_approx(args) -> int:
    data = _load(args)
    fam = parse_fam(data["fam"])
    partition = (
        parse_partition(data["partition"], fam.algebra)
        if "partition" in data
        else Partition.of_atoms(fam.algebra)
    )
    epsilon = parse_rational(data.get("epsilon", args.eps or "1/8"))
    avoid = parse_set(data["avoid"], fam.algebra.ground) if "avoid" in data else None
    if data.get("small"):
        result = approx_uniform_small(fam, partition, epsilon)
    else:
        result = approx_uniform(fam, partition, epsilon, avoid=avoid)
    _emit(
        {
            "u": set_json(result.u),
            "mu": {fam.algebra.ground.labels[i]: m for i, m in sorted(result.mu.items())},
            "uniform": result.uniform,
            "errors_per_cell": {
                set_key(cell): err
                for cell, err in result.errors_per_cell(fam, partition).items()
            },
        },
        args,
    )
    return EXIT_OK


def _cmd_extend(args) -> int:
    data = _load(args)
    ground = parse_ground(data["ground"])
    pairs = [(parse_set(s, ground), parse_rational(v)) for s, v in data["pairs"]]
    assignment = PartialAssignment(ground, pairs)
    result = extend_assignment(assignment)
    out = {"result": result}
    if "value_range_of" in data:
        target = parse_set(data["value_range_of"], ground)
        bounds = value_range(assignment, target)
        out["value_range_of"] = set_json(target)
        out["value_range"] = list(bounds) if bounds else None
    _emit(out, args)
    return STATUS_EXIT[result.status]


def _cmd_compatible(args) -> int:
    data = _load(args)
    fam0, fam1 = parse_fam(data["fam0"]), parse_fam(data["fam1"])
    ok, certificate = compatible(fam0, fam1)
    _emit({"compatible": ok, "certificate": certificate}, args)
    return EXIT_OK if ok else EXIT_NEGATIVE


def _cmd_amalgamate(args) -> int:
    data = _load(args)
    result = amalgamate(parse_fam(data["fam0"]), parse_fam(data["fam1"]))
    _emit({"result": result}, args)
    return STATUS_EXIT[result.status]


def _cmd_extend_filter(args) -> int:
    data = _load(args)
    fam0 = parse_fam(data["fam0"])
    gens = [parse_set(s, fam0.algebra.ground) for s in data["generators"]]
    result = extend_with_filter(fam0, gens)
    _emit({"result": result}, args)
    return STATUS_EXIT[result.status]


def _cmd_three_way(args) -> int:
    data = _load(args)
    fam0, fam1 = parse_fam(data["fam0"]), parse_fam(data["fam1"])
    gens = [parse_set(s, fam0.algebra.ground) for s in data["generators"]]
    result = three_way_extend(fam0, fam1, gens)
    _emit({"result": result}, args)
    return STATUS_EXIT[result.status]


def _cmd_constrain(args) -> int:
    data = _load(args)
    targets = [parse_target(t) for t in data.get("targets", [])]
    if "ultra" in data:
        ultra = parse_fam(data["ultra"])
        tables = [parse_table(fn, ultra.algebra.ground) for fn in data.get("fns", [])]
        tables = [as_table(t, ultra.algebra.ground) for t in tables]
        result = ultrafilter_with_limits(ultra, tables, targets)
    elif "fam0" in data:
        fam0 = parse_fam(data["fam0"])
        tables = [parse_table(fn, fam0.algebra.ground) for fn in data.get("fns", [])]
        tables = [as_table(t, fam0.algebra.ground) for t in tables]
        result = fam_with_integral_constraints(fam0, tables, targets)
    else:
        ground = parse_ground(data["ground"])
        sets = [parse_set(s, ground) for s in data["sets"]]
        delta = parse_rational(data.get("delta", 1))
        result = fam_with_constraints(ground, sets, targets, delta)
    _emit({"result": result}, args)
    return STATUS_EXIT[result.status]


def _box_fam(args, data) -> VolumeFam:
    box = data.get("box")
    if args.box:
        box = json.loads(args.box)
    if box is None:
        raise InputError("box backend needs --box or a box entry")
    return VolumeFam(make_box(box))


def _cmd_integrate(args) -> int:
    data = _load(args) if args.infile else {}
    if args.fn or "fn" in data:
        fn_spec = json.loads(args.fn) if args.fn else data["fn"]
        fam = _box_fam(args, data)
        fn = parse_fn(fn_spec, fam.dimension)
        eps = args.eps or data.get("epsilon", "1e-6")
        report = integrate(
            fn, fam, epsilon=eps, budget=args.budget, strategy=data.get("strategy", "adaptive")
        )
        return _report_integral(report, args)
    fam = parse_fam(data["fam"])
    table = parse_table(data["table"], fam.algebra.ground)
    if "over" in data:
        report = integrate_over(
            table, parse_set(data["over"], fam.algebra.ground), fam
        )
    else:
        report = integrate(table, fam)
    return _report_integral(report, args)


def _cmd_jordan(args) -> int:
    data = _load(args) if args.infile else {}
    fam = _box_fam(args, data)
    region_spec = json.loads(args.region) if args.region else data["region"]
    region = parse_region(region_spec, fam.dimension)
    eps = parse_rational(args.eps or data.get("epsilon", "1/1024"))
    report = is_jordan(region, fam, eps, budget=args.budget)
    out = {
        "jordan": report.jordan,
        "inner": report.inner,
        "outer": report.outer,
        "measure": report.measure,
    }
    if report.witness:
        out["witness_inner_boxes"] = len(report.witness[0].boxes)
        out["witness_outer_boxes"] = len(report.witness[1].boxes)
    _emit(out, args)
    if report.jordan is True:
        return EXIT_OK
    return EXIT_NEGATIVE if report.jordan is False else EXIT_UNDECIDED


def _cmd_measure(args) -> int:
    data = _load(args) if args.infile else {}
    if "fam" in data:
        fam = parse_fam(data["fam"])
        target = parse_set(data["set"], fam.algebra.ground)
        inner = inner_measure(target, fam)
        outer = outer_measure(target, fam)
    else:
        fam = _box_fam(args, data)
        region_spec = json.loads(args.region) if args.region else data["region"]
        region = parse_region(region_spec, fam.dimension)
        eps = parse_rational(args.eps or data.get("epsilon", "1/1024"))
        bracket = measure_bracket(region, fam, eps, budget=args.budget)
        inner, outer = bracket.inner, bracket.outer
    _emit({"inner": inner, "outer": outer}, args)
    return EXIT_OK


def _cmd_cantor(args) -> int:
    data = _load(args) if args.infile else {}
    fn_spec = json.loads(args.fn) if args.fn else data["fn"]
    fn = parse_fn(fn_spec, 1)
    op = data.get("op", args.op)
    depth = args.depth if args.depth is not None else int(data.get("depth", DEFAULT_DEPTH_BUDGET))
    eps = args.eps or data.get("epsilon", "1e-4")
    if op == "integrate":
        report = cantor_integrate(fn, depth_budget=depth, epsilon=eps)
        return _report_integral(report, args)
    if op == "vitali":
        report = lebesgue_vitali_check(fn, epsilon=eps, depth_budget=depth)
        _emit(
            {
                "verdict": report.verdict,
                "oscillation_profile": [
                    {"threshold": t, "depth": d, "measure": m}
                    for t, d, m in report.oscillation_profile
                ],
            },
            args,
        )
        return STATUS_EXIT[report.verdict]
    if op == "cover":
        threshold = parse_rational(data.get("threshold", "1/4"))
        cover = oscillation_cover(fn, threshold, depth)
        _emit({"cover": list(cover.cover.words), "measure": cover.measure}, args)
        return EXIT_OK
    raise InputError(f"unknown cantor op {op!r}")


HANDLERS = {
    "algebra": _cmd_algebra,
    "fam-check": _cmd_fam_check,
    "classify": _cmd_classify,
    "approx": _cmd_approx,
    "extend": _cmd_extend,
    "compatible": _cmd_compatible,
    "amalgamate": _cmd_amalgamate,
    "extend-filter": _cmd_extend_filter,
    "three-way": _cmd_three_way,
    "constrain": _cmd_constrain,
    "integrate": _cmd_integrate,
    "jordan": _cmd_jordan,
    "measure": _cmd_measure,
    "cantor": _cmd_cantor,
}


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="famkit",
        description="finitely additive measures: extension solvers, Darboux integration, Jordan measure",
    )
    sub = parser.add_subparsers(dest="command")
    for name in HANDLERS:
        p = sub.add_parser(name)
        p.add_argument("--in", dest="infile", default=None, help="problem file (JSON), - for stdin")
        p.add_argument("--eps", default=None, help="tolerance (rational or decimal string)")
        p.add_argument("--depth", type=int, default=None, help="cylinder depth budget")
        p.add_argument("--budget", type=int, default=DEFAULT_BUDGET, help="cell budget")
        p.add_argument("--format", choices=["json", "table"], default="json")
        p.add_argument("--seed", type=int, default=None,
                       help="reserved for randomized test generators; solver paths ignore it")
        p.add_argument("--fn", default=None, help="function DSL (JSON)")
        p.add_argument("--box", default=None, help="bounding box (JSON)")
        p.add_argument("--region", default=None, help="region DSL (JSON)")
        p.add_argument("--op", default="integrate", help="cantor operation: integrate|vitali|cover")
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    if not args.command:
        parser.print_usage(sys.stderr)
        return EXIT_INPUT
    try:
        return HANDLERS[args.command](args)
    except FamkitError as exc:
        print(f"famkit: error: {exc}", file=sys.stderr)
        return EXIT_INPUT
    except (KeyError, TypeError, ValueError) as exc:
        print(f"famkit: bad problem file: {exc!r}", file=sys.stderr)
        return EXIT_INPUT


if __name__ == "__main__":  # pragma: no cover
    sys.exit(main())
