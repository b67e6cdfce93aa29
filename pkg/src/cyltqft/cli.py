"""Command-line front end: validate documents, audit a theory, verify the
cylinder functor, and emit built values as JSON.

Exit codes are part of the contract.  0 means every check passed, 1 means
the mathematics failed (a law violation in the report, or a construction
that refused with a named guard), 2 means the input was unusable.  The
process never shows a traceback.

Output is deterministic: reports render sorted records with sorted JSON
keys, and built values serialize canonically, so two runs over the same
input are byte-identical.
"""

from __future__ import annotations

import argparse
import json
import sys

from .bimod import (bimodule_from_jsonable, bimodule_to_jsonable,
                    is_rigid_bimodule, validate_bimodule)
from .ccob import cobordism_from_jsonable, object_from_jsonable
from .cyl import cylinder_bimodule, cylinder_semigroup, verify_double_functor
from .errors import InputError, TheoryViolation
from .fsgrp import (fsgrp_from_jsonable, fsgrp_to_jsonable, is_rigid,
                    validate_fsgrp)
from .reports import Report
from .theory import (LocalTheory, check_axioms, constant_sheaf_theory,
                     free_boundary_theory)
from .universe import functor_universe, theory_universe

THEORIES = ("constant", "free_boundary")


def _theory_from_args(args: argparse.Namespace) -> LocalTheory:
    if args.set_size < 1:
        raise InputError("--set-size must be at least 1")
    base = [str(i) for i in range(args.set_size)]
    if args.theory == "constant":
        return constant_sheaf_theory(base)
    return free_boundary_theory(base, args.fill)


def _load_json(path: str) -> object:
    try:
        with open(path, encoding="utf-8") as handle:
            return json.load(handle)
    except OSError as exc:
        raise InputError(f"cannot read {path}: {exc}") from exc
    except json.JSONDecodeError as exc:
        raise InputError(f"{path} is not valid JSON: {exc}") from exc


def _emit(text: str, out: str | None) -> None:
    if out is None:
        sys.stdout.write(text)
        return
    with open(out, "w", encoding="utf-8") as handle:
        handle.write(text)


def _render(report: Report, fmt: str) -> str:
    return report.to_json() if fmt == "json" else report.to_text()


def _echo_seed(report: Report, args: argparse.Namespace) -> None:
    # accepted for interface stability; nothing here draws random numbers
    if getattr(args, "seed", None) is not None:
        report.config["seed"] = args.seed


def cmd_check_fsgrp(args: argparse.Namespace) -> int:
    f = fsgrp_from_jsonable(_load_json(args.path))
    report = validate_fsgrp(f, name=args.path)
    if report.ok:
        # rigidity of an invalid structure is meaningless, and is_rigid
        # refuses to compute it
        report.notes.append(f"rigid: {'yes' if is_rigid(f) else 'no'}")
    _emit(_render(report, args.format), args.out)
    return 0 if report.ok else 1


def cmd_check_bimodule(args: argparse.Namespace) -> int:
    b = bimodule_from_jsonable(_load_json(args.path))
    report = validate_bimodule(b, name=args.path)
    if report.ok:
        report.notes.append(
            f"rigid: {'yes' if is_rigid_bimodule(b) else 'no'}")
    _emit(_render(report, args.format), args.out)
    return 0 if report.ok else 1


def cmd_check_theory(args: argparse.Namespace) -> int:
    theory = _theory_from_args(args)
    universe = theory_universe(max_components=args.max_components,
                               max_regions=args.max_regions,
                               max_boundary=args.max_components)
    report = check_axioms(theory, universe)
    _echo_seed(report, args)
    _emit(_render(report, args.format), args.out)
    return 0 if report.ok else 1


def cmd_verify_functor(args: argparse.Namespace) -> int:
    """Audit the theory first, then check the functor laws.

    An unsound theory usually also refuses construction; both facts land
    in the same report, the refusal under the check name `construction`
    with the violated guard as its instance.
    """
    theory = _theory_from_args(args)
    report = Report(kind="verify-functor")
    report.config["theory"] = dict(theory.descriptor)
    _echo_seed(report, args)

    audit_universe = theory_universe(max_components=args.max_components,
                                     max_regions=args.max_regions,
                                     max_boundary=args.max_components)
    audit = check_axioms(theory, audit_universe)
    report.config["audit_universe"] = audit.config["universe"]
    for r in audit.sorted_records():
        report.add("axiom-" + r.check, r.instance, r.passed,
                   r.witness, r.detail)

    try:
        universe = functor_universe(max_components=args.max_components,
                                    max_regions=args.max_regions)
        functor = verify_double_functor(theory, universe)
        report.config["functor_universe"] = functor.config["universe"]
        report.extend(functor)
    except TheoryViolation as exc:
        report.add("construction", exc.guard, False,
                   witness=exc.detail or str(exc))
        report.notes.append(f"construction refused by guard {exc.guard!r}")
    _emit(_render(report, args.format), args.out)
    return 0 if report.ok else 1


def cmd_build(args: argparse.Namespace) -> int:
    theory = _theory_from_args(args)
    doc = _load_json(args.path)
    if isinstance(doc, dict) and "regions" in doc:
        m = cobordism_from_jsonable(doc)
        value = bimodule_to_jsonable(cylinder_bimodule(theory, m))
    else:
        obj = object_from_jsonable(doc)
        value = fsgrp_to_jsonable(cylinder_semigroup(theory, obj))
    _emit(json.dumps(value, sort_keys=True, indent=2) + "\n", args.out)
    return 0


def _add_theory_flags(sub: argparse.ArgumentParser) -> None:
    sub.add_argument("--theory", choices=THEORIES, default="constant",
                     help="which local theory to instantiate")
    sub.add_argument("--set-size", type=int, default=2, metavar="N",
                     help="size of the base value set (default 2)")
    sub.add_argument("--fill", default="0", metavar="TOKEN",
                     help="padding value for free_boundary (default '0')")
    sub.add_argument("--seed", type=int, default=None, metavar="N",
                     help="echoed into the report; all runs are exhaustive")


def _add_output_flags(sub: argparse.ArgumentParser,
                      with_format: bool = True) -> None:
    if with_format:
        sub.add_argument("--format", choices=("text", "json"),
                         default="text", help="report rendering")
    sub.add_argument("--out", default=None, metavar="PATH",
                     help="write output here instead of stdout")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="cyltqft",
        description="finite model checks for fibered semi-groups, their "
                    "bimodules, and the cylinder construction")
    subs = parser.add_subparsers(dest="command", required=True)

    sub = subs.add_parser("check-fsgrp",
                          help="validate a fibered semi-group document")
    sub.add_argument("path", help="JSON file holding the semi-group")
    _add_output_flags(sub)
    sub.set_defaults(func=cmd_check_fsgrp)

    sub = subs.add_parser("check-bimodule",
                          help="validate a bimodule document")
    sub.add_argument("path", help="JSON file holding the bimodule")
    _add_output_flags(sub)
    sub.set_defaults(func=cmd_check_bimodule)

    sub = subs.add_parser("check-theory",
                          help="audit the gluing axioms over a finite slice")
    _add_theory_flags(sub)
    sub.add_argument("--max-components", type=int, default=3, metavar="N",
                     help="bound on boundary components (default 3)")
    sub.add_argument("--max-regions", type=int, default=3, metavar="N",
                     help="bound on body regions (default 3)")
    _add_output_flags(sub)
    sub.set_defaults(func=cmd_check_theory)

    sub = subs.add_parser("verify-functor",
                          help="audit the theory, then the functor laws")
    _add_theory_flags(sub)
    sub.add_argument("--max-components", type=int, default=2, metavar="N",
                     help="bound on boundary components (default 2)")
    sub.add_argument("--max-regions", type=int, default=3, metavar="N",
                     help="bound on body regions (default 3)")
    _add_output_flags(sub)
    sub.set_defaults(func=cmd_verify_functor)

    sub = subs.add_parser("build",
                          help="build the value of an object or a body "
                               "and print it as JSON")
    sub.add_argument("path", help="JSON file holding a boundary object "
                                  "(components + orientation) or a body "
                                  "(with regions)")
    _add_theory_flags(sub)
    _add_output_flags(sub, with_format=False)
    sub.set_defaults(func=cmd_build)

    return parser


def main(argv: list[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except TheoryViolation as exc:
        print(f"refused: {exc}", file=sys.stderr)
        return 1
    except InputError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except Exception as exc:  # contract: never show a traceback
        print(f"internal error: {exc!r}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
