"""Command line: ``qbrst validate|height|brst|verify FILE [options]``.

Exit codes: 0 when every check passes, 1 on any failed check, 2 on bad
input or options.
"""

from __future__ import annotations

import argparse
import json
import os
import random
import sys
from concurrent.futures import ThreadPoolExecutor
from pathlib import Path
from typing import Callable, List, Optional, Sequence

from .bar import (
    BarChain,
    boundary,
    homotopy,
    verify_chain_map,
    verify_subcomplex,
    verify_w_identity,
)
from .braid import compute_height, verify_braid_suite
from .brst import (
    LiftRequired,
    build_brst_explicit,
    build_brst_recursive,
    compare_coefficients,
    default_degree,
    verify_closed_action,
    verify_q_squared,
)
from .graded import verify_grading
from .ideal import DegreeCapExceeded
from .qlie import (
    StructureConstants,
    StructureError,
    check_declared_properties,
    check_yang_baxter,
    load_structure,
    validate_structure,
)
from .report import VerificationReport
from .scalars import ScalarError, ScalarParseError, format_scalar, parse_scalar

SUITES = ("braid", "brst", "bar", "grading", "all")
MODES = ("recursive", "explicit", "both")


class UsageError(Exception):
    pass


def _threads() -> int:
    raw = os.environ.get("QBRST_THREADS", "0").strip() or "0"
    try:
        n = int(raw)
    except ValueError:
        raise UsageError(f"QBRST_THREADS must be an integer, got {raw!r}") from None
    if n < 0:
        raise UsageError("QBRST_THREADS must be non-negative")
    return n or min(4, os.cpu_count() or 1)


def run_tasks(tasks: Sequence[Callable[[], VerificationReport]], threads: int) -> List[VerificationReport]:
    """Run independent checks; results come back in task order."""
    if threads <= 1 or len(tasks) <= 1:
        return [_guarded(t) for t in tasks]
    with ThreadPoolExecutor(max_workers=threads) as pool:
        futures = [pool.submit(_guarded, t) for t in tasks]
        return [f.result() for f in futures]


def _guarded(task) -> VerificationReport:
    try:
        return task()
    except DegreeCapExceeded as exc:
        rep = VerificationReport(getattr(task, "label", "check"))
        rep.add(getattr(task, "label", "check"), (), None, None, 0.0, f"degree cap exceeded: {exc}")
        return rep


def _task(label: str, fn: Callable[[], VerificationReport]):
    fn.label = label
    return fn


def _skipped(check_id: str, subject, reason: str) -> VerificationReport:
    rep = VerificationReport(check_id)
    rep.add(check_id, subject, None, None, 0.0, reason)
    return rep


# -- loading -------------------------------------------------------------------------


def _load(path: str, q: Optional[str]) -> StructureConstants:
    sc = load_structure(path)
    if q is not None:
        if not sc.is_laurent:
            raise UsageError("--q applies only to files with laurent scalars")
        try:
            q0 = parse_scalar(q)
        except ScalarParseError as exc:
            raise UsageError(f"--q: {exc}") from None
        if hasattr(q0, "is_constant") and not q0.is_constant():
            raise UsageError("--q must be a rational number")
        sc = sc.specialize(q0)
    return sc


def _max_degree(sc: StructureConstants, requested: Optional[int]) -> int:
    if requested is not None:
        if requested < 1:
            raise UsageError("--max-degree must be at least 1")
        return requested
    return default_degree(sc, cap=3)


# -- commands ------------------------------------------------------------------------


def cmd_validate(sc: StructureConstants, args) -> VerificationReport:
    rep = VerificationReport(f"validate {sc.name}")
    rep.extend(validate_structure(sc))
    rep.extend(check_yang_baxter(sc))
    rep.extend(check_declared_properties(sc))
    return rep


def cmd_height(sc: StructureConstants, args) -> VerificationReport:
    h = compute_height(sc.sigma_rep(), args.max_n)
    rep = VerificationReport(f"height {sc.name}")
    rep.add("height", (sc.name,), True, None, 0.0, f"height {h}")
    return rep


def _coefficients(sc: StructureConstants, mode: str, degree: int):
    rec = exp = None
    rep = VerificationReport(f"brst {sc.name}")
    if mode in ("recursive", "both"):
        try:
            rec = build_brst_recursive(sc, r_max=degree)
            rep.add("brst_recursive", (sc.name,), True, None, 0.0, f"degrees {rec.degrees()}")
        except LiftRequired as exc:
            rep.add("brst_recursive", (sc.name,), None, None, 0.0, f"no t-lift: {exc}")
    if mode in ("explicit", "both"):
        exp = build_brst_explicit(sc, r_max=degree)
        rep.add("brst_explicit", (sc.name,), True, None, 0.0, f"degrees {exp.degrees()}")
        if exp.vanishing_at_height is not None:
            rep.add("brst_vanishes_at_height", (sc.name, exp.height), exp.vanishing_at_height)
    if rec is not None and exp is not None:
        rep.extend(compare_coefficients(rec, exp, sc.name))
    return rep, rec, exp


def _dump(coeffs, path: str) -> None:
    doc = {"n": coeffs.n, "method": coeffs.method, "height": coeffs.height, "coefficients": {}}
    for r in coeffs.degrees():
        op = coeffs.get(r)
        doc["coefficients"][str(r)] = [
            [list(map(lambda x: x + 1, o)), list(map(lambda x: x + 1, i)), format_scalar(v)]
            for o, i, v in op.nonzero_entries()
        ]
    Path(path).write_text(json.dumps(doc, indent=1) + "\n")


def cmd_brst(sc: StructureConstants, args) -> VerificationReport:
    degree = _max_degree(sc, args.max_degree)
    rep, rec, exp = _coefficients(sc, args.mode, degree)
    if args.dump:
        chosen = rec or exp
        if chosen is not None:
            _dump(chosen, args.dump)
    return rep


def _bar_sanity(sc: StructureConstants, count: int = 50, seed: int = 0) -> VerificationReport:
    rnd = random.Random(seed)
    rep = VerificationReport("bar complex identities")
    bad_b2 = bad_h = 0
    for _ in range(count):
        c = BarChain()
        deg = rnd.randint(2, 4)
        for _ in range(rnd.randint(1, 4)):
            slots = tuple(tuple(rnd.randrange(sc.n) for _ in range(rnd.randint(0, 2))) for _ in range(deg))
            c.add_term(slots, rnd.randint(-3, 3))
        if not c.is_zero():
            if deg >= 3:
                bad_b2 += 0 if boundary(boundary(c)).is_zero() else 1
            bad_h += 0 if homotopy(boundary(c)) + boundary(homotopy(c)) == c else 1
    rep.add("bar_boundary_squared", (sc.name, count), bad_b2 == 0, {"failures": bad_b2})
    rep.add("bar_homotopy", (sc.name, count), bad_h == 0, {"failures": bad_h})
    return rep


def _suite_tasks(sc: StructureConstants, suite: str, degree: int):
    tasks = []
    want = (lambda s: suite in (s, "all"))
    if want("braid"):
        tasks.append(_task("braid", lambda: verify_braid_suite(sc.sigma_rep(), 4, f"{sc.name}:sigma")))
        tasks.append(_task("braid", lambda: verify_braid_suite(sc.r_rep(), 4, f"{sc.name}:R")))
    coeffs = {}

    def get_coeffs():
        if "c" not in coeffs:
            coeffs["c"] = _coefficients(sc, "both", degree)
        return coeffs["c"]

    def active():
        _, rec, exp = get_coeffs()
        return rec if rec is not None else exp

    if suite in ("brst", "bar", "all"):
        get_coeffs()  # shared by the tasks below; build before fanning out
    if want("brst"):
        tasks.append(_task("brst", lambda: get_coeffs()[0]))
        tasks.append(_task("q_squared", lambda: verify_q_squared(sc, active(), degree)))
        tasks.append(_task("closed_action", lambda: verify_closed_action(sc, active(), degree)))
    if want("bar"):
        tasks.append(_task("bar", lambda: _bar_sanity(sc)))

        def lifted(fn, label):
            def run():
                try:
                    return fn()
                except LiftRequired as exc:
                    return _skipped(label, (sc.name,), f"no t-lift: {exc}")
            return _task(label, run)

        tasks.append(lifted(lambda: verify_w_identity(sc, None, degree), "w_identity"))
        tasks.append(lifted(lambda: verify_subcomplex(sc, None, degree), "subcomplex"))
        tasks.append(_task("chain_map", lambda: verify_chain_map(sc, active(), degree)))
    if want("grading"):
        tasks.append(_task("grading", lambda: verify_grading(sc, None, degree)))
    return tasks


def cmd_verify(sc: StructureConstants, args) -> VerificationReport:
    degree = _max_degree(sc, args.max_degree)
    rep = VerificationReport(f"verify {sc.name} (suite {args.suite}, max degree {degree})")
    tasks = _suite_tasks(sc, args.suite, degree)
    return rep.merged(run_tasks(tasks, _threads()))


COMMANDS = {"validate": cmd_validate, "height": cmd_height, "brst": cmd_brst, "verify": cmd_verify}


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="qbrst", description="Verify quantum Lie algebra and BRST identities.")
    sub = p.add_subparsers(dest="command", required=True)

    def common(sp):
        sp.add_argument("file", help="structure-constant JSON file (or a bundled name such as sl2.json)")
        sp.add_argument("--report", metavar="PATH", help="write the machine-readable report here")
        sp.add_argument("--no-timing", action="store_true", help="omit wall-clock times (byte-stable output)")
        sp.add_argument("--q", default=None, help="specialize laurent scalars at this rational value")

    common(sub.add_parser("validate", help="structure constraints and Yang-Baxter"))
    sp = sub.add_parser("height", help="height of the sigma representation")
    common(sp)
    sp.add_argument("--max-n", type=int, default=5)
    sp = sub.add_parser("brst", help="build BRST coefficients")
    common(sp)
    sp.add_argument("--max-degree", type=int, default=None)
    sp.add_argument("--mode", choices=MODES, default="both")
    sp.add_argument("--dump", metavar="PATH", help="write the coefficients as JSON")
    sp = sub.add_parser("verify", help="run verification suites")
    common(sp)
    sp.add_argument("--suite", choices=SUITES, default="all")
    sp.add_argument("--max-degree", type=int, default=None)
    return p


def main(argv: Optional[Sequence[str]] = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return 2 if exc.code not in (0, None) else 0
    try:
        if getattr(args, "max_n", 5) < 2:
            raise UsageError("--max-n must be at least 2")
        sc = _load(args.file, args.q)
        report = COMMANDS[args.command](sc, args)
    except (UsageError, StructureError, ScalarParseError, ScalarError) as exc:
        print(f"qbrst: error: {exc}", file=sys.stderr)
        return 2
    with_time = not args.no_timing
    print(report.render(with_time))
    if args.report:
        Path(args.report).write_text(report.to_json(with_time) + "\n")
    return 0 if report.ok else 1


if __name__ == "__main__":  # pragma: no cover
    sys.exit(main())
