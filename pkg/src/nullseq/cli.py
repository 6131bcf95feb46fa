"""Command-line front end.

Exit codes: 0 ok, 1 invariant failure, 2 search budget exhausted,
3 input/parse error, 4 insufficient trace depth, 5 rejected input
(a mathematical precondition does not hold).
"""

from __future__ import annotations

import argparse
import csv
import json
import os
import random
import sys
from fractions import Fraction
from pathlib import Path

from . import certio
from .ambient import Element, T, format_rational, parse_rational
from .duality import (
    CharacterBox,
    NoEscapingCoordinate,
    gclosed_separator,
    schur_witness,
    verify_separator,
    verify_witness,
)
from .monothetic import (
    DEFAULT_BUDGET,
    ConstructionError,
    GeneratorTrace,
    InsufficientDepth,
    approximate_target,
    build_generator,
    orbit_gaps,
    verify_trace,
)
from .separation import dichotomy, points_from_texts, verify_dichotomy
from .sequences import NullSeq

EXIT_OK, EXIT_INVARIANT, EXIT_BUDGET, EXIT_IO, EXIT_DEPTH, EXIT_REJECTED = range(6)
DEFAULT_SEED = 20240901


class InputError(Exception):
    pass


def _rational(text: str) -> Fraction:
    try:
        return parse_rational(text)
    except ValueError as exc:
        raise argparse.ArgumentTypeError(str(exc)) from exc


def _default_budget() -> int:
    env = os.environ.get("NULLSEQ_BUDGET_DEFAULT")
    return int(env) if env else DEFAULT_BUDGET


def _read_json(path: str):
    try:
        return json.loads(Path(path).read_text(encoding="utf-8"))
    except (OSError, json.JSONDecodeError) as exc:
        raise InputError(f"cannot read {path}: {exc}") from exc


def _load_trace(path: str) -> GeneratorTrace:
    data = _read_json(path)
    try:
        return GeneratorTrace.from_dict(data)
    except (KeyError, TypeError, ValueError) as exc:
        raise InputError(f"{path} is not a valid trace-v1 file: {exc}") from exc


def _emit(obj, args, path=None) -> None:
    path = path or args.out
    text = certio.dumps(obj, timestamp=not args.no_timestamp)
    if path:
        Path(path).write_text(text, encoding="utf-8")
    else:
        sys.stdout.write(text)


def cmd_build_generator(args) -> int:
    if args.stages == 0:
        print("warning: zero stages requested; writing the trivial trace", file=sys.stderr)
    try:
        trace = build_generator(args.stages, budget=args.budget)
    except ConstructionError as exc:
        print(f"construction failed at stage {exc.stage}: {exc.reason}", file=sys.stderr)
        if args.out:
            partial = args.out + ".partial"
            certio.save(exc.partial, partial, timestamp=not args.no_timestamp)
            print(f"partial trace saved to {partial}", file=sys.stderr)
        return EXIT_BUDGET
    if args.out:
        certio.save(trace, args.out, timestamp=not args.no_timestamp)
    print(f"{'m':>3} {'n_m':>12} {'eps_m':>10} {'max_gap':>10} {'slack':>16}")
    for s in trace.stages:
        print(f"{s.m:>3} {s.n:>12} {format_rational(s.epsilon):>10} "
              f"{format_rational(s.certificate.max_gap):>10} {format_rational(s.slack):>16}")
    return EXIT_OK


def cmd_verify(args) -> int:
    trace = _load_trace(args.input)
    report = verify_trace(trace)
    for c in report.checks:
        mark = "PASS" if c.passed else "FAIL"
        print(f"{mark} stage {c.stage} {c.name}" + (f": {c.detail}" if c.detail else ""))
    for name, ok in report.summary().items():
        print(f"{'PASS' if ok else 'FAIL'} {name}")
    return EXIT_OK if report.ok else EXIT_INVARIANT


def cmd_approx(args) -> int:
    trace = _load_trace(args.input)
    try:
        target = NullSeq.parse(args.target)
    except ValueError as exc:
        raise InputError(f"bad target: {exc}") from exc
    try:
        result = approximate_target(trace, target, args.epsilon)
    except InsufficientDepth as exc:
        need = "unbounded" if exc.required is None else str(exc.required)
        print(f"insufficient depth: required stages {need}, available {exc.available}",
              file=sys.stderr)
        return EXIT_DEPTH
    print(f"k = {result.k}")
    print(f"stage = {result.stage}")
    print(f"distance in {result.distance}")
    print(f"bound = {format_rational(result.bound)} < {format_rational(result.epsilon)}")
    if args.out:
        certio.save(result, args.out, timestamp=not args.no_timestamp)
    return EXIT_OK


def cmd_schur_demo(args) -> int:
    try:
        t = Element.parse(args.t)
    except ValueError as exc:
        raise InputError(str(exc)) from exc
    family = CharacterBox.integer_range(t.group, args.support, -args.entry_bound, args.entry_bound)
    report = schur_witness(t, args.horizon, family)
    checks = verify_witness(report)
    _emit(report, args)
    print(f"vanish_after={report.vanish_after} distance={format_rational(report.distance)} "
          f"pairs={report.checked_pairs}", file=sys.stderr)
    return EXIT_OK if all(checks.values()) else EXIT_INVARIANT


def cmd_dichotomy(args) -> int:
    data = _read_json(args.input)
    if not isinstance(data, list):
        raise InputError("points file must hold a JSON list of text forms")
    try:
        points = points_from_texts(data)
    except ValueError as exc:
        raise InputError(str(exc)) from exc
    result = dichotomy(points, args.radius, args.threshold)
    _emit(result, args)
    return EXIT_OK if verify_dichotomy(result) else EXIT_INVARIANT


def _random_null_tests(group, count: int, rng: random.Random) -> list[list[NullSeq]]:
    tests = []
    for _ in range(count):
        length = rng.randint(1, 12)
        seqs = []
        for n in range(1, length + 1):
            width = rng.randint(0, 6)
            scale = n + 1  # entries shrink along the list
            seqs.append(NullSeq(group, [Fraction(rng.randint(-50, 50), 50 * scale)
                                        for _ in range(width)], 0))
        tests.append(seqs)
    return tests


def cmd_gclosed(args) -> int:
    data = _read_json(args.input)
    try:
        ys = [NullSeq.parse(s) for s in data]
    except (TypeError, ValueError) as exc:
        raise InputError(str(exc)) from exc
    if args.horizon is not None:
        ys = ys[: args.horizon]
    if not ys:
        raise InputError("empty sequence list")
    rng = random.Random(args.seed)
    tests = _random_null_tests(ys[0].group, args.tests, rng) if ys[0].group == T else []
    schedule = gclosed_separator(ys, args.delta, tests)
    checks = verify_separator(schedule)
    _emit(schedule, args)
    return EXIT_OK if all(checks.values()) else EXIT_INVARIANT


def _svg(points, size: int = 320) -> str:
    import math

    c = size / 2
    rad = size * 0.4
    dots = []
    for p in points:
        ang = 2 * math.pi * float(p)
        x, y = c + rad * math.cos(ang), c - rad * math.sin(ang)
        dots.append(f'<circle cx="{x:.3f}" cy="{y:.3f}" r="4" fill="#c0392b"/>')
    return (
        f'<svg xmlns="http://www.w3.org/2000/svg" width="{size}" height="{size}">\n'
        f'<circle cx="{c}" cy="{c}" r="{rad}" fill="none" stroke="#333"/>\n'
        + "\n".join(dots)
        + "\n</svg>\n"
    )


def cmd_orbit_plot(args) -> int:
    og = orbit_gaps(args.z, args.n)
    prefix = Path(args.out or "orbit")
    with open(prefix.with_suffix(".csv"), "w", newline="") as fh:
        w = csv.writer(fh)
        w.writerow(["index", "point", "gap_after"])
        for i, (p, g) in enumerate(zip(og.points, og.gaps)):
            w.writerow([i, format_rational(p), format_rational(g)])
    prefix.with_suffix(".svg").write_text(_svg(og.points), encoding="utf-8")
    summary = {
        "kind": "orbit",
        "z": format_rational(og.z),
        "n": og.n,
        "points": [format_rational(p) for p in og.points],
        "max_gap": format_rational(og.max_gap),
    }
    prefix.with_suffix(".json").write_text(certio.dumps(summary), encoding="utf-8")
    print(f"{len(og.points)} points, max_gap {format_rational(og.max_gap)}")
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="nullseq", description=__doc__.splitlines()[0])
    sub = parser.add_subparsers(dest="command", required=True)

    def common(p, out=True):
        p.add_argument("--no-timestamp", action="store_true",
                       help="omit the creation timestamp so outputs are byte-stable")
        p.add_argument("--seed", type=int, default=DEFAULT_SEED)
        if out:
            p.add_argument("--out", default=None)
        return p

    p = common(sub.add_parser("build-generator", help="run the staged construction"))
    p.add_argument("--stages", type=int, required=True)
    p.add_argument("--budget", type=int, default=_default_budget())
    p.set_defaults(func=cmd_build_generator)

    p = common(sub.add_parser("verify", help="re-verify a trace file"), out=False)
    p.add_argument("--in", dest="input", required=True)
    p.set_defaults(func=cmd_verify)

    p = common(sub.add_parser("approx", help="approximate a target by a multiple of the generator"))
    p.add_argument("--in", dest="input", required=True)
    p.add_argument("--target", required=True)
    p.add_argument("--epsilon", type=_rational, required=True)
    p.set_defaults(func=cmd_approx)

    p = common(sub.add_parser("schur-demo", help="Bohr-null, uniformly discrete witness"))
    p.add_argument("--t", default="T:1/3")
    p.add_argument("--horizon", type=int, default=20)
    p.add_argument("--support", type=int, default=10)
    p.add_argument("--entry-bound", type=int, default=3)
    p.set_defaults(func=cmd_schur_demo)

    p = common(sub.add_parser("dichotomy", help="cover or separated witness for a point set"))
    p.add_argument("--in", dest="input", required=True)
    p.add_argument("--radius", type=_rational, required=True)
    p.add_argument("--threshold", type=int, default=50)
    p.set_defaults(func=cmd_dichotomy)

    p = common(sub.add_parser("gclosed", help="separating characters for a non-null sequence"))
    p.add_argument("--in", dest="input", required=True)
    p.add_argument("--delta", type=_rational, required=True)
    p.add_argument("--tests", type=int, default=50)
    p.add_argument("--horizon", type=int, default=None, help="only use the first HORIZON sequences")
    p.set_defaults(func=cmd_gclosed)

    p = common(sub.add_parser("orbit-plot", help="CSV and SVG of an orbit on the circle"))
    p.add_argument("--z", type=_rational, required=True)
    p.add_argument("--n", type=int, required=True)
    p.set_defaults(func=cmd_orbit_plot)
    return parser


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except InputError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_IO
    except NoEscapingCoordinate as exc:
        print(f"rejected: {exc}", file=sys.stderr)
        return EXIT_REJECTED
    except ValueError as exc:
        print(f"rejected: {exc}", file=sys.stderr)
        return EXIT_REJECTED


if __name__ == "__main__":
    sys.exit(main())
