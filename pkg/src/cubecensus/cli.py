"""Command-line front end.

Exit codes: 0 success, 1 malformed input or usage error (parse diagnostics
carry line numbers), 2 verification or self-test failure.
"""

from __future__ import annotations

import argparse
import json
import sys

from .blocks import BlockKind, block_valences
from .census import (
    classify,
    render_records,
    render_text,
    render_verification,
    run_census,
    verify_theorem,
)
from .cube_complex import GluingSpecError, parse_gluing_text
from .enumeration import enumerate_canonical

EXPECTED_VALENCES = {
    BlockKind.FLIPPED: (4, (1, 3, 3, 3, 3, 3)),
    BlockKind.FIVE_VALENT: (5, (2, 2, 2, 2, 3, 3)),
    BlockKind.FOUR_VALENT: (4, (2, 2, 3, 3, 3, 3)),
}


class _Parser(argparse.ArgumentParser):
    def error(self, message):  # argparse defaults to exit code 2
        self.print_usage(sys.stderr)
        print(f"{self.prog}: error: {message}", file=sys.stderr)
        raise SystemExit(1)


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="cubecensus",
                     description="census of closed 3-manifolds glued from one cube")
    sub = parser.add_subparsers(dest="command", required=True)

    def add_common(p, with_input=False):
        p.add_argument("--opposite-only", action="store_true",
                       help="restrict to gluings pairing opposite faces")
        p.add_argument("--jobs", type=int, default=1, metavar="N",
                       help="parallel classification workers")
        p.add_argument("--format", choices=("text", "records"), default="text",
                       help="human-readable text or one JSON record per line")
        if with_input:
            p.add_argument("--input", metavar="PATH", required=True,
                           help="gluing-spec file, one `<faceA> <faceB> r<k>[m]` per line")

    add_common(sub.add_parser("enumerate", help="list canonical gluing classes"))
    add_common(sub.add_parser("classify", help="classify one gluing from a file"),
               with_input=True)
    add_common(sub.add_parser("census", help="classify every canonical class"))
    add_common(sub.add_parser("verify", help="run the full census and verify the classification"))
    sub.add_parser("blocks-selftest", help="check block valence tables")
    return parser


def _cmd_enumerate(args) -> int:
    classes = enumerate_canonical(args.opposite_only)
    for c in classes:
        if args.format == "records":
            print(json.dumps({"record": "class", "classId": c.class_id,
                              "orbitSize": c.orbit_size}, sort_keys=True))
        else:
            print(f"{c.class_id} | orbit {c.orbit_size}")
    if args.format == "text":
        print(f"total: {len(classes)} classes")
    return 0


def _cmd_classify(args) -> int:
    try:
        with open(args.input, encoding="utf-8") as handle:
            gluing = parse_gluing_text(handle.read())
    except OSError as exc:
        print(f"cannot read {args.input}: {exc}", file=sys.stderr)
        return 1
    except GluingSpecError as exc:
        print(f"{args.input}: {exc}", file=sys.stderr)
        return 1
    row = classify(gluing)
    if args.format == "records":
        payload = {"record": "class"}
        payload.update(row.record())
        print(json.dumps(payload, sort_keys=True))
    else:
        for key, value in row.record().items():
            print(f"{key}: {value}")
    return 0


def _cmd_census(args) -> int:
    report = run_census(args.opposite_only, jobs=args.jobs)
    renderer = render_records if args.format == "records" else render_text
    sys.stdout.write(renderer(report))
    return 0


def _cmd_verify(args) -> int:
    if args.opposite_only:
        print("verify needs the full census; drop --opposite-only", file=sys.stderr)
        return 1
    report = run_census(False, jobs=args.jobs)
    result = verify_theorem(report)
    sys.stdout.write(render_verification(result))
    return 0 if result.passed else 2


def _cmd_blocks_selftest(_args) -> int:
    failed = False
    print("block valences (internal edge, sorted diagonal valences):")
    for kind, expected in EXPECTED_VALENCES.items():
        actual = block_valences(kind)
        ok = actual == expected
        failed = failed or not ok
        print(f"  [{'PASS' if ok else 'FAIL'}] {kind.value}: "
              f"computed {actual}, expected {expected}")
    five = block_valences(BlockKind.FIVE_TETRAHEDRON)
    ok = five == (None, (3, 3, 3, 3, 3, 3))
    failed = failed or not ok
    print(f"  [{'PASS' if ok else 'FAIL'}] {BlockKind.FIVE_TETRAHEDRON.value}: "
          f"computed {five}, expected (None, (3, 3, 3, 3, 3, 3))")
    return 2 if failed else 0


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    handlers = {
        "enumerate": _cmd_enumerate,
        "classify": _cmd_classify,
        "census": _cmd_census,
        "verify": _cmd_verify,
        "blocks-selftest": _cmd_blocks_selftest,
    }
    return handlers[args.command](args)


def entry_point() -> None:
    raise SystemExit(main())


if __name__ == "__main__":
    entry_point()
