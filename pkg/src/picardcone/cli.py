"""Command line interface.

Exit codes: 0 success, 1 usage or input error, 2 a computed object violates
the statement it realizes (or a certificate fails to replay).
"""

from __future__ import annotations

import argparse
import json
import logging
import sys
from pathlib import Path

from picardcone import certificates
from picardcone.cremona import cremona_reduce, reduction_to_json
from picardcone.harness import (
    ContractViolation,
    RunReport,
    curves_through_point,
    report_emit,
    theorem1_run,
    theorem2_run,
    theorem3_search,
)
from picardcone.kperp import Theorem1Violation, nefness_test, phi_10, sample_qperp
from picardcone.lattice import class_from_json, class_to_json, parse_class
from picardcone.negcurves import enumerate_minus_one_classes
from picardcone.uncollision import certify_good_ray, uncollide

EXIT_OK, EXIT_USAGE, EXIT_CONTRACT = 0, 1, 2

log = logging.getLogger("picardcone")


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(EXIT_USAGE, f"{self.prog}: error: {message}\n")


def parse_class_arg(text: str):
    """``L6(2^8,0,1^4)``, an inline JSON class, or ``@path`` to a JSON file."""
    try:
        if text.startswith("@"):
            text = Path(text[1:]).read_text()
        text = text.strip()
        if text.startswith("{"):
            return class_from_json(json.loads(text))
        return parse_class(text)
    except (OSError, ValueError, KeyError, TypeError) as exc:
        raise UsageError(f"cannot read class {text!r}: {exc}") from exc


def _write_json(out: Path, name: str, obj) -> Path:
    out.mkdir(parents=True, exist_ok=True)
    path = out / name
    path.write_text(json.dumps(obj, indent=1))
    return path


def _emit(args, name: str, obj) -> int:
    path = _write_json(Path(args.out), name, obj)
    print(json.dumps(obj))
    log.info("wrote %s", path)
    return EXIT_OK


def cmd_reduce(args) -> int:
    res = cremona_reduce(parse_class_arg(args.cls))
    return _emit(args, "reduction.json", reduction_to_json(res))


def cmd_nef_test(args) -> int:
    outcome = nefness_test(parse_class_arg(args.cls))
    return _emit(args, "nef_test.json", certificates.to_json(outcome))


def cmd_phi10(args) -> int:
    curve = phi_10(parse_class_arg(args.cls))
    return _emit(args, "phi10.json", class_to_json(curve.rep))


def cmd_uncollide(args) -> int:
    image = uncollide(parse_class_arg(args.cls), args.index, args.r)
    return _emit(args, "uncollide.json", class_to_json(image))


def cmd_certify_good(args) -> int:
    cert = certify_good_ray(parse_class_arg(args.cls), args.index, args.r)
    return _emit(args, "good_ray.json", certificates.to_json(cert))


def cmd_qperp_sample(args) -> int:
    import random

    rng = random.Random(args.seed)
    out = Path(args.out)
    out.mkdir(parents=True, exist_ok=True)
    path = out / f"qperp_s{args.s}.jsonl"
    with path.open("w") as fh:
        for _ in range(args.count):
            line = json.dumps(class_to_json(sample_qperp(args.s, rng, args.bound).cls.rep))
            fh.write(line + "\n")
            print(line)
    return EXIT_OK


def cmd_enumerate_curves(args) -> int:
    out = Path(args.out)
    out.mkdir(parents=True, exist_ok=True)
    path = out / f"curves_s{args.s}_d{args.max_degree}.jsonl"
    with path.open("w") as fh:
        for c in enumerate_minus_one_classes(args.s, args.max_degree):
            line = json.dumps(class_to_json(c.rep))
            fh.write(line + "\n")
            print(line)
    return EXIT_OK


def cmd_verify(args) -> int:
    try:
        obj = json.loads(Path(args.file).read_text())
    except (OSError, ValueError) as exc:
        raise UsageError(f"cannot read {args.file}: {exc}") from exc
    try:
        kind = certificates.verify(obj)
    except certificates.CertificateError as exc:
        print(f"INVALID: {exc}")
        return EXIT_CONTRACT
    print(f"OK {kind}")
    return EXIT_OK


def _finish(args, report: RunReport) -> int:
    paths = report_emit(report, args.out)
    print(json.dumps({"name": report.name, "success": report.success, "rays": len(report.records),
                      "elapsed": round(report.elapsed, 3), "notes": report.notes,
                      "files": {k: str(v) for k, v in paths.items()}}))
    return EXIT_OK if report.success else EXIT_CONTRACT


def cmd_theorem1(args) -> int:
    return _finish(args, theorem1_run(args.s, args.samples, args.seed, args.max_degree))


def cmd_theorem2(args) -> int:
    curves = curves_through_point(args.s, args.index) if args.curves == "through-point" else None
    res = theorem2_run(args.s, args.samples, args.seed, index=args.index, curves=curves)
    return _finish(args, res.report)


def cmd_theorem3(args) -> int:
    res = theorem3_search(args.k, args.budget, args.seed, n_perturb=args.perturb)
    return _finish(args, res.report)


def build_parser() -> argparse.ArgumentParser:
    p = _Parser(prog="picardcone", description="Exact computations on the Picard lattice of blowups of the plane.")
    p.add_argument("--out", default="out", help="output directory (default: out)")
    p.add_argument("-v", "--verbose", action="store_true")
    sub = p.add_subparsers(dest="command", required=True, parser_class=_Parser)

    def with_out(sp):
        # accept --out after the subcommand as well
        sp.add_argument("--out", default=argparse.SUPPRESS, help="output directory")
        return sp

    def with_class(sp):
        sp.add_argument("cls", metavar="CLASS", help="L6(2^8,0,1^4), inline JSON, or @file.json")
        return with_out(sp)

    with_class(sub.add_parser("reduce", help="Cremona-reduce a class")).set_defaults(func=cmd_reduce)
    with_class(sub.add_parser("nef-test", help="nefness certificate or witness")).set_defaults(func=cmd_nef_test)
    with_class(sub.add_parser("phi10", help="(-1)-class orthogonal to a class of the s=10 cone")).set_defaults(
        func=cmd_phi10)
    for name, func in (("uncollide", cmd_uncollide), ("certify-good", cmd_certify_good)):
        sp = with_class(sub.add_parser(name))
        sp.add_argument("--index", type=int, default=1)
        sp.add_argument("--r", type=int, default=2)
        sp.set_defaults(func=func)

    q = sub.add_parser("qperp", help="quadric cone utilities")
    qs = q.add_subparsers(dest="action", required=True, parser_class=_Parser)
    sp = with_out(qs.add_parser("sample", help="rational points of the quadric cone"))
    sp.add_argument("--s", type=int, required=True)
    sp.add_argument("--count", type=int, default=10)
    sp.add_argument("--seed", type=int, default=1)
    sp.add_argument("--bound", type=int, default=20)
    sp.set_defaults(func=cmd_qperp_sample)

    sp = with_out(sub.add_parser("enumerate-curves", help="(-1)-classes as JSON lines"))
    sp.add_argument("--s", type=int, required=True)
    sp.add_argument("--max-degree", type=int, required=True)
    sp.set_defaults(func=cmd_enumerate_curves)

    sp = with_out(sub.add_parser("verify-certificate", help="replay a certificate or report file"))
    sp.add_argument("file")
    sp.set_defaults(func=cmd_verify)

    sp = with_out(sub.add_parser("theorem1", help="three-way nefness equivalence on samples"))
    sp.add_argument("--s", type=int, required=True)
    sp.add_argument("--samples", type=int, default=200)
    sp.add_argument("--seed", type=int, default=1)
    sp.add_argument("--max-degree", type=int, default=8)
    sp.set_defaults(func=cmd_theorem1)

    sp = with_out(sub.add_parser("theorem2", help="K-positive good rays on a 10-dimensional subspace"))
    sp.add_argument("--s", type=int, default=13)
    sp.add_argument("--samples", type=int, default=100)
    sp.add_argument("--seed", type=int, default=1)
    sp.add_argument("--index", type=int, default=1)
    sp.add_argument("--curves", choices=("default", "through-point"), default="default")
    sp.set_defaults(func=cmd_theorem2)

    sp = with_out(sub.add_parser("theorem3", help="search for de Fernex-negative good rays"))
    sp.add_argument("--k", type=int, default=3)
    sp.add_argument("--budget", type=int, default=100_000)
    sp.add_argument("--seed", type=int, default=1)
    sp.add_argument("--perturb", type=int, default=10)
    sp.set_defaults(func=cmd_theorem3)
    return p


def main(argv=None) -> int:
    try:
        args = build_parser().parse_args(argv)
    except SystemExit as exc:
        return exc.code if isinstance(exc.code, int) else EXIT_USAGE
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING, format="%(message)s")
    try:
        return args.func(args)
    except (ContractViolation, Theorem1Violation) as exc:
        print(f"contract violation: {exc}", file=sys.stderr)
        return EXIT_CONTRACT
    except (UsageError, ValueError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())
