"""Command-line entry point.

Usage:
    qmanin verify SUITE --type A1 --ell 3 [--seed N] [--out FILE]
                        [--format json|markdown]

Exit codes: 0 all checks pass, 1 at least one check failed,
2 configuration error (bad suite, type, or root-of-unity order).
"""

import argparse
import json
import sys

from .verify import ConfigurationError, SUITE_NAMES, TYPE_LABELS, run_suite


def build_parser():
    parser = argparse.ArgumentParser(
        prog="qmanin",
        description="Exact verification suites for quantized enveloping "
                    "algebras at roots of unity and Manin-triple Poisson "
                    "geometry.")
    sub = parser.add_subparsers(dest="command", required=True)
    verify = sub.add_parser(
        "verify", help="run a named verification suite")
    verify.add_argument("suite", choices=sorted(SUITE_NAMES),
                        help="which suite to run")
    verify.add_argument("--type", dest="label", default="A1",
                        choices=list(TYPE_LABELS), help="Cartan type label")
    verify.add_argument("--ell", type=int, default=3,
                        help="odd root-of-unity order")
    verify.add_argument("--seed", type=int, default=0,
                        help="seed for the randomized witnesses")
    verify.add_argument("--out", default=None,
                        help="write the report to this file")
    verify.add_argument("--format", dest="fmt", default="json",
                        choices=["json", "markdown"],
                        help="report format")
    return parser


def format_markdown(report):
    lines = []
    params = report["parameters"]
    lines.append("# %s suite" % report["suite"])
    lines.append("")
    lines.append("type %s, ell %d, seed %d"
                 % (params["type"], params["ell"], params["seed"]))
    lines.append("")
    lines.append("| check | status | witness |")
    lines.append("| --- | --- | --- |")
    for check in report["checks"]:
        lines.append("| %s | %s | %s |"
                     % (check["name"], check["status"], check["witness"]))
    return "\n".join(lines) + "\n"


def render(report, fmt):
    if fmt == "markdown":
        return format_markdown(report)
    return json.dumps(report, indent=2, sort_keys=True) + "\n"


def main(argv=None):
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        report = run_suite(args.suite, args.label, args.ell, args.seed)
    except ConfigurationError as exc:
        print("configuration error: %s" % exc, file=sys.stderr)
        return 2
    text = render(report, args.fmt)
    if args.out:
        with open(args.out, "w") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)
    failed = [c for c in report["checks"] if c["status"] != "pass"]
    if failed:
        print("%d of %d checks failed"
              % (len(failed), len(report["checks"])), file=sys.stderr)
        return 1
    return 0


if __name__ == "__main__":
    sys.exit(main())
