"""Command-line interface.

Exit codes: 0 when the scan found nothing, 2 when issues were found, and 1
for operational problems (bad snapshot, unknown repository, usage errors).
"""

from __future__ import annotations

import argparse
import sys

from .fixes import SolutionId, solution_ledger_text
from .host import HostError, SnapshotError, SnapshotHost, load_snapshot
from .report import build_report, render_json, render_text, snapshot_id

EXIT_OK = 0
EXIT_ERROR = 1
EXIT_ISSUES = 2


class _UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message: str):  # argparse would exit(2); we want exit(1)
        raise _UsageError(message)


def _build_parser() -> _Parser:
    parser = _Parser(prog="gomodhealth", description=__doc__)
    sub = parser.add_subparsers(dest="command", required=True)

    analyze = sub.add_parser("analyze", help="diagnose one repository")
    analyze.add_argument("repo", help="repository path, e.g. github.com/user/project")
    analyze.add_argument("--tag", help="release tag to analyze (default: latest)")
    analyze.add_argument("--snapshot", required=True, help="ecosystem snapshot file")
    analyze.add_argument("--format", choices=("text", "json"), default="text")
    analyze.add_argument("--out", help="write the report to this file instead of stdout")

    scan = sub.add_parser("scan", help="diagnose every repository in a snapshot")
    scan.add_argument("--snapshot", required=True, help="ecosystem snapshot file")
    scan.add_argument("--all", action="store_true", required=True,
                      help="scan all present repositories")
    scan.add_argument("--format", choices=("text", "json"), default="text")
    scan.add_argument("--out", help="write the report to this file instead of stdout")

    explain = sub.add_parser("explain", help="describe one fixing solution")
    explain.add_argument("solution", type=int, help="solution number (1-8)")
    return parser


def _load_host(snapshot_path: str) -> tuple[SnapshotHost, str]:
    with open(snapshot_path, "r", encoding="utf-8") as fh:
        document = fh.read()
    snapshot = load_snapshot(document)
    return SnapshotHost(snapshot), snapshot_id(snapshot.document_bytes)


def _emit(text: str, out: str | None) -> None:
    if out:
        with open(out, "w", encoding="utf-8") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)


def cli_main(argv: list[str]) -> int:
    parser = _build_parser()
    try:
        args = parser.parse_args(argv)
    except _UsageError as exc:
        sys.stderr.write(f"error: {exc}\n")
        parser.print_usage(sys.stderr)
        return EXIT_ERROR
    except SystemExit as exc:  # --help and friends
        return int(exc.code or 0)

    if args.command == "explain":
        try:
            solution = SolutionId(args.solution)
        except ValueError:
            sys.stderr.write(f"error: no solution numbered {args.solution}\n")
            return EXIT_ERROR
        sys.stdout.write(solution_ledger_text(solution) + "\n")
        return EXIT_OK

    try:
        host, source_id = _load_host(args.snapshot)
    except OSError as exc:
        sys.stderr.write(f"error: cannot read snapshot: {exc}\n")
        return EXIT_ERROR
    except SnapshotError as exc:
        sys.stderr.write(f"error: invalid snapshot: {exc}\n")
        return EXIT_ERROR

    try:
        if args.command == "analyze":
            subjects = [(args.repo, args.tag)]
        else:
            subjects = [(repo.path.text, None) for repo in host.present_repos()]
        report = build_report(host, subjects, source_id)
    except HostError as exc:
        sys.stderr.write(f"error: {exc}\n")
        return EXIT_ERROR

    rendered = render_json(report) if args.format == "json" else render_text(report)
    try:
        _emit(rendered, args.out)
    except OSError as exc:
        sys.stderr.write(f"error: cannot write report: {exc}\n")
        return EXIT_ERROR
    return EXIT_ISSUES if report.issues else EXIT_OK


def main() -> None:
    sys.exit(cli_main(sys.argv[1:]))


if __name__ == "__main__":
    main()
