"""Report assembly and rendering (text and schema-stable JSON)."""

from __future__ import annotations

import hashlib
import json
from dataclasses import dataclass

from .detectors import Issue, detect_all
from .fixes import FixSuggestion, suggestions_for
from .host import SnapshotHost
from .model import build_model
from .parsers import scan_source_imports

TOOL_VERSION = "0.1.0"
SCHEMA_VERSION = 1


@dataclass(frozen=True)
class Report:
    tool_version: str
    snapshot_id: str
    subjects_scanned: int
    issues: tuple[tuple[Issue, tuple[FixSuggestion, ...]], ...]
    files_skipped: int = 0


def snapshot_id(document_bytes: bytes) -> str:
    return hashlib.sha256(document_bytes).hexdigest()[:16]


def analyze_subject(host: SnapshotHost, repo_path: str, tag: str | None = None) -> list[tuple[Issue, list[FixSuggestion]]]:
    model = build_model(host, repo_path, tag)
    return [(issue, suggestions_for(issue, model)) for issue in detect_all(model)]


def build_report(
    host: SnapshotHost,
    subjects: list[tuple[str, str | None]],
    source_id: str,
) -> Report:
    """Analyze each (repo, tag) subject and assemble one report.

    Issues are emitted in a canonical order: by subject path, then by the
    detectors' own ordering.
    """
    collected: list[tuple[Issue, tuple[FixSuggestion, ...]]] = []
    files_skipped = 0
    for repo_path, tag in sorted(subjects, key=lambda s: (s[0], s[1] or "")):
        for issue, suggestions in analyze_subject(host, repo_path, tag):
            collected.append((issue, tuple(suggestions)))
        record = host.get_repo(repo_path)
        tag_record = record.tag(tag) if tag else record.latest_tag()
        if tag_record is not None:
            files_skipped += scan_source_imports(tag_record.go_sources()).files_skipped
    return Report(
        tool_version=TOOL_VERSION,
        snapshot_id=source_id,
        subjects_scanned=len(subjects),
        issues=tuple(collected),
        files_skipped=files_skipped,
    )


def _suggestion_obj(s: FixSuggestion) -> dict:
    return {
        "solution": int(s.solution),
        "preferred": s.preferred,
        "summary": s.summary,
        "benefits": list(s.benefits),
        "consequences": list(s.consequences),
        "impact": {
            "gomodules": s.impact.gomodules,
            "gopath_aware": s.impact.gopath_aware,
            "gopath_unaware": s.impact.gopath_unaware,
            "negatively_affected": s.impact.negatively_affected,
        },
    }


def _issue_obj(issue: Issue, suggestions: tuple[FixSuggestion, ...]) -> dict:
    obj = {
        "id": issue.id,
        "type": issue.type.value,
        "subject": {"repo": issue.subject[0], "tag": issue.subject[1]},
    }
    if issue.violation is not None:
        obj["violation_kind"] = issue.violation.kind.value
    obj["evidence"] = [
        {"repo": e.repo, "version": e.version, "role": e.role} for e in issue.evidence
    ]
    obj["explanation"] = issue.explanation
    obj["suggestions"] = [_suggestion_obj(s) for s in suggestions]
    return obj


def render_json(report: Report) -> str:
    """Schema-stable document; byte-identical across runs on the same input."""
    doc = {
        "schema": SCHEMA_VERSION,
        "tool_version": report.tool_version,
        "snapshot_id": report.snapshot_id,
        "subjects_scanned": report.subjects_scanned,
        "issues": [_issue_obj(issue, suggestions) for issue, suggestions in report.issues],
        "diagnostics": {"files_skipped": report.files_skipped},
    }
    return json.dumps(doc, indent=2) + "\n"


def render_text(report: Report) -> str:
    if not report.issues:
        return "No DM issues detected.\n"
    blocks = []
    for issue, suggestions in report.issues:
        lines = [f"[Type {issue.type.value}] {issue.subject[0]} @ {issue.subject[1]}"]
        if issue.violation is not None:
            lines.append(f"  violation: {issue.violation.kind.value}")
        lines.append("  evidence:")
        for link in issue.evidence:
            lines.append(f"    - {link.repo} @ {link.version} ({link.role})")
        lines.append(f"  {issue.explanation}")
        lines.append("  suggestions:")
        for s in suggestions:
            marker = " (preferred)" if s.preferred else ""
            lines.append(f"    {s.rank}. [solution {int(s.solution)}]{marker} {s.summary}")
            for b in s.benefits:
                lines.append(f"       + {b}")
            for c in s.consequences:
                lines.append(f"       - {c}")
            lines.append(
                f"       impact: {s.impact.negatively_affected} negatively affected "
                f"(downstreams: {s.impact.gomodules} gomodules, "
                f"{s.impact.gopath_aware} gopath-aware, "
                f"{s.impact.gopath_unaware} gopath-unaware)"
            )
        blocks.append("\n".join(lines))
    return "\n\n".join(blocks) + "\n"
