"""Detection of the four dependency-management issue scenarios.

Every detector reports risks that have not yet manifested as build errors:
the tool never compiles anything, it reasons over the dependency model and
snapshot alone.
"""

from __future__ import annotations

import hashlib
from dataclasses import dataclass
from enum import Enum

from .classify import ModuleAwareness, ReferencingMode, SivViolation
from .host import RepoNotFound, SnapshotHost, STATUS_RELOCATED, TagRecord, UnknownRepo
from .model import DependencyModel
from .parsers import (
    ImportPath,
    PathError,
    parse_import_path,
    scan_source_imports,
    try_parse_semver_tag,
)
from .classify import ReleaseStrategy, determine_release_strategy, validate_siv


class IssueType(Enum):
    TYPE_A = "A"
    TYPE_B1 = "B1"
    TYPE_B2 = "B2"
    TYPE_C = "C"


_TYPE_ORDER = {IssueType.TYPE_A: 0, IssueType.TYPE_B1: 1, IssueType.TYPE_B2: 2, IssueType.TYPE_C: 3}

# Roles evidence links can play in a chain.
ROLE_SUBJECT = "subject"
ROLE_UPSTREAM = "upstream"
ROLE_INTERMEDIARY = "intermediary"
ROLE_VENDORED = "vendored"
ROLE_RELOCATED_TARGET = "relocated-target"


@dataclass(frozen=True)
class EvidenceLink:
    repo: str
    version: str
    role: str


@dataclass(frozen=True)
class Issue:
    id: str
    type: IssueType
    subject: tuple[str, str]
    evidence: tuple[EvidenceLink, ...]
    explanation: str
    violation: SivViolation | None = None

    def chain_text(self) -> str:
        return " -> ".join(f"{e.repo}@{e.version}" for e in self.evidence)


def _issue_id(issue_type: IssueType, subject: tuple[str, str], evidence: tuple[EvidenceLink, ...],
              extra: str = "") -> str:
    blob = "|".join(
        [issue_type.value, f"{subject[0]}@{subject[1]}"]
        + [f"{e.repo}@{e.version}:{e.role}" for e in evidence]
        + [extra]
    )
    return hashlib.sha256(blob.encode("utf-8")).hexdigest()[:12]


def _make_issue(issue_type, subject, evidence, explanation, violation=None) -> Issue:
    extra = violation.kind.value if violation is not None else ""
    return Issue(
        id=_issue_id(issue_type, subject, evidence, extra),
        type=issue_type,
        subject=subject,
        evidence=evidence,
        explanation=explanation,
        violation=violation,
    )


def _virtual_suffix_major(tag: TagRecord) -> int | None:
    """Suffix of the tag's declared module path when nothing physical backs
    it: the identity is a virtual path module-unaware consumers cannot
    resolve."""
    manifest = tag.root_manifest()
    if manifest is None:
        return None
    n = manifest.module_path.suffix_major
    if n is None or f"v{n}/go.mod" in tag.files:
        return None
    return n


def _tree_refs(tag: TagRecord) -> list[ImportPath]:
    """Outgoing references of a tree: manifest requires plus source imports."""
    texts: set[str] = set()
    for rel in tag.files:
        if rel.startswith("vendor/"):
            continue
        if rel == "go.mod" or rel.endswith("/go.mod"):
            manifest = tag.manifest_at(rel)
            if manifest is not None:
                for req in manifest.requires:
                    texts.add(req.path.text)
    for imp in scan_source_imports(tag.go_sources()).imports:
        texts.add(imp.text)
    refs = []
    for text in sorted(texts):
        try:
            refs.append(parse_import_path(text))
        except PathError:
            continue
    return refs


@dataclass(frozen=True)
class _WalkFailure:
    chain: tuple[tuple[str, str], ...]  # nodes ingested before the failure
    repo: str
    version: str
    ref_text: str
    reason: str


def _unaware_walk(
    host: SnapshotHost,
    subject_base: str,
    start_refs: list[ImportPath],
    pins: dict[str, str],
) -> list[_WalkFailure]:
    """Simulate a module-unaware consumer fetching the given references.

    Each reference resolves to its repository's pinned tag (when a pin
    names an existing tag) or the latest one. Ingestion fails on a
    version-suffixed reference without a physical subdirectory, and on any
    tree whose declared module path is virtual.
    """
    failures: list[_WalkFailure] = []
    visited = {subject_base}
    queue: list[tuple[ImportPath, tuple[tuple[str, str], ...]]] = [(p, ()) for p in start_refs]
    while queue:
        ref, chain = queue.pop(0)
        try:
            repo = host.get_repo(ref.base)
        except (RepoNotFound, UnknownRepo):
            continue  # missing remotes are a different problem entirely
        pinned = pins.get(ref.base)
        tree = repo.tag(pinned) if pinned is not None else None
        if tree is None:
            tree = repo.latest_tag()
        if ref.suffix_major is not None and f"v{ref.suffix_major}/go.mod" not in tree.files:
            failures.append(
                _WalkFailure(chain, repo.path.text, tree.name, ref.text,
                             f"import path {ref.text!r} has no physical v{ref.suffix_major}/ directory")
            )
            continue
        virtual = _virtual_suffix_major(tree)
        if virtual is not None:
            failures.append(
                _WalkFailure(chain, repo.path.text, tree.name, ref.text,
                             f"{repo.path.text}@{tree.name} declares virtual module path "
                             f"{repo.path.text}/v{virtual}")
            )
            continue
        if repo.path.text in visited:
            continue
        visited.add(repo.path.text)
        next_chain = chain + ((repo.path.text, tree.name),)
        for nxt in _tree_refs(tree):
            queue.append((nxt, next_chain))
    return failures


def detect_type_a(model: DependencyModel) -> list[Issue]:
    """A module-unaware project whose upgrade frontier hits a virtual path.

    Fires per direct upstream whose latest version (directly, or through
    anything it newly drags in) cannot be resolved without module
    awareness, while the currently pinned state still resolves: the upgrade
    itself is the not-yet-manifested risk.
    """
    if model.pr.awareness is not ModuleAwareness.UNAWARE:
        return []
    host = model.host
    repo = host.get_repo(model.subject[0])
    tag = repo.tag(model.subject[1])
    if tag is None:
        return []
    direct = sorted(scan_source_imports(tag.go_sources()).imports, key=lambda p: p.text)

    current_failures = _unaware_walk(host, repo.path.text, direct, model.pr.pins)
    if current_failures:
        return []  # already broken today: manifested, not a prediction

    issues = []
    for ref in direct:
        failures = _unaware_walk(host, repo.path.text, [ref], {})
        if not failures:
            continue
        fail = failures[0]
        evidence = [EvidenceLink(model.subject[0], model.subject[1], ROLE_SUBJECT)]
        for node, version in fail.chain:
            evidence.append(EvidenceLink(node, version, ROLE_INTERMEDIARY))
        evidence.append(EvidenceLink(fail.repo, fail.version, ROLE_UPSTREAM))
        pinned = model.pr.pins.get(ref.base)
        held = f" (currently held at {pinned})" if pinned else ""
        explanation = (
            f"Upgrading {ref.text}{held} would break the build: {fail.reason}, and "
            f"{model.subject[0]} cannot resolve version-suffixed paths."
        )
        issues.append(_make_issue(IssueType.TYPE_A, model.subject, tuple(evidence), explanation))
    return issues


def detect_type_b1(model: DependencyModel) -> list[Issue]:
    """Divergent import-path interpretation through a GOPATH intermediary.

    A GoModules subject resolves an unsuffixed path to the newest v0/v1
    release, while the GOPATH project that references it builds against the
    latest (v2+, major-branch) version.
    """
    if model.pr.md is not ReferencingMode.GO_MODULES:
        return []
    host = model.host
    issues = []
    for up in model.us:
        if up.unresolvable or up.md is not ReferencingMode.GO_MODULES:
            continue
        if not up.introduced_via_gopath or up.released_by_major_branch is not True:
            continue
        unsuffixed = [f for f in up.intermediary_forms
                      if parse_import_path(f).suffix_major is None]
        if not unsuffixed:
            continue
        repo = host.get_repo(up.ip.base)
        expected = repo.latest_tag().name
        resolved = _max_tag_upto_major_one(repo)
        evidence = [EvidenceLink(model.subject[0], model.subject[1], ROLE_SUBJECT)]
        for node, version in up.chain:
            evidence.append(EvidenceLink(node, version, ROLE_INTERMEDIARY))
        evidence.append(EvidenceLink(up.ip.base, expected, ROLE_UPSTREAM))
        if resolved is None:
            outcome = f"fails to resolve {unsuffixed[0]!r} at all (no v0/v1 release exists)"
        else:
            outcome = f"resolves {unsuffixed[0]!r} to {resolved} instead of {expected}"
        explanation = (
            f"The GOPATH project {up.chain[0][0] if up.chain else '(intermediary)'} builds against "
            f"{up.ip.base} {expected}, but {model.subject[0]} {outcome}."
        )
        issues.append(_make_issue(IssueType.TYPE_B1, model.subject, tuple(evidence), explanation))
    return issues


def _max_tag_upto_major_one(repo) -> str | None:
    best = None
    best_key = None
    for t in repo.tags:
        parsed = try_parse_semver_tag(t.name)
        if parsed is None or parsed.major > 1:
            continue
        key = (parsed.major, parsed.minor, parsed.patch)
        if best_key is None or key > best_key:
            best, best_key = t.name, key
    return best


def detect_type_b2(model: DependencyModel) -> list[Issue]:
    """A vendored library whose remote repository is deleted or relocated.

    The vendored copy keeps the subject building, but GoModules dependents
    fetch by import path, not from the vendor tree, so the stale path is a
    latent break for them.
    """
    if model.pr.md is not ReferencingMode.GOPATH or not model.pr.vd:
        return []
    host = model.host
    gomodules_dependents = sum(1 for d in model.ds if d.md is ReferencingMode.GO_MODULES)
    issues = []
    for path in sorted(model.pr.vd, key=lambda p: p.text):
        record = host.snapshot.get(path.base)
        if record is None:
            continue
        evidence = [
            EvidenceLink(model.subject[0], model.subject[1], ROLE_SUBJECT),
            EvidenceLink(path.text, "vendored", ROLE_VENDORED),
        ]
        if record.status == STATUS_RELOCATED and record.relocated_to is not None:
            target = host.get_repo(record.relocated_to)
            evidence.append(
                EvidenceLink(target.path.text, target.latest_tag().name, ROLE_RELOCATED_TARGET)
            )
            status_note = f"has been relocated to {target.path.text}"
        else:
            status_note = "has been deleted"
        severity = ""
        if gomodules_dependents:
            severity = (
                f" {gomodules_dependents} GoModules dependent(s) fetch it by import path "
                f"rather than from the vendor directory and will fail."
            )
        explanation = (
            f"{model.subject[0]} maintains {path.text} only in its vendor directory; "
            f"the remote repository {status_note}.{severity}"
        )
        issues.append(_make_issue(IssueType.TYPE_B2, model.subject, tuple(evidence), explanation))
    return issues


def detect_type_c(model: DependencyModel) -> list[Issue]:
    """Semantic-import-versioning violations at the analyzed release."""
    if model.pr.md is not ReferencingMode.GO_MODULES:
        return []
    host = model.host
    repo = host.get_repo(model.subject[0])
    tag = repo.tag(model.subject[1])
    if tag is None:
        return []
    manifest = tag.root_manifest()
    parsed = try_parse_semver_tag(tag.name)
    if parsed is not None and parsed.major >= 2:
        # A physical subdirectory release is judged by the manifest it ships
        # in that subdirectory.
        if determine_release_strategy(parsed, tag.listing()) is ReleaseStrategy.MAJOR_SUBDIRECTORY:
            manifest = tag.manifest_at(f"v{parsed.major}/go.mod") or manifest
    if manifest is None:
        return []

    gomodules_dependents = sum(1 for d in model.ds if d.md is ReferencingMode.GO_MODULES)
    issues = []
    for violation in validate_siv(tag.name, manifest, repo.path):
        evidence = (EvidenceLink(model.subject[0], tag.name, ROLE_SUBJECT),)
        explanation = (
            f"{violation.detail}. {gomodules_dependents} GoModules dependent(s) "
            f"resolve this project by its declared path and are at risk."
        )
        issues.append(_make_issue(IssueType.TYPE_C, model.subject, evidence, explanation, violation))
    return issues


def detect_all(model: DependencyModel) -> list[Issue]:
    """Run every detector applicable to the subject's mode and awareness."""
    issues: list[Issue] = []
    if model.pr.awareness is ModuleAwareness.UNAWARE:
        issues.extend(detect_type_a(model))
    if model.pr.md is ReferencingMode.GO_MODULES:
        issues.extend(detect_type_b1(model))
        issues.extend(detect_type_c(model))
    if model.pr.md is ReferencingMode.GOPATH:
        issues.extend(detect_type_b2(model))
    issues.sort(key=lambda i: (_TYPE_ORDER[i.type], i.chain_text(), i.id))
    return issues
