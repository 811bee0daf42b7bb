"""Repository metadata behind one interface.

The deterministic snapshot backend is the canonical implementation: a
single JSON document describes a set of repositories with their tags, file
trees, and deletion/relocation status, standing in for a hosting site.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field, replace

from .parsers import (
    GoModManifest,
    ImportPath,
    ManifestError,
    PathError,
    detect_dm_tool,
    parse_go_mod,
    parse_import_path,
    parse_tool_config,
    scan_source_imports,
    try_parse_semver_tag,
)


class SnapshotError(Exception):
    """The snapshot document is invalid."""


class SnapshotSchemaError(SnapshotError):
    def __init__(self, pointer: str, message: str):
        super().__init__(f"{pointer}: {message}")
        self.pointer = pointer


class DanglingRelocationError(SnapshotError):
    def __init__(self, path: str, target: str):
        super().__init__(f"{path} relocates to {target}, which is not in the snapshot")
        self.path = path
        self.target = target


class HostError(Exception):
    """A repository query failed."""


class RepoNotFound(HostError):
    """The repository existed but is gone (the hosting site answers 404)."""


class UnknownRepo(HostError):
    """No repository with this path was ever part of the snapshot."""


STATUS_PRESENT = "present"
STATUS_DELETED = "deleted"
STATUS_RELOCATED = "relocated"

# Reference kinds reported by search_dependents.
REQUIRE_DIRECTIVE = "require-directive"
IMPORT_DIRECTIVE = "import-directive"
TOOL_CONFIG = "tool-config"


@dataclass(frozen=True)
class TagRecord:
    """One tagged tree: relative file paths mapped to contents."""

    name: str
    files: dict[str, str] = field(default_factory=dict)
    toolchain_version: str | None = None

    def listing(self) -> frozenset[str]:
        return frozenset(self.files)

    def go_sources(self, include_vendor: bool = False) -> list[str]:
        texts = []
        for rel in sorted(self.files):
            if not rel.endswith(".go"):
                continue
            if not include_vendor and rel.startswith("vendor/"):
                continue
            texts.append(self.files[rel])
        return texts

    def root_manifest(self) -> GoModManifest | None:
        text = self.files.get("go.mod")
        if text is None:
            return None
        try:
            return parse_go_mod(text)
        except ManifestError:
            return None

    def manifest_at(self, rel: str) -> GoModManifest | None:
        text = self.files.get(rel)
        if text is None:
            return None
        try:
            return parse_go_mod(text)
        except ManifestError:
            return None


@dataclass(frozen=True)
class RepoRecord:
    path: ImportPath
    status: str
    default_branch_tag: str
    tags: tuple[TagRecord, ...]
    relocated_to: ImportPath | None = None

    def tag(self, name: str) -> TagRecord | None:
        for t in self.tags:
            if t.name == name:
                return t
        return None

    def latest_tag(self) -> TagRecord:
        """Maximum semver tag; falls back to the default branch tag when no
        tag name parses."""
        best: TagRecord | None = None
        best_key = None
        for t in self.tags:
            parsed = try_parse_semver_tag(t.name)
            if parsed is None:
                continue
            key = (parsed.major, parsed.minor, parsed.patch)
            if best_key is None or key > best_key:
                best, best_key = t, key
        if best is not None:
            return best
        default = self.tag(self.default_branch_tag)
        if default is None:
            raise HostError(f"{self.path.text} has no resolvable latest tag")
        return default


class EcosystemSnapshot:
    """Immutable, validated collection of repository records."""

    def __init__(self, repos: dict[str, RepoRecord], document_bytes: bytes):
        self._repos = repos
        self.document_bytes = document_bytes

    def __iter__(self):
        for path in sorted(self._repos):
            yield self._repos[path]

    def __len__(self) -> int:
        return len(self._repos)

    def get(self, path_text: str) -> RepoRecord | None:
        return self._repos.get(path_text)


def _expect(condition: bool, pointer: str, message: str) -> None:
    if not condition:
        raise SnapshotSchemaError(pointer, message)


def _load_tag(obj: object, pointer: str) -> TagRecord:
    _expect(isinstance(obj, dict), pointer, "tag must be an object")
    assert isinstance(obj, dict)
    name = obj.get("name")
    _expect(isinstance(name, str) and bool(name), f"{pointer}/name", "non-empty string required")
    files = obj.get("files", {})
    _expect(isinstance(files, dict), f"{pointer}/files", "object of relpath -> content required")
    for rel, content in files.items():
        fp = f"{pointer}/files/{rel}"
        _expect(isinstance(content, str), fp, "file content must be a string")
        _expect(not rel.startswith("/") and ".." not in rel.split("/"), fp, "path must be relative and normalized")
    toolchain = obj.get("toolchain_version")
    _expect(
        toolchain is None or isinstance(toolchain, str),
        f"{pointer}/toolchain_version",
        "string required",
    )
    return TagRecord(str(name), dict(files), toolchain)


def _load_repo(obj: object, pointer: str) -> RepoRecord:
    _expect(isinstance(obj, dict), pointer, "repo must be an object")
    assert isinstance(obj, dict)
    raw_path = obj.get("path")
    _expect(isinstance(raw_path, str) and bool(raw_path), f"{pointer}/path", "non-empty string required")
    try:
        path = parse_import_path(str(raw_path))
    except PathError as exc:
        raise SnapshotSchemaError(f"{pointer}/path", str(exc)) from exc

    status_obj = obj.get("status", STATUS_PRESENT)
    relocated_to: ImportPath | None = None
    if status_obj == STATUS_PRESENT or status_obj == STATUS_DELETED:
        status = str(status_obj)
    elif isinstance(status_obj, dict) and isinstance(status_obj.get("relocated_to"), str):
        status = STATUS_RELOCATED
        try:
            relocated_to = parse_import_path(status_obj["relocated_to"])
        except PathError as exc:
            raise SnapshotSchemaError(f"{pointer}/status/relocated_to", str(exc)) from exc
    else:
        raise SnapshotSchemaError(f"{pointer}/status", f"unrecognized status {status_obj!r}")

    raw_tags = obj.get("tags", [])
    _expect(isinstance(raw_tags, list), f"{pointer}/tags", "array required")
    tags = tuple(_load_tag(t, f"{pointer}/tags/{i}") for i, t in enumerate(raw_tags))
    names = [t.name for t in tags]
    _expect(len(names) == len(set(names)), f"{pointer}/tags", "tag names must be unique")

    default = obj.get("default_branch_tag", "")
    _expect(isinstance(default, str), f"{pointer}/default_branch_tag", "string required")
    if status == STATUS_PRESENT:
        _expect(bool(tags), f"{pointer}/tags", "a present repo needs at least one tag")
        _expect(
            default in names,
            f"{pointer}/default_branch_tag",
            f"{default!r} does not name an existing tag",
        )
    return RepoRecord(path, status, str(default), tags, relocated_to)


def load_snapshot(document: str) -> EcosystemSnapshot:
    """Parse and fully validate a snapshot document."""
    try:
        doc = json.loads(document)
    except json.JSONDecodeError as exc:
        raise SnapshotSchemaError("/", f"not valid JSON: {exc}") from exc
    _expect(isinstance(doc, dict), "/", "top-level object required")
    raw_repos = doc.get("repos")
    _expect(isinstance(raw_repos, list), "/repos", "array required")

    repos: dict[str, RepoRecord] = {}
    for i, obj in enumerate(raw_repos):
        record = _load_repo(obj, f"/repos/{i}")
        _expect(
            record.path.text not in repos,
            f"/repos/{i}/path",
            f"duplicate repo path {record.path.text!r}",
        )
        repos[record.path.text] = record

    for record in repos.values():
        if record.status == STATUS_RELOCATED:
            assert record.relocated_to is not None
            if record.relocated_to.text not in repos:
                raise DanglingRelocationError(record.path.text, record.relocated_to.text)

    return EcosystemSnapshot(repos, document.encode("utf-8"))


@dataclass(frozen=True)
class DependentHit:
    repo: ImportPath
    evidence: tuple[tuple[str, str], ...]  # (reference kind, raw path text)


class SnapshotHost:
    """Query interface over a loaded snapshot.

    The snapshot is immutable, so every query is read-only and the results
    are independent of query order or interleaving.
    """

    def __init__(self, snapshot: EcosystemSnapshot):
        self.snapshot = snapshot

    def get_repo(self, path: str | ImportPath) -> RepoRecord:
        text = path.text if isinstance(path, ImportPath) else path
        record = self.snapshot.get(text)
        if record is None:
            raise UnknownRepo(text)
        if record.status == STATUS_DELETED:
            raise RepoNotFound(text)
        if record.status == STATUS_RELOCATED:
            assert record.relocated_to is not None
            target = self.get_repo(record.relocated_to)
            # The target's content is authoritative; the record still shows
            # where the query was redirected from.
            return replace(
                record,
                default_branch_tag=target.default_branch_tag,
                tags=target.tags,
            )
        return record

    def present_repos(self) -> list[RepoRecord]:
        return [r for r in self.snapshot if r.status == STATUS_PRESENT]

    def _references_of(self, tag: TagRecord) -> list[tuple[str, str]]:
        refs: list[tuple[str, str]] = []
        for rel in sorted(tag.files):
            if rel.startswith("vendor/"):
                continue
            if rel == "go.mod" or rel.endswith("/go.mod"):
                manifest = tag.manifest_at(rel)
                if manifest is None:
                    continue
                for req in manifest.requires:
                    refs.append((REQUIRE_DIRECTIVE, req.path.text))
                for rep in manifest.replaces:
                    refs.append((REQUIRE_DIRECTIVE, rep.new.text))
        for imp in scan_source_imports(tag.go_sources()).imports:
            refs.append((IMPORT_DIRECTIVE, imp.text))
        listing = tag.listing()
        marker = detect_dm_tool(listing)
        if marker.present:
            for marker_path, tool in _marker_paths(listing):
                for entry in parse_tool_config(marker_path, tag.files[marker_path]):
                    refs.append((TOOL_CONFIG, entry.path.text))
        return sorted(set(refs))

    def search_dependents(self, path: str | ImportPath) -> list[DependentHit]:
        """Every repo whose latest tag references any form of the given base
        path, with the reference kinds as evidence."""
        base = (path if isinstance(path, ImportPath) else parse_import_path(path)).base
        hits: list[DependentHit] = []
        for repo in self.present_repos():
            tag = repo.latest_tag()
            matching = []
            for kind, text in self._references_of(tag):
                try:
                    parsed = parse_import_path(text)
                except PathError:
                    continue
                if parsed.base == base:
                    matching.append((kind, text))
            if matching:
                hits.append(DependentHit(repo.path, tuple(matching)))
        return hits


def _marker_paths(listing: frozenset[str]) -> list[tuple[str, str]]:
    from .parsers import DEFAULT_DM_TOOL_MARKERS

    return [(p, tool) for p, tool in DEFAULT_DM_TOOL_MARKERS if p in listing]
