"""Builds the three-part dependency picture of a scanned project: the
project's own record, its downstream dependents, and its upstream closure.
"""

from __future__ import annotations

from dataclasses import dataclass, field

from .classify import (
    ModuleAwareness,
    ReferencingMode,
    ReleaseStrategy,
    classify_mode,
    determine_release_strategy,
    subject_awareness,
)
from .host import (
    STATUS_RELOCATED,
    HostError,
    RepoNotFound,
    RepoRecord,
    SnapshotHost,
    TagRecord,
    UnknownRepo,
)
from .parsers import (
    ImportPath,
    detect_dm_tool,
    parse_import_path,
    parse_tool_config,
    scan_source_imports,
    scan_vendor_inventory,
    try_parse_semver_tag,
)


@dataclass(frozen=True)
class CurrentProjectRecord:
    ip: ImportPath
    md: ReferencingMode
    t: bool
    # Vendored paths whose remote is deleted or relocated; None marks the
    # field inapplicable (GoModules projects do not vendor this way).
    vd: frozenset[ImportPath] | None
    awareness: ModuleAwareness
    pins: dict[str, str] = field(default_factory=dict)  # base path -> pinned tag


@dataclass(frozen=True)
class DownstreamRecord:
    v: str
    ip: ImportPath
    md: ReferencingMode
    t: bool


@dataclass(frozen=True)
class UpstreamRecord:
    v: str
    ip: ImportPath
    md: ReferencingMode | None  # None when the repository is unresolvable
    # Whether a v2+ GoModules upstream is published without a physical
    # version subdirectory; None when that question does not apply.
    released_by_major_branch: bool | None
    introduced_via_gopath: bool
    direct: bool
    unresolvable: bool = False
    # Reference texts used by GOPATH intermediaries that led here, and the
    # (repo, tag) hops of the first such chain.
    intermediary_forms: tuple[str, ...] = ()
    chain: tuple[tuple[str, str], ...] = ()


@dataclass(frozen=True)
class DependencyModel:
    pr: CurrentProjectRecord
    ds: tuple[DownstreamRecord, ...]
    us: tuple[UpstreamRecord, ...]
    subject: tuple[str, str]  # (repo path, tag name)
    host: SnapshotHost = field(compare=False, repr=False)


def _resolve_subject(host: SnapshotHost, repo_path: str, tag: str | None) -> tuple[RepoRecord, TagRecord]:
    repo = host.get_repo(repo_path)
    if tag is None:
        return repo, repo.latest_tag()
    record = repo.tag(tag)
    if record is None:
        raise HostError(f"{repo_path} has no tag {tag!r}")
    return repo, record


def _latest_major(repo: RepoRecord) -> int | None:
    parsed = try_parse_semver_tag(repo.latest_tag().name)
    return parsed.major if parsed is not None else None


def _major_branch_flag(host: SnapshotHost, repo: RepoRecord, mode: ReferencingMode) -> bool | None:
    """Meaningful only for v2+ GoModules upstreams: whether the latest
    release leaves its version-suffixed path virtual."""
    if mode is not ReferencingMode.GO_MODULES:
        return None
    latest = repo.latest_tag()
    parsed = try_parse_semver_tag(latest.name)
    if parsed is None or parsed.major < 2:
        return None
    strategy = determine_release_strategy(parsed, latest.listing())
    return strategy is ReleaseStrategy.MAJOR_BRANCH


def _tool_pins(tag: TagRecord) -> dict[str, str]:
    pins: dict[str, str] = {}
    for marker_path, _tool in (
        ("Gopkg.toml", "Dep"),
        ("glide.yaml", "Glide"),
        ("vendor/vendor.json", "Govendor"),
    ):
        text = tag.files.get(marker_path)
        if text is None:
            continue
        for entry in parse_tool_config(marker_path, text):
            if entry.version is not None:
                pins.setdefault(entry.path.base, entry.version)
    return pins


def collect_pr(host: SnapshotHost, repo_path: str, tag: str | None = None) -> CurrentProjectRecord:
    """Record the scanned project itself: declared path, mode, tool usage,
    and vendored libraries whose remotes are gone or moved."""
    repo, tag_record = _resolve_subject(host, repo_path, tag)
    listing = tag_record.listing()
    mode = classify_mode(listing)

    if mode is ReferencingMode.GO_MODULES:
        manifest = tag_record.root_manifest()
        ip = manifest.module_path if manifest is not None else repo.path
        return CurrentProjectRecord(
            ip=ip,
            md=mode,
            t=False,
            vd=None,
            awareness=ModuleAwareness.AWARE,
            pins={},
        )

    tool = detect_dm_tool(listing)
    vendored: set[ImportPath] = set()
    for path in scan_vendor_inventory(listing).vendored_paths:
        try:
            host.get_repo(path)
        except RepoNotFound:
            vendored.add(path)
        except UnknownRepo:
            continue  # vendored subdirectory paths do not map to repos
        else:
            record = host.snapshot.get(path.base)
            if record is not None and record.status == STATUS_RELOCATED:
                vendored.add(path)
    return CurrentProjectRecord(
        ip=repo.path,
        md=mode,
        t=tool.present,
        vd=frozenset(vendored),
        awareness=subject_awareness(mode, tool, tag_record.toolchain_version),
        pins=_tool_pins(tag_record) if tool.present else {},
    )


def collect_downstream(host: SnapshotHost, repo_path: str) -> tuple[DownstreamRecord, ...]:
    """One record per repository whose latest tag references the subject."""
    records = []
    for hit in host.search_dependents(repo_path):
        if hit.repo.text == repo_path:
            continue
        dependent = host.get_repo(hit.repo)
        tag = dependent.latest_tag()
        listing = tag.listing()
        mode = classify_mode(listing)
        manifest = tag.root_manifest()
        ip = manifest.module_path if mode is ReferencingMode.GO_MODULES and manifest else dependent.path
        records.append(
            DownstreamRecord(
                v=tag.name,
                ip=ip,
                md=mode,
                t=detect_dm_tool(listing).present if mode is ReferencingMode.GOPATH else False,
            )
        )
    records.sort(key=lambda r: (r.ip.text, r.v))
    return tuple(records)


class _UpstreamBuilder:
    """Accumulates upstream records keyed by effective reference text."""

    def __init__(self, host: SnapshotHost):
        self.host = host
        self.records: dict[str, dict] = {}

    def lookup(self, path: ImportPath) -> RepoRecord | None:
        try:
            return self.host.get_repo(path.base)
        except (RepoNotFound, UnknownRepo):
            return None

    def add(
        self,
        path: ImportPath,
        version: str,
        direct: bool,
        chain: tuple[tuple[str, str], ...] = (),
        intermediary_form: str | None = None,
    ) -> RepoRecord | None:
        repo = self.lookup(path)
        entry = self.records.get(path.text)
        if entry is None:
            if repo is None:
                mode = None
                major_branch = None
                unresolvable = True
            else:
                mode = classify_mode(repo.latest_tag().listing())
                major_branch = _major_branch_flag(self.host, repo, mode)
                unresolvable = False
            entry = {
                "ip": path,
                "v": version,
                "md": mode,
                "major_branch": major_branch,
                "direct": direct,
                "unresolvable": unresolvable,
                "via_gopath": False,
                "forms": [],
                "chain": (),
            }
            self.records[path.text] = entry
        else:
            entry["direct"] = entry["direct"] or direct
        if intermediary_form is not None:
            if intermediary_form not in entry["forms"]:
                entry["forms"].append(intermediary_form)
            if not entry["via_gopath"]:
                entry["via_gopath"] = True
                entry["chain"] = chain
        return repo

    def build(self, subject_mode: ReferencingMode) -> tuple[UpstreamRecord, ...]:
        out = []
        for entry in self.records.values():
            via = entry["via_gopath"]
            # The transitively-introduced flag only applies between two
            # GoModules projects.
            introduced = (
                subject_mode is ReferencingMode.GO_MODULES
                and entry["md"] is ReferencingMode.GO_MODULES
                and via
            )
            out.append(
                UpstreamRecord(
                    v=entry["v"],
                    ip=entry["ip"],
                    md=entry["md"],
                    released_by_major_branch=entry["major_branch"],
                    introduced_via_gopath=introduced,
                    direct=entry["direct"],
                    unresolvable=entry["unresolvable"],
                    intermediary_forms=tuple(entry["forms"]),
                    chain=entry["chain"],
                )
            )
        out.sort(key=lambda r: (r.ip.text, r.v))
        return tuple(out)


def _walk_tag_for(host: SnapshotHost, repo: RepoRecord, pinned: str | None) -> TagRecord:
    if pinned is not None:
        tag = repo.tag(pinned)
        if tag is not None:
            return tag
    return repo.latest_tag()


def collect_upstream(host: SnapshotHost, repo_path: str, tag: str | None = None) -> tuple[UpstreamRecord, ...]:
    """Collect the upstream set.

    GoModules subjects start from their manifest requires (with replace
    directives applied) and expand through GOPATH upstreams' source imports,
    since those carry no manifests of their own; GoModules upstreams resolve
    per their manifests and end the walk. GOPATH subjects take the full
    recursive closure of source imports and manifests at latest versions.
    """
    repo, tag_record = _resolve_subject(host, repo_path, tag)
    mode = classify_mode(tag_record.listing())
    builder = _UpstreamBuilder(host)

    if mode is ReferencingMode.GO_MODULES:
        manifest = tag_record.root_manifest()
        if manifest is None:
            return ()
        pins: dict[str, str] = {}
        gopath_queue: list[tuple[RepoRecord, TagRecord, tuple[tuple[str, str], ...]]] = []
        for req in manifest.requires:
            replacement = manifest.replacement_for(req.path.text)
            if replacement is not None:
                path = replacement.new
                version = replacement.new_version or req.version
            else:
                path, version = req.path, req.version
            pins[path.text] = version
            if path.base == repo.path.text:
                continue  # a project is never its own upstream
            target = builder.add(path, version, direct=True)
            if target is not None and classify_mode(target.latest_tag().listing()) is ReferencingMode.GOPATH:
                tree = _walk_tag_for(host, target, version)
                gopath_queue.append((target, tree, ((target.path.text, tree.name),)))

        visited = {repo.path.text} | {r.path.text for r, _, _ in gopath_queue}
        while gopath_queue:
            node, tree, chain = gopath_queue.pop(0)
            imports = sorted(scan_source_imports(tree.go_sources()).imports, key=lambda p: p.text)
            for imp in imports:
                replacement = manifest.replacement_for(imp.text)
                effective = replacement.new if replacement is not None else imp
                if effective.base == repo.path.text:
                    continue
                target = builder.lookup(effective)
                if target is None:
                    builder.add(effective, pins.get(effective.text, ""), direct=False,
                                chain=chain, intermediary_form=effective.text)
                    continue
                target_mode = classify_mode(target.latest_tag().listing())
                version = pins.get(effective.text, target.latest_tag().name)
                builder.add(effective, version, direct=False, chain=chain,
                            intermediary_form=effective.text)
                if target_mode is ReferencingMode.GOPATH and target.path.text not in visited:
                    visited.add(target.path.text)
                    sub_tree = _walk_tag_for(host, target, pins.get(effective.text))
                    gopath_queue.append((target, sub_tree, chain + ((target.path.text, sub_tree.name),)))
        return builder.build(mode)

    # GOPATH subject: recursive closure at latest versions.
    start = sorted(scan_source_imports(tag_record.go_sources()).imports, key=lambda p: p.text)
    queue: list[tuple[ImportPath, int]] = [(p, 1) for p in start]
    visited_bases = {repo.path.text}
    while queue:
        path, depth = queue.pop(0)
        if path.base == repo.path.text:
            continue
        target = builder.add(path, "", direct=depth == 1)
        if target is None:
            continue
        entry = builder.records[path.text]
        latest = target.latest_tag()
        entry["v"] = latest.name
        if target.path.text in visited_bases:
            continue
        visited_bases.add(target.path.text)
        next_refs: set[str] = set()
        node_manifest = latest.root_manifest()
        if node_manifest is not None:
            for req in node_manifest.requires:
                next_refs.add(req.path.text)
        for imp in scan_source_imports(latest.go_sources()).imports:
            next_refs.add(imp.text)
        for text in sorted(next_refs):
            try:
                queue.append((parse_import_path(text), depth + 1))
            except Exception:
                continue
    return builder.build(mode)


def build_model(host: SnapshotHost, repo_path: str, tag: str | None = None) -> DependencyModel:
    """Compose the project record, downstream set, and upstream set."""
    repo, tag_record = _resolve_subject(host, repo_path, tag)
    return DependencyModel(
        pr=collect_pr(host, repo_path, tag_record.name),
        ds=collect_downstream(host, repo_path),
        us=collect_upstream(host, repo_path, tag_record.name),
        subject=(repo.path.text, tag_record.name),
        host=host,
    )
