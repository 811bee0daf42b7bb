"""Parsers for the textual inputs of a Go dependency audit.

Everything here is a pure function over supplied contents or path listings;
nothing opens files. Covers release tags, module/import paths, go.mod
manifests, source import declarations, dependency-tool marker files, and
vendor-tree inventories.
"""

from __future__ import annotations

import json
import re
from dataclasses import dataclass, field


class TagError(ValueError):
    """A release tag could not be parsed."""


class NotATag(TagError):
    """Empty input where a tag was expected."""


class MalformedTag(TagError):
    """Tag text does not have the vMAJOR.MINOR.PATCH shape."""


class PathError(ValueError):
    """A module/import path could not be parsed."""


class EmptyPath(PathError):
    pass


class IllegalCharacter(PathError):
    pass


class ManifestError(ValueError):
    """A go.mod manifest could not be parsed."""


class NoModuleDirective(ManifestError):
    pass


class ManifestSyntax(ManifestError):
    def __init__(self, line: int, message: str):
        super().__init__(f"line {line}: {message}")
        self.line = line


# A tag is `v` + exactly three dot-separated decimal components. Leading
# zeros are rejected so that formatting a parsed tag reproduces its input.
_COMPONENT = r"(?:0|[1-9][0-9]*)"
_SEMVER_TAG_RE = re.compile(rf"^v({_COMPONENT})\.({_COMPONENT})\.({_COMPONENT})$")

# Hosting-site path alphabet; whitespace and quoting are never legal.
_PATH_CHARS_RE = re.compile(r"^[A-Za-z0-9._~\-/]+$")

# A trailing segment is a version suffix only for majors >= 2 and only
# without leading zeros ("v02" stays part of the base).
_SUFFIX_SEGMENT_RE = re.compile(r"^v([1-9][0-9]*)$")


@dataclass(frozen=True, order=True)
class SemVerTag:
    major: int
    minor: int
    patch: int
    raw: str = field(compare=False)

    def format(self) -> str:
        return f"v{self.major}.{self.minor}.{self.patch}"

    def __str__(self) -> str:
        return self.raw


def parse_semver_tag(text: str) -> SemVerTag:
    """Parse a release tag of the form vMAJOR.MINOR.PATCH.

    Pre-release or build-metadata suffixes (e.g. ``v2.0.0-rc1``) are
    rejected as malformed, as are two-component tags like ``v1.33``.
    """
    if not text:
        raise NotATag("empty tag")
    m = _SEMVER_TAG_RE.match(text)
    if m is None:
        raise MalformedTag(f"tag {text!r} is not of the form vMAJOR.MINOR.PATCH")
    return SemVerTag(int(m.group(1)), int(m.group(2)), int(m.group(3)), text)


def try_parse_semver_tag(text: str) -> SemVerTag | None:
    try:
        return parse_semver_tag(text)
    except TagError:
        return None


@dataclass(frozen=True)
class ImportPath:
    """A module or import path, split into base and optional /vN suffix."""

    base: str
    suffix_major: int | None = None

    @property
    def text(self) -> str:
        if self.suffix_major is None:
            return self.base
        return f"{self.base}/v{self.suffix_major}"

    def __str__(self) -> str:
        return self.text


def parse_import_path(text: str) -> ImportPath:
    """Split a path's trailing ``/vN`` (N >= 2) segment off as a suffix.

    A trailing ``/v0`` or ``/v1`` is never a version suffix; it stays in
    the base, as do segments like ``v0.1.0`` that are not bare majors.
    """
    if not text:
        raise EmptyPath("empty import path")
    if not _PATH_CHARS_RE.match(text):
        raise IllegalCharacter(f"illegal character in import path {text!r}")
    if text.startswith("/") or text.endswith("/") or "//" in text:
        raise IllegalCharacter(f"empty path segment in {text!r}")
    head, sep, last = text.rpartition("/")
    if sep:
        m = _SUFFIX_SEGMENT_RE.match(last)
        if m is not None and int(m.group(1)) >= 2:
            return ImportPath(head, int(m.group(1)))
    return ImportPath(text, None)


def version_major(version: str) -> int:
    """Major component of a require-directive version.

    Pseudo-versions (commit-hash style) and anything else unparseable are
    treated as v0-class.
    """
    tag = try_parse_semver_tag(version)
    return tag.major if tag is not None else 0


@dataclass(frozen=True)
class Require:
    path: ImportPath
    version: str
    indirect: bool = False


@dataclass(frozen=True)
class Replace:
    old: ImportPath
    new: ImportPath
    new_version: str | None = None


@dataclass(frozen=True)
class GoModManifest:
    module_path: ImportPath
    requires: tuple[Require, ...] = ()
    replaces: tuple[Replace, ...] = ()

    def replacement_for(self, path_text: str) -> Replace | None:
        for rep in self.replaces:
            if rep.old.text == path_text:
                return rep
        return None


_INDIRECT_RE = re.compile(r"//\s*indirect\b")


def _strip_comment(line: str) -> tuple[str, bool]:
    indirect = bool(_INDIRECT_RE.search(line))
    idx = line.find("//")
    if idx >= 0:
        line = line[:idx]
    return line.strip(), indirect


def _parse_require_entry(body: str, indirect: bool, line_no: int) -> Require:
    parts = body.split()
    if len(parts) != 2:
        raise ManifestSyntax(line_no, f"malformed require entry {body!r}")
    return Require(parse_import_path(parts[0]), parts[1], indirect)


def _parse_replace_entry(body: str, line_no: int) -> Replace:
    if "=>" not in body:
        raise ManifestSyntax(line_no, f"malformed replace entry {body!r}")
    old_part, new_part = (side.strip() for side in body.split("=>", 1))
    old_fields = old_part.split()
    new_fields = new_part.split()
    if not old_fields or not new_fields or len(new_fields) > 2:
        raise ManifestSyntax(line_no, f"malformed replace entry {body!r}")
    old = parse_import_path(old_fields[0])  # old-side version, if any, is ignored
    new = parse_import_path(new_fields[0])
    new_version = new_fields[1] if len(new_fields) == 2 else None
    return Replace(old, new, new_version)


# Directives with block forms we skip over without interpreting.
_IGNORED_BLOCK_DIRECTIVES = ("exclude", "retract")


def parse_go_mod(text: str) -> GoModManifest:
    """Parse a go.mod manifest.

    Extracts the module directive, require entries (with their trailing
    ``// indirect`` markers) and replace directives. Other directives
    (go, toolchain, exclude, retract, ...) are ignored.
    """
    module_path: ImportPath | None = None
    requires: list[Require] = []
    replaces: list[Replace] = []
    seen_paths: set[str] = set()
    block: str | None = None

    for line_no, raw_line in enumerate(text.splitlines(), start=1):
        line, indirect = _strip_comment(raw_line)
        if not line:
            continue

        if block is not None:
            if line == ")":
                block = None
            elif block == "require":
                req = _parse_require_entry(line, indirect, line_no)
                if req.path.text in seen_paths:
                    raise ManifestSyntax(line_no, f"duplicate require {req.path.text}")
                seen_paths.add(req.path.text)
                requires.append(req)
            elif block == "replace":
                replaces.append(_parse_replace_entry(line, line_no))
            continue

        directive, _, rest = line.partition(" ")
        rest = rest.strip()
        if directive == "module":
            if module_path is not None:
                raise ManifestSyntax(line_no, "duplicate module directive")
            if not rest:
                raise ManifestSyntax(line_no, "module directive without a path")
            module_path = parse_import_path(rest)
        elif directive in ("require", "replace") or directive in _IGNORED_BLOCK_DIRECTIVES:
            if rest == "(":
                block = directive if directive in ("require", "replace") else "ignored"
            elif directive == "require":
                req = _parse_require_entry(rest, indirect, line_no)
                if req.path.text in seen_paths:
                    raise ManifestSyntax(line_no, f"duplicate require {req.path.text}")
                seen_paths.add(req.path.text)
                requires.append(req)
            elif directive == "replace":
                replaces.append(_parse_replace_entry(rest, line_no))
        # anything else: unknown or uninterpreted directive, ignored

    if module_path is None:
        raise NoModuleDirective("go.mod has no module directive")
    return GoModManifest(module_path, tuple(requires), tuple(replaces))


@dataclass(frozen=True)
class SourceImportSet:
    imports: frozenset[ImportPath]
    files_skipped: int = 0


_SINGLE_IMPORT_RE = re.compile(r'^\s*import\s+(?:[\w.]+\s+|[_.]\s+)?"([^"]+)"', re.MULTILINE)
_FACTORED_IMPORT_RE = re.compile(r"^\s*import\s*\(", re.MULTILINE)
_IMPORT_LINE_RE = re.compile(r'^\s*(?:[\w.]+\s+|[_.]\s+)?"([^"]+)"\s*(?://.*)?$')


def _is_stdlib(path_text: str) -> bool:
    # Hosting-site paths always carry a dotted host in the first segment.
    first = path_text.split("/", 1)[0]
    return "." not in first


def _imports_of_source(text: str) -> list[str]:
    found = list(_SINGLE_IMPORT_RE.findall(text))
    for m in _FACTORED_IMPORT_RE.finditer(text):
        end = text.find(")", m.end())
        if end < 0:
            raise ValueError("unterminated import block")
        for line in text[m.end():end].splitlines():
            lm = _IMPORT_LINE_RE.match(line)
            if lm:
                found.append(lm.group(1))
    return found


def scan_source_imports(files: list[str]) -> SourceImportSet:
    """Collect the deduplicated set of non-stdlib import paths.

    Handles single and factored import declarations; blank and dot import
    aliases are retained as paths. Units that cannot be scanned are skipped
    and counted in the diagnostics tally.
    """
    imports: set[ImportPath] = set()
    skipped = 0
    for text in files:
        try:
            raw_paths = _imports_of_source(text)
        except ValueError:
            skipped += 1
            continue
        bad = False
        for raw in raw_paths:
            if _is_stdlib(raw):
                continue
            try:
                imports.add(parse_import_path(raw))
            except PathError:
                bad = True
        if bad:
            skipped += 1
    return SourceImportSet(frozenset(imports), skipped)


@dataclass(frozen=True)
class DmToolMarker:
    tool: str | None
    present: bool


# Marker files of third-party dependency-management tools. The table is
# data-driven so new tools are a config change, not a code change.
DEFAULT_DM_TOOL_MARKERS: tuple[tuple[str, str], ...] = (
    ("Gopkg.toml", "Dep"),
    ("glide.yaml", "Glide"),
    ("vendor/vendor.json", "Govendor"),
)


def detect_dm_tool(
    file_listing: set[str] | frozenset[str],
    markers: tuple[tuple[str, str], ...] = DEFAULT_DM_TOOL_MARKERS,
) -> DmToolMarker:
    """Detect a dependency-management tool by the presence of its config file."""
    for marker_path, tool in markers:
        if marker_path in file_listing:
            return DmToolMarker(tool, True)
    return DmToolMarker(None, False)


@dataclass(frozen=True)
class VendorInventory:
    vendored_paths: frozenset[ImportPath]


_SOURCE_SUFFIX = ".go"


def scan_vendor_inventory(file_listing: set[str] | frozenset[str]) -> VendorInventory:
    """List every directory under vendor/ that directly holds a source unit."""
    paths: set[ImportPath] = set()
    for rel in file_listing:
        if not rel.startswith("vendor/") or not rel.endswith(_SOURCE_SUFFIX):
            continue
        directory = rel[len("vendor/"):].rpartition("/")[0]
        if not directory:
            continue
        try:
            paths.add(parse_import_path(directory))
        except PathError:
            continue
    return VendorInventory(frozenset(paths))


@dataclass(frozen=True)
class ToolConfigEntry:
    path: ImportPath
    version: str | None = None


_GOPKG_BLOCK_RE = re.compile(r"\[\[(?:constraint|override)\]\]([^\[]*)", re.DOTALL)
_GOPKG_NAME_RE = re.compile(r'^\s*name\s*=\s*"([^"]+)"', re.MULTILINE)
_GOPKG_VERSION_RE = re.compile(r'^\s*version\s*=\s*"([^"]+)"', re.MULTILINE)
_GLIDE_PACKAGE_RE = re.compile(r"^-\s*package:\s*(\S+)\s*$", re.MULTILINE)
_GLIDE_VERSION_RE = re.compile(r"^\s+version:\s*(\S+)\s*$", re.MULTILINE)


def parse_tool_config(marker_path: str, text: str) -> list[ToolConfigEntry]:
    """Extract referenced paths (and pinned versions, where stated) from a
    DM-tool configuration file.

    Only the path/version pairs are interpreted; everything else in the
    config is tool-specific noise for our purposes.
    """
    entries: list[ToolConfigEntry] = []
    if marker_path == "Gopkg.toml":
        for block in _GOPKG_BLOCK_RE.findall(text):
            name = _GOPKG_NAME_RE.search(block)
            if not name:
                continue
            version = _GOPKG_VERSION_RE.search(block)
            try:
                path = parse_import_path(name.group(1))
            except PathError:
                continue
            entries.append(ToolConfigEntry(path, version.group(1) if version else None))
    elif marker_path == "glide.yaml":
        # Pair each "- package:" with the version indented under it, if any.
        current: str | None = None
        for line in text.splitlines():
            pkg = _GLIDE_PACKAGE_RE.match(line)
            if pkg:
                if current is not None:
                    entries.append(ToolConfigEntry(parse_import_path(current), None))
                current = pkg.group(1)
                continue
            ver = _GLIDE_VERSION_RE.match(line)
            if ver and current is not None:
                entries.append(ToolConfigEntry(parse_import_path(current), ver.group(1)))
                current = None
        if current is not None:
            entries.append(ToolConfigEntry(parse_import_path(current), None))
    elif marker_path == "vendor/vendor.json":
        try:
            doc = json.loads(text)
        except json.JSONDecodeError:
            return []
        for pkg in doc.get("package", []):
            raw = pkg.get("path")
            if not isinstance(raw, str):
                continue
            try:
                entries.append(ToolConfigEntry(parse_import_path(raw), None))
            except PathError:
                continue
    return entries
