"""Classification of toolchain versions, referencing modes, release
strategies, and semantic-import-versioning compliance."""

from __future__ import annotations

import re
from dataclasses import dataclass
from enum import Enum

from .parsers import (
    DmToolMarker,
    GoModManifest,
    ImportPath,
    SemVerTag,
    try_parse_semver_tag,
)


class VersionError(ValueError):
    """A toolchain version string could not be classified."""


class MalformedVersion(VersionError):
    pass


class BelowSupported(VersionError):
    pass


class ToolchainClass(Enum):
    LEGACY = "legacy"
    COMPATIBLE = "compatible"
    NEW = "new"


class ReferencingMode(Enum):
    GOPATH = "gopath"
    GO_MODULES = "gomodules"


class ModuleAwareness(Enum):
    AWARE = "aware"
    UNAWARE = "unaware"


class ReleaseStrategy(Enum):
    MAJOR_BRANCH = "major-branch"
    MAJOR_SUBDIRECTORY = "major-subdirectory"
    NOT_APPLICABLE = "not-applicable"


class ViolationKind(Enum):
    MISSING_SUFFIX = "missing_suffix"
    SURPLUS_SUFFIX = "surplus_suffix"
    MALFORMED_TAG = "malformed_tag"
    PATH_MISMATCH = "path_mismatch"


@dataclass(frozen=True)
class SivViolation:
    kind: ViolationKind
    detail: str


_TOOLCHAIN_VERSION_RE = re.compile(r"^(\d+)\.(\d+)(?:\.(\d+))?$")

# Version boundaries where toolchain behaviour changes. Versions below the
# first supported release cannot be classified at all.
_SUPPORTED_FLOOR = (1, 0, 1)
_LEGACY_RANGES = (((1, 0, 1), (1, 9, 7)), ((1, 10, 1), (1, 10, 3)))
_COMPATIBLE_RANGES = (((1, 9, 7), (1, 10, 1)), ((1, 10, 3), (1, 11, 1)))
_NEW_FLOOR = (1, 11, 1)


def _parse_toolchain_version(version: str) -> tuple[int, int, int]:
    m = _TOOLCHAIN_VERSION_RE.match(version)
    if m is None:
        raise MalformedVersion(f"toolchain version {version!r} is not dotted integers")
    return int(m.group(1)), int(m.group(2)), int(m.group(3) or 0)


def classify_toolchain_version(version: str) -> ToolchainClass:
    """Classify a toolchain release as legacy, compatible, or new.

    Legacy builds cannot resolve version-suffixed paths; compatible ones
    gained that capability through minimal module compatibility; new ones
    additionally support manifest-driven referencing.
    """
    v = _parse_toolchain_version(version)
    if v < _SUPPORTED_FLOOR:
        raise BelowSupported(f"toolchain version {version} predates 1.0.1")
    for lo, hi in _LEGACY_RANGES:
        if lo <= v < hi:
            return ToolchainClass.LEGACY
    for lo, hi in _COMPATIBLE_RANGES:
        if lo <= v < hi:
            return ToolchainClass.COMPATIBLE
    if v >= _NEW_FLOOR:
        return ToolchainClass.NEW
    # Unreachable: the ranges above partition [1.0.1, inf).
    raise MalformedVersion(version)


def classify_module_awareness(cls: ToolchainClass, tool: DmToolMarker) -> ModuleAwareness:
    """A project is module-aware iff its toolchain is compatible or new and
    no third-party DM tool is in use (tools block minimal module
    compatibility)."""
    if cls in (ToolchainClass.COMPATIBLE, ToolchainClass.NEW) and not tool.present:
        return ModuleAwareness.AWARE
    return ModuleAwareness.UNAWARE


def classify_mode(repo_files: set[str] | frozenset[str]) -> ReferencingMode:
    """GoModules iff a root-level go.mod exists in the listing."""
    if "go.mod" in repo_files:
        return ReferencingMode.GO_MODULES
    return ReferencingMode.GOPATH


def subject_awareness(
    mode: ReferencingMode,
    tool: DmToolMarker,
    toolchain_version: str | None,
) -> ModuleAwareness:
    """Awareness of a scanned project.

    GoModules projects are always aware. For GOPATH projects the declared
    toolchain version decides when present; without one we conservatively
    assume a compatible-or-newer toolchain, so only DM-tool users are
    classified unaware.
    """
    if mode is ReferencingMode.GO_MODULES:
        return ModuleAwareness.AWARE
    if toolchain_version is not None:
        cls = classify_toolchain_version(toolchain_version)
    else:
        cls = ToolchainClass.NEW
    return classify_module_awareness(cls, tool)


def determine_release_strategy(
    tag: SemVerTag, repo_files: set[str] | frozenset[str]
) -> ReleaseStrategy:
    """How a v2+ release is published: a physical vN/ subdirectory with its
    own manifest, or a virtual (major branch) path rewrite."""
    if tag.major < 2:
        return ReleaseStrategy.NOT_APPLICABLE
    if f"v{tag.major}/go.mod" in repo_files:
        return ReleaseStrategy.MAJOR_SUBDIRECTORY
    return ReleaseStrategy.MAJOR_BRANCH


def validate_siv(
    tag: str,
    manifest: GoModManifest,
    canonical_repo_path: ImportPath,
    mode: ReferencingMode = ReferencingMode.GO_MODULES,
) -> list[SivViolation]:
    """Check a release against semantic import versioning.

    Returns one violation per failed rule; the checks are independent, so a
    release can carry several. Only GoModules subjects may be validated.
    """
    if mode is not ReferencingMode.GO_MODULES:
        raise ValueError("SIV validation applies to GoModules subjects only")

    violations: list[SivViolation] = []
    parsed = try_parse_semver_tag(tag)
    suffix = manifest.module_path.suffix_major

    if parsed is None:
        violations.append(
            SivViolation(
                ViolationKind.MALFORMED_TAG,
                f"release tag {tag!r} does not follow the vMAJOR.MINOR.PATCH format",
            )
        )
    elif parsed.major >= 2:
        if suffix != parsed.major:
            have = f"/v{suffix}" if suffix is not None else "no suffix"
            violations.append(
                SivViolation(
                    ViolationKind.MISSING_SUFFIX,
                    f"release {tag} requires module path suffix /v{parsed.major}, "
                    f"but {manifest.module_path.text!r} carries {have}",
                )
            )
    else:
        if suffix is not None:
            violations.append(
                SivViolation(
                    ViolationKind.SURPLUS_SUFFIX,
                    f"release {tag} is v0/v1 but module path "
                    f"{manifest.module_path.text!r} carries suffix /v{suffix}",
                )
            )

    if manifest.module_path.base != canonical_repo_path.base:
        violations.append(
            SivViolation(
                ViolationKind.PATH_MISMATCH,
                f"module path base {manifest.module_path.base!r} does not match "
                f"the hosting repository path {canonical_repo_path.base!r}",
            )
        )
    return violations
