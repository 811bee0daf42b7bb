"""Maps detected issues to the eight known fixing solutions, fills the
suggestion templates with impact counts from the dependency model, and
ranks the results by how many dependents each fix would hurt."""

from __future__ import annotations

from dataclasses import dataclass
from enum import IntEnum

from .classify import ReferencingMode, ViolationKind
from .detectors import Issue, IssueType, ROLE_RELOCATED_TARGET, ROLE_UPSTREAM, ROLE_VENDORED
from .model import DependencyModel


class SolutionId(IntEnum):
    MIGRATE_TO_MODULES = 1
    ROLL_BACK_TO_GOPATH = 2
    MAJOR_SUBDIRECTORY = 3
    VENDOR_THE_V2_LIBRARY = 4
    REPLACE_DIRECTIVE = 5
    UPDATE_IMPORT_PATHS = 6
    FOLLOW_SIV = 7
    REQUIRE_BY_COMMIT_HASH = 8


SOLUTION_SLUGS = {
    SolutionId.MIGRATE_TO_MODULES: "migrate-to-modules",
    SolutionId.ROLL_BACK_TO_GOPATH: "roll-back-to-gopath",
    SolutionId.MAJOR_SUBDIRECTORY: "major-subdirectory",
    SolutionId.VENDOR_THE_V2_LIBRARY: "vendor-the-v2-library",
    SolutionId.REPLACE_DIRECTIVE: "replace-directive",
    SolutionId.UPDATE_IMPORT_PATHS: "update-import-paths",
    SolutionId.FOLLOW_SIV: "follow-siv",
    SolutionId.REQUIRE_BY_COMMIT_HASH: "require-by-commit-hash",
}


@dataclass(frozen=True)
class SolutionInfo:
    id: SolutionId
    slug: str
    title: str
    fixes: tuple[IssueType, ...]
    benefit_tags: tuple[str, ...]      # ab1 migration, ab2 compatibility, ab3 no impact
    consequence_tags: tuple[str, ...]  # uc1 breaks unaware, uc2 hinders migration,
                                       # uc3 maintenance burden, uc4 no auto upgrades


SOLUTIONS: dict[SolutionId, SolutionInfo] = {
    SolutionId.MIGRATE_TO_MODULES: SolutionInfo(
        SolutionId.MIGRATE_TO_MODULES, "migrate-to-modules",
        "Migrate the project from GOPATH to Go Modules",
        (IssueType.TYPE_A,), ("ab1", "ab2"), ("uc1",),
    ),
    SolutionId.ROLL_BACK_TO_GOPATH: SolutionInfo(
        SolutionId.ROLL_BACK_TO_GOPATH, "roll-back-to-gopath",
        "Roll the upstream release back to GOPATH (drop its go.mod)",
        (IssueType.TYPE_A, IssueType.TYPE_C), ("ab2",), ("uc2",),
    ),
    SolutionId.MAJOR_SUBDIRECTORY: SolutionInfo(
        SolutionId.MAJOR_SUBDIRECTORY, "major-subdirectory",
        "Release v2+ versions through a physical major subdirectory",
        (IssueType.TYPE_A,), ("ab2",), ("uc3",),
    ),
    SolutionId.VENDOR_THE_V2_LIBRARY: SolutionInfo(
        SolutionId.VENDOR_THE_V2_LIBRARY, "vendor-the-v2-library",
        "Maintain the v2+ library in the vendor directory instead of "
        "referencing its virtual path",
        (IssueType.TYPE_A,), ("ab3",), ("uc3",),
    ),
    SolutionId.REPLACE_DIRECTIVE: SolutionInfo(
        SolutionId.REPLACE_DIRECTIVE, "replace-directive",
        "Use a replace directive with explicit version information",
        (IssueType.TYPE_B1, IssueType.TYPE_C), ("ab3",), ("uc4",),
    ),
    SolutionId.UPDATE_IMPORT_PATHS: SolutionInfo(
        SolutionId.UPDATE_IMPORT_PATHS, "update-import-paths",
        "Update import paths of libraries whose repositories moved",
        (IssueType.TYPE_B2,), ("ab2", "ab3"), (),
    ),
    SolutionId.FOLLOW_SIV: SolutionInfo(
        SolutionId.FOLLOW_SIV, "follow-siv",
        "Fix the release metadata to strictly follow semantic import versioning",
        (IssueType.TYPE_C,), ("ab1", "ab2"), ("uc1",),
    ),
    SolutionId.REQUIRE_BY_COMMIT_HASH: SolutionInfo(
        SolutionId.REQUIRE_BY_COMMIT_HASH, "require-by-commit-hash",
        "Reference the wanted release by commit hash instead of the "
        "problematic version number",
        (IssueType.TYPE_C,), ("ab3",), ("uc4",),
    ),
}


class InapplicableSolution(ValueError):
    pass


def applicable_solutions(issue: Issue) -> list[SolutionId]:
    """The solutions worth suggesting for an issue, in catalog order."""
    if issue.type is IssueType.TYPE_A:
        return [SolutionId.MIGRATE_TO_MODULES, SolutionId.ROLL_BACK_TO_GOPATH,
                SolutionId.MAJOR_SUBDIRECTORY, SolutionId.VENDOR_THE_V2_LIBRARY]
    if issue.type is IssueType.TYPE_B1:
        return [SolutionId.REPLACE_DIRECTIVE]
    if issue.type is IssueType.TYPE_B2:
        return [SolutionId.UPDATE_IMPORT_PATHS]
    solutions = [SolutionId.FOLLOW_SIV, SolutionId.ROLL_BACK_TO_GOPATH, SolutionId.REPLACE_DIRECTIVE]
    # Referencing by commit hash only helps when the version number itself is
    # the problem.
    if issue.violation is not None and issue.violation.kind is ViolationKind.MALFORMED_TAG:
        solutions.append(SolutionId.REQUIRE_BY_COMMIT_HASH)
    return solutions


@dataclass(frozen=True)
class ImpactCounts:
    gomodules: int
    gopath_aware: int
    gopath_unaware: int
    negatively_affected: int


@dataclass(frozen=True)
class FixSuggestion:
    solution: SolutionId
    summary: str
    benefits: tuple[str, ...]
    consequences: tuple[str, ...]
    impact: ImpactCounts
    rank: int = 0
    preferred: bool = False


def _partition_downstream(model: DependencyModel) -> tuple[int, int, int]:
    gomodules = aware = unaware = 0
    for d in model.ds:
        if d.md is ReferencingMode.GO_MODULES:
            gomodules += 1
        elif d.t:
            unaware += 1
        else:
            aware += 1
    return gomodules, aware, unaware


def _negative_count(issue: Issue, solution: SolutionId, gomodules: int, unaware: int) -> int:
    if solution is SolutionId.MIGRATE_TO_MODULES or solution is SolutionId.FOLLOW_SIV:
        return unaware  # version-suffixed paths appear; unaware dependents lose
    if solution in (SolutionId.REPLACE_DIRECTIVE, SolutionId.REQUIRE_BY_COMMIT_HASH):
        if issue.type is IssueType.TYPE_C:
            return gomodules  # every module dependent must patch its own manifest
        return 0  # the subject patches its own manifest
    return 0


def _upstream_name(issue: Issue) -> str:
    for link in issue.evidence:
        if link.role == ROLE_UPSTREAM:
            return link.repo
    return "the upstream project"


def _vendored_paths(issue: Issue) -> tuple[str, str]:
    old = new = ""
    for link in issue.evidence:
        if link.role == ROLE_VENDORED:
            old = link.repo
        elif link.role == ROLE_RELOCATED_TARGET:
            new = link.repo
    return old, new


def customize_suggestion(issue: Issue, solution: SolutionId, model: DependencyModel) -> FixSuggestion:
    """Instantiate one solution's template with subject, chain, and the
    downstream partition of the model."""
    if solution not in applicable_solutions(issue):
        raise InapplicableSolution(f"solution {int(solution)} does not address a {issue.type.value} issue")

    subject = issue.subject[0]
    gomodules, aware, unaware = _partition_downstream(model)
    negative = _negative_count(issue, solution, gomodules, unaware)
    upstream = _upstream_name(issue)

    benefits: list[str] = []
    consequences: list[str] = []

    if solution is SolutionId.MIGRATE_TO_MODULES:
        summary = (f"Migrate {subject} to Go Modules so it can resolve the "
                   f"version-suffixed paths introduced by {upstream}.")
        benefits.append("promotes the ecosystem-wide migration to Go Modules")
        benefits.append(f"restores the upgrade path to {upstream}")
        if unaware:
            consequences.append(
                f"breaks {unaware} module-unaware dependent(s) of {subject} that "
                f"cannot resolve its new version-suffixed path")
    elif solution is SolutionId.ROLL_BACK_TO_GOPATH:
        if issue.type is IssueType.TYPE_A:
            summary = (f"Ask {upstream} to roll back to GOPATH until its downstream "
                       f"projects have migrated.")
            benefits.append(f"restores the upgrade path for {subject} and other "
                            f"module-unaware dependents")
        else:
            summary = (f"Roll {subject} back to GOPATH (drop its go.mod) until its "
                       f"downstream projects can handle the fixed metadata.")
            benefits.append(f"keeps {unaware} module-unaware dependent(s) working")
        consequences.append("cancels the migration effort and hinders the "
                            "ecosystem migration to Go Modules")
    elif solution is SolutionId.MAJOR_SUBDIRECTORY:
        summary = (f"Ask {upstream} to publish its v2+ releases in a physical major "
                   f"subdirectory so GOPATH consumers get a real path.")
        benefits.append(f"restores resolution for {subject} without module awareness")
        consequences.append("the physical copy needs extra maintenance in every "
                            "subsequent release")
    elif solution is SolutionId.VENDOR_THE_V2_LIBRARY:
        summary = (f"Copy {upstream} into the vendor directory of {subject} instead "
                   f"of fetching it by its virtual import path.")
        benefits.append("no impact on any other project")
        consequences.append("the vendored copy needs manual maintenance and can "
                            "drift from the remote (a future stale-vendor risk)")
    elif solution is SolutionId.REPLACE_DIRECTIVE:
        if issue.type is IssueType.TYPE_B1:
            summary = (f"Add a replace directive in {subject} pinning {upstream} to the "
                       f"version its GOPATH intermediary builds against.")
            benefits.append("self-contained fix: no impact on any other project")
        else:
            summary = (f"Ask the GoModules dependents of {subject} to add replace "
                       f"directives with explicit versions, bypassing the "
                       f"non-compliant path.")
            if gomodules:
                consequences.append(f"pushes a manifest edit onto {gomodules} "
                                    f"GoModules dependent(s)")
        consequences.append("replaced dependencies are no longer upgraded "
                            "automatically by `go get`")
    elif solution is SolutionId.UPDATE_IMPORT_PATHS:
        old, new = _vendored_paths(issue)
        where = f" to {new}" if new else ""
        summary = (f"Update the import paths of {old or 'the vendored library'} in "
                   f"{subject}{where} so dependents fetch a live repository.")
        benefits.append(f"restores fetching for {gomodules} GoModules dependent(s)")
        benefits.append("no impact on any other project")
    elif solution is SolutionId.FOLLOW_SIV:
        summary = (f"Fix the release metadata of {subject} to strictly follow "
                   f"semantic import versioning.")
        benefits.append(f"restores resolution for {gomodules} GoModules dependent(s)")
        benefits.append("keeps the project on Go Modules, supporting the "
                        "ecosystem migration")
        if unaware:
            consequences.append(f"breaks {unaware} module-unaware dependent(s) that "
                                f"cannot resolve version-suffixed paths")
    else:  # REQUIRE_BY_COMMIT_HASH
        summary = (f"Ask the GoModules dependents of {subject} to reference the "
                   f"wanted release by commit hash instead of the malformed tag.")
        if gomodules:
            consequences.append(f"pushes a manifest edit onto {gomodules} "
                                f"GoModules dependent(s)")
        consequences.append("hash-pinned dependencies are no longer upgraded "
                            "automatically by `go get`")

    return FixSuggestion(
        solution=solution,
        summary=summary,
        benefits=tuple(benefits),
        consequences=tuple(consequences),
        impact=ImpactCounts(gomodules, aware, unaware, negative),
    )


def rank_suggestions(suggestions: list[FixSuggestion]) -> list[FixSuggestion]:
    """Order by ascending negative impact, ties by solution number; the top
    suggestion is flagged preferred."""
    ordered = sorted(suggestions, key=lambda s: (s.impact.negatively_affected, int(s.solution)))
    ranked = []
    for position, suggestion in enumerate(ordered, start=1):
        ranked.append(
            FixSuggestion(
                solution=suggestion.solution,
                summary=suggestion.summary,
                benefits=suggestion.benefits,
                consequences=suggestion.consequences,
                impact=suggestion.impact,
                rank=position,
                preferred=position == 1,
            )
        )
    return ranked


def suggestions_for(issue: Issue, model: DependencyModel) -> list[FixSuggestion]:
    """Applicable solutions, customized and ranked, for one issue."""
    return rank_suggestions(
        [customize_suggestion(issue, sid, model) for sid in applicable_solutions(issue)]
    )


def solution_ledger_text(solution: SolutionId) -> str:
    """Human-readable card for one solution, used by the CLI `explain`."""
    info = SOLUTIONS[solution]
    tag_text = {
        "ab1": "promotes the migration to Go Modules",
        "ab2": "restores compatibility for affected dependents",
        "ab3": "no impact on other projects",
        "uc1": "breaks module-unaware dependents",
        "uc2": "hinders or cancels the ecosystem migration",
        "uc3": "extra maintenance burden",
        "uc4": "disables automatic upgrade fetching",
    }
    lines = [
        f"Solution {int(solution)} ({info.slug}): {info.title}",
        f"  addresses: {', '.join(t.value for t in info.fixes)}",
        "  benefits: " + ("; ".join(tag_text[t] for t in info.benefit_tags) or "-"),
        "  consequences: " + ("; ".join(tag_text[t] for t in info.consequence_tags) or "-"),
    ]
    return "\n".join(lines)
