"""gomodhealth: diagnoses dependency-management issues caused by mixing the
two Go library-referencing modes, and suggests fixes ranked by their impact
on the surrounding ecosystem."""

from __future__ import annotations

from importlib import resources

from .classify import (
    ModuleAwareness,
    ReferencingMode,
    ReleaseStrategy,
    SivViolation,
    ToolchainClass,
    ViolationKind,
    classify_mode,
    classify_module_awareness,
    classify_toolchain_version,
    determine_release_strategy,
    validate_siv,
)
from .detectors import Issue, IssueType, detect_all, detect_type_a, detect_type_b1, detect_type_b2, detect_type_c
from .fixes import FixSuggestion, SolutionId, applicable_solutions, customize_suggestion, rank_suggestions, suggestions_for
from .host import EcosystemSnapshot, SnapshotHost, load_snapshot
from .model import DependencyModel, build_model, collect_downstream, collect_pr, collect_upstream
from .parsers import (
    GoModManifest,
    ImportPath,
    SemVerTag,
    detect_dm_tool,
    parse_go_mod,
    parse_import_path,
    parse_semver_tag,
    scan_source_imports,
    scan_vendor_inventory,
)
from .report import Report, analyze_subject, build_report, render_json, render_text

__version__ = "0.1.0"


def case_studies_path() -> str:
    """Filesystem path of the bundled case-study snapshot."""
    return str(resources.files("gomodhealth").joinpath("data/case_studies.json"))
