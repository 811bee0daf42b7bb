"""Unit tests for the four issue detectors."""

from __future__ import annotations

import json

from conftest import make_host, repo, tag
from gomodhealth.detectors import (
    IssueType,
    detect_all,
    detect_type_a,
    detect_type_b1,
    detect_type_b2,
    detect_type_c,
)
from gomodhealth.classify import ViolationKind
from gomodhealth.host import SnapshotHost, load_snapshot
from gomodhealth.model import build_model


def _upgrade_scenario(subject_tool: bool):
    """A pinned upstream whose latest release drags in a virtual v2 path."""
    pins = {"a.example/mid/lib": "v1.0.0"} if subject_tool else None
    return make_host(
        repo("a.example/app/main", [tag("v1.0.0", imports=["a.example/mid/lib"],
                                        dep_pins=pins)]),
        repo("a.example/mid/lib", [
            tag("v1.0.0"),
            tag("v1.5.0", module="a.example/mid/lib",
                requires=[("a.example/deep/lib/v2", "v2.1.0")]),
        ]),
        repo("a.example/deep/lib", [tag("v2.1.0", module="a.example/deep/lib/v2")]),
    )


class TestTypeA:
    def test_transitive_virtual_path_on_upgrade_frontier(self):
        host = _upgrade_scenario(subject_tool=True)
        issues = detect_type_a(build_model(host, "a.example/app/main"))
        assert len(issues) == 1
        chain = [(e.repo, e.version) for e in issues[0].evidence]
        assert chain == [
            ("a.example/app/main", "v1.0.0"),
            ("a.example/mid/lib", "v1.5.0"),
            ("a.example/deep/lib", "v2.1.0"),
        ]

    def test_direct_upstream_latest_went_virtual(self, case_host):
        issues = detect_type_a(build_model(case_host, "github.com/filebrowser/filebrowser"))
        assert len(issues) == 2
        endpoints = {i.evidence[-1].repo for i in issues}
        assert endpoints == {"github.com/pierrec/lz4", "github.com/pelletier/go-toml"}

    def test_aware_subject_is_never_flagged(self):
        host = _upgrade_scenario(subject_tool=False)  # no tool -> assumed aware
        assert detect_type_a(build_model(host, "a.example/app/main")) == []

    def test_already_broken_state_is_not_a_prediction(self):
        # Without a pin the subject already tracks the virtual-path release:
        # the breakage is manifest, not an upgrade risk.
        host = make_host(
            repo("a.example/app/main", [tag("v1.0.0", imports=["a.example/mid/lib"],
                                            dep_pins={})]),
            repo("a.example/mid/lib", [tag("v2.0.0", module="a.example/mid/lib/v2")]),
        )
        assert detect_type_a(build_model(host, "a.example/app/main")) == []

    def test_physical_subdirectory_does_not_fire(self):
        host = make_host(
            repo("a.example/app/main", [tag("v1.0.0", imports=["a.example/mid/lib"],
                                            dep_pins={"a.example/mid/lib": "v1.0.0"})]),
            repo("a.example/mid/lib", [
                tag("v1.0.0"),
                tag("v2.0.0", module="a.example/mid/lib/v2",
                    subdir_module="a.example/mid/lib/v2"),
            ]),
        )
        assert detect_type_a(build_model(host, "a.example/app/main")) == []

    def test_legacy_toolchain_subject_with_pins_fires(self):
        host = make_host(
            repo("a.example/app/main", [tag("v1.0.0", imports=["a.example/mid/lib"],
                                            glide_pins={"a.example/mid/lib": "v1.0.0"},
                                            toolchain="1.9.6")]),
            repo("a.example/mid/lib", [tag("v1.0.0"),
                                       tag("v2.0.0", module="a.example/mid/lib/v2")]),
        )
        issues = detect_type_a(build_model(host, "a.example/app/main"))
        assert len(issues) == 1


class TestTypeB1:
    def test_divergent_interpretation_through_gopath(self, case_host):
        issues = detect_type_b1(build_model(case_host, "github.com/example/dbclient"))
        assert len(issues) == 1
        issue = issues[0]
        assert "v2.0.0" in issue.explanation and "v1.1.0" in issue.explanation
        assert [e.repo for e in issue.evidence] == [
            "github.com/example/dbclient",
            "github.com/cockroachdb/cockroach",
            "github.com/cockroachdb/apd",
        ]

    def test_suffixed_intermediary_reference_is_consistent(self):
        host = make_host(
            repo("a.example/cli/ent", [tag("v0.1.0", module="a.example/cli/ent",
                                           requires=[("a.example/mid/lib", "v1.0.0")])]),
            repo("a.example/mid/lib", [tag("v1.0.0", imports=["a.example/deep/lib/v2"])]),
            repo("a.example/deep/lib", [tag("v1.0.0"),
                                        tag("v2.0.0", module="a.example/deep/lib/v2")]),
        )
        assert detect_type_b1(build_model(host, "a.example/cli/ent")) == []

    def test_missing_v0_v1_release_reports_resolution_failure(self):
        host = make_host(
            repo("a.example/cli/ent", [tag("v0.1.0", module="a.example/cli/ent",
                                           requires=[("a.example/mid/lib", "v1.0.0")])]),
            repo("a.example/mid/lib", [tag("v1.0.0", imports=["a.example/deep/lib"])]),
            repo("a.example/deep/lib", [tag("v2.0.0", module="a.example/deep/lib/v2")]),
        )
        issues = detect_type_b1(build_model(host, "a.example/cli/ent"))
        assert len(issues) == 1
        assert "fails to resolve" in issues[0].explanation

    def test_gopath_subject_out_of_scope(self, case_host):
        assert detect_type_b1(build_model(case_host, "github.com/moby/moby")) == []


class TestTypeB2:
    def test_relocated_vendored_library(self, case_host):
        issues = detect_type_b2(build_model(case_host, "github.com/moby/moby"))
        assert len(issues) == 1
        issue = issues[0]
        repos = [e.repo for e in issue.evidence]
        assert "github.com/Sirupsen/logrus" in repos
        assert "github.com/sirupsen/logrus" in repos
        assert "1 GoModules dependent(s)" in issue.explanation

    def test_consistent_vendor_is_clean(self, case_host):
        assert detect_type_b2(build_model(case_host, "github.com/cockroachdb/cockroach")) == []

    def test_deleted_remote(self):
        host = make_host(
            repo("a.example/app/main", [tag("v1.0.0", vendor=["a.example/gone/lib"],
                                            imports=["a.example/gone/lib"])]),
            {"path": "a.example/gone/lib", "status": "deleted",
             "default_branch_tag": "", "tags": []},
        )
        issues = detect_type_b2(build_model(host, "a.example/app/main"))
        assert len(issues) == 1
        assert "deleted" in issues[0].explanation


class TestTypeC:
    def test_suffix_removed(self, case_host):
        issues = detect_type_c(build_model(case_host, "github.com/pierrec/lz4", tag="v2.2.4"))
        assert [i.violation.kind for i in issues] == [ViolationKind.MISSING_SUFFIX]

    def test_malformed_tag(self, case_host):
        issues = detect_type_c(build_model(case_host, "github.com/osrg/gobgp"))
        assert [i.violation.kind for i in issues] == [ViolationKind.MALFORMED_TAG]

    def test_path_mismatch(self, case_host):
        issues = detect_type_c(build_model(case_host, "github.com/jwplayer/jwplatform-go"))
        assert [i.violation.kind for i in issues] == [ViolationKind.PATH_MISMATCH]

    def test_compliant_module(self, case_host):
        assert detect_type_c(build_model(case_host, "github.com/pierrec/lz4")) == []

    def test_subdirectory_release_validates_subdirectory_manifest(self, case_host):
        assert detect_type_c(build_model(case_host, "github.com/nicksnyder/go-i18n")) == []

    def test_subdirectory_release_with_bad_inner_manifest(self):
        host = make_host(
            repo("a.example/lib/rary", [
                tag("v2.0.0", module="a.example/lib/rary/v2", extra_files={
                    "v2/go.mod": "module a.example/lib/rary\n",  # suffix missing inside
                    "v2/lib.go": "package rary\n",
                }),
            ]),
        )
        issues = detect_type_c(build_model(host, "a.example/lib/rary"))
        assert [i.violation.kind for i in issues] == [ViolationKind.MISSING_SUFFIX]


class TestDetectAll:
    def test_clean_single_repo(self):
        host = make_host(repo("a.example/alone/p", [tag("v1.0.0", module="a.example/alone/p")]))
        assert detect_all(build_model(host, "a.example/alone/p")) == []

    def test_bundled_snapshot_yields_exactly_the_seven_incidents(self, case_host):
        found = []
        for record in case_host.present_repos():
            for issue in detect_all(build_model(case_host, record.path.text)):
                found.append((issue.subject[0], issue.type))
        assert sorted(found) == sorted([
            ("github.com/filebrowser/filebrowser", IssueType.TYPE_A),
            ("github.com/filebrowser/filebrowser", IssueType.TYPE_A),
            ("github.com/example/dbclient", IssueType.TYPE_B1),
            ("github.com/moby/moby", IssueType.TYPE_B2),
            ("github.com/shirou/gopsutil", IssueType.TYPE_C),
            ("github.com/osrg/gobgp", IssueType.TYPE_C),
            ("github.com/jwplayer/jwplatform-go", IssueType.TYPE_C),
        ], key=lambda t: (t[0], t[1].value))

    def test_document_order_does_not_matter(self, case_host):
        with open(__import__("gomodhealth").case_studies_path()) as fh:
            doc = json.load(fh)
        doc["repos"] = list(reversed(doc["repos"]))
        shuffled = SnapshotHost(load_snapshot(json.dumps(doc)))
        for path in ("github.com/filebrowser/filebrowser", "github.com/example/dbclient"):
            a = [i.id for i in detect_all(build_model(case_host, path))]
            b = [i.id for i in detect_all(build_model(shuffled, path))]
            assert a == b

    def test_gate_soundness(self, case_host):
        for record in case_host.present_repos():
            model = build_model(case_host, record.path.text)
            for issue in detect_all(model):
                if issue.type is IssueType.TYPE_A:
                    assert model.pr.awareness.value == "unaware"
                elif issue.type in (IssueType.TYPE_B1, IssueType.TYPE_C):
                    assert model.pr.md.value == "gomodules"
                else:
                    assert model.pr.md.value == "gopath"

    def test_removing_flagged_upstream_removes_exactly_its_issues(self, case_host):
        with open(__import__("gomodhealth").case_studies_path()) as fh:
            doc = json.load(fh)
        doc["repos"] = [r for r in doc["repos"] if r["path"] != "github.com/pelletier/go-toml"]
        host = SnapshotHost(load_snapshot(json.dumps(doc)))
        issues = detect_all(build_model(host, "github.com/filebrowser/filebrowser"))
        # Only the go-toml chain disappears; the lz4 chain stays.
        assert len(issues) == 1
        assert issues[0].evidence[-1].repo == "github.com/pierrec/lz4"
