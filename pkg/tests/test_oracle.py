"""Agreement between the detectors and the dual-interpreter oracle on
hand-built and randomized snapshots."""

from __future__ import annotations

import json
import random

import pytest

from conftest import make_host, repo, tag
from dual_oracle import generate_snapshot, subject_flagged
from gomodhealth.detectors import detect_type_a, detect_type_b1
from gomodhealth.host import SnapshotHost, load_snapshot
from gomodhealth.model import build_model


def detector_flags(host: SnapshotHost, path: str) -> bool:
    model = build_model(host, path)
    return bool(detect_type_a(model)) or bool(detect_type_b1(model))


def compare_all_subjects(doc: dict) -> list[tuple[str, bool, bool]]:
    host = SnapshotHost(load_snapshot(json.dumps(doc)))
    disagreements = []
    for record in host.present_repos():
        tool = detector_flags(host, record.path.text)
        oracle = subject_flagged(doc, record.path.text)
        if tool != oracle:
            disagreements.append((record.path.text, tool, oracle))
    return disagreements


class TestHandBuiltAgreement:
    def test_pinned_upgrade_to_virtual_path(self):
        doc = {"repos": [
            repo("a.example/app/main", [tag("v1.0.0", imports=["a.example/mid/lib"],
                                            dep_pins={"a.example/mid/lib": "v1.0.0"})]),
            repo("a.example/mid/lib", [tag("v1.0.0"),
                                       tag("v2.0.0", module="a.example/mid/lib/v2")]),
        ]}
        assert subject_flagged(doc, "a.example/app/main") is True
        assert compare_all_subjects(doc) == []

    def test_interpretation_divergence_chain(self):
        doc = {"repos": [
            repo("a.example/cli/ent", [tag("v0.1.0", module="a.example/cli/ent",
                                           requires=[("a.example/mid/lib", "v1.0.0")])]),
            repo("a.example/mid/lib", [tag("v1.0.0", imports=["a.example/deep/lib"])]),
            repo("a.example/deep/lib", [tag("v1.1.0"),
                                        tag("v2.0.0", module="a.example/deep/lib/v2")]),
        ]}
        assert subject_flagged(doc, "a.example/cli/ent") is True
        assert compare_all_subjects(doc) == []

    def test_subdirectory_releases_are_benign(self):
        doc = {"repos": [
            repo("a.example/app/main", [tag("v1.0.0", imports=["a.example/mid/lib"],
                                            dep_pins={"a.example/mid/lib": "v1.0.0"})]),
            repo("a.example/mid/lib", [tag("v1.0.0"),
                                       tag("v2.0.0", module="a.example/mid/lib/v2",
                                           subdir_module="a.example/mid/lib/v2")]),
        ]}
        assert subject_flagged(doc, "a.example/app/main") is False
        assert compare_all_subjects(doc) == []

    def test_unpinned_subjects_are_already_broken_not_predicted(self):
        doc = {"repos": [
            repo("a.example/app/main", [tag("v1.0.0", imports=["a.example/mid/lib"],
                                            toolchain="1.9.6")]),
            repo("a.example/mid/lib", [tag("v2.0.0", module="a.example/mid/lib/v2")]),
        ]}
        assert subject_flagged(doc, "a.example/app/main") is False
        assert compare_all_subjects(doc) == []

    def test_bundled_snapshot_agrees(self, case_host):
        doc = json.loads(case_host.snapshot.document_bytes)
        assert compare_all_subjects(doc) == []


class TestRandomizedAgreement:
    @pytest.mark.parametrize("seed", range(6))
    def test_small_batches(self, seed):
        rng = random.Random(9000 + seed)
        for _ in range(10):
            doc = generate_snapshot(rng)
            assert compare_all_subjects(doc) == []
