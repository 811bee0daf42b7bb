"""Unit tests for the live hosting-site adapter, driven by a stub transport.

The adapter never runs in deterministic suites against a real network; these
tests only pin down its URL mapping and error translation.
"""

from __future__ import annotations

import pytest

from gomodhealth.host import HostError, RepoNotFound, UnknownRepo
from gomodhealth.live import LiveHost


class _Response:
    def __init__(self, status_code: int, payload):
        self.status_code = status_code
        self._payload = payload

    def json(self):
        return self._payload


class _Session:
    def __init__(self, responses: dict):
        self.responses = responses
        self.requested: list[str] = []

    def get(self, url: str):
        self.requested.append(url)
        return self.responses.get(url, _Response(404, {}))


def test_repo_lookup_maps_owner_and_name():
    session = _Session({
        "https://api.github.com/repos/pierrec/lz4": _Response(200, {"full_name": "pierrec/lz4"}),
    })
    host = LiveHost(session=session)
    assert host.get_repo("github.com/pierrec/lz4/v2")["full_name"] == "pierrec/lz4"
    assert session.requested == ["https://api.github.com/repos/pierrec/lz4"]


def test_missing_repo_becomes_not_found():
    host = LiveHost(session=_Session({}))
    with pytest.raises(RepoNotFound):
        host.get_repo("github.com/gone/away")


def test_short_path_is_unknown():
    host = LiveHost(session=_Session({}))
    with pytest.raises(UnknownRepo):
        host.get_repo("github.com")


def test_server_error_is_host_error():
    session = _Session({
        "https://api.github.com/repos/a/b": _Response(500, {}),
    })
    with pytest.raises(HostError):
        LiveHost(session=session).get_repo("github.com/a/b")


def test_dependent_search_deduplicates_by_repository():
    url = "https://api.github.com/search/code?q=%22github.com/a/b%22+language:go"
    session = _Session({
        url: _Response(200, {"items": [
            {"repository": {"full_name": "x/one"}},
            {"repository": {"full_name": "x/one"}},
            {"repository": {"full_name": "x/two"}},
        ]}),
    })
    hits = LiveHost(session=session).search_dependents("github.com/a/b")
    assert [h["repository"]["full_name"] for h in hits] == ["x/one", "x/two"]
