"""Optional thin adapter mapping the host interface onto a hosting site's
REST endpoints (repository lookup plus code search).

This backend is excluded from the deterministic test and acceptance suites;
the snapshot backend is the canonical implementation. Requests are issued
sequentially so rate limits stay manageable, which cannot change result
semantics because the interface is read-only.
"""

from __future__ import annotations

from .host import HostError, RepoNotFound, UnknownRepo
from .parsers import ImportPath, parse_import_path


class LiveHost:
    """Minimal hosting-site client with the same query surface as
    SnapshotHost.

    ``session`` is anything with a ``get(url) -> response`` method where the
    response exposes ``status_code`` and ``json()`` (a requests.Session
    fits). Injection keeps this adapter testable without network access.
    """

    def __init__(self, api_base: str = "https://api.github.com", session=None):
        if session is None:
            import requests

            session = requests.Session()
        self.api_base = api_base.rstrip("/")
        self.session = session

    def _owner_repo(self, path: str | ImportPath) -> str:
        parsed = path if isinstance(path, ImportPath) else parse_import_path(path)
        segments = parsed.base.split("/")
        if len(segments) < 3:
            raise UnknownRepo(parsed.base)
        return "/".join(segments[1:3])

    def get_repo(self, path: str | ImportPath) -> dict:
        """Raw repository metadata; 404 maps to the not-found error the
        detectors understand."""
        response = self.session.get(f"{self.api_base}/repos/{self._owner_repo(path)}")
        if response.status_code == 404:
            raise RepoNotFound(str(path))
        if response.status_code != 200:
            raise HostError(f"repository lookup failed with HTTP {response.status_code}")
        return response.json()

    def search_dependents(self, path: str | ImportPath) -> list[dict]:
        """Code-search hits for the path's base, one entry per repository."""
        parsed = path if isinstance(path, ImportPath) else parse_import_path(path)
        response = self.session.get(
            f"{self.api_base}/search/code?q=%22{parsed.base}%22+language:go"
        )
        if response.status_code != 200:
            raise HostError(f"code search failed with HTTP {response.status_code}")
        seen = {}
        for item in response.json().get("items", []):
            full_name = item.get("repository", {}).get("full_name")
            if full_name and full_name not in seen:
                seen[full_name] = item
        return [seen[name] for name in sorted(seen)]
