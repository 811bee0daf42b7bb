"""Shared snapshot-building helpers for the test suite."""

from __future__ import annotations

import json

import pytest

from gomodhealth import case_studies_path
from gomodhealth.host import SnapshotHost, load_snapshot


def gomod_text(module: str, requires=(), indirect=(), replaces=()) -> str:
    lines = [f"module {module}", "", "go 1.14"]
    for path, version in requires:
        lines.append(f"require {path} {version}")
    for path, version in indirect:
        lines.append(f"require {path} {version} // indirect")
    for old, new, version in replaces:
        suffix = f" {version}" if version else ""
        lines.append(f"replace {old} => {new}{suffix}")
    return "\n".join(lines) + "\n"


def source_text(imports=(), package: str = "lib") -> str:
    if not imports:
        return f"package {package}\n\nfunc Nop() {{}}\n"
    block = "\n".join(f'\t"{p}"' for p in imports)
    return (
        f"package {package}\n\nimport (\n\t\"fmt\"\n\n{block}\n)\n\n"
        f"func Nop() {{ fmt.Sprint(\"ok\") }}\n"
    )


def dep_config(pins: dict[str, str | None]) -> str:
    blocks = []
    for path, version in pins.items():
        body = f'[[constraint]]\n  name = "{path}"\n'
        if version:
            body += f'  version = "{version}"\n'
        blocks.append(body)
    return "\n".join(blocks)


def glide_config(pins: dict[str, str | None]) -> str:
    lines = ["package: local", "import:"]
    for path, version in pins.items():
        lines.append(f"- package: {path}")
        if version:
            lines.append(f"  version: {version}")
    return "\n".join(lines) + "\n"


def tag(
    name: str,
    *,
    module: str | None = None,
    requires=(),
    indirect=(),
    replaces=(),
    imports=(),
    subdir_module: str | None = None,
    dep_pins: dict | None = None,
    glide_pins: dict | None = None,
    vendor=(),
    toolchain: str | None = None,
    extra_files: dict | None = None,
) -> dict:
    files: dict[str, str] = {}
    if module is not None:
        files["go.mod"] = gomod_text(module, requires, indirect, replaces)
    if subdir_module is not None:
        major = subdir_module.rsplit("/v", 1)[1]
        files[f"v{major}/go.mod"] = gomod_text(subdir_module, requires, indirect)
        files[f"v{major}/lib.go"] = source_text(imports)
    files["lib.go"] = source_text(imports)
    if dep_pins is not None:
        files["Gopkg.toml"] = dep_config(dep_pins)
    if glide_pins is not None:
        files["glide.yaml"] = glide_config(glide_pins)
    for path in vendor:
        files[f"vendor/{path}/vendored.go"] = source_text((), package="vendored")
    if extra_files:
        files.update(extra_files)
    record: dict = {"name": name, "files": files}
    if toolchain is not None:
        record["toolchain_version"] = toolchain
    return record


def repo(path: str, tags: list[dict], *, default: str | None = None, status="present") -> dict:
    return {
        "path": path,
        "status": status,
        "default_branch_tag": default if default is not None else (tags[-1]["name"] if tags else ""),
        "tags": tags,
    }


def make_host(*repos: dict) -> SnapshotHost:
    return SnapshotHost(load_snapshot(json.dumps({"repos": list(repos)})))


@pytest.fixture(scope="session")
def case_host() -> SnapshotHost:
    with open(case_studies_path(), "r", encoding="utf-8") as fh:
        return SnapshotHost(load_snapshot(fh.read()))
