"""Worked-example gallery: each fixture is a CLI call plus its golden output.

Layout: fixtures/<name>/input.json holds {"argv": [...], "stdin": {...}} and
fixtures/<name>/expected.json the canonical JSON the call must print.
"""
from __future__ import annotations

import io
import json
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from importlib import resources
from pathlib import Path


@dataclass(frozen=True)
class FixtureResult:
    name: str
    passed: bool
    mismatches: tuple[str, ...]
    exit_code: int


def fixtures_dir() -> Path:
    return Path(str(resources.files("mukai_lab") / "fixtures"))


def fixture_names() -> list[str]:
    root = fixtures_dir()
    return sorted(p.name for p in root.iterdir() if (p / "input.json").is_file())


def run_fixture(name: str, root: Path | None = None) -> tuple[int, dict]:
    """Run one fixture through the CLI and return (exit code, parsed output)."""
    from .cli import dispatch

    root = root or fixtures_dir()
    fixture = json.loads((root / name / "input.json").read_text())
    stdin = fixture.get("stdin")
    text = json.dumps(stdin, sort_keys=True) if stdin is not None else ""
    buf = io.StringIO()
    code = dispatch(list(fixture["argv"]), stdout=buf, stdin=io.StringIO(text))
    return code, json.loads(buf.getvalue())


def _diff(expected, actual, path="") -> list[str]:
    if isinstance(expected, dict) and isinstance(actual, dict):
        out = []
        for k in sorted(set(expected) | set(actual)):
            if k not in actual:
                out.append(f"{path}/{k}: missing")
            elif k not in expected:
                out.append(f"{path}/{k}: unexpected")
            else:
                out.extend(_diff(expected[k], actual[k], f"{path}/{k}"))
        return out
    if expected != actual:
        return [f"{path or '/'}: expected {json.dumps(expected)}, got {json.dumps(actual)}"]
    return []


def check_fixture(name: str, root: Path | None = None) -> FixtureResult:
    root = root or fixtures_dir()
    expected = json.loads((root / name / "expected.json").read_text())
    code, actual = run_fixture(name, root)
    mism = _diff(expected, actual)
    return FixtureResult(name, not mism and code == 0, tuple(mism), code)


def run_gallery(jobs: int = 1) -> list[FixtureResult]:
    names = fixture_names()
    if jobs > 1:
        with ThreadPoolExecutor(jobs) as ex:
            return list(ex.map(check_fixture, names))
    return [check_fixture(n) for n in names]


def regenerate(names: list[str] | None = None) -> None:
    """Rewrite goldens from the current implementation (review the diff!)."""
    from .cli import dumps

    root = fixtures_dir()
    for name in names or fixture_names():
        _, out = run_fixture(name, root)
        (root / name / "expected.json").write_text(dumps(out) + "\n")
