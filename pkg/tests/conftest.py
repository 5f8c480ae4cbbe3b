"""Shared fixtures and the acceptance PASS/FAIL summary."""

from __future__ import annotations

from pathlib import Path

import pytest
from hypothesis import settings

from boundary_index import get_manifold, parse_field

# property tests draw the same examples on every run
settings.register_profile("deterministic", derandomize=True, database=None)
settings.load_profile("deterministic")

SCENES = Path(__file__).resolve().parent.parent / "scenes"

# (criterion number, "PASS"/"FAIL", one-line description) filled by test_acceptance
ACCEPTANCE_LINES: dict[int, tuple[str, str]] = {}

# Fixture fields whose zeros are known analytically; used across the suites.
T1_FIXTURES = [
    ("interval", "(x1 - 0.5)"),
    ("interval", "(x1)"),
    ("disk2", "(1, 0)"),
    ("annulus", "(1, 0)"),
    ("pants", "(1, 0)"),
    ("ball3", "(1, 0, 0)"),
]


def mf(name: str, text: str):
    m = get_manifold(name)
    return m, parse_field(text, m.dim)


def split_components(text: str) -> list[str]:
    """Split a field text '(a, b, c)' at its top-level commas."""
    body = text.strip()[1:-1]
    parts, depth, cur = [], 0, ""
    for ch in body:
        if ch == "," and depth == 0:
            parts.append(cur)
            cur = ""
            continue
        depth += ch == "("
        depth -= ch == ")"
        cur += ch
    return parts + [cur]


def scaled(text: str, c: float) -> str:
    """Field text for c times the field."""
    return "(" + ", ".join(f"{c} * ({t.strip()})" for t in split_components(text)) + ")"


@pytest.fixture
def scenes_dir() -> Path:
    return SCENES


def pytest_terminal_summary(terminalreporter):
    if not ACCEPTANCE_LINES:
        return
    terminalreporter.section("acceptance criteria")
    for k in sorted(ACCEPTANCE_LINES):
        status, text = ACCEPTANCE_LINES[k]
        terminalreporter.write_line(f"{status} criterion {k}: {text}")
