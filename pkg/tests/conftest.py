"""Shared fixtures and the acceptance summary printer.

The five reference elections used throughout the suite:

* ``fix_p``: 4 voters, 3 candidates, two mirrored blocs around c2;
* ``fix_t``: 3 voters, 3 candidates, one of each flavour;
* ``fix_s``: the 2x2 opposed pair (the classic distortion-3 instance);
* ``fix_u``: the 2x2 unanimous pair;
* ``fix_c``: 3 voters, 3 candidates with plurality scores (2, 1, 0).
"""

from __future__ import annotations

import pytest

from vetoflow import PreferenceProfile

ACCEPTANCE: dict[int, tuple[str, bool]] = {}


def record_criterion(num: int, label: str, ok: bool) -> None:
    ACCEPTANCE[num] = (label, ok)
    assert ok, f"criterion {num} failed: {label}"


@pytest.fixture
def fix_p() -> PreferenceProfile:
    return PreferenceProfile.of(
        [(0, 1, 2), (0, 1, 2), (2, 1, 0), (2, 1, 0)], ("c1", "c2", "c3")
    )


@pytest.fixture
def fix_t() -> PreferenceProfile:
    return PreferenceProfile.of([(0, 1, 2), (1, 0, 2), (2, 1, 0)], ("a", "b", "c"))


@pytest.fixture
def fix_s() -> PreferenceProfile:
    return PreferenceProfile.of([(0, 1), (1, 0)], ("a", "b"))


@pytest.fixture
def fix_u() -> PreferenceProfile:
    return PreferenceProfile.of([(0, 1), (0, 1)], ("a", "b"))


@pytest.fixture
def fix_c() -> PreferenceProfile:
    return PreferenceProfile.of([(0, 1, 2), (0, 2, 1), (1, 0, 2)], ("a", "b", "c"))


def pytest_terminal_summary(terminalreporter, exitstatus, config):
    if not ACCEPTANCE:
        return
    terminalreporter.write_line("")
    terminalreporter.write_line("acceptance criteria")
    for num in sorted(ACCEPTANCE):
        label, ok = ACCEPTANCE[num]
        verdict = "PASS" if ok else "FAIL"
        terminalreporter.write_line(f"  criterion {num:2d} {verdict}  {label}")
