from __future__ import annotations

import os

import pytest
from hypothesis import HealthCheck, settings

settings.register_profile("default", max_examples=100, deadline=None,
                          suppress_health_check=[HealthCheck.too_slow])
settings.register_profile("quick", max_examples=20, deadline=None)
settings.load_profile(os.environ.get("HYPOTHESIS_PROFILE", "default"))


@pytest.fixture(scope="session")
def registry():
    from fanopic.registry import load_registry

    return load_registry()


@pytest.fixture(scope="session")
def full_reports(registry):
    """One verification of every family, shared by the registry and acceptance suites."""
    from fanopic.registry import VerifyConfig, verify_all

    return {r.family: r for r in verify_all(registry, VerifyConfig(jobs=4))}


ACCEPTANCE_LINES: dict[int, str] = {}


def pytest_terminal_summary(terminalreporter):
    if not ACCEPTANCE_LINES:
        return
    terminalreporter.section("acceptance criteria")
    for n in sorted(ACCEPTANCE_LINES):
        terminalreporter.write_line(ACCEPTANCE_LINES[n])
