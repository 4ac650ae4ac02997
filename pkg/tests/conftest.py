import math

import pytest

KD_3PI_2 = 1.5 * math.pi

# criterion id -> (description, passed); filled by test_acceptance
ACCEPTANCE_RESULTS: dict[str, tuple[str, bool]] = {}


@pytest.fixture
def kd():
    return KD_3PI_2


def pytest_terminal_summary(terminalreporter):
    if not ACCEPTANCE_RESULTS:
        return
    terminalreporter.section("acceptance criteria")
    for key in sorted(ACCEPTANCE_RESULTS, key=lambda k: int(k.split("-")[0])):
        desc, ok = ACCEPTANCE_RESULTS[key]
        terminalreporter.write_line(f"[{'PASS' if ok else 'FAIL'}] AC{key}: {desc}")
