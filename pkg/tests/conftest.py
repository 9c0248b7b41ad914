import pytest

import cases


@pytest.fixture(scope="session")
def circle_translation():
    return cases.circle_translation()


@pytest.fixture(scope="session")
def shrinking_circle():
    return cases.shrinking_circle()


@pytest.fixture(scope="session")
def helix_binormal():
    return cases.helix_binormal()


@pytest.fixture(scope="session")
def deforming_open_levels():
    return [cases.deforming_open(m, dt) for m, dt in cases.DEFORMING_LEVELS]


@pytest.fixture(scope="session")
def open_binormal_levels():
    return {m: cases.open_binormal(m) for m in (64, 128, 256)}


ACCEPTANCE_LINES = {}


@pytest.fixture
def criterion():
    """Record one PASS/FAIL line for an acceptance criterion."""

    def record(number, ok, detail):
        line = f"criterion {number:>2}: {'PASS' if ok else 'FAIL'}  {detail}"
        ACCEPTANCE_LINES[number] = line
        print(line)
        return ok

    return record


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for number in sorted(ACCEPTANCE_LINES):
            terminalreporter.write_line(ACCEPTANCE_LINES[number])
