import pytest

from arithsym import Operator, TaskSpec

# criterion number -> (passed, detail); filled by test_acceptance
ACCEPTANCE = {}


def pytest_terminal_summary(terminalreporter):
    if not ACCEPTANCE:
        return
    terminalreporter.section("acceptance criteria")
    for key in sorted(ACCEPTANCE):
        ok, detail = ACCEPTANCE[key]
        terminalreporter.write_line(f"[{'PASS' if ok else 'FAIL'}] criterion {key}: {detail}")


@pytest.fixture
def add2():
    return TaskSpec(Operator.ADD, 2)


@pytest.fixture
def mul2():
    return TaskSpec(Operator.MUL, 2)


@pytest.fixture
def mul3():
    return TaskSpec(Operator.MUL, 3)

