import numpy as np
import pytest

from superprop.curve import BranchData, build_frame


@pytest.fixture(scope="session")
def frame4():
    return build_frame(BranchData([0.0, 1.0, 2.0]))


@pytest.fixture(scope="session")
def frame6():
    return build_frame(BranchData([0.0, 1.0, 2.0, 3.0, 4.0]))


@pytest.fixture
def rng():
    return np.random.default_rng(1234)


_ACCEPTANCE = pytest.StashKey[list]()


@pytest.fixture
def acceptance_log(request):
    """Append ``(criterion, line)`` records shown in the terminal summary."""
    return request.config.stash.setdefault(_ACCEPTANCE, [])


def pytest_terminal_summary(terminalreporter, exitstatus, config):
    lines = config.stash.get(_ACCEPTANCE, [])
    if not lines:
        return
    terminalreporter.section("acceptance criteria")
    for _, line in sorted(lines, key=lambda t: t[0]):
        terminalreporter.write_line(line)
