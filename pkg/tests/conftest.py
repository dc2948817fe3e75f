import hypothesis
import pytest

from medalstats.binom import BinomialSample
from medalstats.dataset import load_games, load_nations, load_speedskating

hypothesis.settings.register_profile("default", max_examples=60, deadline=None)
hypothesis.settings.register_profile("fast", max_examples=10, deadline=None)
hypothesis.settings.load_profile("default")


@pytest.fixture(scope="session")
def games():
    return load_games()


@pytest.fixture(scope="session")
def nations():
    return load_nations()


@pytest.fixture(scope="session")
def men():
    return load_speedskating("men")


@pytest.fixture(scope="session")
def ladies():
    return load_speedskating("ladies")


@pytest.fixture
def samples_2026():
    # 2026 medals out of 3 * 116 chances
    return {
        "NOR": BinomialSample(41, 348),
        "USA": BinomialSample(33, 348),
        "ITA": BinomialSample(26, 348),
    }


ACCEPTANCE_LINES = []


@pytest.fixture
def criterion():
    """Record one acceptance line; call with (number, title, passed, detail)."""

    def record(number, title, passed, detail):
        line = f"criterion {number:>2} {'PASS' if passed else 'FAIL'}  {title}: {detail}"
        ACCEPTANCE_LINES.append((number, line))
        print(line)
        return passed

    return record


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for _, line in sorted(ACCEPTANCE_LINES):
            terminalreporter.write_line(line)
