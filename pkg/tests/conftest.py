import sys

import pytest

from partlab.partitions import PartSet, generate_table


@pytest.fixture(scope="session")
def tables_5():
    """S_+, S_- and S_+ minus {1} for p = 5 at N = 10^4."""
    N = 10_000
    return {
        "plus": generate_table(PartSet.plus(5), N),
        "minus": generate_table(PartSet.minus(5), N),
        "plus-excl1": generate_table(PartSet.plus_excl1(5), N),
    }


def pytest_terminal_summary(terminalreporter):
    lines = [line for name, mod in list(sys.modules.items())
             if name.endswith("test_acceptance") for line in getattr(mod, "RESULTS", [])]
    if lines:
        terminalreporter.section("acceptance criteria")
        for line in sorted(lines, key=lambda s: int(s.split("criterion")[1].split(":")[0])):
            terminalreporter.write_line(line)
