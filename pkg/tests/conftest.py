from fractions import Fraction as F

import pytest

from invcorr.measure import bernoulli, cycle_system, empirical, markov, mixture, pushforward


def builtin_oracles():
    """The six one-dimensional measures used throughout the acceptance suite."""
    return {
        "bernoulli(1/2)": bernoulli(F(1, 2)),
        "bernoulli(1/3)": bernoulli(F(1, 3)),
        "markov(1/3,2/3)": markov(F(1, 3), F(2, 3)),
        "mixture B(0)+B(1)": mixture([(F(1, 2), bernoulli(0)), (F(1, 2), bernoulli(1))]),
        "empirical(0110)": empirical("0110"),
        "pushforward(3-cycle)": pushforward(cycle_system("100")),
    }


@pytest.fixture(params=list(builtin_oracles()))
def oracle(request):
    return builtin_oracles()[request.param]


def brute_count(word: str, sigma: str) -> int:
    """Cyclic occurrence count by string slicing on an unrolled copy of the word."""
    n = len(word)
    reps = (n + len(sigma)) // n + 1
    s = word * reps
    return sum(s[i:i + len(sigma)] == sigma for i in range(n))


_ACCEPTANCE_LINES: list[str] = []


def record_criterion(number, name, passed, detail=""):
    _ACCEPTANCE_LINES.append(f"AC{number:>2} {'PASS' if passed else 'FAIL'}  {name}  {detail}".rstrip())


def pytest_terminal_summary(terminalreporter):
    if _ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in _ACCEPTANCE_LINES:
            terminalreporter.write_line(line)
