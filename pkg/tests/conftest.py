import random
from fractions import Fraction

import pytest

from tlalg.diagrams import AlgebraElement, diagram_matches


def random_element(rng: random.Random, n: int, field, terms: int = 3) -> AlgebraElement:
    matches = diagram_matches(n)
    out = AlgebraElement.zero(n, field)
    for _ in range(terms):
        m = rng.choice(matches)
        c = Fraction(rng.randint(-5, 5), rng.randint(1, 4))
        out = out + AlgebraElement.from_diagram(m, field, c)
    return out


@pytest.fixture
def rng():
    return random.Random(20260101)


def pytest_terminal_summary(terminalreporter):
    import sys

    module = sys.modules.get("test_acceptance")
    if module is None or not module.RESULTS:
        return
    terminalreporter.section("acceptance criteria")
    for line in module.summary_lines():
        terminalreporter.write_line(line)
