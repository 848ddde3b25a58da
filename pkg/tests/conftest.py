import random

import pytest

from rootfamily.numeric import EvalContext

ACCEPTANCE_LINES = []


def record_criterion(number, title, ok, detail=""):
    line = f"[{'PASS' if ok else 'FAIL'}] criterion {number}: {title}"
    if detail:
        line += f" -- {detail}"
    ACCEPTANCE_LINES.append(line)
    print(line)


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in ACCEPTANCE_LINES:
            terminalreporter.write_line(line)


@pytest.fixture
def ctx():
    return EvalContext(512)


@pytest.fixture
def ctx256():
    return EvalContext(256)


@pytest.fixture
def ctx4096():
    return EvalContext(4096)


@pytest.fixture
def rng():
    return random.Random(20240611)


def random_cubic(rng, simple=True):
    """Text of (x-r1)(x-r2)(x-r3) expanded, with exact decimal coefficients; returns (text, r1).

    Roots have two decimals; r2 and r3 keep at least 0.5 away from r1.
    """
    from fractions import Fraction

    def pick():
        return Fraction(rng.randint(-200, 200), 100)

    r1 = pick()
    others = []
    while len(others) < 2:
        r = pick()
        if abs(r - r1) >= Fraction(1, 2) and all(r != o for o in others):
            others.append(r)
    r2, r3 = others
    c2 = -(r1 + r2 + r3)
    c1 = r1 * r2 + r1 * r3 + r2 * r3
    c0 = -r1 * r2 * r3

    def lit(q):
        from decimal import Decimal

        return str(Decimal(q.numerator) / Decimal(q.denominator))

    text = f"x^3 + ({lit(c2)})*x^2 + ({lit(c1)})*x + ({lit(c0)})"
    return text, lit(r1)
