from fractions import Fraction

import pytest


class AffineOracle:
    """BS(1,m) as 2x2 rational matrices [[m^k, q], [0, 1]]; independent of the
    normal-form arithmetic under test."""

    def __init__(self, m):
        self.m = m
        self.gens = {
            "a": ((Fraction(m), Fraction(0)), (0, 1)),
            "A": ((Fraction(1, m), Fraction(0)), (0, 1)),
            "b": ((Fraction(1), Fraction(1)), (0, 1)),
            "B": ((Fraction(1), Fraction(-1)), (0, 1)),
        }
        self.e = ((Fraction(1), Fraction(0)), (0, 1))

    @staticmethod
    def mul(x, y):
        (a, b), _ = x
        (c, d), _ = y
        return ((a * c, a * d + b), (0, 1))

    def word(self, labels):
        g = self.e
        for lab in labels:
            g = self.mul(g, self.gens[lab])
        return g

    def key(self, g):
        (s, q), _ = g
        k = 0
        while s > 1:
            s /= self.m
            k += 1
        while s < 1:
            s *= self.m
            k -= 1
        return (k, q)


@pytest.fixture
def affine2():
    return AffineOracle(2)


def pytest_terminal_summary(terminalreporter):
    import sys

    mod = sys.modules.get("test_acceptance")
    lines = getattr(mod, "RESULTS", None)
    if lines:
        terminalreporter.section("acceptance criteria")
        for line in lines:
            terminalreporter.write_line(line)
