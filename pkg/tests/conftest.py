from __future__ import annotations

import random
from fractions import Fraction

from hypothesis import HealthCheck, settings
from hypothesis import strategies as st

from polysubmod.poly_core import GaussianRational, Polynomial, exponent

settings.register_profile(
    "default", max_examples=60, deadline=None, suppress_health_check=[HealthCheck.too_slow]
)
settings.load_profile("default")

small_fractions = st.builds(Fraction, st.integers(-5, 5), st.integers(1, 4))


@st.composite
def gaussian_rationals(draw, real_only: bool = False):
    re = draw(small_fractions)
    im = Fraction(0) if real_only else draw(small_fractions)
    return GaussianRational(re, im)


@st.composite
def polynomials(draw, max_vars: int = 3, max_degree: int = 4, max_terms: int = 5, real_only: bool = False):
    terms = {}
    for _ in range(draw(st.integers(0, max_terms))):
        degs = {n: draw(st.integers(0, max_degree)) for n in range(1, max_vars + 1)}
        while sum(degs.values()) > max_degree:
            n = max(degs, key=degs.get)
            degs[n] -= 1
        terms[exponent(degs)] = draw(gaussian_rationals(real_only=real_only))
    return Polynomial(terms)


def nonzero(strategy):
    return strategy.filter(lambda p: not p.is_zero())


def random_poly(
    rng: random.Random,
    nvars: int = 3,
    max_degree: int = 4,
    max_terms: int = 5,
    gaussian: bool = True,
    den: int = 4,
) -> Polynomial:
    """Seeded random polynomial used by the acceptance and oracle tests."""
    terms = {}
    for _ in range(rng.randint(1, max_terms)):
        deg = rng.randint(0, max_degree)
        counts: dict[int, int] = {}
        for _ in range(deg):
            v = rng.randint(1, nvars)
            counts[v] = counts.get(v, 0) + 1
        re = Fraction(rng.randint(-9, 9), rng.randint(1, den))
        im = Fraction(rng.randint(-9, 9), rng.randint(1, den)) if gaussian else Fraction(0)
        terms[exponent(counts)] = GaussianRational(re, im)
    return Polynomial(terms)


# one summary line per acceptance criterion, printed at the end of the run
ACCEPTANCE_LINES: dict[int, str] = {}


def record_criterion(number: int, ok: bool, detail: str) -> None:
    line = f"criterion {number:2d}: {'PASS' if ok else 'FAIL'}  {detail}"
    ACCEPTANCE_LINES[number] = line
    print(line)


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for n in sorted(ACCEPTANCE_LINES):
            terminalreporter.write_line(ACCEPTANCE_LINES[n])
