from fractions import Fraction
from importlib import resources

import pytest
from hypothesis import strategies as st

from lieroid.coeff import Chart
from lieroid.dsl.parser import parse_model

XY = Chart(("x", "y"))


def corpus_text(name: str) -> str:
    return (resources.files("lieroid") / "corpus" / f"{name}.model").read_text(encoding="utf-8")


def corpus_model(name: str):
    return parse_model(corpus_text(name))


def corpus_names() -> list[str]:
    return sorted(p.name[:-6] for p in (resources.files("lieroid") / "corpus").iterdir()
                  if p.name.endswith(".model"))


POSITIVE = [n for n in corpus_names() if not n.startswith("fault_")]
FAULTS = [n for n in corpus_names() if n.startswith("fault_")]

small_q = st.fractions(min_value=-5, max_value=5, max_denominator=4)


@st.composite
def polynomials(draw, chart=XY, max_degree=3, max_terms=4):
    exps = [(i, j) for i in range(max_degree + 1) for j in range(max_degree + 1 - i)]
    if chart.dim == 0:
        return chart.const(draw(small_q))
    terms = draw(st.dictionaries(st.sampled_from(exps), small_q, max_size=max_terms))
    return chart.poly(terms)


@st.composite
def rationals(draw, chart=XY, max_degree=2):
    num = draw(polynomials(chart=chart, max_degree=max_degree))
    den = draw(polynomials(chart=chart, max_degree=max_degree).filter(bool))
    return num / den


points = st.tuples(small_q, small_q)


@pytest.fixture
def xy():
    return XY


def frac(*xs):
    return tuple(Fraction(x) for x in xs)


ACCEPTANCE_LINES: list[str] = []


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in ACCEPTANCE_LINES:
            terminalreporter.write_line(line)
