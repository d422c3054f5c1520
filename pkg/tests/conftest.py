import pytest

from parikh.corpus import ANBN, EPSILON, SAMPLE, corpus
from parikh.grammar import parse_grammar


@pytest.fixture
def sample():
    return parse_grammar(SAMPLE)


@pytest.fixture
def anbn():
    return parse_grammar(ANBN)


@pytest.fixture
def eps_grammar():
    return parse_grammar(EPSILON)


@pytest.fixture(scope="session")
def grammar_corpus():
    return corpus()


def pytest_terminal_summary(terminalreporter):
    from test_acceptance import RESULTS

    if RESULTS:
        terminalreporter.section("acceptance criteria")
        for line in RESULTS:
            terminalreporter.write_line(line)
