import pytest
from hypothesis import settings

from omegaseq.terms import arithmetic_oracle, atom, finite_preorder, valuation_oracle

settings.register_profile("default", deadline=None)
settings.load_profile("default")


@pytest.fixture
def pq():
    """Two primes with p below q."""
    return finite_preorder(["p", "q"], [("p", "q")])


@pytest.fixture
def ab():
    return finite_preorder(["a", "b"])


@pytest.fixture
def arith():
    return arithmetic_oracle()


@pytest.fixture
def p():
    return atom("p")


@pytest.fixture
def q():
    return atom("q")


@pytest.fixture
def val_tf():
    return valuation_oracle({"p": True, "q": False})


def pytest_terminal_summary(terminalreporter):
    try:
        from test_acceptance import RESULTS
    except ImportError:
        return
    if RESULTS:
        terminalreporter.section("acceptance criteria")
        for line in sorted(RESULTS, key=lambda s: int(s.split()[1])):
            terminalreporter.write_line(line)
