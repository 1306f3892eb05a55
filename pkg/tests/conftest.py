import pytest
from hypothesis import HealthCheck, settings

from roteprover import checks, workbench
from roteprover.words import q_prefix

settings.register_profile("repo", deadline=None, max_examples=60,
                          suppress_health_check=[HealthCheck.too_slow])
settings.load_profile("repo")


@pytest.fixture(scope="session")
def sys_h():
    return workbench.system("dt_h")


@pytest.fixture(scope="session")
def sys_q():
    return workbench.system("dt_q")


@pytest.fixture(scope="session")
def q5000():
    return q_prefix(5000)


@pytest.fixture(scope="session")
def ctx():
    """Check context whose bundled proof script is compiled once per session."""
    return checks.Context()


@pytest.fixture(scope="session")
def store(ctx):
    """Predicates of the bundled script, all compiled."""
    ctx.script("testlength")
    return ctx.compiler.store


@pytest.fixture
def qc():
    """A fresh compiler over the q system (Q and Mor bound)."""
    return workbench.compiler("dt_q")


ACCEPTANCE: dict[str, tuple[str, str]] = {}


@pytest.fixture
def acceptance_log():
    return ACCEPTANCE


def pytest_terminal_summary(terminalreporter):
    if not ACCEPTANCE:
        return
    terminalreporter.section("acceptance criteria")
    for key in sorted(ACCEPTANCE, key=lambda k: (k == "all", int(k.rstrip("ab")) if k != "all" else 0, k)):
        verdict, title = ACCEPTANCE[key]
        terminalreporter.write_line(f"criterion {key:>3}: {verdict:<17} {title}")
