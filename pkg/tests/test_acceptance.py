"""One test per acceptance criterion; the terminal summary lists a verdict line for each."""
import time
from contextlib import contextmanager

import pytest

from roteprover import checks, workbench
from roteprover.words import abelian_complexity, max_recurrence_gap, q_prefix


@pytest.fixture
def criterion(acceptance_log):
    @contextmanager
    def record(key, title, expected_failure=False):
        try:
            yield
        except BaseException:
            acceptance_log[key] = ("FAIL (expected)" if expected_failure else "FAIL", title)
            raise
        acceptance_log[key] = ("PASS", title)
    return record


def passed(ctx, name):
    rep = checks.run_check(name, ctx)
    assert rep.verdict == checks.PASS, rep.describe()
    return rep


def test_criterion_01_lower_bound(ctx, criterion):
    with criterion("1", "strict 5/2 search: depth 38, 8 longest words, listed pair present"):
        t0 = time.perf_counter()
        rep = passed(ctx, "lower-bound-38")
        assert rep.observed["max_depth"] == 38 and rep.observed["words of length 38"] == 8
        assert time.perf_counter() - t0 < 60


def test_criterion_02_tables(ctx, criterion):
    with criterion("2", "length tables, characteristic and inflated polynomials"):
        h = passed(ctx, "build-dt-h")
        q = passed(ctx, "build-dt-q")
        assert h.observed["characteristic polynomial"] == "X^3 - 2*X^2 + X - 1"
        assert q.observed["inflated recurrence"] == "X^4 - 2*X^3 + X^2 - X"
        assert q.observed["a'_n on a-3->b"] == [3, 4, 7, 13, 23, 40]


def test_criterion_03_numeration(criterion):
    with criterion("3", "rank-value and evaluate(represent(n)) = n for n < 10^5, both systems"):
        t0 = time.perf_counter()
        for name in ("dt_h", "dt_q"):
            ok, reps = checks._rank_value(workbench.system(name), 100_000)
            assert ok and len(reps) == 100_000
        assert time.perf_counter() - t0 < 60


def test_criterion_04_dfao(ctx, criterion):
    with criterion("4", "q DFAO agrees with the word for n < 10^5; minimal DFAO has 4 states"):
        rep = passed(ctx, "build-dt-q")
        assert rep.observed["dfao = q oracle, n < 100000"] is True
        assert rep.observed["minimized dfao states"] == 4


def test_criterion_05_addition(ctx, criterion):
    with criterion("5", "addition automaton exact on 0..1500 box, algebraic laws hold"):
        rep = passed(ctx, "addition-verify")
        assert rep.observed["accepts exactly x+y=z for x,y <= 1500"] == []
        assert rep.info["published state count"] == 143


def test_criterion_06_power_free(ctx, criterion):
    with criterion("6", "check52plus TRUE; no factor above 5/2 in q[0..20000)"):
        rep = passed(ctx, "power-free-52plus")
        assert rep.observed["oracle critical exponent of q[0..20000)"] == "5/2"


def test_criterion_07_complexity(ctx, criterion):
    with criterion("7", "novel = twon; novel(n) = 2n = oracle complexity for n <= 200"):
        rep = passed(ctx, "complexity-2n")
        assert rep.observed["linrep-eq novel twon"] is True


def test_criterion_08_recurrence(ctx, q5000, criterion):
    with criterion("8", "uc TRUE; oracle gaps on q[0..5000) at most 7n for n <= 50"):
        passed(ctx, "uniform-recurrence-7n")
        assert all(max_recurrence_gap(q5000, n) <= 7 * n for n in range(1, 51))


def test_criterion_09_unique_power(ctx, criterion):
    with criterion("9", "testlength TRUE; the only 5/2 power is 1001100110, found at 11"):
        passed(ctx, "unique-52-power")
        assert q_prefix(21)[11:21] == "1001100110"


@pytest.fixture(scope="module")
def abelian_values():
    q = q_prefix(100_000)
    return [abelian_complexity(q, n) for n in range(5001)]


@pytest.mark.xfail(strict=True, reason="value 1 only occurs for the empty factor; see the decision notes")
def test_criterion_10a_abelian_literal(abelian_values, criterion):
    with criterion("10a", "abelian values over 1 <= n <= 5000 are exactly {1,2,3,4}", expected_failure=True):
        assert set(abelian_values[1:]) == {1, 2, 3, 4}


def test_criterion_10b_abelian(ctx, abelian_values, criterion):
    with criterion("10b", "abelian values within {1,2,3,4}, never 5; all four attained on 0 <= n <= 5000"):
        passed(ctx, "abelian-1234")
        assert set(abelian_values[1:]) <= {1, 2, 3, 4} and 5 not in abelian_values
        assert set(abelian_values) == {1, 2, 3, 4}


def test_criterion_11_reversible(ctx, criterion):
    with criterion("11", "32 factors of length 16, none reversible; a reversible one of length 15"):
        passed(ctx, "reversible-15")


def test_criterion_12_rigidity(ctx, criterion):
    with criterion("12", "non-strict level counts <= 16n for 58 <= n <= 150 (conjectural, not gating)"):
        rep = checks.run_check("rigidity-16n", ctx)
        assert rep.verdict == checks.CONJECTURAL_PASS and not rep.gating


def test_gating_suite(ctx, criterion):
    with criterion("all", "every gating check passes"):
        reports = checks.run_all(ctx)
        assert checks.suite_passed(reports), "\n".join(r.describe() for r in reports if not r.ok)
