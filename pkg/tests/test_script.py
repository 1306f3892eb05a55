import pytest

from roteprover import workbench
from roteprover.logic.script import ScriptError, ScriptRunner, statements


def test_statement_splitting():
    text = '''# header
def a "x<3":   # trailing comment
eval b "Ex
  x=1" ::
def c count i "?msd_mor i<2*n & n>=1"
linrep-eq "c" c
'''
    got = list(statements(text))
    assert [line for line, _ in got] == [2, 3, 5, 6]
    assert got[0][1] == ["def", "a", "x<3"]
    assert got[1][1] == ["eval", "b", "Ex\n  x=1"]
    assert got[2][1] == ["def", "c", "count", "i", "?msd_mor i<2*n & n>=1"]
    assert got[3][1] == ["linrep-eq", "c", "c"]


def test_hash_inside_quotes_is_kept():
    (_, tokens), = statements('eval h "Ex x=x # not a comment"')
    assert tokens[-1] == "Ex x=x # not a comment"


def test_unterminated_quote():
    with pytest.raises(ScriptError) as info:
        list(statements('def a "x<3\n'))
    assert info.value.line == 1


@pytest.fixture
def runner():
    return ScriptRunner(workbench.compiler("dt_h"))


def test_def_eval_and_counting(runner):
    res = runner.run('''
def small "x<3"
eval some "Ex $small(x) & x=2"
def below n "i<n"
def below2 count i "i<n"
linrep-eq below below2
''')
    assert [r.command for r in res] == ["def", "eval", "def", "def", "linrep-eq"]
    assert res[1].value is True
    assert res[2].extra["counted"] == "i" and res[2].extra["params"] == ("n",)
    assert res[4].value is True and res[4].name == "below = below2"
    assert "identical" in res[4].describe()
    assert res[1].describe().startswith("some: TRUE")


def test_selector_is_ignored(runner):
    res = runner.run('eval t "?msd_x Ax x=x":')
    assert res[0].value is True


def test_divergent_count_reported(runner):
    res, = runner.run('def up n "i>=n"')
    assert "count_error" in res.extra
    assert "up" not in runner.representations
    assert "diverges" in res.describe()


@pytest.mark.parametrize("text, fragment", [
    ('frob x "x=1"', "unknown command"),
    ('eval "Ex x=x"', "usage"),
    ('def n', "usage"),
    ('linrep-eq a b', "no linear representation"),
    ('def d count "i<n"', "count takes exactly one"),
    ('def d n "i<n & j<n"', "expected one counted variable"),
    ('def d count z "i<n"', "do not match"),
    ('eval e "x = = y"', "line 1"),
    ('eval e "x=1"', "free"),
])
def test_errors(runner, text, fragment):
    with pytest.raises(ScriptError) as info:
        runner.run(text)
    assert fragment in str(info.value)


def test_bundled_script_parses():
    cmds = [t for _, t in statements(workbench.bundled_script("q_checks"))]
    names = [t[t.index(c) + 1] for t in cmds for c in ("def", "eval") if c in t]
    assert names[0] == "check52plus" and "testlength" in names
    assert any(t[-1].startswith("?msd") for t in cmds)
