import pytest
from sympy.polys.domains import QQ

from seqcm.exceptions import SessionParseError
from seqcm.fixtures import get_fixture
from seqcm.monomial import MonomialIdeal
from seqcm.sequences import SequenceKind
from seqcm.session import parse_input, tokenize


def parse_error(text):
    with pytest.raises(SessionParseError) as info:
        parse_input(text)
    return info.value


def test_parse_fixture_session():
    session = parse_input(get_fixture("skew-lines").text)
    x, y, z, t = session.ring.gens
    assert session.ring.variable_names == ("x", "y", "z", "t")
    assert session.ideals["I"] == (x * z, x * t, y * z, y * t)
    assert [c.name for c in session.commands] == ["profile", "invariants", "decide", "check-seq"]
    profile, _, decide, check = session.commands
    assert (profile.line, profile.column) == (4, 1)
    assert profile.describe() == "profile I"
    assert profile.ideal == MonomialIdeal(session.ring, ((1, 0, 1, 0), (1, 0, 0, 1), (0, 1, 1, 0), (0, 1, 0, 1)))
    assert decide.property == "gcm"
    assert check.kind is SequenceKind.F_ELEMENT
    assert check.elements == (x - z, y - t)


def test_statements_and_commands():
    session = parse_input(
        "ring Q[x,y,z]\n"
        "ideal I = (x*y, x*z)\n"
        "ideal J = I + (y*z)\n"
        "element f = x + z\n"
        "classify I f\n"
        "check-seq J sequential-f x - y, z\n"
        "find-seq J f-element 2\n"
        "decide scm J\n")
    x, y, z = session.ring.gens
    assert session.ideals["J"] == (x * y, x * z, y * z)
    assert session.elements["f"] == x + z
    classify, check, find, decide = session.commands
    assert classify.elements == (x + z,)
    assert check.kind is SequenceKind.SEQUENTIAL_F
    assert check.elements == (x - y, z)
    assert (find.kind, find.length) == (SequenceKind.F_ELEMENT, 2)
    assert decide.property == "scm"
    assert decide.ideal.generators == ((0, 1, 1), (1, 0, 1), (1, 1, 0))


def test_implicit_multiplication_and_powers():
    session = parse_input("ring Q[x,y]\nelement f = 2x^2 y - x*y**2/2 + (x - y)^3\nideal I = (x)\nprofile I\n")
    x, y = session.ring.gens
    assert session.elements["f"] == 2 * x ** 2 * y - x * y ** 2 * QQ(1, 2) + (x - y) ** 3


def test_intersections():
    session = parse_input(
        "ring Q[x,y,z]\n"
        "ideal I = intersect((x); (y))\n"
        "ideal J = intersect((x, y), (y, z))\n"
        "ideal K = intersect((x + y), (x))\n"
        "decide cm I\n")
    x, y, z = session.ring.gens
    assert session.ideals["I"] == (x * y,)
    assert set(session.ideals["J"]) == {y, x * z}
    [k] = session.ideals["K"]
    assert k.monic() == x ** 2 + x * y


def test_statement_separators_and_comments():
    session = parse_input(
        "# two lines\n"
        "ring Q[x,y]; ideal I = (x,\n"
        "    y ^ 2)   # continued inside parentheses\n"
        "\n"
        "decide cm I; decide gcm I\n")
    x, y = session.ring.gens
    assert session.ideals["I"] == (x, y ** 2)
    assert [c.property for c in session.commands] == ["cm", "gcm"]
    assert [c.line for c in session.commands] == [5, 5]


def test_tokens_track_columns():
    tokens = tokenize("ring Q[x]\n  ideal")
    assert [(t.type, t.line, t.column) for t in tokens] == [
        ("name", 1, 1), ("name", 1, 6), ("lbrack", 1, 7), ("name", 1, 8), ("rbrack", 1, 9),
        ("end", 1, 10), ("name", 2, 3), ("eof", 2, 1)]


def test_undeclared_name_without_ring():
    e = parse_error("element f = x + z")
    assert (e.line, e.column, e.token) == (1, 13, "x")
    assert "undeclared name 'x': no ring declared" in str(e)
    assert str(e).splitlines() == [
        "line 1, column 13: undeclared name 'x': no ring declared",
        "  element f = x + z",
        "  " + " " * 12 + "^",
    ]


@pytest.mark.parametrize("text,message,line,column", [
    ("ring Q[x,y]\nideal I = (x, y\nprofile I\n", "unclosed parenthesis", None, None),
    ("ring Q[x,y]\nideal I = (x @ y)\n", "unexpected character '@'", 2, 14),
    ("ring Q[x,y]\nideal I = x)\n", "unbalanced ')'", 2, 12),
    ("ring Q[x,y]\nideal I = (x + y)\nprofile I\n", "ideal 'I' is not monomial", 3, 9),
    ("ring Q[x,y]\nideal I = (x + y^2)\n", "ideal generators must be homogeneous", 2, 12),
    ("ring Q[x,y]\nelement f = x + y^2\n", "element must be a nonzero homogeneous polynomial", 2, 13),
    ("ring Q[x,y]\nelement f = 3\n", "element must have positive degree", 2, 13),
    ("ring Q[x,y]\nideal I = (x)\ndecide foo I\n", "cannot decide 'foo'", 3, 8),
    ("ring Q[x,y]\nideal I = (x)\nfind-seq I regularish 1\n", "unknown sequence kind", 3, 12),
    ("ring Q[x,y]\nideal I = (x)\nprofile J\n", "undeclared ideal 'J'", 3, 9),
    ("ring Q[x,y]\nideal I = (x)\ndecide cm I I\n", "unexpected 'I' after statement", 3, 13),
    ("ring Q[x,y]\nfrobnicate\n", "unknown statement 'frobnicate'", 2, 1),
    ("ring Z[x,y]\n", "only rational coefficients", 1, 6),
    ("ring Q[x,x]\n", "duplicate variable 'x'", 1, 10),
    ("ring Q[x,profile]\n", "'profile' is reserved", 1, 10),
    ("ring Q[x]\nring Q[y]\n", "ring already declared", 2, 1),
    ("ring Q[x,y]\nideal x = (y)\n", "'x' is a variable of the ring", 2, 7),
    ("ring Q[x,y]\nideal I = (x)\nideal I = (y)\n", "'I' is already declared", 3, 7),
    ("ring Q[x,y]\nideal I = (x)\n", "session has no command", None, None),
    ("# nothing here\n", "no ring declared", None, None),
])
def test_parse_errors(text, message, line, column):
    e = parse_error(text)
    assert message in str(e)
    if line is not None:
        assert (e.line, e.column) == (line, column)


def test_error_display_points_at_the_token():
    e = parse_error("ring Q[x,y]\nideal I = (x @ y)\n")
    _, source, caret = str(e).splitlines()
    assert source == "  ideal I = (x @ y)"
    assert caret.index("^") == source.index("@")
