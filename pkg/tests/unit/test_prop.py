"""
命題邏輯實例單元測試
"""

import itertools

import pytest
from hypothesis import given
from hypothesis import strategies as st

from src.core.exceptions import InputError, ParseError
from src.instances import prop
from src.instances.prop import FALSE, TRUE, And, Neg, Or, Var

formulas = st.recursive(
    st.sampled_from([TRUE, FALSE, Var("p"), Var("q"), Var("r")]),
    lambda sub: st.one_of(
        st.builds(Neg, sub),
        st.builds(And, sub, sub),
        st.builds(Or, sub, sub),
    ),
    max_leaves=12,
)


def assignments(names):
    for bits in itertools.product([False, True], repeat=len(names)):
        yield dict(zip(names, bits))


class TestParse:
    """解析測試"""

    def test_precedence(self):
        assert prop.parse("p | q & r") == Or(Var("p"), And(Var("q"), Var("r")))
        assert prop.parse("~p & q") == And(Neg(Var("p")), Var("q"))

    def test_left_associative(self):
        assert prop.parse("p & q & r") == And(And(Var("p"), Var("q")), Var("r"))

    def test_constants(self):
        assert prop.parse("true") == TRUE
        assert prop.parse(" ( false ) ") == FALSE

    @pytest.mark.parametrize("text", ["", "p &", "(p", "p q", "p # q", ")"])
    def test_malformed(self, text):
        with pytest.raises(ParseError):
            prop.parse(text)

    def test_error_offset(self):
        with pytest.raises(ParseError) as exc_info:
            prop.parse("p & #")
        assert exc_info.value.offset == 4

    def test_non_string(self):
        with pytest.raises(InputError):
            prop.parse(42)

    def test_long_input(self):
        f = prop.parse(" | ".join(["p"] * 3000))
        assert isinstance(f, Or) and f.right == Var("p")
        assert prop.variables(f) == ["p"]

    @pytest.mark.parametrize("text", ["~" * 5000 + "p", "(" * 5000 + "p" + ")" * 5000])
    def test_deep_nesting(self, text):
        with pytest.raises(ParseError):
            prop.parse(text)


class TestPrint:

    def test_canonical_spacing(self):
        assert prop.print_formula(prop.parse("p&(q|r)")) == "p & (q | r)"
        assert prop.print_formula(And(Var("p"), TRUE)) == "p & true"

    def test_right_nesting_parenthesized(self):
        assert prop.print_formula(And(Var("p"), And(Var("q"), Var("r")))) == "p & (q & r)"

    def test_is_canonical(self):
        assert prop.is_canonical("p & q")
        assert not prop.is_canonical("p&q")
        assert not prop.is_canonical("(p)")
        assert not prop.is_canonical(prop.parse("p"))
        assert not prop.is_canonical("~" * 5000 + "p")

    @given(formulas)
    def test_round_trip(self, f):
        assert prop.parse(prop.print_formula(f)) == f


class TestValue:
    """求值與化簡測試"""

    def test_pipeline(self):
        assert prop.interpret("p & true") == "p"
        assert prop.value(prop.parse("p & true")) == Var("p")

    def test_full_assignment(self):
        assert prop.interpret("p & true", {"p": True}) == "true"
        assert prop.interpret("p | q", {"p": False, "q": False}) == "false"

    @pytest.mark.parametrize("text,expected", [
        ("p & false", "false"),
        ("p | true", "true"),
        ("p | false", "p"),
        ("~~p", "p"),
        ("~true", "false"),
        ("~(p & true)", "~p"),
    ])
    def test_simplification_rules(self, text, expected):
        assert prop.interpret(text) == expected

    def test_unassigned_variable(self):
        with pytest.raises(InputError):
            prop.truth_value(Var("p"), {})
        assert prop.truth_value(Var("p"), {}, default=True) is True

    @given(formulas)
    def test_value_sound(self, f):
        names = prop.variables(f)
        for phi in assignments(names):
            expected = prop.truth_value(f, phi, default=False)
            assert prop.value(f, phi) == (TRUE if expected else FALSE)

    @given(formulas)
    def test_simplification_equivalent(self, f):
        partial = {"p": True}
        simplified = prop.value(f, partial)
        assert set(prop.variables(simplified)) <= set(prop.variables(f)) - {"p"}
        for phi in assignments(["q", "r"]):
            full = dict(phi, **partial)
            assert prop.truth_value(simplified, full) == prop.truth_value(f, full)


class TestAssignment:

    def test_parse_assignment(self):
        assert prop.parse_assignment("p=T, q=false,r=1") == {"p": True, "q": False, "r": True}
        assert prop.parse_assignment("") == {}

    @pytest.mark.parametrize("text", ["p", "p=maybe", "true=T", "1x=T"])
    def test_invalid(self, text):
        with pytest.raises(InputError):
            prop.parse_assignment(text)


class TestFramework:

    def test_sem_value_uses_false_default(self, prop_framework):
        assert prop_framework.sem_value("p | ~q").payload is True

    def test_quote_injective(self, prop_framework):
        assert prop_framework.quote("p & q") != prop_framework.quote("q & p")

    def test_unrepresent_wrong_kind(self, prop_framework):
        assert prop_framework.unrepresent(prop_framework.sem_value("p")) is None
