"""
哥德爾編碼實例單元測試
"""

import pytest
from hypothesis import given
from hypothesis import strategies as st

from src.core.checks import check_framework, check_transformer
from src.core.constants import InstanceId
from src.core.exceptions import InputError, MembershipError, ParseError, SortError
from src.instances import goedel
from src.instances.goedel import (
    ZERO, AndF, ArithmeticEvaluator, Eq, ForAll, NotF, Plus, Quote, Succ, Times, VarT
)

terms = st.recursive(
    st.sampled_from([ZERO, VarT("x"), VarT("y")]),
    lambda sub: st.one_of(
        st.builds(Succ, sub),
        st.builds(Plus, sub, sub),
        st.builds(Times, sub, sub),
    ),
    max_leaves=8,
)

formulas = st.recursive(
    st.builds(Eq, terms, terms),
    lambda sub: st.one_of(
        st.builds(NotF, sub),
        st.builds(AndF, sub, sub),
        st.builds(ForAll, st.sampled_from(["x", "y", "z"]), sub),
    ),
    max_leaves=4,
)


class TestEncoding:
    """編碼與解碼測試"""

    def test_zero(self):
        assert goedel.encode(ZERO) == 1
        assert goedel.decode(1) == ZERO

    def test_three_tokens(self):
        # S S 0 → 數字 2 2 1
        assert goedel.encode(goedel.numeral(2)) == (2 * 12 + 2) * 12 + 1
        # + 0 0 → 數字 3 1 1
        assert goedel.encode(Plus(ZERO, ZERO)) == (3 * 12 + 1) * 12 + 1

    def test_non_codes(self):
        assert goedel.decode(0) is None
        assert goedel.decode(-5) is None
        assert goedel.decode(2) is None
        assert goedel.smallest_non_code(1000) == 2

    def test_quote_symbol_needs_builtin(self):
        code = goedel.encode(Quote(ZERO))
        assert goedel.decode(code) is None
        assert goedel.decode(code, allow_quote=True) == Quote(ZERO)

    def test_digits_of(self):
        assert goedel.digits_of(12) == [12]
        assert goedel.digits_of(13) == [1, 1]

    @given(st.one_of(terms, formulas))
    def test_round_trip(self, e):
        assert goedel.decode(goedel.encode(e)) == e

    @given(terms, terms)
    def test_injective(self, a, b):
        if a != b:
            assert goedel.encode(a) != goedel.encode(b)

    def test_encode_decode_on_scanned_codes(self):
        for n in range(1, 3000):
            e = goedel.decode(n)
            if e is not None:
                assert goedel.encode(e) == n

    def test_longer_token_strings_have_larger_codes(self):
        assert goedel.encode(Succ(ZERO)) < goedel.encode(Plus(ZERO, ZERO))
        assert goedel.encode(VarT("z")) < goedel.encode(Succ(ZERO))


class TestSorts:

    def test_formula_sort(self):
        assert goedel.sort_of(Eq(ZERO, ZERO)) == goedel.FORMULA
        assert goedel.sort_of(Plus(ZERO, VarT("x"))) == goedel.TERM

    def test_sort_mismatch(self):
        with pytest.raises(SortError):
            goedel.sort_of(Plus(Eq(ZERO, ZERO), ZERO))
        assert not goedel.is_expression(NotF(ZERO))

    def test_unknown_variable(self):
        assert not goedel.is_expression(VarT("w"))

    def test_free_vars(self):
        f = ForAll("x", Eq(VarT("x"), VarT("y")))
        assert goedel.free_vars(f) == frozenset({"y"})
        assert goedel.free_vars(Quote(VarT("x"))) == frozenset()


class TestNumerals:

    def test_numeral(self):
        assert goedel.numeral(0) == ZERO
        assert goedel.numeral(3) == Succ(Succ(Succ(ZERO)))

    def test_numeral_values(self):
        for k in range(101):
            assert goedel.term_value(goedel.numeral(k)) == k

    @pytest.mark.parametrize("n", [0, 1, 12, 13, 313, 10 ** 6])
    def test_code_numeral(self, n):
        assert goedel.term_value(goedel.code_numeral(n)) == n

    def test_negative(self):
        with pytest.raises(InputError):
            goedel.numeral(-1)


class TestSemantics:

    def test_default_assignment(self):
        assert goedel.term_value(Plus(VarT("x"), goedel.numeral(2))) == 2

    def test_bounded_quantifier(self):
        evaluator = ArithmeticEvaluator(quantifier_bound=3)
        assert evaluator.truth(ForAll("x", Eq(Times(VarT("x"), ZERO), ZERO)))
        assert not evaluator.truth(ForAll("x", Eq(VarT("x"), ZERO)))
        # 約束變數不出現時等同主體
        assert evaluator.truth(ForAll("y", Eq(ZERO, ZERO)))

    def test_quote_value(self):
        assert ArithmeticEvaluator().term_value(Quote(Succ(ZERO))) == goedel.encode(Succ(ZERO))

    def test_negative_bound(self):
        with pytest.raises(InputError):
            ArithmeticEvaluator(-1)


class TestQuotationAndEvaluation:

    def test_quote_zero(self):
        q = goedel.quote_num(ZERO)
        assert goedel.term_value(q) == goedel.encode(ZERO)

    @given(st.one_of(terms, formulas))
    def test_disquotation(self, e):
        assert goedel.eval_num(goedel.quote_num(e)) == e

    def test_non_code_undefined(self):
        assert goedel.eval_num(goedel.numeral(2)) is None

    def test_eval_requires_term(self):
        with pytest.raises(SortError):
            goedel.eval_num(Eq(ZERO, ZERO))

    def test_builtin_quote(self):
        assert goedel.quote_num(ZERO, builtin=True) == Quote(ZERO)


class TestAddTransformer:
    """add 變換器測試"""

    def test_two_plus_three(self):
        assert goedel.add_transformer(goedel.numeral(2), goedel.numeral(3)) == goedel.numeral(5)

    def test_identity(self):
        t = Times(goedel.numeral(2), goedel.numeral(3))
        assert goedel.add_transformer(ZERO, t) == goedel.numeral(6)

    def test_open_term(self):
        with pytest.raises(InputError):
            goedel.add_transformer(VarT("x"), ZERO)

    def test_lifted_agrees(self):
        inst = goedel.build_framework()
        report = check_transformer(inst, goedel.ADD, [(goedel.numeral(2), goedel.numeral(3))])
        assert report.all_passed

    def test_random_pairs(self):
        inst = goedel.build_framework()
        pairs = [(goedel.numeral(a), goedel.numeral(b)) for a in range(0, 50, 7) for b in (0, 4, 11)]
        record = check_transformer(inst, goedel.ADD, pairs).get("transformer_specification")
        assert record.passes == record.trials == len(pairs)

    def test_lifted_rejects_non_quote(self):
        with pytest.raises(InputError):
            goedel.lifted_add(goedel.numeral(2), goedel.numeral(1))


class TestTextSyntax:

    def test_parse_and_show(self):
        e = goedel.parse("A x = + x 0 x")
        assert e == ForAll("x", Eq(Plus(VarT("x"), ZERO), VarT("x")))
        assert goedel.show(e) == "A x = + x 0 x"

    @pytest.mark.parametrize("text", ["", "S", "0 0", "+ 0", "Q 0", "w"])
    def test_malformed(self, text):
        with pytest.raises(ParseError):
            goedel.parse(text)

    def test_builtin_parse(self):
        assert goedel.parse("Q 0", allow_quote=True) == Quote(ZERO)

    def test_symbol_table(self):
        table = goedel.symbol_table()
        assert table[0] == ("0", 1)
        assert table[-1] == ("Q", 12)


class TestFrameworks:
    """三種哥德爾框架"""

    SAMPLES = [ZERO, goedel.numeral(2), Plus(VarT("x"), ZERO), Eq(ZERO, Succ(ZERO)),
               NotF(Eq(ZERO, ZERO))]

    def test_unrestricted_is_partial(self):
        inst = goedel.build_framework(InstanceId.GOEDEL)
        witness = goedel.numeral(2)
        report = check_framework(inst, self.SAMPLES, [witness])
        assert report.all_passed
        assert report.get("evaluation_partiality").passed
        assert inst.evaluate(witness) is None

    def test_restricted_is_total(self):
        inst = goedel.build_framework(InstanceId.GOEDEL_RESTRICTED)
        assert not inst.in_syntax(goedel.numeral(2))
        assert inst.in_syntax(goedel.numeral(1))
        with pytest.raises(MembershipError):
            inst.evaluate(goedel.numeral(2))
        syntax = [inst.quote(e) for e in self.SAMPLES]
        report = check_framework(inst, self.SAMPLES, syntax)
        assert report.all_passed
        assert report.get("evaluation_totality").passed

    def test_builtin_extension(self):
        inst = goedel.build_framework(InstanceId.GOEDEL_BUILTIN)
        assert inst.built_in_quotation
        assert not goedel.build_framework().built_in_quotation
        for e in self.SAMPLES:
            q = inst.quote(e)
            assert q != e
            assert inst.sem_value(q).payload == goedel.encode(e)
        witness = goedel.numeral(goedel.smallest_non_code(100, allow_quote=True))
        report = check_framework(inst, self.SAMPLES, [witness])
        assert report.all_passed

    def test_unknown_variant(self):
        with pytest.raises(InputError):
            goedel.build_framework(InstanceId.PROP)
