"""
環正規化實例單元測試
"""

import itertools

import pytest
from hypothesis import given
from hypothesis import strategies as st

from src.core.checks import check_framework
from src.core.exceptions import InputError, ParseError
from src.instances import ring
from src.instances.ring import (
    Add, Const, Monomial, Mul, NegR, Pconst, Pmult, Popp, Pplus, Pvar, VarR
)

exprs = st.recursive(
    st.one_of(st.integers(min_value=-3, max_value=3).map(Const),
              st.integers(min_value=0, max_value=2).map(VarR)),
    lambda sub: st.one_of(
        st.builds(Add, sub, sub),
        st.builds(Mul, sub, sub),
        st.builds(NegR, sub),
    ),
    max_leaves=6,
)

SQUARE = Pmult(Pplus(Pvar(0), Pconst(1)), Pplus(Pvar(0), Pconst(1)))


def grid(e, points=(-2, 0, 1, 3)):
    indices = ring.variables(e)
    for values in itertools.product(points, repeat=len(indices)):
        yield dict(zip(indices, values))


class TestQuotation:

    def test_leaf(self):
        assert ring.pquote(Const(1)) == Pconst(1)
        assert ring.interp_p(Pconst(1)) == Const(1)

    def test_structural(self):
        assert ring.pquote(Add(VarR(0), Const(1))) == Pplus(Pvar(0), Pconst(1))
        assert ring.interp_p(Popp(Pvar(0))) == NegR(VarR(0))

    def test_rejects_other_types(self):
        with pytest.raises(InputError):
            ring.pquote(Pconst(1))
        with pytest.raises(InputError):
            ring.interp_p(Const(1))

    @given(exprs)
    def test_inverse(self, e):
        assert ring.interp_p(ring.pquote(e)) == e

    @given(exprs, exprs)
    def test_injective(self, a, b):
        if a != b:
            assert ring.pquote(a) != ring.pquote(b)


class TestNormalize:
    """正規化測試"""

    def test_square(self):
        normal = ring.normalize(SQUARE)
        assert normal == (
            Monomial(1, ((0, 2),)),
            Monomial(2, ((0, 1),)),
            Monomial(1, ()),
        )
        assert ring.show_normal(normal) == "x0^2 + 2*x0 + 1"
        for x in (0, 1, 2):
            assert ring.eval_normal(normal, {0: x}) == (x + 1) ** 2

    def test_zero(self):
        assert ring.normalize(Pconst(0)) == ()
        assert ring.show_normal(()) == "0"
        assert ring.to_poly(()) == Pconst(0)

    def test_cancellation(self):
        assert ring.normalize(Pplus(Pvar(0), Popp(Pvar(0)))) == ()

    def test_order(self):
        normal = ring.normalize(Pplus(Pvar(1), Pvar(0)))
        assert normal == (Monomial(1, ((0, 1),)), Monomial(1, ((1, 1),)))

    def test_graded_before_lex(self):
        p = Pplus(Pvar(1), Pmult(Pvar(0), Pvar(1)))
        assert ring.show_normal(ring.normalize(p)) == "x0*x1 + x1"

    def test_negative_coefficients(self):
        assert ring.show_normal(ring.normalize_expr(ring.parse_ring("-(x0 + 1)"))) == "-x0 - 1"

    @given(exprs)
    def test_semantic_preservation(self, e):
        back = ring.interp_p(ring.to_poly(ring.normalize_expr(e)))
        for phi in grid(e):
            assert ring.eval_ring(back, phi) == ring.eval_ring(e, phi)

    @given(exprs)
    def test_idempotence(self, e):
        normal = ring.normalize_expr(e)
        assert ring.normalize(ring.to_poly(normal)) == normal

    @given(exprs)
    def test_strictly_ordered(self, e):
        normal = ring.normalize_expr(e)
        keys = [ring.monomial_key(m) for m in normal]
        assert keys == sorted(set(keys))
        assert all(m.coefficient != 0 for m in normal)

    def test_canonical_equality(self):
        a = ring.parse_ring("(x0 + 1) * (x0 + 1)")
        b = ring.parse_ring("x0 * x0 + 2 * x0 + 1")
        assert ring.normalize_expr(a) == ring.normalize_expr(b)


class TestEvaluation:

    def test_constant(self):
        assert ring.eval_ring(Const(5), {}) == 5

    def test_arithmetic(self):
        assert ring.eval_ring(Add(VarR(0), Const(1)), {0: 2}) == 3
        assert ring.eval_ring(NegR(Mul(VarR(0), VarR(1))), {0: 2, 1: 3}) == -6

    def test_missing_assignment(self):
        with pytest.raises(InputError):
            ring.eval_ring(VarR(3), {0: 1})
        with pytest.raises(InputError):
            ring.eval_normal(ring.normalize_expr(VarR(3)), {})

    def test_degree_bound(self):
        assert ring.degree_bound(Mul(Add(VarR(0), Const(1)), VarR(1))) == 2
        assert ring.degree_bound(NegR(Const(4))) == 0


class TestTextSyntax:

    def test_parse(self):
        assert ring.parse_ring("x0 - 1") == Add(VarR(0), NegR(Const(1)))
        assert ring.parse_ring("-x1 * 2") == Mul(NegR(VarR(1)), Const(2))
        assert ring.parse_ring("2 + 3 * x0") == Add(Const(2), Mul(Const(3), VarR(0)))

    def test_negative_literal(self):
        assert ring.parse_ring("(-3)") == Const(-3)
        assert ring.parse_ring("-3 * x0") == Mul(Const(-3), VarR(0))
        assert ring.parse_ring("-(3)") == NegR(Const(3))
        assert ring.parse_ring("x0 - 3") == Add(VarR(0), NegR(Const(3)))

    @pytest.mark.parametrize("text", ["", "2 x0", "x", "(x0", "x0 +", "*"])
    def test_malformed(self, text):
        with pytest.raises(ParseError):
            ring.parse_ring(text)

    def test_long_input(self):
        e = ring.parse_ring(" + ".join(["x0"] * 3000))
        assert isinstance(e, Add) and e.right == VarR(0)

    def test_deep_nesting(self):
        with pytest.raises(ParseError):
            ring.parse_ring("(" * 5000 + "x0" + ")" * 5000)

    def test_show(self):
        assert ring.show_ring(Add(Const(-3), VarR(0))) == "((-3) + x0)"
        assert ring.show_ring(NegR(Const(3))) == "-(3)"
        assert ring.show_ring(NegR(Const(-3))) == "-(-3)"
        assert ring.show_poly(Popp(Pvar(0))) == "Popp (Pvar 0)"

    @given(exprs)
    def test_show_parse_structure(self, e):
        assert ring.parse_ring(ring.show_ring(e)) == e

    @given(exprs)
    def test_show_parse_semantics(self, e):
        assert ring.normalize_expr(ring.parse_ring(ring.show_ring(e))) == ring.normalize_expr(e)


class TestFramework:

    def test_check_framework(self):
        inst = ring.build_framework()
        samples = [ring.parse_ring(s) for s in ("x0", "(x0 + 1) * (x0 + 1)", "-x1 * 2", "0")]
        report = check_framework(inst, samples, [ring.pquote(s) for s in samples])
        assert report.all_passed
        assert report.get("syntactic_disquotation").passed

    def test_semantic_value_is_normal_form(self):
        inst = ring.build_framework()
        assert inst.sem_value(ring.parse_ring("x0 + x0")).payload == (Monomial(2, ((0, 1),)),)
