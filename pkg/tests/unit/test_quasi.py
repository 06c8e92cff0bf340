"""
位置、標記運算式與擬引用單元測試
"""

import itertools

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from src.core.exceptions import InputError, MembershipError
from src.core.quasi import (
    ROOT, MarkedExpr, Position, disjoint, is_valid, positions, quasiquote, replace_at, size,
    splice, subterm_at, unmarked
)
from src.instances import minilisp, prop
from src.instances.minilisp import NIL, Num, Pair, Sym, read, show
from src.instances.prop import FALSE, TRUE, And, Neg, Or, Var

formulas = st.recursive(
    st.sampled_from([TRUE, FALSE, Var("p"), Var("q"), Var("r")]),
    lambda sub: st.one_of(
        st.builds(Neg, sub),
        st.builds(And, sub, sub),
        st.builds(Or, sub, sub),
    ),
    max_leaves=8,
)

sexprs = st.recursive(
    st.one_of(st.integers(min_value=-9, max_value=9).map(Num),
              st.sampled_from(["a", "b", "+"]).map(Sym),
              st.just(NIL)),
    lambda sub: st.builds(Pair, sub, sub),
    max_leaves=8,
)

# 拼接運算式：多數有值，(car 1) 為 ⊥
LISP_SPLICES = [read(text) for text in (
    "(+ 1 2)", "(quote (a b))", "7", "(list 1 (quote x))", "(if t (quote y) 0)", "(car 1)",
)]


def draw_marks(data, tree, splices):
    """從 tree 的位置中抽出兩兩不相交的標記"""
    chosen = data.draw(st.lists(st.sampled_from(positions(tree)), max_size=3, unique=True))
    marks = []
    for position in chosen:
        if all(disjoint(position, other) for other, _ in marks):
            marks.append((position, data.draw(splices)))
    return tuple(marks)


class TestPosition:
    """Position 測試類"""

    def test_text(self):
        assert str(ROOT) == "root"
        assert str(Position((1, 0))) == "1.0"

    @pytest.mark.parametrize("text,path", [
        ("root", ()),
        ("root.0.1", (0, 1)),
        ("2.1", (2, 1)),
    ])
    def test_parse(self, text, path):
        assert Position.parse(text).path == path

    def test_parse_invalid(self):
        with pytest.raises(InputError):
            Position.parse("a.b")

    def test_negative_index(self):
        with pytest.raises(InputError):
            Position((0, -1))

    def test_disjoint(self):
        assert disjoint(Position((0,)), Position((1,)))
        assert not disjoint(Position((0,)), Position((0, 1)))
        assert not disjoint(ROOT, Position((3,)))

    @given(st.lists(st.integers(min_value=0, max_value=4), max_size=5),
           st.lists(st.integers(min_value=0, max_value=4), max_size=5))
    def test_disjoint_symmetric(self, a, b):
        p1, p2 = Position(tuple(a)), Position(tuple(b))
        assert disjoint(p1, p2) == disjoint(p2, p1)


class TestTreeOperations:

    def test_positions_preorder(self):
        tree = prop.parse("p & ~q")
        assert [str(p) for p in positions(tree)] == ["root", "0", "1", "1.0"]
        assert len(positions(tree)) == size(tree)

    def test_subterm_and_replace(self):
        tree = prop.parse("p & ~q")
        assert subterm_at(tree, Position((1, 0))) == prop.Var("q")
        replaced = replace_at(tree, Position((1, 0)), prop.TRUE)
        assert prop.print_formula(replaced) == "p & ~true"
        # 原樹不變
        assert prop.print_formula(tree) == "p & ~q"

    def test_invalid_position(self):
        tree = prop.parse("p")
        assert not is_valid(tree, Position((0,)))
        with pytest.raises(InputError):
            subterm_at(tree, Position((0,)))
        with pytest.raises(InputError):
            replace_at(tree, Position((0,)), prop.TRUE)

    @settings(max_examples=50)
    @given(st.integers(min_value=0, max_value=20))
    def test_replace_root(self, n):
        assert replace_at(prop.parse("p | q"), ROOT, Num(n)) == Num(n)


class TestMarkedExpr:

    def test_overlapping_marks(self):
        with pytest.raises(InputError):
            MarkedExpr("p", ((Position((0,)), "q"), (Position((0, 1)), "r")))

    def test_positions(self):
        m = MarkedExpr("p", ((Position((0,)), "q"), (Position((1,)), "r")))
        assert m.positions == (Position((0,)), Position((1,)))


class TestSplice:
    """S(m) 與 Q̄(m)"""

    def test_unmarked_is_quote(self, prop_framework):
        assert quasiquote(prop_framework, unmarked("p & q")) == prop_framework.quote("p & q")

    def test_prop_splice(self, prop_framework):
        # "p & q" 的右子樹換成 E*(~r 的語法樹)
        m = MarkedExpr("p & q", ((Position((1,)), prop.parse("~r")),))
        assert splice(prop_framework, m) == "p & ~r"
        assert quasiquote(prop_framework, m) == prop.parse("p & ~r")

    def test_splice_outside_syntax_is_undefined(self, prop_framework):
        # 拼接運算式是字串，不在 L_syn 中，E* 未定義
        m = MarkedExpr("p & q", ((Position((0,)), "r"),))
        assert splice(prop_framework, m) is None
        assert quasiquote(prop_framework, m) is None

    def test_invalid_position(self, prop_framework):
        with pytest.raises(InputError):
            splice(prop_framework, MarkedExpr("p", ((Position((0,)), prop.parse("q")),)))

    def test_splice_not_in_language(self, prop_framework):
        with pytest.raises(MembershipError):
            splice(prop_framework, MarkedExpr("p & q", ((Position((0,)), 42),)))

    def test_backquote_equivalence(self, lisp_framework):
        e = read("`(+ 2 ,(+ 3 1))")
        m = minilisp.expand_backquote(e)

        assert show(m.base) == "(+ 2 HOLE)"
        assert [str(p) for p in m.positions] == ["2"]

        quoted = quasiquote(lisp_framework, m)
        assert show(quoted) == "(quote (+ 2 4))"
        assert lisp_framework.sem_value(quoted) == lisp_framework.sem_value(e)

    def test_lisp_list_view_positions(self):
        assert [str(p) for p in positions(read("(+ 2 (+ 3 1))"))] == [
            "root", "0", "1", "2", "2.0", "2.1", "2.2"
        ]

    def test_undefined_splice_in_lisp(self, lisp_framework):
        m = minilisp.expand_backquote(read("`(a ,(car 1))"))
        assert quasiquote(lisp_framework, m) is None


class TestQuasiquotationLaws:
    """擬引用的一般性質"""

    def test_marks_order_irrelevant(self, prop_framework):
        base = "p & (q | r)"
        marks = (
            (Position((0,)), prop.parse("~p")),
            (Position((1, 0)), prop.parse("true")),
            (Position((1, 1)), prop.parse("q & r")),
        )
        expected = splice(prop_framework, MarkedExpr(base, marks))
        assert expected == "~p & (true | q & r)"
        for order in itertools.permutations(marks):
            m = MarkedExpr(base, order)
            assert splice(prop_framework, m) == expected
            assert quasiquote(prop_framework, m) == prop.parse(expected)

    def test_lisp_marks_order_irrelevant(self, lisp_framework):
        base = read("(a b (c d))")
        marks = ((Position((0,)), read("(+ 1 2)")), (Position((2, 1)), read("(quote (x y))")))
        results = {show(splice(lisp_framework, MarkedExpr(base, order)))
                   for order in itertools.permutations(marks)}
        assert results == {"(3 b (c (x y)))"}

    @settings(max_examples=60)
    @given(formulas, st.data())
    def test_prop_quotation_of_splice(self, f, data):
        inst = prop.build_framework()
        base = prop.print_formula(f)
        m = MarkedExpr(base, draw_marks(data, f, formulas))
        spliced = splice(inst, m)
        # 命題公式的樹都能印成正規字串，拼接總是有定義
        assert spliced is not None
        assert inst.sem_value(quasiquote(inst, m)) == inst.syn_value(spliced)
        reordered = MarkedExpr(base, tuple(reversed(m.marks)))
        assert splice(inst, reordered) == spliced

    @settings(max_examples=60)
    @given(sexprs, st.data())
    def test_lisp_quotation_of_splice(self, base, data):
        inst = minilisp.build_framework()
        m = MarkedExpr(base, draw_marks(data, base, st.sampled_from(LISP_SPLICES)))
        spliced = splice(inst, m)
        reordered = MarkedExpr(base, tuple(reversed(m.marks)))
        assert splice(inst, reordered) == spliced
        if spliced is None:
            assert any(minilisp.interp(s) is None for _, s in m.marks)
            return
        assert inst.sem_value(quasiquote(inst, m)) == inst.syn_value(spliced)
