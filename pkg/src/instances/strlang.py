"""
字串實例

運算式被看作字母表上的字串。多類別項語言有 Symbol 與 String 兩個類別：
c_a 表示符號 a，nil 表示空字串，cons / head / tail 建構與拆解字串。

- 對象語言 L_obj 是命題公式（反身變體另外包含 StrTerm 本身）
- 語法語言 L_syn 是值有定義的 String 類別項
- Q 把運算式的正規字串寫成 cons 鏈，E 解析項所表示的字串（字串不是正規運算式時未定義）

StrTerm 的文字語法：nil、c_X（X 為任意單一字母表字元）、cons(a, s)、head(s)、tail(s)。
"""

import string
from dataclasses import dataclass
from enum import Enum
from typing import Optional, Tuple, Union

from ..core.constants import InstanceId, ValueKind
from ..core.exceptions import InputError, ParseError, SortError
from ..core.framework import (
    InterpretedLanguage, SyntaxFramework, SyntaxRepresentation, Value, bottom
)
from ..utils.logger import get_logger
from . import prop

logger = get_logger(__name__)

# 命題文法的字元集，加上 StrTerm 文字語法用到的 "_" 與 ","
ALPHABET: Tuple[str, ...] = tuple(string.ascii_letters + string.digits + " ~&|()_,")
_ALPHABET_SET = frozenset(ALPHABET)


class Sort(Enum):
    SYMBOL = "Symbol"
    STRING = "String"


class StrTerm:
    """多類別項的基類"""

    def children(self) -> Tuple['StrTerm', ...]:
        return ()

    def with_children(self, kids: Tuple['StrTerm', ...]) -> 'StrTerm':
        return self


@dataclass(frozen=True)
class SymConst(StrTerm):
    symbol: str


@dataclass(frozen=True)
class Nil(StrTerm):
    pass


@dataclass(frozen=True)
class Cons(StrTerm):
    head: StrTerm
    tail: StrTerm

    def children(self):
        return (self.head, self.tail)

    def with_children(self, kids):
        return Cons(*kids)


@dataclass(frozen=True)
class Head(StrTerm):
    arg: StrTerm

    def children(self):
        return (self.arg,)

    def with_children(self, kids):
        return Head(*kids)


@dataclass(frozen=True)
class Tail(StrTerm):
    arg: StrTerm

    def children(self):
        return (self.arg,)

    def with_children(self, kids):
        return Tail(*kids)


NIL = Nil()


def sort_of(t: StrTerm) -> Sort:
    """
    項的類別

    Raises:
        SortError: 類別不符（例如把字串 cons 到字串上）
        InputError: 不是 StrTerm，或符號不在字母表中
    """
    if isinstance(t, SymConst):
        if t.symbol not in _ALPHABET_SET:
            raise InputError(f"符號不在字母表中: {t.symbol!r}")
        return Sort.SYMBOL
    if isinstance(t, Nil):
        return Sort.STRING
    if isinstance(t, Cons):
        if sort_of(t.head) is not Sort.SYMBOL or sort_of(t.tail) is not Sort.STRING:
            raise SortError("cons 需要 (Symbol, String) 參數")
        return Sort.STRING
    if isinstance(t, (Head, Tail)):
        if sort_of(t.arg) is not Sort.STRING:
            raise SortError(f"{type(t).__name__.lower()} 需要 String 參數")
        return Sort.SYMBOL if isinstance(t, Head) else Sort.STRING
    raise InputError(f"不是 StrTerm: {t!r}")


def is_well_sorted(t: object) -> bool:
    try:
        sort_of(t)
        return True
    except InputError:
        return False


def term_value(t: StrTerm) -> Optional[str]:
    """
    項的值：String 類別得到字串，Symbol 類別得到單一符號

    head / tail 作用在空字串上時未定義（None）。

    Raises:
        SortError: 類別不符
    """
    sort_of(t)
    return _term_value(t)


def _term_value(t: StrTerm) -> Optional[str]:
    if isinstance(t, SymConst):
        return t.symbol
    if isinstance(t, Nil):
        return ""
    if isinstance(t, Cons):
        # 右巢狀鏈以迴圈處理
        pieces = []
        node: StrTerm = t
        while isinstance(node, Cons):
            symbol = _term_value(node.head)
            if symbol is None:
                return None
            pieces.append(symbol)
            node = node.tail
        rest = _term_value(node)
        if rest is None:
            return None
        return "".join(pieces) + rest
    inner = _term_value(t.arg)
    if not inner:
        return None
    return inner[0] if isinstance(t, Head) else inner[1:]


def chain(text: str) -> StrTerm:
    """字串 → cons 鏈"""
    for ch in text:
        if ch not in _ALPHABET_SET:
            raise InputError(f"字元不在字母表中: {ch!r}")
    term: StrTerm = NIL
    for ch in reversed(text):
        term = Cons(SymConst(ch), term)
    return term


def string_rep(e: prop.Formula) -> str:
    """對象運算式的字串表示（正規列印）"""
    if not (isinstance(e, prop.Formula) and prop.is_formula(e)):
        raise InputError(f"不是命題公式: {e!r}")
    return prop.print_formula(e)


def quote_str(e: prop.Formula) -> StrTerm:
    """Q(e)：表示 string_rep(e) 的 cons 鏈"""
    return chain(string_rep(e))


def eval_str(t: StrTerm) -> Optional[prop.Formula]:
    """
    E(t)：把 t 所表示的字串解析為公式

    字串不是正規公式或 t 的值未定義時回傳 None。

    Raises:
        SortError: t 不是 String 類別
    """
    if sort_of(t) is not Sort.STRING:
        raise SortError("求值需要 String 類別的項")
    text = _term_value(t)
    if text is None or not prop.is_canonical(text):
        return None
    return prop.parse(text)


# ----------------------------------------------------------------------
# StrTerm 的文字語法
# ----------------------------------------------------------------------

def show_term(t: StrTerm) -> str:
    """StrTerm 的文字形式"""
    if isinstance(t, SymConst):
        return f"c_{t.symbol}"
    if isinstance(t, Nil):
        return "nil"
    if isinstance(t, Cons):
        parts = []
        node: StrTerm = t
        while isinstance(node, Cons):
            parts.append(show_term(node.head))
            node = node.tail
        text = show_term(node)
        for part in reversed(parts):
            text = f"cons({part}, {text})"
        return text
    if isinstance(t, Head):
        return f"head({show_term(t.arg)})"
    if isinstance(t, Tail):
        return f"tail({show_term(t.arg)})"
    raise InputError(f"不是 StrTerm: {t!r}")


class _TermParser:

    def __init__(self, text: str):
        self.text = text
        self.pos = 0

    def skip_space(self) -> None:
        while self.pos < len(self.text) and self.text[self.pos] == " ":
            self.pos += 1

    def expect(self, literal: str) -> None:
        self.skip_space()
        if not self.text.startswith(literal, self.pos):
            raise ParseError(f"預期 {literal!r}", self.pos)
        self.pos += len(literal)

    def parse(self) -> StrTerm:
        term = self.term()
        self.skip_space()
        if self.pos != len(self.text):
            raise ParseError("多餘的輸入", self.pos)
        return term

    def term(self) -> StrTerm:
        self.skip_space()
        rest = self.text[self.pos:]
        if rest.startswith("c_"):
            if len(rest) < 3:
                raise ParseError("c_ 後缺少符號", self.pos)
            self.pos += 3
            return SymConst(rest[2])
        if rest.startswith("nil"):
            self.pos += 3
            return NIL
        for keyword, build in (("cons", None), ("head", Head), ("tail", Tail)):
            if rest.startswith(keyword):
                self.pos += len(keyword)
                self.expect("(")
                first = self.term()
                if build is None:
                    self.expect(",")
                    second = self.term()
                    self.expect(")")
                    return Cons(first, second)
                self.expect(")")
                return build(first)
        raise ParseError("預期 StrTerm", self.pos)


def parse_term(text: str) -> StrTerm:
    """
    解析 StrTerm 的文字語法

    Raises:
        ParseError: 格式錯誤
    """
    try:
        return _TermParser(text).parse()
    except RecursionError as exc:
        raise ParseError("巢狀過深", 0) from exc


# ----------------------------------------------------------------------
# 語法框架
# ----------------------------------------------------------------------

Expr = Union[prop.Formula, StrTerm]


def _mentions_nil(f: prop.Formula) -> bool:
    return "nil" in prop.variables(f)


def build_framework(reflexive: bool = False) -> SyntaxFramework:
    """
    建立字串語法框架

    Args:
        reflexive: 為 True 時 L_obj 也包含 StrTerm 本身（自我引用）；
            為保持 V_syn 單射，此時排除提到變數 nil 的公式

    Returns:
        SyntaxFramework
    """
    instance = InstanceId.STRLANG.value

    def contains(e: object) -> bool:
        if isinstance(e, prop.Formula):
            return prop.is_formula(e)
        return isinstance(e, StrTerm) and is_well_sorted(e)

    def valuate(e: Expr) -> Value:
        if isinstance(e, prop.Formula):
            return Value(instance, ValueKind.TRUTH, prop.truth_value(e, {}, default=False))
        result = _term_value(e)
        if result is None:
            return bottom(instance)
        kind = ValueKind.STRING if sort_of(e) is Sort.STRING else ValueKind.SYMBOL
        return Value(instance, kind, result)

    def in_object(e: Expr) -> bool:
        if isinstance(e, prop.Formula):
            return not (reflexive and _mentions_nil(e))
        return reflexive and isinstance(e, StrTerm)

    def in_syntax(e: Expr) -> bool:
        return (isinstance(e, StrTerm) and sort_of(e) is Sort.STRING
                and _term_value(e) is not None)

    def represent(e: Expr) -> Value:
        text = show_term(e) if isinstance(e, StrTerm) else string_rep(e)
        return Value(instance, ValueKind.STRING, text)

    def unrepresent(v: Value) -> Optional[Expr]:
        if v.kind is not ValueKind.STRING:
            return None
        text = v.payload
        if prop.is_canonical(text):
            formula = prop.parse(text)
            if in_object(formula):
                return formula
        if reflexive:
            try:
                term = parse_term(text)
            except ParseError:
                return None
            if is_well_sorted(term) and show_term(term) == text:
                return term
        return None

    def evaluate(t: StrTerm) -> Optional[Expr]:
        return unrepresent(valuate(t))

    def show(e: Expr) -> str:
        if isinstance(e, StrTerm):
            return show_term(e)
        return prop.print_formula(e)

    return SyntaxFramework(
        instance_id=instance,
        language=InterpretedLanguage("strlang", contains, valuate),
        in_object=in_object,
        in_syntax=in_syntax,
        representation=SyntaxRepresentation(represent, unrepresent, surjective=False),
        quotation=lambda e: chain(represent(e).payload),
        evaluation=evaluate,
        universal_disquotation=True,
        show=show,
        description="字串：Q = cons 鏈，E = 解析所表示的字串",
    )
