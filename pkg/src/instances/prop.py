"""
命題邏輯實例

parse / print / value 三個函數構成一個語法框架：
- 對象語言 L_obj 是正規（canonical）公式字串
- 語法語言 L_syn 是公式語法樹 FormulaAst
- Q = parse，E = print，語法值是語法樹本身

正規文法：原子 true、false、識別字；~ 否定（最緊）、& 高於 |，左結合，可用括號；
正規輸出在二元運算子兩側各有一個空格。
"""

import re
from dataclasses import dataclass
from typing import Dict, Iterator, List, Mapping, Optional, Tuple

from ..core.constants import InstanceId, ValueKind
from ..core.exceptions import InputError, ParseError
from ..core.framework import (
    InterpretedLanguage, SyntaxFramework, SyntaxRepresentation, Value
)
from ..utils.logger import get_logger

logger = get_logger(__name__)

Assignment = Mapping[str, bool]

IDENT_PATTERN = re.compile(r"[A-Za-z][A-Za-z0-9]*")
KEYWORDS = frozenset({"true", "false"})

# 運算子優先級
PREC_OR = 1
PREC_AND = 2
PREC_NEG = 3
PREC_ATOM = 4


class Formula:
    """公式語法樹的基類"""

    def children(self) -> Tuple['Formula', ...]:
        return ()

    def with_children(self, kids: Tuple['Formula', ...]) -> 'Formula':
        return self


@dataclass(frozen=True)
class TrueLit(Formula):
    pass


@dataclass(frozen=True)
class FalseLit(Formula):
    pass


@dataclass(frozen=True)
class Var(Formula):
    name: str


@dataclass(frozen=True)
class Neg(Formula):
    body: Formula

    def children(self):
        return (self.body,)

    def with_children(self, kids):
        return Neg(*kids)


@dataclass(frozen=True)
class And(Formula):
    left: Formula
    right: Formula

    def children(self):
        return (self.left, self.right)

    def with_children(self, kids):
        return And(*kids)


@dataclass(frozen=True)
class Or(Formula):
    left: Formula
    right: Formula

    def children(self):
        return (self.left, self.right)

    def with_children(self, kids):
        return Or(*kids)


TRUE = TrueLit()
FALSE = FalseLit()


def is_identifier(name: str) -> bool:
    return bool(IDENT_PATTERN.fullmatch(name)) and name not in KEYWORDS


def is_formula(f: object) -> bool:
    """結構良好：每個節點都是公式、變數名合法"""
    stack = [f]
    while stack:
        node = stack.pop()
        if isinstance(node, Var):
            if not (isinstance(node.name, str) and is_identifier(node.name)):
                return False
        elif isinstance(node, (TrueLit, FalseLit)):
            continue
        elif isinstance(node, (Neg, And, Or)):
            stack.extend(node.children())
        else:
            return False
    return True


def variables(f: Formula) -> List[str]:
    """公式中出現的變數（依首次出現順序）"""
    seen: Dict[str, None] = {}
    stack = [f]
    while stack:
        node = stack.pop()
        if isinstance(node, Var):
            seen.setdefault(node.name)
        else:
            stack.extend(reversed(node.children()))
    return list(seen)


# ----------------------------------------------------------------------
# 解析
# ----------------------------------------------------------------------

_TOKEN = re.compile(r"(?P<ident>[A-Za-z][A-Za-z0-9]*)|(?P<op>[~&|()])")
_SPACE = re.compile(r"\s*")


def _tokenize(s: str) -> Iterator[Tuple[str, int]]:
    pos = _SPACE.match(s).end()
    while pos < len(s):
        match = _TOKEN.match(s, pos)
        if match is None:
            raise ParseError(f"無法識別的字元 {s[pos]!r}", pos)
        yield match.group(), match.start()
        pos = _SPACE.match(s, match.end()).end()


class _Parser:
    """遞歸下降解析器"""

    def __init__(self, s: str):
        self.source = s
        self.tokens = list(_tokenize(s))
        self.index = 0

    def peek(self) -> Optional[str]:
        if self.index < len(self.tokens):
            return self.tokens[self.index][0]
        return None

    def offset(self) -> int:
        if self.index < len(self.tokens):
            return self.tokens[self.index][1]
        return len(self.source)

    def advance(self) -> str:
        token = self.tokens[self.index][0]
        self.index += 1
        return token

    def expect(self, token: str) -> None:
        if self.peek() != token:
            found = self.peek() or "輸入結尾"
            raise ParseError(f"預期 {token!r}，得到 {found!r}", self.offset())
        self.advance()

    def parse(self) -> Formula:
        if not self.tokens:
            raise ParseError("空公式", 0)
        f = self.disjunction()
        if self.peek() is not None:
            raise ParseError(f"多餘的記號 {self.peek()!r}", self.offset())
        return f

    def disjunction(self) -> Formula:
        f = self.conjunction()
        while self.peek() == "|":
            self.advance()
            f = Or(f, self.conjunction())
        return f

    def conjunction(self) -> Formula:
        f = self.unary()
        while self.peek() == "&":
            self.advance()
            f = And(f, self.unary())
        return f

    def unary(self) -> Formula:
        if self.peek() == "~":
            self.advance()
            return Neg(self.unary())
        return self.atom()

    def atom(self) -> Formula:
        token = self.peek()
        if token is None:
            raise ParseError("公式不完整", self.offset())
        if token == "(":
            self.advance()
            f = self.disjunction()
            self.expect(")")
            return f
        if token == "true":
            self.advance()
            return TRUE
        if token == "false":
            self.advance()
            return FALSE
        if IDENT_PATTERN.fullmatch(token):
            self.advance()
            return Var(token)
        raise ParseError(f"預期原子公式，得到 {token!r}", self.offset())


def parse(s: str) -> Formula:
    """
    把公式字串解析為語法樹

    Raises:
        ParseError: 格式錯誤（帶位置）
    """
    if not isinstance(s, str):
        raise InputError(f"預期字串，得到 {type(s).__name__}")
    try:
        return _Parser(s).parse()
    except RecursionError as exc:
        raise ParseError("巢狀過深", 0) from exc


# ----------------------------------------------------------------------
# 列印
# ----------------------------------------------------------------------

def _precedence(f: Formula) -> int:
    if isinstance(f, Or):
        return PREC_OR
    if isinstance(f, And):
        return PREC_AND
    if isinstance(f, Neg):
        return PREC_NEG
    return PREC_ATOM


def _show(f: Formula, context: int) -> str:
    if isinstance(f, TrueLit):
        text = "true"
    elif isinstance(f, FalseLit):
        text = "false"
    elif isinstance(f, Var):
        text = f.name
    elif isinstance(f, Neg):
        text = "~" + _show(f.body, PREC_NEG)
    elif isinstance(f, And):
        text = f"{_show(f.left, PREC_AND)} & {_show(f.right, PREC_AND + 1)}"
    elif isinstance(f, Or):
        text = f"{_show(f.left, PREC_OR)} | {_show(f.right, PREC_OR + 1)}"
    else:
        raise InputError(f"不是公式: {f!r}")
    if _precedence(f) < context:
        return f"({text})"
    return text


def print_formula(f: Formula) -> str:
    """語法樹的正規字串"""
    return _show(f, 0)


def is_canonical(s: object) -> bool:
    """s 是正規公式字串（print(parse(s)) = s）"""
    if not isinstance(s, str):
        return False
    try:
        return print_formula(parse(s)) == s
    except (ParseError, RecursionError):
        return False


# ----------------------------------------------------------------------
# 求值與化簡
# ----------------------------------------------------------------------

def truth_value(f: Formula, assignment: Assignment, default: Optional[bool] = None) -> bool:
    """
    真值表求值

    Args:
        f: 公式
        assignment: 變數賦值
        default: 未賦值變數的值；為 None 時未賦值變數是錯誤

    Raises:
        InputError: 變數未賦值且沒有預設值
    """
    if isinstance(f, TrueLit):
        return True
    if isinstance(f, FalseLit):
        return False
    if isinstance(f, Var):
        if f.name in assignment:
            return bool(assignment[f.name])
        if default is None:
            raise InputError(f"變數 {f.name} 未賦值")
        return default
    if isinstance(f, Neg):
        return not truth_value(f.body, assignment, default)
    if isinstance(f, And):
        return truth_value(f.left, assignment, default) and truth_value(f.right, assignment, default)
    if isinstance(f, Or):
        return truth_value(f.left, assignment, default) or truth_value(f.right, assignment, default)
    raise InputError(f"不是公式: {f!r}")


def value(f: Formula, assignment: Optional[Assignment] = None) -> Formula:
    """
    求值或化簡

    所有變數都已賦值時回傳 TrueLit / FalseLit；否則回傳只含未賦值變數的化簡公式。
    化簡規則自底向上套用一次：常量折疊、x&T→x、x&F→F、x|F→x、x|T→T、~~x→x。
    """
    assignment = assignment or {}
    if isinstance(f, (TrueLit, FalseLit)):
        return f
    if isinstance(f, Var):
        if f.name in assignment:
            return TRUE if assignment[f.name] else FALSE
        return f
    if isinstance(f, Neg):
        body = value(f.body, assignment)
        if isinstance(body, TrueLit):
            return FALSE
        if isinstance(body, FalseLit):
            return TRUE
        if isinstance(body, Neg):
            return body.body
        return Neg(body)
    if isinstance(f, And):
        left, right = value(f.left, assignment), value(f.right, assignment)
        if isinstance(left, FalseLit) or isinstance(right, FalseLit):
            return FALSE
        if isinstance(left, TrueLit):
            return right
        if isinstance(right, TrueLit):
            return left
        return And(left, right)
    if isinstance(f, Or):
        left, right = value(f.left, assignment), value(f.right, assignment)
        if isinstance(left, TrueLit) or isinstance(right, TrueLit):
            return TRUE
        if isinstance(left, FalseLit):
            return right
        if isinstance(right, FalseLit):
            return left
        return Or(left, right)
    raise InputError(f"不是公式: {f!r}")


def interpret(s: str, assignment: Optional[Assignment] = None) -> str:
    """print(value(parse(s)))"""
    return print_formula(value(parse(s), assignment))


def parse_assignment(text: str) -> Dict[str, bool]:
    """
    解析 "p=T,q=F" 形式的賦值

    真值可寫作 T/F、true/false、1/0。
    """
    truth = {"t": True, "true": True, "1": True, "f": False, "false": False, "0": False}
    result: Dict[str, bool] = {}
    for item in filter(None, (part.strip() for part in text.split(","))):
        name, sep, raw = item.partition("=")
        name, raw = name.strip(), raw.strip().lower()
        if not sep or not is_identifier(name) or raw not in truth:
            raise InputError(f"無效的賦值項: {item!r}")
        result[name] = truth[raw]
    return result


# ----------------------------------------------------------------------
# 語法框架
# ----------------------------------------------------------------------

def _show_expr(e: object) -> str:
    if isinstance(e, str):
        return e
    return print_formula(e)


def build_framework(assignment: Optional[Assignment] = None) -> SyntaxFramework:
    """
    建立命題邏輯語法框架

    Args:
        assignment: 框架的變數賦值 φ；未賦值的變數取假

    Returns:
        SyntaxFramework，L = 正規字串 ∪ 公式語法樹
    """
    phi = dict(assignment or {})
    instance = InstanceId.PROP.value

    def contains(e: object) -> bool:
        if isinstance(e, str):
            return is_canonical(e)
        return isinstance(e, Formula) and is_formula(e)

    def valuate(e: object) -> Value:
        if isinstance(e, str):
            return Value(instance, ValueKind.TRUTH, truth_value(parse(e), phi, default=False))
        return Value(instance, ValueKind.TREE, e)

    def unrepresent(v: Value) -> Optional[str]:
        if v.kind is ValueKind.TREE and isinstance(v.payload, Formula):
            return print_formula(v.payload)
        return None

    return SyntaxFramework(
        instance_id=instance,
        language=InterpretedLanguage("prop", contains, valuate),
        in_object=lambda e: isinstance(e, str),
        in_syntax=lambda e: isinstance(e, Formula),
        representation=SyntaxRepresentation(
            represent=lambda e: Value(instance, ValueKind.TREE, parse(e)),
            unrepresent=unrepresent,
            surjective=True,
        ),
        quotation=parse,
        evaluation=print_formula,
        total_evaluation=True,
        universal_disquotation=True,
        show=_show_expr,
        as_tree=parse,
        from_tree=print_formula,
        description="命題邏輯：Q = parse，E = print",
    )
