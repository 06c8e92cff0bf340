"""
環正規化實例

環運算式 RingExpr 透過引號 pquote 逐建構子提升為歸納型別 Poly，
normalize 把 Poly 化成單項式互異、依固定順序排列的正規多項式 NormalPoly，
interp_p 把 Poly 解釋回環運算式。係數環固定為整數。

單項式順序：先比總次數（高者在前），再比稠密指數向量的字典序（大者在前），
因此 x0 排在 x1 之前、x0² 排在 x0·x1 之前。
"""

import re
from collections import defaultdict
from dataclasses import dataclass
from typing import Dict, List, Mapping, Optional, Tuple, Union

from ..core.constants import InstanceId, ValueKind
from ..core.exceptions import InputError, ParseError
from ..core.framework import InterpretedLanguage, SyntaxFramework, SyntaxRepresentation, Value
from ..utils.logger import get_logger

logger = get_logger(__name__)

Exponents = Tuple[Tuple[int, int], ...]


class RingExpr:
    """環運算式的基類"""

    def children(self) -> Tuple['RingExpr', ...]:
        return ()

    def with_children(self, kids: Tuple['RingExpr', ...]) -> 'RingExpr':
        return self


@dataclass(frozen=True)
class Const(RingExpr):
    value: int


@dataclass(frozen=True)
class VarR(RingExpr):
    index: int


@dataclass(frozen=True)
class Add(RingExpr):
    left: RingExpr
    right: RingExpr

    def children(self):
        return (self.left, self.right)

    def with_children(self, kids):
        return Add(*kids)


@dataclass(frozen=True)
class Mul(RingExpr):
    left: RingExpr
    right: RingExpr

    def children(self):
        return (self.left, self.right)

    def with_children(self, kids):
        return Mul(*kids)


@dataclass(frozen=True)
class NegR(RingExpr):
    arg: RingExpr

    def children(self):
        return (self.arg,)

    def with_children(self, kids):
        return NegR(*kids)


class Poly:
    """多項式歸納型別的基類"""

    def children(self) -> Tuple['Poly', ...]:
        return ()

    def with_children(self, kids: Tuple['Poly', ...]) -> 'Poly':
        return self


@dataclass(frozen=True)
class Pvar(Poly):
    index: int


@dataclass(frozen=True)
class Pconst(Poly):
    value: int


@dataclass(frozen=True)
class Pplus(Poly):
    left: Poly
    right: Poly

    def children(self):
        return (self.left, self.right)

    def with_children(self, kids):
        return Pplus(*kids)


@dataclass(frozen=True)
class Pmult(Poly):
    left: Poly
    right: Poly

    def children(self):
        return (self.left, self.right)

    def with_children(self, kids):
        return Pmult(*kids)


@dataclass(frozen=True)
class Popp(Poly):
    arg: Poly

    def children(self):
        return (self.arg,)

    def with_children(self, kids):
        return Popp(*kids)


@dataclass(frozen=True, order=True)
class Monomial:
    """係數（非零）與稀疏指數向量（依變數索引遞增）"""
    coefficient: int
    exponents: Exponents = ()

    @property
    def degree(self) -> int:
        return sum(e for _, e in self.exponents)


NormalPoly = Tuple[Monomial, ...]

_RING_LEAVES = (Const, VarR)
_POLY_LEAVES = (Pconst, Pvar)


def _is_index(i: object) -> bool:
    return isinstance(i, int) and not isinstance(i, bool) and i >= 0


def _is_int(v: object) -> bool:
    return isinstance(v, int) and not isinstance(v, bool)


def is_ring_expr(e: object) -> bool:
    stack = [e]
    while stack:
        node = stack.pop()
        if isinstance(node, Const):
            if not _is_int(node.value):
                return False
        elif isinstance(node, VarR):
            if not _is_index(node.index):
                return False
        elif isinstance(node, (Add, Mul, NegR)):
            stack.extend(node.children())
        else:
            return False
    return True


def is_poly(p: object) -> bool:
    stack = [p]
    while stack:
        node = stack.pop()
        if isinstance(node, Pconst):
            if not _is_int(node.value):
                return False
        elif isinstance(node, Pvar):
            if not _is_index(node.index):
                return False
        elif isinstance(node, (Pplus, Pmult, Popp)):
            stack.extend(node.children())
        else:
            return False
    return True


# ----------------------------------------------------------------------
# 引號與解釋
# ----------------------------------------------------------------------

def pquote(e: RingExpr) -> Poly:
    """逐建構子把環運算式提升為 Poly"""
    if isinstance(e, Const):
        return Pconst(e.value)
    if isinstance(e, VarR):
        return Pvar(e.index)
    if isinstance(e, Add):
        return Pplus(pquote(e.left), pquote(e.right))
    if isinstance(e, Mul):
        return Pmult(pquote(e.left), pquote(e.right))
    if isinstance(e, NegR):
        return Popp(pquote(e.arg))
    raise InputError(f"不是環運算式: {e!r}")


def interp_p(p: Poly) -> RingExpr:
    """pquote 的結構反函數"""
    if isinstance(p, Pconst):
        return Const(p.value)
    if isinstance(p, Pvar):
        return VarR(p.index)
    if isinstance(p, Pplus):
        return Add(interp_p(p.left), interp_p(p.right))
    if isinstance(p, Pmult):
        return Mul(interp_p(p.left), interp_p(p.right))
    if isinstance(p, Popp):
        return NegR(interp_p(p.arg))
    raise InputError(f"不是多項式: {p!r}")


# ----------------------------------------------------------------------
# 正規化
# ----------------------------------------------------------------------

def _multiply_exponents(a: Exponents, b: Exponents) -> Exponents:
    merged: Dict[int, int] = dict(a)
    for index, exp in b:
        merged[index] = merged.get(index, 0) + exp
    return tuple(sorted(merged.items()))


def _terms(p: Poly) -> Dict[Exponents, int]:
    if isinstance(p, Pconst):
        return {(): p.value} if p.value else {}
    if isinstance(p, Pvar):
        return {((p.index, 1),): 1}
    if isinstance(p, Popp):
        return {k: -v for k, v in _terms(p.arg).items()}
    if isinstance(p, Pplus):
        result: Dict[Exponents, int] = defaultdict(int, _terms(p.left))
        for k, v in _terms(p.right).items():
            result[k] += v
        return {k: v for k, v in result.items() if v}
    if isinstance(p, Pmult):
        left, right = _terms(p.left), _terms(p.right)
        result = defaultdict(int)
        for ka, va in left.items():
            for kb, vb in right.items():
                result[_multiply_exponents(ka, kb)] += va * vb
        return {k: v for k, v in result.items() if v}
    raise InputError(f"不是多項式: {p!r}")


def monomial_key(m: Monomial) -> tuple:
    """排序鍵：總次數遞減，再依稠密指數向量的字典序遞減"""
    return (-m.degree, tuple((index, -exp) for index, exp in m.exponents))


def normalize(p: Poly) -> NormalPoly:
    """展開乘積、合併同類項、去掉零係數並依單項式順序排列"""
    monomials = [Monomial(coef, exps) for exps, coef in _terms(p).items()]
    return tuple(sorted(monomials, key=monomial_key))


def _monomial_poly(m: Monomial) -> Poly:
    factors: List[Poly] = []
    if m.coefficient != 1 or not m.exponents:
        factors.append(Pconst(m.coefficient))
    for index, exp in m.exponents:
        factors.extend(Pvar(index) for _ in range(exp))
    result = factors[-1]
    for factor in reversed(factors[:-1]):
        result = Pmult(factor, result)
    return result


def to_poly(normal: NormalPoly) -> Poly:
    """正規多項式 → 右巢狀的 Pplus / Pmult 鏈；零多項式為 Pconst 0"""
    if not normal:
        return Pconst(0)
    parts = [_monomial_poly(m) for m in normal]
    result = parts[-1]
    for part in reversed(parts[:-1]):
        result = Pplus(part, result)
    return result


def normalize_expr(e: RingExpr) -> NormalPoly:
    return normalize(pquote(e))


# ----------------------------------------------------------------------
# 求值
# ----------------------------------------------------------------------

def variables(e: Union[RingExpr, Poly]) -> List[int]:
    """出現的變數索引（遞增）"""
    found = set()
    stack = [e]
    while stack:
        node = stack.pop()
        if isinstance(node, (VarR, Pvar)):
            found.add(node.index)
        else:
            stack.extend(node.children())
    return sorted(found)


def eval_ring(e: RingExpr, assignment: Mapping[int, int]) -> int:
    """
    整數求值

    Raises:
        InputError: 變數未賦值
    """
    if isinstance(e, Const):
        return e.value
    if isinstance(e, VarR):
        if e.index not in assignment:
            raise InputError(f"變數 x{e.index} 未賦值")
        return assignment[e.index]
    if isinstance(e, Add):
        return eval_ring(e.left, assignment) + eval_ring(e.right, assignment)
    if isinstance(e, Mul):
        return eval_ring(e.left, assignment) * eval_ring(e.right, assignment)
    if isinstance(e, NegR):
        return -eval_ring(e.arg, assignment)
    raise InputError(f"不是環運算式: {e!r}")


def eval_normal(normal: NormalPoly, assignment: Mapping[int, int]) -> int:
    """正規多項式的整數求值"""
    total = 0
    for m in normal:
        term = m.coefficient
        for index, exp in m.exponents:
            if index not in assignment:
                raise InputError(f"變數 x{index} 未賦值")
            term *= assignment[index] ** exp
        total += term
    return total


def degree_bound(e: RingExpr) -> int:
    """結構上的次數上界"""
    if isinstance(e, Const):
        return 0
    if isinstance(e, VarR):
        return 1
    if isinstance(e, Add):
        return max(degree_bound(e.left), degree_bound(e.right))
    if isinstance(e, Mul):
        return degree_bound(e.left) + degree_bound(e.right)
    return degree_bound(e.arg)


# ----------------------------------------------------------------------
# 文字語法
# ----------------------------------------------------------------------

_TOKEN = re.compile(r"(?P<num>\d+)|(?P<var>x\d+)|(?P<op>[-+*()])")
_SPACE = re.compile(r"\s*")


class _Parser:
    """
    expr   := term (('+' | '-') term)*
    term   := factor ('*' factor)*
    factor := '-' 整數 | '-' factor | atom（'-' 緊接整數時讀成負常數）
    atom   := 整數 | xN | '(' expr ')'
    """

    def __init__(self, s: str):
        self.source = s
        self.tokens: List[Tuple[str, str, int]] = []
        pos = _SPACE.match(s).end()
        while pos < len(s):
            match = _TOKEN.match(s, pos)
            if match is None:
                raise ParseError(f"無法識別的字元 {s[pos]!r}", pos)
            self.tokens.append((match.lastgroup, match.group(match.lastgroup),
                                match.start(match.lastgroup)))
            pos = _SPACE.match(s, match.end()).end()
        self.index = 0

    def peek(self) -> Optional[str]:
        return self.tokens[self.index][1] if self.index < len(self.tokens) else None

    def offset(self) -> int:
        return self.tokens[self.index][2] if self.index < len(self.tokens) else len(self.source)

    def parse(self) -> RingExpr:
        if not self.tokens:
            raise ParseError("空輸入", 0)
        e = self.expr()
        if self.peek() is not None:
            raise ParseError(f"多餘的記號 {self.peek()!r}", self.offset())
        return e

    def expr(self) -> RingExpr:
        e = self.term()
        while self.peek() in ("+", "-"):
            op = self.peek()
            self.index += 1
            right = self.term()
            e = Add(e, right) if op == "+" else Add(e, NegR(right))
        return e

    def term(self) -> RingExpr:
        e = self.factor()
        while self.peek() == "*":
            self.index += 1
            e = Mul(e, self.factor())
        return e

    def factor(self) -> RingExpr:
        if self.peek() == "-":
            self.index += 1
            if self.index < len(self.tokens) and self.tokens[self.index][0] == "num":
                self.index += 1
                return Const(-int(self.tokens[self.index - 1][1]))
            return NegR(self.factor())
        return self.atom()

    def atom(self) -> RingExpr:
        if self.index >= len(self.tokens):
            raise ParseError("運算式不完整", self.offset())
        kind, text, offset = self.tokens[self.index]
        self.index += 1
        if kind == "num":
            return Const(int(text))
        if kind == "var":
            return VarR(int(text[1:]))
        if text == "(":
            e = self.expr()
            if self.peek() != ")":
                raise ParseError("預期 ')'", self.offset())
            self.index += 1
            return e
        raise ParseError(f"預期數字、變數或 '('，得到 {text!r}", offset)


def parse_ring(s: str) -> RingExpr:
    """
    解析中綴環運算式（+ - * 整數 x0..xN）

    Raises:
        ParseError: 格式錯誤
    """
    try:
        return _Parser(s).parse()
    except RecursionError as exc:
        raise ParseError("巢狀過深", 0) from exc


def show_ring(e: RingExpr) -> str:
    """完全加括號的中綴形式；parse_ring 讀回結構相等的運算式"""
    if isinstance(e, Const):
        return str(e.value) if e.value >= 0 else f"({e.value})"
    if isinstance(e, VarR):
        return f"x{e.index}"
    if isinstance(e, Add):
        return f"({show_ring(e.left)} + {show_ring(e.right)})"
    if isinstance(e, Mul):
        return f"({show_ring(e.left)} * {show_ring(e.right)})"
    if isinstance(e.arg, Const) and e.arg.value >= 0:
        # "-3" 會讀成負常數
        return f"-({e.arg.value})"
    return f"-{show_ring(e.arg)}"


def show_poly(p: Poly) -> str:
    """Poly 的建構子形式"""
    if isinstance(p, Pconst):
        return f"Pconst {p.value}"
    if isinstance(p, Pvar):
        return f"Pvar {p.index}"
    args = " ".join(f"({show_poly(kid)})" for kid in p.children())
    return f"{type(p).__name__} {args}"


def show_normal(normal: NormalPoly) -> str:
    """有序單項式和，例如 x0^2 + 2*x0 + 1"""
    if not normal:
        return "0"
    pieces = []
    for m in normal:
        factors = [f"x{i}" if e == 1 else f"x{i}^{e}" for i, e in m.exponents]
        coef = m.coefficient
        if not factors:
            body = str(abs(coef))
        elif abs(coef) == 1:
            body = "*".join(factors)
        else:
            body = "*".join([str(abs(coef))] + factors)
        sign = "-" if coef < 0 else "+"
        pieces.append((sign, body))
    first_sign, first_body = pieces[0]
    text = ("-" if first_sign == "-" else "") + first_body
    for sign, body in pieces[1:]:
        text += f" {sign} {body}"
    return text


# ----------------------------------------------------------------------
# 語法框架
# ----------------------------------------------------------------------

def _show_expr(e: Union[RingExpr, Poly]) -> str:
    if isinstance(e, Poly):
        return show_poly(e)
    return show_ring(e)


def build_framework() -> SyntaxFramework:
    """
    建立環正規化語法框架

    L = RingExpr ∪ Poly，L_obj = RingExpr，L_syn = Poly，Q = pquote，E = interp_p。
    環運算式的語義值是其正規多項式，Poly 的語義值是語法樹本身。
    """
    instance = InstanceId.RING.value

    def contains(e: object) -> bool:
        return is_ring_expr(e) or is_poly(e)

    def valuate(e: Union[RingExpr, Poly]) -> Value:
        if isinstance(e, Poly):
            return Value(instance, ValueKind.TREE, e)
        return Value(instance, ValueKind.POLYNOMIAL, normalize_expr(e))

    def unrepresent(v: Value) -> Optional[RingExpr]:
        if v.kind is ValueKind.TREE and isinstance(v.payload, Poly):
            return interp_p(v.payload)
        return None

    return SyntaxFramework(
        instance_id=instance,
        language=InterpretedLanguage("ring", contains, valuate),
        in_object=lambda e: isinstance(e, RingExpr),
        in_syntax=lambda e: isinstance(e, Poly),
        representation=SyntaxRepresentation(
            represent=lambda e: Value(instance, ValueKind.TREE, pquote(e)),
            unrepresent=unrepresent,
            surjective=True,
        ),
        quotation=pquote,
        evaluation=interp_p,
        total_evaluation=True,
        universal_disquotation=True,
        show=_show_expr,
        description="環正規化：Q = pquote，E = interp_p",
    )
