"""
Lisp 實例

純 S 式解釋器，內建 quote 與 eval，構成一個完備（replete）的語法框架：
L = L_obj = 全部 S 式，每個 S 式表示自己的語法結構（V_syn 為恆等），
L_syn = {e : V(e) ≠ ⊥}，Q(e) = (quote e)，E(e) = (eval e)。

子集：自求值原子、特殊形式 quote / eval / if / lambda / let / quasiquote，
內建函數 + - * = cons car cdr list，以及常量 t。沒有 define、set! 與 IO，
因此 V 與求值上下文無關。所有錯誤（包括燃料耗盡）都折成 ⊥。
"""

import re
from dataclasses import dataclass
from typing import Iterator, List, Mapping, Optional, Sequence, Tuple

from ..core.config import ConfigManager
from ..core.constants import InstanceId, ValueKind
from ..core.exceptions import InputError, MembershipError, ReadError, UnsupportedInputError
from ..core.framework import (
    InterpretedLanguage, SyntaxFramework, SyntaxRepresentation, Value, bottom
)
from ..core.quasi import ROOT, MarkedExpr, Position, children, rebuild, replace_at
from ..utils.logger import get_logger

logger = get_logger(__name__)


class SExpr:
    """S 式的基類"""

    def children(self) -> Tuple['SExpr', ...]:
        return ()

    def with_children(self, kids: Tuple['SExpr', ...]) -> 'SExpr':
        return self


@dataclass(frozen=True)
class Num(SExpr):
    value: int


@dataclass(frozen=True)
class Sym(SExpr):
    name: str


@dataclass(frozen=True)
class NilList(SExpr):
    pass


NIL = NilList()


@dataclass(frozen=True)
class Pair(SExpr):
    head: SExpr
    tail: SExpr

    def children(self):
        # 串列視圖：正規串列的子節點是各元素，點對的子節點是 (head, tail)
        items = to_list(self)
        if items is None:
            return (self.head, self.tail)
        return tuple(items)

    def with_children(self, kids):
        if to_list(self) is None:
            return Pair(*kids)
        return from_list(kids)


def from_list(items: Sequence[SExpr], tail: SExpr = NIL) -> SExpr:
    result = tail
    for item in reversed(items):
        result = Pair(item, result)
    return result


def to_list(e: SExpr) -> Optional[List[SExpr]]:
    """正規串列的元素；點對結尾時回傳 None"""
    items: List[SExpr] = []
    while isinstance(e, Pair):
        items.append(e.head)
        e = e.tail
    if e is not NIL and not isinstance(e, NilList):
        return None
    return items


QUOTE = Sym("quote")
QUASIQUOTE = Sym("quasiquote")
UNQUOTE = Sym("unquote")
EVAL = Sym("eval")
LAMBDA = Sym("lambda")
TRUE = Sym("t")
HOLE = Sym("HOLE")

SPECIAL_FORMS = frozenset({"quote", "eval", "if", "lambda", "let", "quasiquote", "unquote"})
PRIMITIVES = frozenset({"+", "-", "*", "=", "cons", "car", "cdr", "list"})

_DELIMITERS = set("()'`,;")
_INTEGER = re.compile(r"[+-]?\d+")


def is_symbol_name(name: object) -> bool:
    """能被讀回為同一符號的名稱"""
    return (isinstance(name, str) and bool(name) and name != "."
            and not any(ch.isspace() or ch in _DELIMITERS for ch in name)
            and not _INTEGER.fullmatch(name))


def is_sexpr(e: object) -> bool:
    stack = [e]
    while stack:
        node = stack.pop()
        if isinstance(node, Num):
            if not isinstance(node.value, int) or isinstance(node.value, bool):
                return False
        elif isinstance(node, Sym):
            if not is_symbol_name(node.name):
                return False
        elif isinstance(node, Pair):
            stack.append(node.head)
            stack.append(node.tail)
        elif not isinstance(node, NilList):
            return False
    return True


# ----------------------------------------------------------------------
# 讀取與列印
# ----------------------------------------------------------------------

_TOKEN = re.compile(r"(?P<skip>\s+|;[^\n]*)|(?P<punct>[()'`,])|(?P<atom>[^\s()'`,;]+)")


def _tokenize(s: str) -> Iterator[Tuple[str, int]]:
    pos = 0
    while pos < len(s):
        match = _TOKEN.match(s, pos)
        if match is None:
            raise ReadError(f"無法識別的字元 {s[pos]!r}", pos)
        if match.lastgroup != "skip":
            yield match.group(), pos
        pos = match.end()


class _Reader:

    def __init__(self, s: str):
        self.source = s
        self.tokens = list(_tokenize(s))
        self.index = 0
        # 反引號深度；逗號只能出現在反引號內
        self.depth = 0

    def at_end(self) -> bool:
        return self.index >= len(self.tokens)

    def offset(self) -> int:
        if self.at_end():
            return len(self.source)
        return self.tokens[self.index][1]

    def next(self) -> str:
        if self.at_end():
            raise ReadError("輸入不完整", len(self.source))
        token = self.tokens[self.index][0]
        self.index += 1
        return token

    def peek(self) -> Optional[str]:
        return None if self.at_end() else self.tokens[self.index][0]

    def read(self) -> SExpr:
        start = self.offset()
        token = self.next()
        if token == "(":
            return self.read_list()
        if token == ")":
            raise ReadError("多餘的 ')'", start)
        if token == "'":
            return from_list([QUOTE, self.read()])
        if token == "`":
            self.depth += 1
            body = self.read()
            self.depth -= 1
            return from_list([QUASIQUOTE, body])
        if token == ",":
            if self.depth == 0:
                raise ReadError("逗號出現在反引號之外", start)
            self.depth -= 1
            body = self.read()
            self.depth += 1
            return from_list([UNQUOTE, body])
        if token == ".":
            raise ReadError("'.' 只能出現在串列中", start)
        if _INTEGER.fullmatch(token):
            return Num(int(token))
        return Sym(token)

    def read_list(self) -> SExpr:
        items: List[SExpr] = []
        while True:
            token = self.peek()
            if token is None:
                raise ReadError("括號不平衡", len(self.source))
            if token == ")":
                self.next()
                return from_list(items)
            if token == ".":
                if not items:
                    raise ReadError("點對缺少前半部", self.offset())
                self.next()
                tail = self.read()
                if self.peek() != ")":
                    raise ReadError("點對後預期 ')'", self.offset())
                self.next()
                return from_list(items, tail)
            items.append(self.read())


def read_all(s: str) -> List[SExpr]:
    """讀取字串中的全部 S 式"""
    reader = _Reader(s)
    result = []
    try:
        while not reader.at_end():
            result.append(reader.read())
    except RecursionError as exc:
        raise ReadError("巢狀過深", reader.offset()) from exc
    return result


def read(s: str) -> SExpr:
    """
    讀取恰好一個 S 式

    ' 展開為 (quote ·)，` 與 , 展開為 (quasiquote ·) 與 (unquote ·)。

    Raises:
        ReadError: 格式錯誤（帶位置）
    """
    reader = _Reader(s)
    if reader.at_end():
        raise ReadError("空輸入", 0)
    try:
        e = reader.read()
    except RecursionError as exc:
        raise ReadError("巢狀過深", reader.offset()) from exc
    if not reader.at_end():
        raise ReadError("多餘的輸入", reader.offset())
    return e


def show(e: SExpr) -> str:
    """S 式的文字形式；讀回後結構相等"""
    if isinstance(e, Num):
        return str(e.value)
    if isinstance(e, Sym):
        return e.name
    if isinstance(e, NilList):
        return "()"
    if isinstance(e, Pair):
        parts = []
        node: SExpr = e
        while isinstance(node, Pair):
            parts.append(show(node.head))
            node = node.tail
        if not isinstance(node, NilList):
            parts.extend((".", show(node)))
        return "(" + " ".join(parts) + ")"
    raise InputError(f"不是 S 式: {e!r}")


# ----------------------------------------------------------------------
# 解釋器
# ----------------------------------------------------------------------

class _Bottom(Exception):
    """解釋失敗（折成 ⊥）"""


class Closure:
    """lambda 值；列印時還原成 (lambda params body)"""

    def __init__(self, params: Tuple[str, ...], body: SExpr, env: Mapping[str, object]):
        self.params = params
        self.body = body
        self.env = env


@dataclass(frozen=True)
class Primitive:
    name: str


def reify(v: object) -> SExpr:
    """執行期值 → S 式"""
    if isinstance(v, Closure):
        return from_list([LAMBDA, from_list([Sym(p) for p in v.params]), v.body])
    if isinstance(v, Primitive):
        return Sym(v.name)
    return v


def _is_form(e: SExpr, head: Sym, length: Optional[int] = None) -> bool:
    if not (isinstance(e, Pair) and e.head == head):
        return False
    items = to_list(e)
    return items is not None and (length is None or len(items) == length)


class _Run:
    """一次解釋的燃料與遞迴狀態"""

    def __init__(self, fuel: int):
        self.fuel = fuel

    def tick(self) -> None:
        self.fuel -= 1
        if self.fuel < 0:
            raise _Bottom("燃料耗盡")

    def ev(self, e: SExpr, env: Mapping[str, object]) -> object:
        self.tick()
        if isinstance(e, (Num, NilList)):
            return e
        if isinstance(e, Sym):
            if e.name in env:
                return env[e.name]
            if e == TRUE:
                return e
            if e.name in PRIMITIVES:
                return Primitive(e.name)
            raise _Bottom(f"未綁定的符號 {e.name}")
        if not isinstance(e, Pair):
            raise _Bottom("不是 S 式")

        items = to_list(e)
        if items is None:
            raise _Bottom("不能求值點對")
        head, args = items[0], items[1:]
        if isinstance(head, Sym) and head.name in SPECIAL_FORMS and head.name not in env:
            return self.special(head.name, args, env)
        fn = self.ev(head, env)
        return self.apply(fn, [self.ev(arg, env) for arg in args])

    def special(self, name: str, args: List[SExpr], env: Mapping[str, object]) -> object:
        if name == "quote":
            self.arity(args, 1)
            return args[0]
        if name == "eval":
            self.arity(args, 1)
            # 在全域（空）環境中求值
            return self.ev(reify(self.ev(args[0], env)), {})
        if name == "if":
            if len(args) not in (2, 3):
                raise _Bottom("if 需要 2 或 3 個參數")
            if self.ev(args[0], env) != NIL:
                return self.ev(args[1], env)
            return self.ev(args[2], env) if len(args) == 3 else NIL
        if name == "lambda":
            self.arity(args, 2)
            return Closure(self.params(args[0]), args[1], env)
        if name == "let":
            self.arity(args, 2)
            bindings = to_list(args[0])
            if bindings is None:
                raise _Bottom("let 的綁定必須是串列")
            extended = dict(env)
            for binding in bindings:
                pair = to_list(binding)
                if pair is None or len(pair) != 2 or not isinstance(pair[0], Sym):
                    raise _Bottom("let 綁定格式錯誤")
                extended[pair[0].name] = self.ev(pair[1], env)
            return self.ev(args[1], extended)
        if name == "quasiquote":
            self.arity(args, 1)
            return self.backquote(args[0], env)
        raise _Bottom("unquote 出現在反引號之外")

    def backquote(self, template: SExpr, env: Mapping[str, object]) -> SExpr:
        self.tick()
        if _is_form(template, UNQUOTE, 2):
            return reify(self.ev(template.tail.head, env))
        if _is_form(template, QUASIQUOTE):
            raise _Bottom("不支援巢狀反引號")
        if isinstance(template, Pair):
            return rebuild(template, [self.backquote(kid, env) for kid in children(template)])
        return template

    @staticmethod
    def arity(args: List[SExpr], n: int) -> None:
        if len(args) != n:
            raise _Bottom(f"預期 {n} 個參數，得到 {len(args)}")

    @staticmethod
    def params(spec: SExpr) -> Tuple[str, ...]:
        items = to_list(spec)
        if items is None or not all(isinstance(p, Sym) for p in items):
            raise _Bottom("lambda 參數必須是符號串列")
        names = tuple(p.name for p in items)
        if len(set(names)) != len(names):
            raise _Bottom("lambda 參數重複")
        return names

    def apply(self, fn: object, args: List[object]) -> object:
        if isinstance(fn, Sym) and fn.name in PRIMITIVES:
            fn = Primitive(fn.name)
        if _is_form(fn, LAMBDA, 3):
            # 列印過的閉包在空環境中重建
            items = to_list(fn)
            fn = Closure(self.params(items[1]), items[2], {})
        if isinstance(fn, Primitive):
            return self.primitive(fn.name, args)
        if isinstance(fn, Closure):
            if len(args) != len(fn.params):
                raise _Bottom("閉包參數個數不符")
            env = dict(fn.env)
            env.update(zip(fn.params, args))
            return self.ev(fn.body, env)
        raise _Bottom("不能套用非函數")

    def primitive(self, name: str, args: List[object]) -> object:
        if name in ("+", "-", "*", "="):
            if not all(isinstance(a, Num) for a in args):
                raise _Bottom(f"{name} 需要數字參數")
            values = [a.value for a in args]
            if name == "+":
                return Num(sum(values))
            if name == "*":
                product = 1
                for v in values:
                    product *= v
                return Num(product)
            if not values:
                raise _Bottom(f"{name} 至少需要一個參數")
            if name == "-":
                if len(values) == 1:
                    return Num(-values[0])
                return Num(values[0] - sum(values[1:]))
            return TRUE if all(v == values[0] for v in values) else NIL
        if name == "cons":
            self.arity(args, 2)
            return Pair(reify(args[0]), reify(args[1]))
        if name in ("car", "cdr"):
            self.arity(args, 1)
            if not isinstance(args[0], Pair):
                raise _Bottom(f"{name} 需要點對")
            return args[0].head if name == "car" else args[0].tail
        return from_list([reify(a) for a in args])


class LispInterpreter:
    """
    燃料有界的 S 式解釋器

    Args:
        fuel: 每次解釋可用的求值步數
    """

    def __init__(self, fuel: Optional[int] = None):
        if fuel is None:
            fuel = ConfigManager().get_int('lisp.fuel')
        if fuel < 0:
            raise InputError(f"燃料必須非負: {fuel}")
        self.fuel = int(fuel)

    def interp(self, e: SExpr) -> Optional[SExpr]:
        """V(e)；⊥ 以 None 表示"""
        try:
            return reify(_Run(self.fuel).ev(e, {}))
        except _Bottom as exc:
            logger.debug(f"求值得到 ⊥: {exc}")
            return None
        except RecursionError:
            logger.debug("求值得到 ⊥: 遞迴過深")
            return None

    def interp_backquote(self, e: SExpr) -> Optional[SExpr]:
        """
        反引號語義：把每個逗號標記的子運算式換成它的值

        不是反引號形式、或含巢狀反引號時等同 interp；拼接失敗時為 ⊥。
        """
        if not _is_form(e, QUASIQUOTE, 2):
            return self.interp(e)
        try:
            m = expand_backquote(e)
        except UnsupportedInputError:
            return self.interp(e)
        result = m.base
        for position, splice_expr in m.marks:
            value = self.interp(splice_expr)
            if value is None:
                return None
            result = replace_at(result, position, value)
        return result


def interp(e: SExpr, fuel: Optional[int] = None) -> Optional[SExpr]:
    """以給定（或設定的）燃料解釋 e"""
    return LispInterpreter(fuel).interp(e)


def interp_backquote(e: SExpr, fuel: Optional[int] = None) -> Optional[SExpr]:
    return LispInterpreter(fuel).interp_backquote(e)


# ----------------------------------------------------------------------
# 引號、求值、反引號
# ----------------------------------------------------------------------

def quote_of(e: SExpr) -> SExpr:
    """Q(e) = (quote e)"""
    return from_list([QUOTE, e])


def eval_of(e: SExpr, interpreter: Optional[LispInterpreter] = None) -> SExpr:
    """
    E(e) = (eval e)

    Raises:
        MembershipError: V(e) = ⊥
    """
    interpreter = interpreter or LispInterpreter()
    if interpreter.interp(e) is None:
        raise MembershipError(f"運算式的值為 ⊥，不在語法語言中: {show(e)}")
    return from_list([EVAL, e])


def _contains_quasiquote(e: SExpr) -> bool:
    stack = [e]
    while stack:
        node = stack.pop()
        if isinstance(node, Pair):
            if node.head == QUASIQUOTE:
                return True
            stack.append(node.head)
            stack.append(node.tail)
    return False


def expand_backquote(e: SExpr) -> MarkedExpr:
    """
    `template → 標記運算式

    每個 (unquote x) 換成 HOLE，並記錄 (位置, x)；位置相對於 template。

    Raises:
        InputError: e 不是 (quasiquote template)
        UnsupportedInputError: 巢狀反引號
    """
    if not _is_form(e, QUASIQUOTE, 2):
        raise InputError(f"不是反引號形式: {show(e)}")
    template = e.tail.head
    marks: List[Tuple[Position, SExpr]] = []

    def walk(node: SExpr, here: Position) -> SExpr:
        if _is_form(node, UNQUOTE, 2):
            splice_expr = node.tail.head
            if _contains_quasiquote(splice_expr):
                raise UnsupportedInputError("不支援巢狀反引號")
            marks.append((here, splice_expr))
            return HOLE
        if _is_form(node, QUASIQUOTE):
            raise UnsupportedInputError("不支援巢狀反引號")
        if isinstance(node, Pair):
            return rebuild(node, [walk(kid, here.child(i)) for i, kid in enumerate(children(node))])
        return node

    base = walk(template, ROOT)
    return MarkedExpr(base, tuple(marks))


# ----------------------------------------------------------------------
# 語法框架
# ----------------------------------------------------------------------

def build_framework(interpreter: Optional[LispInterpreter] = None) -> SyntaxFramework:
    """
    建立 Lisp 語法框架（完備：L_obj = L，內建引號與求值）

    Args:
        interpreter: 解釋器（預設依設定的燃料建立）
    """
    interpreter = interpreter or LispInterpreter()
    instance = InstanceId.MINILISP.value

    def valuate(e: SExpr) -> Value:
        result = interpreter.interp(e)
        if result is None:
            return bottom(instance)
        return Value(instance, ValueKind.SEXPR, result)

    def unrepresent(v: Value) -> Optional[SExpr]:
        if v.kind is ValueKind.SEXPR:
            return v.payload
        return None

    return SyntaxFramework(
        instance_id=instance,
        language=InterpretedLanguage("minilisp", is_sexpr, valuate),
        in_object=lambda e: True,
        in_syntax=lambda e: interpreter.interp(e) is not None,
        representation=SyntaxRepresentation(
            represent=lambda e: Value(instance, ValueKind.SEXPR, e),
            unrepresent=unrepresent,
            surjective=True,
        ),
        quotation=quote_of,
        evaluation=lambda e: from_list([EVAL, e]),
        built_in_quotation=True,
        built_in_evaluation=True,
        object_is_language=True,
        syntax_within_object=True,
        total_evaluation=True,
        show=show,
        description="Lisp：Q = (quote e)，E = (eval e)",
    )


__all__ = [
    "SExpr", "Num", "Sym", "NilList", "NIL", "Pair", "from_list", "to_list", "read", "read_all",
    "show", "LispInterpreter", "interp", "interp_backquote", "quote_of", "eval_of",
    "expand_backquote", "build_framework", "HOLE", "is_sexpr", "Closure", "Primitive", "reify",
]
