"""
無型 lambda 演算實例

- 語義 V(M) 是 M 的 β 正規形（以 α 不變的正規鍵表示），沒有正規形時為 ⊥
- 語法表示 ⟨·⟩ 使用三個新變數 a、b、c 的表示綱要：
      ⟨x⟩    = λa b c. a x
      ⟨M N⟩  = λa b c. b ⟨M⟩ ⟨N⟩
      ⟨λx.M⟩ = λa b c. c (λx. ⟨M⟩)
- 自我解釋器 E = Y (λe. λm. m (λx. x) (λm n. (e m) (e n)) (λm. λv. e (m v)))，
  滿足 E⟨M⟩ =β M

L_syn 是全部正規形，Q = ⟨·⟩，E(M) = E_term M（M 可解碼為某個 ⟨N⟩ 時）。
這個框架只有內建求值，沒有內建引號。

內部以 de Bruijn 元組計算：('v', i) 約束變數、('f', name) 自由變數、
('a', f, x) 套用、('l', hint, body) 抽象。
"""

import re
from dataclasses import dataclass
from typing import Dict, FrozenSet, List, Optional, Set, Tuple

from ..core.config import ConfigManager
from ..core.constants import InstanceId, ValueKind
from ..core.exceptions import InputError, ParseError
from ..core.framework import (
    InterpretedLanguage, SyntaxFramework, SyntaxRepresentation, Value, bottom
)
from ..utils.logger import get_logger

logger = get_logger(__name__)

Db = tuple

IDENT_PATTERN = re.compile(r"[A-Za-z_][A-Za-z0-9_']*")


class LamTerm:
    """lambda 項的基類"""

    def children(self) -> Tuple['LamTerm', ...]:
        return ()

    def with_children(self, kids: Tuple['LamTerm', ...]) -> 'LamTerm':
        return self


@dataclass(frozen=True)
class VarL(LamTerm):
    name: str


@dataclass(frozen=True)
class App(LamTerm):
    fn: LamTerm
    arg: LamTerm

    def children(self):
        return (self.fn, self.arg)

    def with_children(self, kids):
        return App(*kids)


@dataclass(frozen=True)
class Abs(LamTerm):
    var: str
    body: LamTerm

    def children(self):
        return (self.body,)

    def with_children(self, kids):
        return Abs(self.var, *kids)


def is_term(t: object) -> bool:
    stack = [t]
    while stack:
        node = stack.pop()
        if isinstance(node, VarL):
            if not (isinstance(node.name, str) and IDENT_PATTERN.fullmatch(node.name)):
                return False
        elif isinstance(node, App):
            stack.extend((node.fn, node.arg))
        elif isinstance(node, Abs):
            if not (isinstance(node.var, str) and IDENT_PATTERN.fullmatch(node.var)):
                return False
            stack.append(node.body)
        else:
            return False
    return True


def names(t: LamTerm) -> Set[str]:
    """項中出現的全部名稱（自由與約束）"""
    out: Set[str] = set()
    stack = [t]
    while stack:
        node = stack.pop()
        if isinstance(node, VarL):
            out.add(node.name)
        elif isinstance(node, Abs):
            out.add(node.var)
            stack.append(node.body)
        else:
            stack.extend((node.fn, node.arg))
    return out


def free_vars(t: LamTerm) -> FrozenSet[str]:
    if isinstance(t, VarL):
        return frozenset({t.name})
    if isinstance(t, App):
        return free_vars(t.fn) | free_vars(t.arg)
    return free_vars(t.body) - {t.var}


# ----------------------------------------------------------------------
# 解析與列印
# ----------------------------------------------------------------------

_TOKEN = re.compile(r"(?P<ident>[A-Za-z_][A-Za-z0-9_']*)|(?P<punct>[\\λ.()])")
_SPACE = re.compile(r"\s*")


def _tokenize(s: str) -> List[Tuple[str, int]]:
    out = []
    pos = _SPACE.match(s).end()
    while pos < len(s):
        match = _TOKEN.match(s, pos)
        if match is None:
            raise ParseError(f"無法識別的字元 {s[pos]!r}", pos)
        token = match.group()
        out.append(("\\" if token == "λ" else token, match.start()))
        pos = _SPACE.match(s, match.end()).end()
    return out


class _Parser:
    """
    term   := '\\' ident+ '.' term | app
    app    := atom atom* [ '\\' ... ]   （抽象延伸到最右）
    atom   := ident | '(' term ')'
    """

    def __init__(self, s: str):
        self.source = s
        self.tokens = _tokenize(s)
        self.index = 0

    def peek(self) -> Optional[str]:
        return self.tokens[self.index][0] if self.index < len(self.tokens) else None

    def offset(self) -> int:
        return self.tokens[self.index][1] if self.index < len(self.tokens) else len(self.source)

    def advance(self) -> str:
        token = self.peek()
        if token is None:
            raise ParseError("輸入不完整", self.offset())
        self.index += 1
        return token

    def parse(self) -> LamTerm:
        if not self.tokens:
            raise ParseError("空輸入", 0)
        t = self.term()
        if self.peek() is not None:
            raise ParseError(f"多餘的記號 {self.peek()!r}", self.offset())
        return t

    def term(self) -> LamTerm:
        if self.peek() == "\\":
            return self.abstraction()
        t = self.atom()
        while self.peek() is not None and self.peek() not in (")",):
            if self.peek() == "\\":
                t = App(t, self.abstraction())
                break
            t = App(t, self.atom())
        return t

    def abstraction(self) -> LamTerm:
        self.advance()
        binders = []
        while self.peek() is not None and IDENT_PATTERN.fullmatch(self.peek()):
            binders.append(self.advance())
        if not binders:
            raise ParseError("λ 後缺少變數", self.offset())
        if self.peek() != ".":
            raise ParseError("預期 '.'", self.offset())
        self.advance()
        if self.peek() is None or self.peek() == ")":
            raise ParseError("抽象缺少本體", self.offset())
        body = self.term()
        for name in reversed(binders):
            body = Abs(name, body)
        return body

    def atom(self) -> LamTerm:
        token = self.peek()
        if token == "(":
            self.advance()
            t = self.term()
            if self.peek() != ")":
                raise ParseError("預期 ')'", self.offset())
            self.advance()
            return t
        if token is not None and IDENT_PATTERN.fullmatch(token):
            self.advance()
            return VarL(token)
        raise ParseError(f"預期變數或 '('，得到 {token!r}", self.offset())


def parse_term(s: str) -> LamTerm:
    """
    解析 lambda 項（\\x. M 或 λx. M，套用左結合）

    Raises:
        ParseError: 格式錯誤
    """
    try:
        return _Parser(s).parse()
    except RecursionError as exc:
        raise ParseError("巢狀過深", 0) from exc


def show_term(t: LamTerm) -> str:
    """最少括號的文字形式"""
    if isinstance(t, VarL):
        return t.name
    if isinstance(t, Abs):
        return f"\\{t.var}. {show_term(t.body)}"
    fn = show_term(t.fn)
    if isinstance(t.fn, Abs):
        fn = f"({fn})"
    arg = show_term(t.arg)
    if isinstance(t.arg, (App, Abs)):
        arg = f"({arg})"
    return f"{fn} {arg}"


# ----------------------------------------------------------------------
# de Bruijn 表示
# ----------------------------------------------------------------------

def to_db(t: LamTerm, scope: Tuple[str, ...] = ()) -> Db:
    """具名項 → de Bruijn 元組；scope 是由內而外的約束名稱"""
    if isinstance(t, VarL):
        for index, name in enumerate(scope):
            if name == t.name:
                return ('v', index)
        return ('f', t.name)
    if isinstance(t, App):
        return ('a', to_db(t.fn, scope), to_db(t.arg, scope))
    return ('l', t.var, to_db(t.body, (t.var,) + scope))


def _db_free(d: Db, out: Set[str]) -> Set[str]:
    stack = [d]
    while stack:
        node = stack.pop()
        if node[0] == 'f':
            out.add(node[1])
        elif node[0] == 'a':
            stack.extend((node[1], node[2]))
        elif node[0] == 'l':
            stack.append(node[2])
    return out


def from_db(d: Db) -> LamTerm:
    """
    de Bruijn 元組 → 具名項

    約束名稱取提示名，與自由名稱或外層約束名稱衝突時加上數字後綴。
    """
    taken = _db_free(d, set())

    def pick(hint: str, outer: Tuple[str, ...]) -> str:
        base = hint if hint else "v"
        candidate, n = base, 0
        while candidate in taken or candidate in outer:
            n += 1
            candidate = f"{base}{n}"
        return candidate

    def go(node: Db, scope: Tuple[str, ...]) -> LamTerm:
        tag = node[0]
        if tag == 'v':
            return VarL(scope[node[1]])
        if tag == 'f':
            return VarL(node[1])
        if tag == 'a':
            return App(go(node[1], scope), go(node[2], scope))
        name = pick(node[1], scope)
        return Abs(name, go(node[2], (name,) + scope))

    return go(d, ())


def strip(d: Db) -> Db:
    """去掉提示名的正規鍵"""
    tag = d[0]
    if tag == 'a':
        return ('a', strip(d[1]), strip(d[2]))
    if tag == 'l':
        return ('l', '', strip(d[2]))
    return d


def alpha_key(t: LamTerm) -> Db:
    """α 等價類的鍵"""
    return strip(to_db(t))


def alpha_eq(t1: LamTerm, t2: LamTerm) -> bool:
    """t1 與 t2 只差約束變數的改名"""
    return alpha_key(t1) == alpha_key(t2)


def _shift(d: Db, amount: int, cutoff: int = 0) -> Db:
    if amount == 0:
        return d
    tag = d[0]
    if tag == 'v':
        return ('v', d[1] + amount) if d[1] >= cutoff else d
    if tag == 'f':
        return d
    if tag == 'a':
        return ('a', _shift(d[1], amount, cutoff), _shift(d[2], amount, cutoff))
    return ('l', d[1], _shift(d[2], amount, cutoff + 1))


def _instantiate(body: Db, arg: Db, depth: int = 0) -> Db:
    """body[0 := arg]，並把其餘鬆散索引減一"""
    tag = body[0]
    if tag == 'v':
        index = body[1]
        if index == depth:
            return _shift(arg, depth)
        if index > depth:
            return ('v', index - 1)
        return body
    if tag == 'f':
        return body
    if tag == 'a':
        return ('a', _instantiate(body[1], arg, depth), _instantiate(body[2], arg, depth))
    return ('l', body[1], _instantiate(body[2], arg, depth + 1))


class _OutOfFuel(Exception):
    pass


class _Reducer:
    """正規順序（最左最外）化簡，燃料計算 β 步數"""

    def __init__(self, fuel: int):
        self.fuel = fuel

    def whnf(self, d: Db) -> Db:
        args: List[Db] = []
        while True:
            if d[0] == 'a':
                args.append(d[2])
                d = d[1]
            elif d[0] == 'l' and args:
                self.fuel -= 1
                if self.fuel < 0:
                    raise _OutOfFuel()
                d = _instantiate(d[2], args.pop())
            else:
                break
        for arg in reversed(args):
            d = ('a', d, arg)
        return d

    def normalize(self, d: Db) -> Db:
        d = self.whnf(d)
        if d[0] == 'l':
            return ('l', d[1], self.normalize(d[2]))
        spine: List[Db] = []
        while d[0] == 'a':
            spine.append(d[2])
            d = d[1]
        for arg in reversed(spine):
            d = ('a', d, self.normalize(arg))
        return d


def db_normal_form(d: Db, fuel: int) -> Optional[Db]:
    """de Bruijn 項的正規形；燃料耗盡或遞迴過深時回傳 None"""
    try:
        return _Reducer(fuel).normalize(d)
    except (_OutOfFuel, RecursionError):
        return None


def _default_fuel() -> int:
    return ConfigManager().get_int('lambda.fuel')


def beta_nf(t: LamTerm, fuel: Optional[int] = None) -> Optional[LamTerm]:
    """
    最左最外 β 化簡到正規形

    Args:
        t: 項
        fuel: β 步數上限

    Returns:
        正規形；燃料耗盡時回傳 None
    """
    fuel = _default_fuel() if fuel is None else fuel
    if fuel < 0:
        raise InputError(f"燃料必須非負: {fuel}")
    d = db_normal_form(to_db(t), fuel)
    return None if d is None else from_db(d)


def is_normal(t: LamTerm) -> bool:
    """沒有形如 (λx.M) N 的子項"""
    stack = [t]
    while stack:
        node = stack.pop()
        if isinstance(node, App):
            if isinstance(node.fn, Abs):
                return False
            stack.extend((node.fn, node.arg))
        elif isinstance(node, Abs):
            stack.append(node.body)
    return True


# ----------------------------------------------------------------------
# 表示綱要與自我解釋器
# ----------------------------------------------------------------------

def fresh_names(t: LamTerm, wanted: Tuple[str, ...] = ("a", "b", "c")) -> Tuple[str, ...]:
    """與 t 中全部名稱都不衝突的新名稱（加數字後綴）"""
    used = names(t)
    chosen: List[str] = []
    for base in wanted:
        candidate, n = base, 0
        while candidate in used or candidate in chosen:
            n += 1
            candidate = f"{base}{n}"
        chosen.append(candidate)
    return tuple(chosen)


def _abc(a: str, b: str, c: str, body: LamTerm) -> LamTerm:
    return Abs(a, Abs(b, Abs(c, body)))


def rep(t: LamTerm) -> LamTerm:
    """⟨t⟩；輸出已是正規形"""
    a, b, c = fresh_names(t)

    def go(node: LamTerm) -> LamTerm:
        if isinstance(node, VarL):
            return _abc(a, b, c, App(VarL(a), node))
        if isinstance(node, App):
            return _abc(a, b, c, App(App(VarL(b), go(node.fn)), go(node.arg)))
        return _abc(a, b, c, App(VarL(c), Abs(node.var, go(node.body))))

    return go(t)


def _drop(d: Db, low: int, count: int, depth: int = 0) -> Optional[Db]:
    """
    刪除索引區間 [low, low+count)（相對於深度 depth）

    項引用到被刪除的約束變數時回傳 None。
    """
    tag = d[0]
    if tag == 'v':
        index = d[1] - depth
        if index < low:
            return d
        if index < low + count:
            return None
        return ('v', d[1] - count)
    if tag == 'f':
        return d
    if tag == 'a':
        fn = _drop(d[1], low, count, depth)
        arg = _drop(d[2], low, count, depth)
        if fn is None or arg is None:
            return None
        return ('a', fn, arg)
    body = _drop(d[2], low, count, depth + 1)
    return None if body is None else ('l', d[1], body)


def _decode_db(d: Db) -> Optional[Db]:
    if not (d[0] == 'l' and d[2][0] == 'l' and d[2][2][0] == 'l'):
        return None
    body = d[2][2][2]
    if body[0] != 'a':
        return None
    fn, arg = body[1], body[2]
    if fn == ('v', 2):
        # ⟨x⟩ = λabc. a x，x 必須是變數
        var = _drop(arg, 0, 3)
        return var if var is not None and var[0] in ('v', 'f') else None
    if fn == ('v', 0) and arg[0] == 'l':
        # ⟨λx.M⟩ = λabc. c (λx. ⟨M⟩)；⟨M⟩ 內 x 是 0，a b c 是 3 2 1
        inner = _drop(arg[2], 1, 3)
        if inner is None:
            return None
        decoded = _decode_db(inner)
        return None if decoded is None else ('l', arg[1], decoded)
    if fn[0] == 'a' and fn[1] == ('v', 1):
        # ⟨M N⟩ = λabc. b ⟨M⟩ ⟨N⟩
        m, n = _drop(fn[2], 0, 3), _drop(arg, 0, 3)
        if m is None or n is None:
            return None
        dm, dn = _decode_db(m), _decode_db(n)
        if dm is None or dn is None:
            return None
        return ('a', dm, dn)
    return None


def decode_rep(t: LamTerm) -> Optional[LamTerm]:
    """⟨·⟩ 的反函數（至 α 等價）；t 不是任何項的表示時回傳 None"""
    try:
        d = _decode_db(to_db(t))
    except RecursionError:
        return None
    return None if d is None else from_db(d)


Y_COMBINATOR = parse_term("\\f. (\\x. f (x x)) (\\x. f (x x))")
_INTERPRETER_BODY = parse_term("\\e. \\m. m (\\x. x) (\\m. \\n. (e m) (e n)) (\\m. \\v. e (m v))")
SELF_INTERPRETER = App(Y_COMBINATOR, _INTERPRETER_BODY)


def self_interp_term() -> LamTerm:
    """自我解釋器 E（封閉項）"""
    return SELF_INTERPRETER


def run_self_interp(t: LamTerm, fuel: Optional[int] = None) -> Optional[LamTerm]:
    """beta_nf(E ⟨t⟩)"""
    return beta_nf(App(SELF_INTERPRETER, rep(t)), fuel)


# 歸納型別表示：Var / App / Abs 語法樹值
def inductive_rep(t: LamTerm) -> tuple:
    """以歸納樹值表示項的語法結構"""
    if isinstance(t, VarL):
        return ("Var", t.name)
    if isinstance(t, App):
        return ("App", inductive_rep(t.fn), inductive_rep(t.arg))
    return ("Abs", t.var, inductive_rep(t.body))


def inductive_unrep(value: object) -> Optional[LamTerm]:
    """inductive_rep 的反函數；形狀不符時回傳 None"""
    if not isinstance(value, tuple) or not value:
        return None
    tag = value[0]
    if tag == "Var" and len(value) == 2 and isinstance(value[1], str):
        return VarL(value[1]) if IDENT_PATTERN.fullmatch(value[1]) else None
    if tag == "App" and len(value) == 3:
        fn, arg = inductive_unrep(value[1]), inductive_unrep(value[2])
        return None if fn is None or arg is None else App(fn, arg)
    if tag == "Abs" and len(value) == 3 and isinstance(value[1], str):
        body = inductive_unrep(value[2])
        if body is None or not IDENT_PATTERN.fullmatch(value[1]):
            return None
        return Abs(value[1], body)
    return None


def inductive_representation(instance: str = InstanceId.LAMBDA.value) -> SyntaxRepresentation:
    """歸納樹語法表示（滿射到良構樹值）"""
    return SyntaxRepresentation(
        represent=lambda t: Value(instance, ValueKind.TREE, inductive_rep(t)),
        unrepresent=lambda v: inductive_unrep(v.payload) if v.kind is ValueKind.TREE else None,
        surjective=True,
    )


# ----------------------------------------------------------------------
# 常用項
# ----------------------------------------------------------------------

def church(n: int) -> LamTerm:
    """Church 數字 λf. λx. fⁿ x"""
    if n < 0:
        raise InputError(f"Church 數字必須非負: {n}")
    body: LamTerm = VarL("x")
    for _ in range(n):
        body = App(VarL("f"), body)
    return Abs("f", Abs("x", body))


def corpus() -> Dict[str, LamTerm]:
    """自我解釋的固定測試項"""
    terms = {
        "I": "\\x. x",
        "K": "\\x. \\y. x",
        "S": "\\x. \\y. \\z. x z (y z)",
        "pair": "\\a. \\b. \\f. f a b",
        "fst": "\\p. p (\\a. \\b. a)",
        "snd": "\\p. p (\\a. \\b. b)",
    }
    result = {name: parse_term(text) for name, text in terms.items()}
    for n in range(6):
        result[f"church{n}"] = church(n)
    return result


# ----------------------------------------------------------------------
# 語法框架
# ----------------------------------------------------------------------

class LambdaSemantics:
    """
    V：β 正規形的 α 鍵，沒有正規形時為 ⊥

    Args:
        fuel: β 步數上限
    """

    def __init__(self, fuel: Optional[int] = None):
        self.fuel = _default_fuel() if fuel is None else int(fuel)

    def normal_key(self, t: LamTerm) -> Optional[Db]:
        d = db_normal_form(to_db(t), self.fuel)
        return None if d is None else strip(d)

    def value(self, t: LamTerm, instance: str) -> Value:
        key = self.normal_key(t)
        if key is None:
            return bottom(instance)
        return Value(instance, ValueKind.TERM, key)


def build_framework(semantics: Optional[LambdaSemantics] = None) -> SyntaxFramework:
    """
    建立 lambda 演算語法框架

    L = L_obj = 全部項，L_syn = 正規形，Q = ⟨·⟩，E(M) = E_term M。
    """
    semantics = semantics or LambdaSemantics()
    instance = InstanceId.LAMBDA.value

    def represent(t: LamTerm) -> Value:
        return Value(instance, ValueKind.TERM, alpha_key(rep(t)))

    def unrepresent(v: Value) -> Optional[LamTerm]:
        if v.kind is not ValueKind.TERM:
            return None
        d = _decode_db(v.payload)
        return None if d is None else from_db(d)

    def evaluate(m: LamTerm) -> Optional[LamTerm]:
        if decode_rep(m) is None:
            return None
        return App(SELF_INTERPRETER, m)

    return SyntaxFramework(
        instance_id=instance,
        language=InterpretedLanguage("lambda", is_term, lambda t: semantics.value(t, instance)),
        in_object=lambda t: True,
        in_syntax=is_normal,
        representation=SyntaxRepresentation(represent, unrepresent, surjective=False),
        quotation=rep,
        evaluation=evaluate,
        built_in_evaluation=True,
        object_is_language=True,
        syntax_within_object=True,
        expr_key=alpha_key,
        show=show_term,
        description="lambda 演算：Q = ⟨·⟩，E = 自我解釋器",
    )
