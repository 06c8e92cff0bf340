"""
哥德爾編碼實例

算術語言的運算式先寫成前綴記號串，再以雙射 12 進位（數字 1..12，高位在前）讀成自然數：

    記號   0  S  +  *  =  ~  &  A  x  y  z  Q
    數字   1  2  3  4  5  6  7  8  9  10 11 12

Q 只出現在內建引號的擴充語言中。不是每個自然數都是編碼（例如 2 是單獨的 S），
因此求值是部分函數。

提供三個語法框架：
- goedel：L_syn 是全部項，E(t) = decode(V(t))，部分
- goedel-restricted：L′_t = {t : V(t) 是編碼}，E 全
- goedel-builtin：語言多一個 quote 運算子，V(quote(e)) = G(e)

開放項與量詞以預設賦值（所有變數為 0）求值；∀ 只檢查 [0, quantifier_bound]。
"""

from dataclasses import dataclass
from typing import Dict, FrozenSet, List, Mapping, Optional, Sequence, Tuple

from ..core.config import ConfigManager
from ..core.constants import DEFAULT_QUANTIFIER_BOUND, InstanceId, ValueKind
from ..core.exceptions import InputError, ParseError, SortError
from ..core.framework import (
    InterpretedLanguage, SyntaxFramework, SyntaxRepresentation, TransformerSpec, Value
)
from ..utils.logger import get_logger

logger = get_logger(__name__)

SYMBOLS: Tuple[str, ...] = ("0", "S", "+", "*", "=", "~", "&", "A", "x", "y", "z", "Q")
DIGITS: Dict[str, int] = {symbol: i + 1 for i, symbol in enumerate(SYMBOLS)}
BASE = len(SYMBOLS)
VARIABLES: Tuple[str, ...] = ("x", "y", "z")

TERM = "term"
FORMULA = "formula"


class ArithExpr:
    """算術運算式的基類"""

    def children(self) -> Tuple['ArithExpr', ...]:
        return ()

    def with_children(self, kids: Tuple['ArithExpr', ...]) -> 'ArithExpr':
        return self


@dataclass(frozen=True)
class Zero(ArithExpr):
    pass


@dataclass(frozen=True)
class Succ(ArithExpr):
    arg: ArithExpr

    def children(self):
        return (self.arg,)

    def with_children(self, kids):
        return Succ(*kids)


@dataclass(frozen=True)
class Plus(ArithExpr):
    left: ArithExpr
    right: ArithExpr

    def children(self):
        return (self.left, self.right)

    def with_children(self, kids):
        return Plus(*kids)


@dataclass(frozen=True)
class Times(ArithExpr):
    left: ArithExpr
    right: ArithExpr

    def children(self):
        return (self.left, self.right)

    def with_children(self, kids):
        return Times(*kids)


@dataclass(frozen=True)
class VarT(ArithExpr):
    name: str


@dataclass(frozen=True)
class Eq(ArithExpr):
    left: ArithExpr
    right: ArithExpr

    def children(self):
        return (self.left, self.right)

    def with_children(self, kids):
        return Eq(*kids)


@dataclass(frozen=True)
class NotF(ArithExpr):
    body: ArithExpr

    def children(self):
        return (self.body,)

    def with_children(self, kids):
        return NotF(*kids)


@dataclass(frozen=True)
class AndF(ArithExpr):
    left: ArithExpr
    right: ArithExpr

    def children(self):
        return (self.left, self.right)

    def with_children(self, kids):
        return AndF(*kids)


@dataclass(frozen=True)
class ForAll(ArithExpr):
    var: str
    body: ArithExpr

    def children(self):
        return (self.body,)

    def with_children(self, kids):
        return ForAll(self.var, *kids)


@dataclass(frozen=True)
class Quote(ArithExpr):
    """內建引號：一個項，其值是 expr 的哥德爾編碼"""
    expr: ArithExpr

    def children(self):
        return (self.expr,)

    def with_children(self, kids):
        return Quote(*kids)


ZERO = Zero()

_BINARY = {Plus: "+", Times: "*", Eq: "=", AndF: "&"}
_ARITY = {"0": 0, "x": 0, "y": 0, "z": 0, "S": 1, "~": 1, "Q": 1, "A": 1,
          "+": 2, "*": 2, "=": 2, "&": 2}


# ----------------------------------------------------------------------
# 類別
# ----------------------------------------------------------------------

def sort_of(e: ArithExpr, allow_quote: bool = False) -> str:
    """
    運算式的類別（term / formula）

    Raises:
        SortError: 建構子的參數類別不符
        InputError: 不是算術運算式
    """
    if isinstance(e, Succ):
        # 一元數字可能很深，逐層剝開
        while isinstance(e, Succ):
            e = e.arg
        if sort_of(e, allow_quote) != TERM:
            raise SortError("S 需要項參數")
        return TERM
    if isinstance(e, Zero):
        return TERM
    if isinstance(e, VarT):
        if e.name not in VARIABLES:
            raise InputError(f"未知的變數: {e.name!r}")
        return TERM
    if isinstance(e, (Plus, Times, Eq)):
        if sort_of(e.left, allow_quote) != TERM or sort_of(e.right, allow_quote) != TERM:
            raise SortError(f"{type(e).__name__} 需要項參數")
        return FORMULA if isinstance(e, Eq) else TERM
    if isinstance(e, NotF):
        if sort_of(e.body, allow_quote) != FORMULA:
            raise SortError("~ 需要公式參數")
        return FORMULA
    if isinstance(e, AndF):
        if sort_of(e.left, allow_quote) != FORMULA or sort_of(e.right, allow_quote) != FORMULA:
            raise SortError("& 需要公式參數")
        return FORMULA
    if isinstance(e, ForAll):
        if e.var not in VARIABLES:
            raise InputError(f"未知的變數: {e.var!r}")
        if sort_of(e.body, allow_quote) != FORMULA:
            raise SortError("∀ 需要公式參數")
        return FORMULA
    if isinstance(e, Quote):
        if not allow_quote:
            raise InputError("此語言沒有 quote 運算子")
        sort_of(e.expr, allow_quote)
        return TERM
    raise InputError(f"不是算術運算式: {e!r}")


def is_expression(e: object, allow_quote: bool = False) -> bool:
    try:
        sort_of(e, allow_quote)
        return True
    except (InputError, RecursionError):
        return False


def is_term(e: object, allow_quote: bool = False) -> bool:
    try:
        return sort_of(e, allow_quote) == TERM
    except (InputError, RecursionError):
        return False


def free_vars(e: ArithExpr) -> FrozenSet[str]:
    """自由變數；quote 內的運算式是被引用的語法，不貢獻自由變數"""
    if isinstance(e, VarT):
        return frozenset({e.name})
    if isinstance(e, ForAll):
        return free_vars(e.body) - {e.var}
    if isinstance(e, Quote):
        return frozenset()
    result: FrozenSet[str] = frozenset()
    for kid in e.children():
        result |= free_vars(kid)
    return result


# ----------------------------------------------------------------------
# 編碼與解碼
# ----------------------------------------------------------------------

def tokens(e: ArithExpr) -> List[str]:
    """前綴記號串"""
    out: List[str] = []
    stack = [e]
    while stack:
        node = stack.pop()
        if isinstance(node, Zero):
            out.append("0")
        elif isinstance(node, VarT):
            out.append(node.name)
        elif isinstance(node, Succ):
            out.append("S")
            stack.append(node.arg)
        elif isinstance(node, NotF):
            out.append("~")
            stack.append(node.body)
        elif isinstance(node, ForAll):
            out.extend(("A", node.var))
            stack.append(node.body)
        elif isinstance(node, Quote):
            out.append("Q")
            stack.append(node.expr)
        elif type(node) in _BINARY:
            out.append(_BINARY[type(node)])
            stack.append(node.right)
            stack.append(node.left)
        else:
            raise InputError(f"不是算術運算式: {node!r}")
    return out


def _build(symbol: str, var: Optional[str], kids: Sequence[ArithExpr]) -> ArithExpr:
    if symbol == "0":
        return ZERO
    if symbol in VARIABLES:
        return VarT(symbol)
    if symbol == "S":
        return Succ(kids[0])
    if symbol == "~":
        return NotF(kids[0])
    if symbol == "Q":
        return Quote(kids[0])
    if symbol == "A":
        return ForAll(var, kids[0])
    return {"+": Plus, "*": Times, "=": Eq, "&": AndF}[symbol](*kids)


def parse_tokens(toks: Sequence[str], allow_quote: bool = False) -> Optional[ArithExpr]:
    """
    前綴記號串 → 運算式

    記號串不是恰好一個良類別運算式時回傳 None。
    """
    # 每一幀: [記號, 約束變數, 已收集的子運算式]
    stack: List[list] = []
    i, n = 0, len(toks)
    while i < n:
        symbol = toks[i]
        i += 1
        if symbol not in _ARITY or (symbol == "Q" and not allow_quote):
            return None
        var = None
        if symbol == "A":
            if i >= n or toks[i] not in VARIABLES:
                return None
            var = toks[i]
            i += 1
        if _ARITY[symbol] > 0:
            stack.append([symbol, var, []])
            continue
        node = _build(symbol, var, ())
        while True:
            if not stack:
                if i != n:
                    return None
                return node if is_expression(node, allow_quote) else None
            frame = stack[-1]
            frame[2].append(node)
            if len(frame[2]) < _ARITY[frame[0]]:
                break
            stack.pop()
            node = _build(*frame)
    return None


def digits_of(n: int) -> List[int]:
    """n ≥ 1 的雙射 12 進位數字（高位在前）"""
    out: List[int] = []
    while n > 0:
        d = n % BASE or BASE
        out.append(d)
        n = (n - d) // BASE
    out.reverse()
    return out


def encode(e: ArithExpr) -> int:
    """哥德爾編碼 G(e) ≥ 1"""
    code = 0
    for symbol in tokens(e):
        code = code * BASE + DIGITS[symbol]
    return code


def decode(n: int, allow_quote: bool = False) -> Optional[ArithExpr]:
    """編碼為 n 的運算式；n 不是編碼時回傳 None（0 永遠不是編碼）"""
    if not isinstance(n, int) or isinstance(n, bool) or n < 1:
        return None
    return parse_tokens([SYMBOLS[d - 1] for d in digits_of(n)], allow_quote)


def smallest_non_code(limit: int, allow_quote: bool = False) -> Optional[int]:
    """[1, limit] 中最小的非編碼"""
    for n in range(1, limit + 1):
        if decode(n, allow_quote) is None:
            return n
    return None


def symbol_table() -> List[Tuple[str, int]]:
    return [(symbol, DIGITS[symbol]) for symbol in SYMBOLS]


# ----------------------------------------------------------------------
# 數字項
# ----------------------------------------------------------------------

def numeral(n: int) -> ArithExpr:
    """Sⁿ(0)"""
    if n < 0:
        raise InputError(f"數字必須非負: {n}")
    t: ArithExpr = ZERO
    for _ in range(n):
        t = Succ(t)
    return t


TWELVE = numeral(BASE)


def code_numeral(n: int) -> ArithExpr:
    """
    以 Horner 形式表示 n 的緊湊數字項

    n 的雙射 12 進位數字 d₀…d_k 寫成 ((d₀·12 + d₁)·12 + …) + d_k，
    每個數字是一元數字，因此項的大小與編碼的位數成正比。
    """
    if n < 0:
        raise InputError(f"數字必須非負: {n}")
    if n == 0:
        return ZERO
    ds = digits_of(n)
    t = numeral(ds[0])
    for d in ds[1:]:
        t = Plus(Times(t, TWELVE), numeral(d))
    return t


# ----------------------------------------------------------------------
# 語義
# ----------------------------------------------------------------------

class ArithmeticEvaluator:
    """
    標準模型求值器

    Args:
        quantifier_bound: ∀ 檢查的上界（含）
    """

    def __init__(self, quantifier_bound: int = DEFAULT_QUANTIFIER_BOUND):
        if quantifier_bound < 0:
            raise InputError(f"量詞上界必須非負: {quantifier_bound}")
        self.quantifier_bound = quantifier_bound

    def term_value(self, t: ArithExpr, env: Optional[Mapping[str, int]] = None) -> int:
        env = env or {}
        count = 0
        while isinstance(t, Succ):
            count += 1
            t = t.arg
        if isinstance(t, Zero):
            return count
        if isinstance(t, VarT):
            return count + env.get(t.name, 0)
        if isinstance(t, Plus):
            return count + self.term_value(t.left, env) + self.term_value(t.right, env)
        if isinstance(t, Times):
            return count + self.term_value(t.left, env) * self.term_value(t.right, env)
        if isinstance(t, Quote):
            return count + encode(t.expr)
        raise SortError(f"不是項: {t!r}")

    def truth(self, f: ArithExpr, env: Optional[Mapping[str, int]] = None) -> bool:
        env = env or {}
        if isinstance(f, Eq):
            return self.term_value(f.left, env) == self.term_value(f.right, env)
        if isinstance(f, NotF):
            return not self.truth(f.body, env)
        if isinstance(f, AndF):
            return self.truth(f.left, env) and self.truth(f.right, env)
        if isinstance(f, ForAll):
            if f.var not in free_vars(f.body):
                return self.truth(f.body, env)
            return all(self.truth(f.body, {**env, f.var: k})
                       for k in range(self.quantifier_bound + 1))
        raise SortError(f"不是公式: {f!r}")

    def value(self, e: ArithExpr, instance: str, allow_quote: bool = False) -> Value:
        """V(e)：項得到自然數，公式得到真值"""
        if sort_of(e, allow_quote) == TERM:
            return Value(instance, ValueKind.NATURAL, self.term_value(e))
        return Value(instance, ValueKind.TRUTH, self.truth(e))


def _default_evaluator() -> ArithmeticEvaluator:
    return ArithmeticEvaluator(ConfigManager().get_int('goedel.quantifier_bound'))


def has_quantifier(e: ArithExpr) -> bool:
    """e 是否含 ∀（其真值依 quantifier_bound 而定）"""
    stack = [e]
    while stack:
        node = stack.pop()
        if isinstance(node, ForAll):
            return True
        if not isinstance(node, Quote):
            stack.extend(node.children())
    return False


def term_value(t: ArithExpr, env: Optional[Mapping[str, int]] = None) -> int:
    """項在預設賦值（或 env）下的值"""
    return ArithmeticEvaluator().term_value(t, env)


def quote_num(e: ArithExpr, builtin: bool = False) -> ArithExpr:
    """Q(e)：元層為 G(e) 的數字項，內建擴充為 quote(e)"""
    if builtin:
        return Quote(e)
    return code_numeral(encode(e))


def eval_num(t: ArithExpr, allow_quote: bool = False) -> Optional[ArithExpr]:
    """
    E(t) = decode(V(t))

    Raises:
        SortError: t 不是項
    """
    if not is_term(t, allow_quote):
        raise SortError(f"求值需要項: {t!r}")
    return decode(ArithmeticEvaluator().term_value(t), allow_quote)


# ----------------------------------------------------------------------
# 變換器
# ----------------------------------------------------------------------

def _require_closed_term(t: ArithExpr) -> None:
    if not is_term(t) or free_vars(t):
        raise InputError(f"add 需要封閉項: {t!r}")


def add_transformer(t1: ArithExpr, t2: ArithExpr) -> ArithExpr:
    """
    add(t₁, t₂) = numeral(V(t₁) + V(t₂))

    Raises:
        InputError: 參數不是封閉項
    """
    _require_closed_term(t1)
    _require_closed_term(t2)
    return numeral(term_value(t1) + term_value(t2))


def lifted_add(q1: ArithExpr, q2: ArithExpr) -> ArithExpr:
    """
    e_add：語法層的加法

    對引號數字 q₁、q₂，回傳表示 add(E(q₁), E(q₂)) 之編碼的數字項。
    """
    e1, e2 = eval_num(q1), eval_num(q2)
    if e1 is None or e2 is None:
        raise InputError("e_add 的參數不是運算式的引號")
    return code_numeral(encode(add_transformer(e1, e2)))


ADD = TransformerSpec(
    name="add",
    arity=2,
    transformer=add_transformer,
    lifted=lifted_add,
    accepts=lambda t: is_term(t) and not free_vars(t),
)


# ----------------------------------------------------------------------
# 文字語法
# ----------------------------------------------------------------------

def show(e: ArithExpr) -> str:
    """空白分隔的前綴記號串"""
    return " ".join(tokens(e))


def parse(text: str, allow_quote: bool = False) -> ArithExpr:
    """
    解析空白分隔的前綴記號串

    Raises:
        ParseError: 未知記號或記號串不是恰好一個良類別運算式
    """
    toks = text.split()
    if not toks:
        raise ParseError("空輸入", 0)
    for index, symbol in enumerate(toks):
        if symbol not in DIGITS or (symbol == "Q" and not allow_quote):
            raise ParseError(f"未知的記號 {symbol!r}", index)
    e = parse_tokens(toks, allow_quote)
    if e is None:
        raise ParseError("記號串不是一個良類別運算式", len(toks))
    return e


# ----------------------------------------------------------------------
# 語法框架
# ----------------------------------------------------------------------

def build_framework(variant: InstanceId = InstanceId.GOEDEL,
                    evaluator: Optional[ArithmeticEvaluator] = None) -> SyntaxFramework:
    """
    建立哥德爾編碼語法框架

    Args:
        variant: GOEDEL、GOEDEL_RESTRICTED 或 GOEDEL_BUILTIN
        evaluator: 求值器（預設依設定的量詞上界建立）

    Raises:
        InputError: 不是哥德爾實例
    """
    if variant not in (InstanceId.GOEDEL, InstanceId.GOEDEL_RESTRICTED, InstanceId.GOEDEL_BUILTIN):
        raise InputError(f"不是哥德爾實例: {variant}")
    evaluator = evaluator or _default_evaluator()
    instance = variant.value
    builtin = variant is InstanceId.GOEDEL_BUILTIN
    restricted = variant is InstanceId.GOEDEL_RESTRICTED

    def valuate(e: ArithExpr) -> Value:
        return evaluator.value(e, instance, builtin)

    def unrepresent(v: Value) -> Optional[ArithExpr]:
        if v.kind is not ValueKind.NATURAL:
            return None
        return decode(v.payload, builtin)

    def in_syntax(e: ArithExpr) -> bool:
        if not is_term(e, builtin):
            return False
        if restricted:
            return decode(evaluator.term_value(e), builtin) is not None
        return True

    def evaluate(t: ArithExpr) -> Optional[ArithExpr]:
        return decode(evaluator.term_value(t), builtin)

    descriptions = {
        InstanceId.GOEDEL: "哥德爾編碼：L_syn 為全部項，E 部分",
        InstanceId.GOEDEL_RESTRICTED: "哥德爾編碼：L_syn 限制為值是編碼的項，E 全",
        InstanceId.GOEDEL_BUILTIN: "哥德爾編碼的內建引號擴充",
    }

    return SyntaxFramework(
        instance_id=instance,
        language=InterpretedLanguage(instance, lambda e: is_expression(e, builtin), valuate),
        in_object=lambda e: True,
        in_syntax=in_syntax,
        representation=SyntaxRepresentation(
            represent=lambda e: Value(instance, ValueKind.NATURAL, encode(e)),
            unrepresent=unrepresent,
            surjective=False,
        ),
        quotation=lambda e: quote_num(e, builtin),
        evaluation=evaluate,
        built_in_quotation=builtin,
        object_is_language=True,
        syntax_within_object=True,
        total_evaluation=restricted,
        universal_disquotation=True,
        show=show,
        description=descriptions[variant],
    )
