"""
隨機運算式產生器

每次試驗由 (seed, trial_index) 導出獨立的 numpy 亂數產生器，因此結果與排程無關。
產生器以節點數為預算遞迴建構運算式：建構子的機率隨深度幾何遞減，
預算不足以容納任何建構子時退化為葉節點。
"""

from collections import Counter
from dataclasses import dataclass
from typing import Callable, Dict, FrozenSet, Iterable, List, Optional, Sequence, Tuple

import numpy as np

from ..core.config import ConfigManager
from ..core.constants import (
    GENERATOR_DEPTH_DECAY, GOEDEL_MAX_QUANTIFIER_DEPTH,
    HARNESS_DEFAULTS, LAMBDA_VARIABLES, LISP_SYMBOLS, PROP_VARIABLES,
    RING_COEFFICIENT_RANGE, RING_MAX_DEGREE, RING_MAX_VARIABLES, InstanceId
)
from ..core.exceptions import InputError
from ..core.framework import Expr
from ..core.quasi import children
from ..instances import goedel, lambda_calc, minilisp, prop, ring, strlang
from ..utils.logger import get_logger

logger = get_logger(__name__)

_SEED_MASK = (1 << 64) - 1
_LAMBDA_RETRIES = 20


def resolve_instance(name: object) -> InstanceId:
    """
    實例名稱 → InstanceId

    Raises:
        InputError: 未知的實例
    """
    if isinstance(name, InstanceId):
        return name
    try:
        return InstanceId.from_name(str(name))
    except ValueError as exc:
        raise InputError(str(exc)) from exc


def _is_int(v: object) -> bool:
    return isinstance(v, (int, np.integer)) and not isinstance(v, bool)


@dataclass(frozen=True)
class GenConfig:
    """
    產生器與測試套件的設定

    Args:
        instance_id: 目標實例（可傳名稱字串）
        max_size: 每個運算式的節點數上限（≥ 1）；反引號運算式至少 MIN_BACKQUOTE_SIZE 個節點，
            上限更小時測試套件不檢查反引號性質
        seed: 64 位元種子
        trials: 試驗次數（≥ 0）
    """
    instance_id: InstanceId
    max_size: int = HARNESS_DEFAULTS["max_size"]
    seed: int = HARNESS_DEFAULTS["seed"]
    trials: int = HARNESS_DEFAULTS["trials"]

    def __post_init__(self):
        object.__setattr__(self, 'instance_id', resolve_instance(self.instance_id))
        if not _is_int(self.max_size) or self.max_size < 1:
            raise InputError(f"max_size 必須是正整數: {self.max_size!r}")
        if not _is_int(self.trials) or self.trials < 0:
            raise InputError(f"trials 必須是非負整數: {self.trials!r}")
        if not _is_int(self.seed):
            raise InputError(f"seed 必須是整數: {self.seed!r}")

    @classmethod
    def from_config(cls, instance_id: object, **overrides) -> 'GenConfig':
        """以設定檔的 harness 區段為預設值，overrides 中非 None 的值優先"""
        config = ConfigManager()
        values = {key: config.get_int(f'harness.{key}') for key in ("max_size", "seed", "trials")}
        values.update({key: value for key, value in overrides.items() if value is not None})
        return cls(instance_id, **values)


def trial_rng(seed: int, trial_index: int) -> np.random.Generator:
    """第 trial_index 次試驗的子亂數產生器"""
    return np.random.default_rng([int(seed) & _SEED_MASK, int(trial_index)])


class _Draw:
    """對 numpy Generator 的小包裝"""

    def __init__(self, rng: np.random.Generator):
        self.rng = rng

    def pick(self, items: Sequence):
        return items[int(self.rng.integers(len(items)))]

    def integer(self, low: int, high: int) -> int:
        """[low, high] 中的整數"""
        return int(self.rng.integers(low, high + 1))

    def chance(self, p: float) -> bool:
        return float(self.rng.random()) < p

    def leaf(self, budget: int, min_size: int, depth: int) -> bool:
        """預算不足或依深度遞減的機率決定是否產生葉節點"""
        if budget < min_size:
            return True
        return not self.chance(0.95 * GENERATOR_DEPTH_DECAY ** (depth / 2))

    def split(self, total: int, parts: int) -> List[int]:
        """把 total 個節點分給 parts 個子節點，每份至少 1"""
        if parts == 1:
            return [total]
        cuts = np.sort(self.rng.choice(np.arange(1, total), size=parts - 1, replace=False))
        bounds = [0] + [int(c) for c in cuts] + [total]
        return [bounds[i + 1] - bounds[i] for i in range(parts)]


def _options(table: Sequence[Tuple[str, int]], budget: int) -> List[str]:
    return [name for name, min_size in table if min_size <= budget]


# ----------------------------------------------------------------------
# prop
# ----------------------------------------------------------------------

_PROP_LEAVES: Tuple[prop.Formula, ...] = (prop.TRUE, prop.FALSE) + tuple(
    prop.Var(name) for name in PROP_VARIABLES
)
_PROP_TABLE = (("neg", 2), ("and", 3), ("or", 3))


def gen_formula(draw: _Draw, budget: int, depth: int = 0) -> prop.Formula:
    if draw.leaf(budget, 2, depth):
        return draw.pick(_PROP_LEAVES)
    kind = draw.pick(_options(_PROP_TABLE, budget))
    if kind == "neg":
        return prop.Neg(gen_formula(draw, budget - 1, depth + 1))
    left, right = draw.split(budget - 1, 2)
    build = prop.And if kind == "and" else prop.Or
    return build(gen_formula(draw, left, depth + 1), gen_formula(draw, right, depth + 1))


# ----------------------------------------------------------------------
# strlang
# ----------------------------------------------------------------------

def gen_str_term(draw: _Draw, budget: int, sort: strlang.Sort = strlang.Sort.STRING,
                 depth: int = 0) -> strlang.StrTerm:
    """良類別的 StrTerm；head / tail 可能作用在空字串上"""
    if sort is strlang.Sort.SYMBOL:
        if draw.leaf(budget, 2, depth):
            return strlang.SymConst(draw.pick(strlang.ALPHABET))
        return strlang.Head(gen_str_term(draw, budget - 1, strlang.Sort.STRING, depth + 1))
    if draw.leaf(budget, 2, depth):
        return strlang.NIL
    kind = draw.pick(_options((("cons", 3), ("tail", 2)), budget))
    if kind == "tail":
        return strlang.Tail(gen_str_term(draw, budget - 1, strlang.Sort.STRING, depth + 1))
    left, right = draw.split(budget - 1, 2)
    return strlang.Cons(gen_str_term(draw, left, strlang.Sort.SYMBOL, depth + 1),
                        gen_str_term(draw, right, strlang.Sort.STRING, depth + 1))


# ----------------------------------------------------------------------
# goedel
# ----------------------------------------------------------------------

_ARITH_LEAVES: Tuple[goedel.ArithExpr, ...] = (goedel.ZERO,) + tuple(
    goedel.VarT(name) for name in goedel.VARIABLES
)


def gen_arith(draw: _Draw, budget: int, sort: str = goedel.TERM, builtin: bool = False,
              depth: int = 0, quantifiers: int = 0) -> goedel.ArithExpr:
    """良類別的算術運算式；公式至少需要 3 個節點，量詞巢狀深度有上限"""
    if sort == goedel.TERM:
        if draw.leaf(budget, 2, depth):
            return draw.pick(_ARITH_LEAVES)
        table = [("succ", 2), ("plus", 3), ("times", 3)]
        if builtin:
            table.append(("quote", 2))
        kind = draw.pick(_options(table, budget))
        if kind == "succ":
            return goedel.Succ(gen_arith(draw, budget - 1, goedel.TERM, builtin, depth + 1, quantifiers))
        if kind == "quote":
            inner = goedel.FORMULA if budget - 1 >= 3 and draw.chance(0.5) else goedel.TERM
            return goedel.Quote(gen_arith(draw, budget - 1, inner, builtin, depth + 1, quantifiers))
        left, right = draw.split(budget - 1, 2)
        build = goedel.Plus if kind == "plus" else goedel.Times
        return build(gen_arith(draw, left, goedel.TERM, builtin, depth + 1, quantifiers),
                     gen_arith(draw, right, goedel.TERM, builtin, depth + 1, quantifiers))

    if budget < 3:
        raise InputError(f"公式至少需要 3 個節點: {budget}")
    table = [("eq", 3), ("not", 4), ("and", 7)]
    if quantifiers < GOEDEL_MAX_QUANTIFIER_DEPTH:
        table.append(("forall", 4))
    kind = "eq" if draw.leaf(budget, 4, depth) else draw.pick(_options(table, budget))
    if kind == "eq":
        left, right = draw.split(budget - 1, 2)
        return goedel.Eq(gen_arith(draw, left, goedel.TERM, builtin, depth + 1, quantifiers),
                         gen_arith(draw, right, goedel.TERM, builtin, depth + 1, quantifiers))
    if kind == "not":
        return goedel.NotF(gen_arith(draw, budget - 1, goedel.FORMULA, builtin, depth + 1, quantifiers))
    if kind == "forall":
        var = draw.pick(goedel.VARIABLES)
        return goedel.ForAll(var, gen_arith(draw, budget - 1, goedel.FORMULA, builtin,
                                            depth + 1, quantifiers + 1))
    left = draw.integer(3, budget - 4)
    return goedel.AndF(gen_arith(draw, left, goedel.FORMULA, builtin, depth + 1, quantifiers),
                       gen_arith(draw, budget - 1 - left, goedel.FORMULA, builtin, depth + 1, quantifiers))


def _gen_goedel(draw: _Draw, budget: int, builtin: bool) -> goedel.ArithExpr:
    sort = goedel.FORMULA if budget >= 3 and draw.chance(0.5) else goedel.TERM
    return gen_arith(draw, budget, sort, builtin)


# ----------------------------------------------------------------------
# minilisp
# ----------------------------------------------------------------------

def _lisp_atom(draw: _Draw) -> minilisp.SExpr:
    kind = draw.pick(("num", "num", "sym", "nil"))
    if kind == "num":
        return minilisp.Num(draw.integer(-9, 9))
    if kind == "sym":
        return minilisp.Sym(draw.pick(LISP_SYMBOLS))
    return minilisp.NIL


def _form(head: str, *args: minilisp.SExpr) -> minilisp.SExpr:
    return minilisp.from_list([minilisp.Sym(head)] + list(args))


# (名稱, 最少節點數)；清單形式的節點數含串列本身與開頭符號
_LISP_TABLE = (
    ("arith", 4), ("quote", 3), ("if", 5), ("cons", 4), ("carcdr", 3), ("list", 3),
    ("eval", 3), ("let", 7), ("apply", 7), ("dotted", 3),
)


def gen_sexpr(draw: _Draw, budget: int, depth: int = 0) -> minilisp.SExpr:
    """類程式的 S 式；不產生以變數為開頭的呼叫，因此求值必定停機"""
    if draw.leaf(budget, 3, depth):
        return _lisp_atom(draw)
    kind = draw.pick(_options(_LISP_TABLE, budget))

    def args(count: int, total: int) -> List[minilisp.SExpr]:
        return [gen_sexpr(draw, b, depth + 1) for b in draw.split(total, count)]

    if kind == "arith":
        return _form(draw.pick(("+", "-", "*", "=")), *args(2, budget - 2))
    if kind == "quote":
        return _form("quote", *args(1, budget - 2))
    if kind == "if":
        return _form("if", *args(3, budget - 2))
    if kind == "cons":
        return _form("cons", *args(2, budget - 2))
    if kind == "carcdr":
        return _form(draw.pick(("car", "cdr")), *args(1, budget - 2))
    if kind == "list":
        count = draw.integer(1, min(4, budget - 2))
        return _form("list", *args(count, budget - 2))
    if kind == "eval":
        return _form("eval", *args(1, budget - 2))
    if kind == "let":
        # (let ((x v)) body)
        value, body = args(2, budget - 5)
        binding = minilisp.from_list([minilisp.Sym("x"), value])
        return _form("let", minilisp.from_list([binding]), body)
    if kind == "apply":
        # ((lambda (x) body) arg)
        body, arg = args(2, budget - 5)
        fn = _form("lambda", minilisp.from_list([minilisp.Sym("x")]), body)
        return minilisp.from_list([fn, arg])
    head = gen_sexpr(draw, budget - 2, depth + 1)
    tail = minilisp.Num(draw.integer(-9, 9)) if draw.chance(0.5) else minilisp.Sym(draw.pick(LISP_SYMBOLS))
    return minilisp.Pair(head, tail)


def _closed_arith(draw: _Draw, budget: int, depth: int = 0) -> minilisp.SExpr:
    """只含數字與 + - * 的封閉運算式（值必定有定義）"""
    if draw.leaf(budget, 4, depth):
        return minilisp.Num(draw.integer(-9, 9))
    left, right = draw.split(budget - 2, 2)
    return _form(draw.pick(("+", "-", "*")), _closed_arith(draw, left, depth + 1),
                 _closed_arith(draw, right, depth + 1))


def _template(draw: _Draw, budget: int, depth: int) -> minilisp.SExpr:
    if budget >= 3 and draw.chance(0.3):
        return _form("unquote", _closed_arith(draw, budget - 2, depth + 1))
    if draw.leaf(budget, 2, depth):
        return minilisp.Num(draw.integer(-9, 9)) if draw.chance(0.5) else minilisp.Sym(draw.pick(LISP_SYMBOLS))
    count = draw.integer(1, min(4, budget - 1))
    return minilisp.from_list([_template(draw, b, depth + 1) for b in draw.split(budget - 1, count)])


# `atom 是最小的反引號運算式
MIN_BACKQUOTE_SIZE = 3


def gen_backquote(draw: _Draw, budget: int) -> minilisp.SExpr:
    """
    不巢狀的反引號 (quasiquote template)，每個逗號運算式的值都有定義

    節點數不超過 max(budget, MIN_BACKQUOTE_SIZE)。
    """
    if budget < 4:
        atom = minilisp.Num(draw.integer(-9, 9)) if draw.chance(0.5) else minilisp.Sym(draw.pick(LISP_SYMBOLS))
        return _form("quasiquote", atom)
    count = draw.integer(1, min(4, budget - 3))
    items = [_template(draw, b, 1) for b in draw.split(budget - 3, count)]
    return _form("quasiquote", minilisp.from_list(items))


# ----------------------------------------------------------------------
# lambda
# ----------------------------------------------------------------------

def gen_lambda_term(draw: _Draw, budget: int, depth: int = 0) -> lambda_calc.LamTerm:
    if draw.leaf(budget, 2, depth):
        return lambda_calc.VarL(draw.pick(LAMBDA_VARIABLES))
    kind = draw.pick(_options((("abs", 2), ("app", 3)), budget))
    if kind == "abs":
        return lambda_calc.Abs(draw.pick(LAMBDA_VARIABLES), gen_lambda_term(draw, budget - 1, depth + 1))
    left, right = draw.split(budget - 1, 2)
    return lambda_calc.App(gen_lambda_term(draw, left, depth + 1),
                           gen_lambda_term(draw, right, depth + 1))


def _generator_fuel() -> int:
    return ConfigManager().get_int('lambda.generator_fuel')


def gen_normalizing_term(draw: _Draw, budget: int) -> lambda_calc.LamTerm:
    """在產生器燃料內有正規形的項；多次重抽仍失敗時退回單一變數"""
    fuel = _generator_fuel()
    for _ in range(_LAMBDA_RETRIES):
        t = gen_lambda_term(draw, budget)
        if lambda_calc.beta_nf(t, fuel) is not None:
            return t
    return lambda_calc.VarL(LAMBDA_VARIABLES[0])


# ----------------------------------------------------------------------
# ring
# ----------------------------------------------------------------------

def gen_ring(draw: _Draw, budget: int, degree: int = RING_MAX_DEGREE,
             depth: int = 0) -> ring.RingExpr:
    """次數上界不超過 degree 的環運算式"""
    if draw.leaf(budget, 2, depth):
        if degree >= 1 and draw.chance(0.5):
            return ring.VarR(draw.integer(0, RING_MAX_VARIABLES - 1))
        return ring.Const(draw.integer(-RING_COEFFICIENT_RANGE, RING_COEFFICIENT_RANGE))
    kind = draw.pick(_options((("neg", 2), ("add", 3), ("mul", 3)), budget))
    if kind == "neg":
        return ring.NegR(gen_ring(draw, budget - 1, degree, depth + 1))
    left_budget, right_budget = draw.split(budget - 1, 2)
    left = gen_ring(draw, left_budget, degree, depth + 1)
    if kind == "add":
        return ring.Add(left, gen_ring(draw, right_budget, degree, depth + 1))
    right = gen_ring(draw, right_budget, degree - ring.degree_bound(left), depth + 1)
    return ring.Mul(left, right)


# ----------------------------------------------------------------------
# 入口
# ----------------------------------------------------------------------

_ObjectGen = Callable[[_Draw, int], Expr]

_OBJECT_GENERATORS: Dict[InstanceId, _ObjectGen] = {
    InstanceId.PROP: lambda draw, n: gen_formula(draw, n),
    InstanceId.STRLANG: lambda draw, n: gen_formula(draw, n),
    InstanceId.GOEDEL: lambda draw, n: _gen_goedel(draw, n, builtin=False),
    InstanceId.GOEDEL_RESTRICTED: lambda draw, n: _gen_goedel(draw, n, builtin=False),
    InstanceId.GOEDEL_BUILTIN: lambda draw, n: _gen_goedel(draw, n, builtin=True),
    InstanceId.MINILISP: lambda draw, n: gen_sexpr(draw, n),
    InstanceId.LAMBDA: lambda draw, n: gen_normalizing_term(draw, n),
    InstanceId.RING: lambda draw, n: gen_ring(draw, n),
}


def _syntax_lambda(draw: _Draw, n: int) -> lambda_calc.LamTerm:
    t = gen_normalizing_term(draw, n)
    return lambda_calc.beta_nf(t, _generator_fuel()) or lambda_calc.VarL(LAMBDA_VARIABLES[0])


_SYNTAX_GENERATORS: Dict[InstanceId, _ObjectGen] = {
    InstanceId.PROP: lambda draw, n: gen_formula(draw, n),
    InstanceId.STRLANG: lambda draw, n: gen_str_term(draw, n),
    InstanceId.GOEDEL: lambda draw, n: gen_arith(draw, n),
    InstanceId.GOEDEL_RESTRICTED: lambda draw, n: gen_arith(draw, n),
    InstanceId.GOEDEL_BUILTIN: lambda draw, n: gen_arith(draw, n, builtin=True),
    InstanceId.MINILISP: lambda draw, n: gen_sexpr(draw, n),
    InstanceId.LAMBDA: _syntax_lambda,
    InstanceId.RING: lambda draw, n: ring.pquote(gen_ring(draw, n)),
}


# 每個實例的物件語言產生器應覆蓋的建構子
CONSTRUCTORS: Dict[InstanceId, FrozenSet[str]] = {
    InstanceId.PROP: frozenset({"TrueLit", "FalseLit", "Var", "Neg", "And", "Or"}),
    InstanceId.STRLANG: frozenset({"TrueLit", "FalseLit", "Var", "Neg", "And", "Or"}),
    InstanceId.GOEDEL: frozenset({"Zero", "Succ", "Plus", "Times", "VarT",
                                  "Eq", "NotF", "AndF", "ForAll"}),
    InstanceId.GOEDEL_RESTRICTED: frozenset({"Zero", "Succ", "Plus", "Times", "VarT",
                                             "Eq", "NotF", "AndF", "ForAll"}),
    InstanceId.GOEDEL_BUILTIN: frozenset({"Zero", "Succ", "Plus", "Times", "VarT",
                                          "Eq", "NotF", "AndF", "ForAll", "Quote"}),
    InstanceId.MINILISP: frozenset({"Num", "Sym", "NilList", "Pair"}),
    InstanceId.LAMBDA: frozenset({"VarL", "App", "Abs"}),
    InstanceId.RING: frozenset({"Const", "VarR", "Add", "Mul", "NegR"}),
}


def gen_expr(cfg: GenConfig, trial_index: int = 0) -> Expr:
    """
    第 trial_index 次試驗的物件語言運算式（prop 實例回傳語法樹）

    相同的 (cfg.seed, trial_index) 得到相同的運算式；節點數不超過 cfg.max_size。
    """
    return _OBJECT_GENERATORS[cfg.instance_id](_Draw(trial_rng(cfg.seed, trial_index)), cfg.max_size)


def gen_syntax_expr(cfg: GenConfig, trial_index: int = 0) -> Expr:
    """第 trial_index 次試驗的語法語言候選運算式（未必屬於 L_syn）"""
    # 與 gen_expr 使用不同的子種子
    rng = trial_rng(cfg.seed, trial_index + (1 << 32))
    return _SYNTAX_GENERATORS[cfg.instance_id](_Draw(rng), cfg.max_size)


def gen_backquote_expr(cfg: GenConfig, trial_index: int = 0) -> minilisp.SExpr:
    """第 trial_index 次試驗的反引號運算式"""
    rng = trial_rng(cfg.seed, trial_index + (2 << 32))
    return gen_backquote(_Draw(rng), cfg.max_size)


def draw_for(cfg: GenConfig, trial_index: int, stream: int = 3) -> _Draw:
    """附加性質（賦值、數字對等）使用的亂數串流"""
    return _Draw(trial_rng(cfg.seed, trial_index + (stream << 32)))


def constructor_counts(exprs: Iterable[Expr]) -> Counter:
    """各建構子（類別名）出現的次數"""
    counts: Counter = Counter()
    for e in exprs:
        stack = [e]
        while stack:
            node = stack.pop()
            counts[type(node).__name__] += 1
            stack.extend(children(node))
    return counts


def missing_constructors(instance_id: InstanceId, exprs: Iterable[Expr]) -> FrozenSet[str]:
    """產生結果中沒有出現過的建構子"""
    return CONSTRUCTORS[resolve_instance(instance_id)] - set(constructor_counts(exprs))


def generate(cfg: GenConfig, count: Optional[int] = None) -> List[Expr]:
    """依序產生 count（預設 cfg.trials）個運算式"""
    count = cfg.trials if count is None else count
    return [gen_expr(cfg, i) for i in range(count)]
