"""
測試套件

run_suite 依 GenConfig 產生試驗輸入，在核心性質（check_framework）之外
再跑各實例專屬的性質，並合併成一份 CheckReport。試驗以執行緒池並行產生，
每次試驗的亂數只取決於 (seed, trial_index)，報告與排程無關。
"""

import dataclasses
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from typing import Callable, Dict, List, Optional, Tuple

from ..core.checks import Shrinker, check_framework, check_transformer
from ..core.config import ConfigManager
from ..core.constants import (
    RING_ASSIGNMENTS, RING_MAX_VARIABLES, TRANSFORMER_NUMERAL_RANGE, InstanceId, PropertyName,
    ValueKind
)
from ..core.exceptions import InputError, QuosynError
from ..core.framework import Expr, SyntaxFramework, Value
from ..core.quasi import quasiquote
from ..core.report import CheckReport, PropertyTally, build_report
from ..instances import goedel, lambda_calc, minilisp, prop, ring, strlang
from ..utils.logger import get_logger, log_execution_time
from .generators import (
    MIN_BACKQUOTE_SIZE, GenConfig, draw_for, gen_backquote_expr, gen_expr, gen_str_term,
    gen_syntax_expr, resolve_instance
)
from .minimize import minimize

logger = get_logger(__name__)

# 性質名 -> (是否通過, 顯示用的主體)
ExtraResults = Dict[str, Tuple[bool, Expr]]
ExtraCheck = Callable[[SyntaxFramework, GenConfig, int, Expr], ExtraResults]


def _safely(check: Callable[[], bool]) -> bool:
    try:
        return bool(check())
    except (QuosynError, RecursionError) as exc:
        logger.debug(f"附加性質檢查時發生錯誤: {exc}")
        return False


# ----------------------------------------------------------------------
# 各實例的附加性質
# ----------------------------------------------------------------------

def _prop_extras(inst: SyntaxFramework, cfg: GenConfig, index: int, f: prop.Formula) -> ExtraResults:
    draw = draw_for(cfg, index)
    names = prop.variables(f)
    total = {name: draw.chance(0.5) for name in names}
    partial = {name: v for name, v in total.items() if draw.chance(0.5)}

    def sound() -> bool:
        result = prop.value(f, total)
        expected = prop.TRUE if prop.truth_value(f, total) else prop.FALSE
        return result == expected

    def simplification() -> bool:
        # total 是 partial 的補全
        return prop.truth_value(prop.value(f, partial), total) == prop.truth_value(f, total)

    return {
        PropertyName.ROUND_TRIP.value: (_safely(lambda: prop.parse(prop.print_formula(f)) == f), f),
        PropertyName.VALUE_SOUNDNESS.value: (_safely(sound), f),
        PropertyName.SIMPLIFICATION_CORRECTNESS.value: (_safely(simplification), f),
    }


def _strlang_extras(inst: SyntaxFramework, cfg: GenConfig, index: int, f: prop.Formula) -> ExtraResults:
    draw = draw_for(cfg, index)
    symbol = strlang.SymConst(draw.pick(strlang.ALPHABET))
    rest = gen_str_term(draw, cfg.max_size)
    if strlang.term_value(rest) is None:
        rest = strlang.quote_str(f)
    pair = strlang.Cons(symbol, rest)

    def laws() -> bool:
        return (strlang.term_value(strlang.Head(pair)) == symbol.symbol
                and strlang.term_value(strlang.Tail(pair)) == strlang.term_value(rest))

    return {PropertyName.HEAD_TAIL_LAWS.value: (_safely(laws), pair)}


def _goedel_extras(inst: SyntaxFramework, cfg: GenConfig, index: int,
                   e: goedel.ArithExpr) -> ExtraResults:
    builtin = cfg.instance_id is InstanceId.GOEDEL_BUILTIN
    results: ExtraResults = {
        PropertyName.DECODE_ROUND_TRIP.value: (
            _safely(lambda: goedel.decode(goedel.encode(e), builtin) == e), e
        ),
    }
    if builtin:
        def builtin_quotation() -> bool:
            quoted = goedel.Quote(e)
            expected = Value(inst.instance_id, ValueKind.NATURAL, goedel.encode(e))
            return inst.same_value(inst.sem_value(quoted), expected) and quoted != e
        results[PropertyName.BUILTIN_QUOTATION.value] = (_safely(builtin_quotation), e)
    else:
        a, b = _numeral_pair(cfg, index)

        def add_evaluation() -> bool:
            total = goedel.add_transformer(goedel.numeral(a), goedel.numeral(b))
            return goedel.term_value(total) == a + b
        results[PropertyName.ADD_EVALUATION.value] = (
            _safely(add_evaluation), goedel.Plus(goedel.numeral(a), goedel.numeral(b))
        )
    return results


def _numeral_pair(cfg: GenConfig, index: int) -> Tuple[int, int]:
    draw = draw_for(cfg, index, stream=4)
    return (draw.integer(0, TRANSFORMER_NUMERAL_RANGE - 1),
            draw.integer(0, TRANSFORMER_NUMERAL_RANGE - 1))


def _minilisp_extras(inst: SyntaxFramework, cfg: GenConfig, index: int,
                     e: minilisp.SExpr) -> ExtraResults:
    interpreter = minilisp.LispInterpreter()
    backquote = gen_backquote_expr(cfg, index)

    def equivalence() -> bool:
        direct = interpreter.interp_backquote(backquote)
        quoted = quasiquote(inst, minilisp.expand_backquote(backquote))
        via_quasi = None if quoted is None else interpreter.interp(quoted)
        return direct is not None and direct == via_quasi

    results: ExtraResults = {
        PropertyName.IDENTITY_REPRESENTATION.value: (
            _safely(lambda: interpreter.interp(minilisp.quote_of(e)) == e), e
        ),
        PropertyName.PURITY.value: (_safely(lambda: interpreter.interp(e) == interpreter.interp(e)), e),
    }
    # 節點數上限容不下任何反引號運算式時不檢查
    if cfg.max_size >= MIN_BACKQUOTE_SIZE:
        results[PropertyName.BACKQUOTE_EQUIVALENCE.value] = (_safely(equivalence), backquote)
    return results


def _lambda_extras(inst: SyntaxFramework, cfg: GenConfig, index: int,
                   t: lambda_calc.LamTerm) -> ExtraResults:
    config = ConfigManager()
    fuel = config.get_int('lambda.fuel')
    self_interp_trials = config.get_int('lambda.self_interp_trials')

    def determinism() -> bool:
        first = lambda_calc.beta_nf(t, fuel)
        return first is not None and first == lambda_calc.beta_nf(t, fuel)

    results: ExtraResults = {
        PropertyName.SCHEMA_NORMAL_FORM.value: (_safely(lambda: lambda_calc.is_normal(lambda_calc.rep(t))), t),
        PropertyName.DETERMINISM.value: (_safely(determinism), t),
    }
    if index < self_interp_trials:
        def self_interpretation() -> bool:
            interpreted = lambda_calc.run_self_interp(t, fuel)
            normal = lambda_calc.beta_nf(t, fuel)
            return (interpreted is not None and normal is not None
                    and lambda_calc.alpha_eq(interpreted, normal))
        results[PropertyName.SELF_INTERPRETATION.value] = (_safely(self_interpretation), t)
    return results


def _ring_extras(inst: SyntaxFramework, cfg: GenConfig, index: int, e: ring.RingExpr) -> ExtraResults:
    draw = draw_for(cfg, index)
    normal = ring.normalize(ring.pquote(e))
    back = ring.interp_p(ring.to_poly(normal))

    def preserved() -> bool:
        for _ in range(RING_ASSIGNMENTS):
            phi = {i: draw.integer(-10, 10) for i in range(RING_MAX_VARIABLES)}
            if ring.eval_ring(back, phi) != ring.eval_ring(e, phi):
                return False
        return True

    return {
        PropertyName.SEMANTIC_PRESERVATION.value: (_safely(preserved), e),
        PropertyName.IDEMPOTENCE.value: (_safely(lambda: ring.normalize(ring.to_poly(normal)) == normal), e),
    }


# ----------------------------------------------------------------------
# 實例登記
# ----------------------------------------------------------------------

def _identity(e: Expr) -> Expr:
    return e


def _goedel_fixed_samples(builtin: bool) -> List[Expr]:
    """求值未定義的見證：最小非編碼的數字項"""
    limit = ConfigManager().get_int('goedel.scan_limit')
    n = goedel.smallest_non_code(limit, builtin)
    return [] if n is None else [goedel.numeral(n)]


@dataclass(frozen=True)
class InstanceSuite:
    """一個實例的建構方式、物件轉換、見證與附加性質"""
    build: Callable[[], SyntaxFramework]
    extra_names: Tuple[str, ...] = ()
    extras: Optional[ExtraCheck] = None
    to_object: Callable[[Expr], Expr] = _identity
    fixed_samples: Callable[[], List[Expr]] = lambda: []
    transformer: bool = False


SUITES: Dict[InstanceId, InstanceSuite] = {
    InstanceId.PROP: InstanceSuite(
        build=prop.build_framework,
        extra_names=(PropertyName.ROUND_TRIP.value, PropertyName.VALUE_SOUNDNESS.value,
                     PropertyName.SIMPLIFICATION_CORRECTNESS.value),
        extras=_prop_extras,
        to_object=prop.print_formula,
    ),
    InstanceId.STRLANG: InstanceSuite(
        build=strlang.build_framework,
        extra_names=(PropertyName.HEAD_TAIL_LAWS.value,),
        extras=_strlang_extras,
        fixed_samples=lambda: [strlang.NIL],
    ),
    InstanceId.GOEDEL: InstanceSuite(
        build=lambda: goedel.build_framework(InstanceId.GOEDEL),
        extra_names=(PropertyName.DECODE_ROUND_TRIP.value, PropertyName.ADD_EVALUATION.value),
        extras=_goedel_extras,
        fixed_samples=lambda: _goedel_fixed_samples(False),
        transformer=True,
    ),
    InstanceId.GOEDEL_RESTRICTED: InstanceSuite(
        build=lambda: goedel.build_framework(InstanceId.GOEDEL_RESTRICTED),
        extra_names=(PropertyName.DECODE_ROUND_TRIP.value, PropertyName.ADD_EVALUATION.value),
        extras=_goedel_extras,
        transformer=True,
    ),
    InstanceId.GOEDEL_BUILTIN: InstanceSuite(
        build=lambda: goedel.build_framework(InstanceId.GOEDEL_BUILTIN),
        extra_names=(PropertyName.DECODE_ROUND_TRIP.value, PropertyName.BUILTIN_QUOTATION.value),
        extras=_goedel_extras,
        fixed_samples=lambda: _goedel_fixed_samples(True),
    ),
    InstanceId.MINILISP: InstanceSuite(
        build=minilisp.build_framework,
        extra_names=(PropertyName.IDENTITY_REPRESENTATION.value,
                     PropertyName.BACKQUOTE_EQUIVALENCE.value, PropertyName.PURITY.value),
        extras=_minilisp_extras,
    ),
    InstanceId.LAMBDA: InstanceSuite(
        build=lambda_calc.build_framework,
        extra_names=(PropertyName.SCHEMA_NORMAL_FORM.value, PropertyName.DETERMINISM.value,
                     PropertyName.SELF_INTERPRETATION.value),
        extras=_lambda_extras,
        fixed_samples=lambda: [lambda_calc.VarL("x")],
    ),
    InstanceId.RING: InstanceSuite(
        build=ring.build_framework,
        extra_names=(PropertyName.SEMANTIC_PRESERVATION.value, PropertyName.IDEMPOTENCE.value),
        extras=_ring_extras,
    ),
}


def build_instance(instance_id: object) -> SyntaxFramework:
    """
    依名稱建立語法框架

    Raises:
        InputError: 未知的實例
    """
    return SUITES[resolve_instance(instance_id)].build()


def corrupt_quotation(inst: SyntaxFramework, pivot: Expr) -> SyntaxFramework:
    """
    變異測試用：把 Q 換成對任何輸入都回傳 Q(pivot) 的壞引號

    Raises:
        MembershipError: pivot 不在 L_obj 中
    """
    inst.require_object(pivot)
    original = inst.quotation
    return dataclasses.replace(inst, quotation=lambda e: original(pivot),
                               description=f"{inst.description}（Q 已損壞）")


def tree_shrinker(inst: SyntaxFramework) -> Shrinker:
    """在語法樹上最小化反例，再轉回 L_obj 運算式"""
    def shrink(e: Expr, fails: Callable[[Expr], bool]) -> Expr:
        tree = inst.as_tree(e)
        smallest = minimize(tree, lambda t: fails(inst.from_tree(t)))
        return inst.from_tree(smallest)
    return shrink


# ----------------------------------------------------------------------
# 執行
# ----------------------------------------------------------------------

@dataclass(frozen=True)
class _Trial:
    generated: Expr
    sample: Expr
    syntax: Expr
    extras: ExtraResults
    pair: Optional[Tuple[Expr, Expr]] = None


def _run_trial(cfg: GenConfig, suite: InstanceSuite, inst: SyntaxFramework, index: int) -> _Trial:
    generated = gen_expr(cfg, index)
    extras = suite.extras(inst, cfg, index, generated) if suite.extras else {}
    pair = None
    if suite.transformer:
        a, b = _numeral_pair(cfg, index)
        pair = (goedel.numeral(a), goedel.numeral(b))
    return _Trial(generated, suite.to_object(generated), gen_syntax_expr(cfg, index), extras, pair)


def _is_syntax(inst: SyntaxFramework, e: Expr) -> bool:
    try:
        return inst.in_language(e) and inst.in_syntax(e)
    except (QuosynError, RecursionError):
        return False


def _workers() -> int:
    return ConfigManager().get_int('harness.workers')


@log_execution_time(logger)
def run_suite(cfg: GenConfig,
              framework: Optional[SyntaxFramework] = None,
              workers: Optional[int] = None,
              shrink: bool = True) -> CheckReport:
    """
    執行一個實例的完整性質套件

    Args:
        cfg: 產生器設定
        framework: 覆寫預設建立的框架（例如損壞引號的變異測試）
        workers: 執行緒數（預設取設定 harness.workers）
        shrink: 是否最小化核心性質的反例

    Returns:
        CheckReport；trials 為 0 時回傳空報告

    Raises:
        InputError: framework 與 cfg 的實例不一致
    """
    suite = SUITES[cfg.instance_id]
    inst = framework or suite.build()
    if inst.instance_id != cfg.instance_id.value:
        raise InputError(f"框架實例 {inst.instance_id} 與設定 {cfg.instance_id.value} 不一致")
    if cfg.trials == 0:
        return CheckReport(inst.instance_id)

    pool_size = workers or _workers()
    logger.info(f"執行 {inst.instance_id} 套件: trials={cfg.trials} max_size={cfg.max_size} "
                f"seed={cfg.seed} workers={pool_size}")
    with ThreadPoolExecutor(max_workers=pool_size) as executor:
        trials = list(executor.map(lambda i: _run_trial(cfg, suite, inst, i), range(cfg.trials)))

    samples = [trial.sample for trial in trials]
    syntax_samples = list(suite.fixed_samples())
    syntax_samples.extend(t.syntax for t in trials if _is_syntax(inst, t.syntax))
    for e in samples:
        try:
            quoted = inst.quote(e)
        except QuosynError:
            continue
        if _is_syntax(inst, quoted):
            syntax_samples.append(quoted)

    report = check_framework(inst, samples, syntax_samples, cfg.seed,
                             tree_shrinker(inst) if shrink else None)

    tallies: List[PropertyTally] = []
    for name in suite.extra_names:
        tally = PropertyTally(name, cfg.seed, inst.show)
        for trial in trials:
            if name in trial.extras:
                ok, subject = trial.extras[name]
                tally.record(ok, subject)
        if tally.trials:
            tallies.append(tally)
    report = report.merge(build_report(inst.instance_id, tallies))

    if suite.transformer:
        pairs = [trial.pair for trial in trials]
        report = report.merge(check_transformer(inst, goedel.ADD, pairs, cfg.seed))

    if not report.all_passed:
        failed = [r.name for r in report.properties if not r.passed]
        logger.info(f"{inst.instance_id}: 性質失敗 {failed}")
    return report
