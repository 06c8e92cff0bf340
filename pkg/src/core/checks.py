"""
框架公理檢查

check_framework 對 L_obj 樣本逐一驗證引號公理、求值公理、去引號律、單射性等，
check_transformer 驗證變換器的提升規格。失敗只被記錄，不拋出。
"""

from typing import Callable, Dict, Hashable, Iterable, List, Optional, Sequence, Set, Tuple

from ..utils.logger import get_logger
from .constants import PropertyName
from .exceptions import InputError, QuosynError
from .framework import Expr, SyntaxFramework, TransformerSpec
from .report import CheckReport, PropertyTally, build_report

logger = get_logger(__name__)

SampleCheck = Callable[[Expr], bool]


def _guard(check: SampleCheck) -> SampleCheck:
    """把契約錯誤折成失敗"""
    def guarded(e: Expr) -> bool:
        try:
            return check(e)
        except QuosynError as exc:
            logger.debug(f"檢查時發生契約錯誤: {exc}")
            return False
    return guarded


def sample_checks(inst: SyntaxFramework) -> List[Tuple[str, SampleCheck]]:
    """
    對單一 L_obj 樣本的性質列表

    每個函數回傳 True 表示該樣本通過，可直接作為最小化的失敗判定（取反）。
    """

    def quotation_axiom(e: Expr) -> bool:
        q = inst.quote(e)
        if not (inst.in_language(q) and inst.in_syntax(q)):
            return False
        return inst.same_value(inst.sem_value(q), inst.syn_value(e))

    def evaluation_axiom(e: Expr) -> bool:
        q = inst.quote(e)
        result = inst.evaluate(q)
        if result is None:
            return True
        if not inst.in_object(result):
            return False
        target = inst.unrepresent(inst.sem_value(q))
        if target is None:
            return False
        return inst.same_value(inst.sem_value(result), inst.sem_value(target))

    def disquotation(e: Expr) -> bool:
        result = inst.evaluate(inst.quote(e))
        if result is None:
            return True
        return inst.same_value(inst.sem_value(result), inst.sem_value(e))

    checks: List[Tuple[str, SampleCheck]] = [
        (PropertyName.QUOTATION_AXIOM.value, quotation_axiom),
        (PropertyName.EVALUATION_AXIOM.value, evaluation_axiom),
        (PropertyName.DISQUOTATION.value, disquotation),
    ]

    if inst.universal_disquotation:
        def syntactic_disquotation(e: Expr) -> bool:
            result = inst.evaluate(inst.quote(e))
            return result is not None and inst.same_expr(result, e)
        checks.append((PropertyName.SYNTACTIC_DISQUOTATION.value, syntactic_disquotation))

    if inst.built_in_quotation and inst.built_in_evaluation:
        def builtin_separation(e: Expr) -> bool:
            result = inst.evaluate(inst.quote(e))
            if result is None:
                return True
            if inst.same_expr(result, e):
                return False
            return inst.same_value(inst.sem_value(result), inst.sem_value(e))
        checks.append((PropertyName.BUILTIN_SEPARATION.value, builtin_separation))

    if inst.surjective:
        def direct_evaluation_totality(e: Expr) -> bool:
            return inst.direct_eval(inst.quote(e)) is not None
        checks.append((PropertyName.DIRECT_EVALUATION_TOTALITY.value, direct_evaluation_totality))

    return [(name, _guard(check)) for name, check in checks]


def syntax_evaluation_check(inst: SyntaxFramework) -> SampleCheck:
    """
    直接在 L_syn 樣本上的求值公理：E(e) 有定義時 V(E(e)) = V(E*(e))

    涵蓋不在 Q 的像中的語法運算式。
    """
    def check(e: Expr) -> bool:
        result = inst.evaluate(e)
        if result is None:
            return True
        if not inst.in_object(result):
            return False
        target = inst.direct_eval(e)
        if target is None:
            return False
        return inst.same_value(inst.sem_value(result), inst.sem_value(target))
    return _guard(check)


def _injectivity(inst: SyntaxFramework, samples: Sequence[Expr], seed: int) -> List[PropertyTally]:
    """以雜湊分組檢查 Q 與 V_syn 在樣本集上的兩兩單射性"""
    quote_tally = PropertyTally(PropertyName.QUOTE_INJECTIVITY.value, seed, inst.show)
    rep_tally = PropertyTally(PropertyName.REPRESENTATION_INJECTIVITY.value, seed, inst.show)

    def quote_key(e: Expr) -> Hashable:
        return inst.expr_key(inst.quote(e))

    for tally, key_of in ((quote_tally, quote_key), (rep_tally, inst.syn_value)):
        # 像 -> 已見過的來源運算式鍵
        seen: Dict[Hashable, Set[Hashable]] = {}
        for e in samples:
            try:
                key = key_of(e)
            except QuosynError:
                tally.record(False, e)
                continue
            sources = seen.setdefault(key, set())
            source = inst.expr_key(e)
            tally.record(not (sources - {source}), e)
            sources.add(source)
    return [quote_tally, rep_tally]


Shrinker = Callable[[Expr, Callable[[Expr], bool]], Expr]


def _shrunk(inst: SyntaxFramework, e: Expr, check: SampleCheck, shrink: Shrinker) -> Expr:
    """縮減反例；縮減後的候選必須仍在 L_obj 中且仍然失敗"""
    def fails(candidate: Expr) -> bool:
        return (inst.in_language(candidate) and inst.in_object(candidate)
                and not check(candidate))

    try:
        return shrink(e, fails)
    except (QuosynError, RecursionError) as exc:
        logger.debug(f"反例縮減失敗，保留原反例: {exc}")
        return e


def check_framework(inst: SyntaxFramework,
                    samples: Iterable[Expr],
                    syntax_samples: Iterable[Expr] = (),
                    seed: int = 0,
                    shrink: Optional[Shrinker] = None) -> CheckReport:
    """
    在樣本上檢查框架公理

    Args:
        inst: 語法框架實例
        samples: L_obj 樣本
        syntax_samples: 額外的 L_syn 樣本（求值公理、求值全性／部分性）；不在 L_syn 中的略過求值公理
        seed: 寫入報告的種子
        shrink: 反例縮減器 (反例, 失敗判定) -> 較小的反例

    Returns:
        CheckReport
    """
    samples = list(samples)
    for e in samples:
        inst.require_object(e)

    tallies: List[PropertyTally] = []
    for name, check in sample_checks(inst):
        tally = PropertyTally(name, seed, inst.show)
        for e in samples:
            tally.record(check(e), e)
        if shrink is not None and tally.counterexample is not None:
            tally.counterexample = _shrunk(inst, tally.counterexample, check, shrink)
        tallies.append(tally)

    tallies.extend(_injectivity(inst, samples, seed))

    syntax_samples = list(syntax_samples)
    # 求值公理也直接量化在 L_syn 樣本上
    axiom = next(t for t in tallies if t.name == PropertyName.EVALUATION_AXIOM.value)
    on_syntax = syntax_evaluation_check(inst)
    for e in syntax_samples:
        if _in_syntax(inst, e):
            axiom.record(on_syntax(e), e)
    if syntax_samples:
        tallies.append(_evaluation_coverage(inst, syntax_samples, seed))

    report = build_report(inst.instance_id, tallies)
    logger.debug(f"{inst.instance_id}: 檢查 {len(samples)} 個樣本，全部通過={report.all_passed}")
    return report


def _in_syntax(inst: SyntaxFramework, e: Expr) -> bool:
    try:
        return inst.in_language(e) and inst.in_syntax(e)
    except (QuosynError, RecursionError):
        return False


def _evaluation_coverage(inst: SyntaxFramework, syntax_samples: Sequence[Expr], seed: int) -> PropertyTally:
    """宣稱 E 全的框架逐一檢查定義性；其餘框架須出現至少一個未定義見證"""
    if inst.total_evaluation:
        tally = PropertyTally(PropertyName.EVALUATION_TOTALITY.value, seed, inst.show)
        for e in syntax_samples:
            try:
                tally.record(inst.evaluate(e) is not None, e)
            except QuosynError:
                tally.record(False, e)
        return tally

    tally = PropertyTally(PropertyName.EVALUATION_PARTIALITY.value, seed, inst.show)
    witness: Optional[Expr] = None
    for e in syntax_samples:
        try:
            if inst.evaluate(e) is None:
                witness = e
                break
        except QuosynError:
            continue
    tally.record(witness is not None, syntax_samples[0])
    if witness is not None:
        logger.debug(f"{inst.instance_id}: 求值未定義的見證 {inst.show(witness)}")
    return tally


def check_transformer(inst: SyntaxFramework,
                      spec: TransformerSpec,
                      samples: Iterable[Tuple[Expr, ...]],
                      seed: int = 0) -> CheckReport:
    """
    檢查 e_T(Q(e₁),…,Q(eₙ)) 與 Q(T(e₁,…,eₙ)) 的語義相等

    Raises:
        InputError: 任一元組的長度與變換器元數不符
    """
    samples = list(samples)
    for args in samples:
        if len(args) != spec.arity:
            raise InputError(f"變換器 {spec.name} 需要 {spec.arity} 個參數，得到 {len(args)}")

    def show(args: Tuple[Expr, ...]) -> str:
        return "(" + ", ".join(inst.show(a) for a in args) + ")"

    tally = PropertyTally(PropertyName.TRANSFORMER_SPECIFICATION.value, seed, show)
    for args in samples:
        try:
            if not all(spec.accepts(a) for a in args):
                raise InputError(f"變換器 {spec.name} 的輸入超出其定義域")
            lifted = spec.lifted(*[inst.quote(a) for a in args])
            direct = inst.quote(spec.transformer(*args))
            tally.record(inst.same_value(inst.sem_value(lifted), inst.sem_value(direct)), args)
        except QuosynError as exc:
            logger.debug(f"變換器 {spec.name} 檢查失敗: {exc}")
            tally.record(False, args)
    return build_report(inst.instance_id, [tally])
