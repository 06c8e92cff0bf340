"""
語法框架抽象

一個語法框架 F = (D_syn, V_syn, L_syn, Q, E) 建立在一個解釋語言 (L, D_sem, V_sem) 之上：
- InterpretedLanguage：語言 L 的成員測試與全的語義賦值 V_sem
- SyntaxRepresentation：單射的語法賦值 V_syn 及其反查 V_syn⁻¹
- SyntaxFramework：L_obj / L_syn 的成員測試、引號 Q、求值 E 與各種旗標

部分性一律以 None 表示；不在要求的語言中的輸入則拋出 MembershipError。
"""

from dataclasses import dataclass, field
from typing import Any, Callable, Hashable, Optional

from .constants import BOTTOM_TEXT, ValueKind
from .exceptions import InputError, MembershipError

Expr = Any


@dataclass(frozen=True)
class Value:
    """語義值或語法值：帶實例標籤、種類與負載"""
    instance: str
    kind: ValueKind
    payload: Hashable = None

    @property
    def is_bottom(self) -> bool:
        return self.kind is ValueKind.BOTTOM

    def __str__(self) -> str:
        if self.is_bottom:
            return BOTTOM_TEXT
        return f"{self.kind.value}:{self.payload}"


def bottom(instance: str) -> Value:
    """某實例的 ⊥ 值"""
    return Value(instance, ValueKind.BOTTOM)


def _identity(e: Expr) -> Expr:
    return e


@dataclass(frozen=True)
class InterpretedLanguage:
    """解釋語言 (L, D_sem, V_sem)；D_sem 隱含為 V_sem 的值域"""
    language_id: str
    contains: Callable[[Expr], bool]
    valuate: Callable[[Expr], Value]


@dataclass(frozen=True)
class SyntaxRepresentation:
    """語法表示 (D_syn, V_syn)，附帶顯式解碼器 V_syn⁻¹"""
    represent: Callable[[Expr], Value]
    unrepresent: Callable[[Value], Optional[Expr]]
    surjective: bool = False


@dataclass(frozen=True)
class SyntaxFramework:
    """
    語法框架實例

    Args:
        instance_id: 實例名稱，也是所有值的標籤
        language: 完整語言 L 的解釋
        in_object: L_obj 成員測試
        in_syntax: L_syn 成員測試
        representation: 語法表示
        quotation: Q，在 L_obj 上全
        evaluation: E，在 L_syn 上可能部分（None 表示未定義）
        expr_key: 運算式相等所用的鍵（lambda 實例使用 α 不變的正規鍵）
        show: 運算式的文字形式（用於報告）
        as_tree / from_tree: L_obj 運算式與其語法樹之間的轉換（用於位置與擬引用）
    """
    instance_id: str
    language: InterpretedLanguage
    in_object: Callable[[Expr], bool]
    in_syntax: Callable[[Expr], bool]
    representation: SyntaxRepresentation
    quotation: Callable[[Expr], Expr]
    evaluation: Callable[[Expr], Optional[Expr]]
    built_in_quotation: bool = False
    built_in_evaluation: bool = False
    object_is_language: bool = False
    syntax_within_object: bool = False
    total_evaluation: bool = False
    universal_disquotation: bool = False
    expr_key: Callable[[Expr], Hashable] = _identity
    show: Callable[[Expr], str] = str
    as_tree: Callable[[Expr], Expr] = _identity
    from_tree: Callable[[Expr], Expr] = _identity
    description: str = field(default="", compare=False)

    # ------------------------------------------------------------------
    # 旗標
    # ------------------------------------------------------------------

    @property
    def replete(self) -> bool:
        """L_obj = L 且兩個內建旗標皆設"""
        return self.object_is_language and self.built_in_quotation and self.built_in_evaluation

    @property
    def weakly_replete(self) -> bool:
        """L_syn ⊆ L_obj 且兩個內建旗標皆設"""
        return self.syntax_within_object and self.built_in_quotation and self.built_in_evaluation

    @property
    def surjective(self) -> bool:
        return self.representation.surjective

    # ------------------------------------------------------------------
    # 成員測試
    # ------------------------------------------------------------------

    def in_language(self, e: Expr) -> bool:
        return self.language.contains(e)

    def require_language(self, e: Expr) -> None:
        if not self.language.contains(e):
            raise MembershipError(f"{self.instance_id}: 運算式不在 L 中: {self._safe_show(e)}")

    def require_object(self, e: Expr) -> None:
        if not (self.language.contains(e) and self.in_object(e)):
            raise MembershipError(f"{self.instance_id}: 運算式不在 L_obj 中: {self._safe_show(e)}")

    def require_syntax(self, e: Expr) -> None:
        if not (self.language.contains(e) and self.in_syntax(e)):
            raise MembershipError(f"{self.instance_id}: 運算式不在 L_syn 中: {self._safe_show(e)}")

    def _safe_show(self, e: Expr) -> str:
        try:
            return self.show(e)
        except Exception:
            return repr(e)

    # ------------------------------------------------------------------
    # 操作
    # ------------------------------------------------------------------

    def sem_value(self, e: Expr) -> Value:
        """V_sem(e)；對 L 中的 e 全"""
        self.require_language(e)
        return self.language.valuate(e)

    def syn_value(self, e: Expr) -> Value:
        """V_syn(e)；對 L_obj 全且單射"""
        self.require_object(e)
        return self.representation.represent(e)

    def quote(self, e: Expr) -> Expr:
        """Q(e)"""
        self.require_object(e)
        return self.quotation(e)

    def evaluate(self, e: Expr) -> Optional[Expr]:
        """E(e)；未定義時回傳 None"""
        self.require_syntax(e)
        return self.evaluation(e)

    def unrepresent(self, value: Value) -> Optional[Expr]:
        """V_syn⁻¹；輸入不在 L_obj 的像中時回傳 None"""
        self._require_own(value)
        if value.is_bottom:
            return None
        return self.representation.unrepresent(value)

    def direct_eval(self, e: Expr) -> Optional[Expr]:
        """E*(e) = V_syn⁻¹(V_sem(e))"""
        self.require_syntax(e)
        return self.unrepresent(self.language.valuate(e))

    def try_direct_eval(self, e: Expr) -> Optional[Expr]:
        """對 L 中任意運算式的 E*：不在 L_syn 中視為未定義"""
        self.require_language(e)
        if not self.in_syntax(e):
            return None
        return self.unrepresent(self.language.valuate(e))

    def same_expr(self, a: Expr, b: Expr) -> bool:
        """運算式相等（依 expr_key）"""
        return self.expr_key(a) == self.expr_key(b)

    def same_value(self, a: Value, b: Value) -> bool:
        """結構相等；不同實例的值不可比較"""
        self._require_own(a)
        self._require_own(b)
        return a == b

    def _require_own(self, value: Value) -> None:
        if not isinstance(value, Value):
            raise InputError(f"{self.instance_id}: 預期 Value，得到 {type(value).__name__}")
        if value.instance != self.instance_id:
            raise MembershipError(
                f"{self.instance_id}: 不能使用實例 {value.instance} 的值"
            )


@dataclass(frozen=True)
class TransformerSpec:
    """
    n 元變換器 T 與其在語法語言中的提升運算子 e_T

    規格: e_T(Q(e₁),…,Q(eₙ)) 與 Q(T(e₁,…,eₙ)) 語義相等
    """
    name: str
    arity: int
    transformer: Callable[..., Expr]
    lifted: Callable[..., Expr]
    accepts: Callable[[Expr], bool] = lambda e: True

    def __post_init__(self):
        if self.arity < 0:
            raise InputError(f"變換器 {self.name} 的元數不可為負: {self.arity}")
