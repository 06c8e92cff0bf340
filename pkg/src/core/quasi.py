"""
位置、標記運算式與擬引用

位置是從根出發的子節點索引路徑；語法樹節點以 children() / with_children() 暴露其結構，
沒有這兩個方法的值視為葉節點。S(m) 同時把每個標記位置換成 E*(splice)，
擬引用 Q̄(m) = Q(S(m))。
"""

from dataclasses import dataclass
from typing import Iterator, List, Optional, Sequence, Tuple

from ..utils.logger import get_logger
from .exceptions import InputError, QuosynError
from .framework import Expr, SyntaxFramework

logger = get_logger(__name__)

ROOT_TEXT = "root"


@dataclass(frozen=True, order=True)
class Position:
    """語法樹中的位置（空路徑 = 根）"""
    path: Tuple[int, ...] = ()

    def __post_init__(self):
        if any((not isinstance(i, int)) or i < 0 for i in self.path):
            raise InputError(f"位置索引必須是非負整數: {self.path}")

    @classmethod
    def parse(cls, text: str) -> 'Position':
        """解析 "root"、"root.0.1" 或 "0.1" 形式的位置"""
        text = text.strip()
        parts = [p for p in text.split('.') if p]
        if parts and parts[0] == ROOT_TEXT:
            parts = parts[1:]
        try:
            return cls(tuple(int(p) for p in parts))
        except ValueError as exc:
            raise InputError(f"無效的位置: {text!r}") from exc

    def child(self, index: int) -> 'Position':
        return Position(self.path + (index,))

    def is_prefix_of(self, other: 'Position') -> bool:
        return other.path[:len(self.path)] == self.path

    @property
    def depth(self) -> int:
        return len(self.path)

    def __str__(self) -> str:
        if not self.path:
            return ROOT_TEXT
        return ".".join(str(i) for i in self.path)


ROOT = Position()


def children(node: Expr) -> Tuple[Expr, ...]:
    """節點的子節點；葉節點回傳空元組"""
    method = getattr(node, "children", None)
    if method is None:
        return ()
    return tuple(method())


def rebuild(node: Expr, kids: Sequence[Expr]) -> Expr:
    if not kids:
        return node
    return node.with_children(tuple(kids))


def iter_positions(node: Expr, here: Position = ROOT) -> Iterator[Position]:
    yield here
    for i, kid in enumerate(children(node)):
        yield from iter_positions(kid, here.child(i))


def positions(node: Expr) -> List[Position]:
    """先序列出所有有效位置；長度等於子運算式個數"""
    return list(iter_positions(node))


def size(node: Expr) -> int:
    """節點總數"""
    return 1 + sum(size(kid) for kid in children(node))


def disjoint(p1: Position, p2: Position) -> bool:
    """兩個位置互不為前綴"""
    return not (p1.is_prefix_of(p2) or p2.is_prefix_of(p1))


def is_valid(node: Expr, position: Position) -> bool:
    for index in position.path:
        kids = children(node)
        if index >= len(kids):
            return False
        node = kids[index]
    return True


def subterm_at(node: Expr, position: Position) -> Expr:
    """取出位置上的子運算式"""
    for index in position.path:
        kids = children(node)
        if index >= len(kids):
            raise InputError(f"位置 {position} 對此運算式無效")
        node = kids[index]
    return node


def replace_at(node: Expr, position: Position, replacement: Expr) -> Expr:
    """把位置上的子運算式換成 replacement，回傳新樹"""
    if not position.path:
        return replacement
    kids = list(children(node))
    head, rest = position.path[0], Position(position.path[1:])
    if head >= len(kids):
        raise InputError(f"位置 {position} 對此運算式無效")
    kids[head] = replace_at(kids[head], rest, replacement)
    return rebuild(node, kids)


@dataclass(frozen=True)
class MarkedExpr:
    """
    標記運算式 e⟨(p₁,e₁),…,(pₙ,eₙ)⟩

    base 是 L_obj 中的運算式；marks 的位置相對於 base 的語法樹（inst.as_tree(base)）。
    """
    base: Expr
    marks: Tuple[Tuple[Position, Expr], ...] = ()

    def __post_init__(self):
        object.__setattr__(self, "marks", tuple((p, s) for p, s in self.marks))
        for position, _ in self.marks:
            if not isinstance(position, Position):
                raise InputError(f"標記位置必須是 Position: {position!r}")
        for i, (p1, _) in enumerate(self.marks):
            for p2, _ in self.marks[i + 1:]:
                if not disjoint(p1, p2):
                    raise InputError(f"標記位置重疊: {p1} / {p2}")

    @property
    def positions(self) -> Tuple[Position, ...]:
        return tuple(p for p, _ in self.marks)


def validate_marked(inst: SyntaxFramework, m: MarkedExpr) -> Expr:
    """檢查標記運算式對實例成立，回傳 base 的語法樹"""
    inst.require_object(m.base)
    tree = inst.as_tree(m.base)
    for position, splice_expr in m.marks:
        if not is_valid(tree, position):
            raise InputError(f"{inst.instance_id}: 位置 {position} 對 {inst.show(m.base)} 無效")
        inst.require_language(splice_expr)
    return tree


def splice(inst: SyntaxFramework, m: MarkedExpr) -> Optional[Expr]:
    """
    S(m)：同時把每個標記位置換成 E*(spliceᵢ)

    任一 E* 未定義、或替換後的結果不在 L_obj 中時回傳 None。

    Raises:
        InputError: 位置無效
        MembershipError: 拼接運算式不在 L 中
    """
    tree = validate_marked(inst, m)
    replacements = []
    for position, splice_expr in m.marks:
        value = inst.try_direct_eval(splice_expr)
        if value is None:
            logger.debug(f"{inst.instance_id}: 位置 {position} 的拼接未定義")
            return None
        replacements.append((position, inst.as_tree(value)))

    # 位置兩兩不相交，依序替換不影響其他位置
    for position, replacement in replacements:
        tree = replace_at(tree, position, replacement)

    try:
        result = inst.from_tree(tree)
    except QuosynError as exc:
        logger.debug(f"{inst.instance_id}: 拼接結果無法還原: {exc}")
        return None
    if not (inst.in_language(result) and inst.in_object(result)):
        return None
    return result


def quasiquote(inst: SyntaxFramework, m: MarkedExpr) -> Optional[Expr]:
    """Q̄(m) = Q(S(m))；S(m) 未定義時回傳 None"""
    spliced = splice(inst, m)
    if spliced is None:
        return None
    return inst.quote(spliced)


def unmarked(base: Expr) -> MarkedExpr:
    """沒有標記的運算式"""
    return MarkedExpr(base, ())


__all__ = [
    "Position", "ROOT", "MarkedExpr", "children", "rebuild", "positions", "iter_positions",
    "size", "disjoint", "is_valid", "subterm_at", "replace_at", "splice", "quasiquote",
    "validate_marked", "unmarked",
]
