"""
反例最小化

貪婪的結構縮減：反覆嘗試把某個位置的子樹換成它自己的較小子樹，
只要結果仍滿足失敗判定就接受並重新開始。每次接受都嚴格減少節點數，因此必定終止。
"""

from typing import Callable, List, Optional

from ..core.exceptions import QuosynError
from ..core.framework import Expr
from ..core.quasi import iter_positions, positions, replace_at, size, subterm_at
from ..utils.logger import get_logger

logger = get_logger(__name__)

Predicate = Callable[[Expr], bool]


def _holds(predicate: Predicate, e: Expr) -> bool:
    try:
        return bool(predicate(e))
    except (QuosynError, RecursionError):
        return False


def _smaller_subterms(node: Expr) -> List[Expr]:
    """node 的真子樹，依大小遞增（同大小保持前序）"""
    subterms = [subterm_at(node, p) for p in positions(node)[1:]]
    return sorted(subterms, key=size)


def _shrink_once(e: Expr, predicate: Predicate, valid: Optional[Predicate]) -> Optional[Expr]:
    for position in iter_positions(e):
        target = subterm_at(e, position)
        for candidate in _smaller_subterms(target):
            try:
                shrunk = replace_at(e, position, candidate)
            except (QuosynError, TypeError):
                continue
            if valid is not None and not _holds(valid, shrunk):
                continue
            if _holds(predicate, shrunk):
                return shrunk
    return None


def minimize(failing: Expr, predicate: Predicate, valid: Optional[Predicate] = None) -> Expr:
    """
    縮減仍滿足 predicate 的運算式

    Args:
        failing: 滿足 predicate 的起點
        predicate: 失敗判定；拋出 QuosynError 視為不成立
        valid: 額外的良構判定（例如類別檢查），不成立的候選會被跳過

    Returns:
        找到的最小運算式；起點已是最小時原樣回傳
    """
    current = failing
    steps = 0
    while True:
        shrunk = _shrink_once(current, predicate, valid)
        if shrunk is None:
            break
        current = shrunk
        steps += 1
    if steps:
        logger.debug(f"最小化 {steps} 步: 節點數 {size(failing)} -> {size(current)}")
    return current
