"""
檢查報告

CheckReport 的 JSON 形狀固定：
{"instance": str, "properties": [{"name", "trials", "passes", "counterexample", "seed"}]}
耗時欄位不參與比較，也不寫入 JSON。
"""

import json
from dataclasses import dataclass, field
from typing import Any, Callable, Dict, Iterable, List, Optional, Tuple

from .exceptions import InputError


@dataclass(frozen=True)
class PropertyRecord:
    """單一性質的檢查結果"""
    name: str
    trials: int
    passes: int
    counterexample: Optional[str] = None
    seed: int = 0

    def __post_init__(self):
        if not 0 <= self.passes <= self.trials:
            raise InputError(f"性質 {self.name}: passes={self.passes} 超出 trials={self.trials}")
        if (self.counterexample is not None) != (self.passes < self.trials):
            raise InputError(f"性質 {self.name}: 反例必須恰在失敗時出現")

    @property
    def passed(self) -> bool:
        return self.passes == self.trials

    def to_dict(self) -> Dict[str, Any]:
        return {
            "name": self.name,
            "trials": self.trials,
            "passes": self.passes,
            "counterexample": self.counterexample,
            "seed": self.seed
        }


@dataclass(frozen=True)
class CheckReport:
    """一個實例的性質檢查報告"""
    instance: str
    properties: Tuple[PropertyRecord, ...] = ()
    elapsed: float = field(default=0.0, compare=False)

    @property
    def all_passed(self) -> bool:
        return all(record.passed for record in self.properties)

    def get(self, name: str) -> Optional[PropertyRecord]:
        """按名稱查找性質記錄"""
        for record in self.properties:
            if record.name == name:
                return record
        return None

    def merge(self, other: 'CheckReport') -> 'CheckReport':
        """合併兩份同一實例的報告"""
        if other.instance != self.instance:
            raise InputError(f"無法合併不同實例的報告: {self.instance} / {other.instance}")
        return CheckReport(self.instance, self.properties + other.properties,
                           self.elapsed + other.elapsed)

    def to_dict(self) -> Dict[str, Any]:
        return {
            "instance": self.instance,
            "properties": [record.to_dict() for record in self.properties]
        }

    def to_json(self) -> str:
        return json.dumps(self.to_dict(), ensure_ascii=False, indent=2)

    def to_text(self) -> str:
        """人類可讀的摘要"""
        lines = [f"instance: {self.instance}"]
        for record in self.properties:
            mark = "PASS" if record.passed else "FAIL"
            lines.append(f"  [{mark}] {record.name}: {record.passes}/{record.trials}")
            if record.counterexample is not None:
                lines.append(f"         counterexample: {record.counterexample}")
        return "\n".join(lines)


class PropertyTally:
    """逐次累計一個性質的試驗結果"""

    def __init__(self, name: str, seed: int = 0, show: Callable[[Any], str] = str):
        self.name = name
        self.seed = seed
        self.show = show
        self.trials = 0
        self.passes = 0
        self.counterexample: Optional[Any] = None

    def record(self, ok: bool, subject: Any = None) -> None:
        self.trials += 1
        if ok:
            self.passes += 1
        elif self.counterexample is None:
            self.counterexample = subject

    def finish(self) -> PropertyRecord:
        text = None
        if self.passes < self.trials:
            text = self.show(self.counterexample)
        return PropertyRecord(self.name, self.trials, self.passes, text, self.seed)


def build_report(instance: str, tallies: Iterable[PropertyTally]) -> CheckReport:
    """由多個累計器建立報告"""
    records: List[PropertyRecord] = [tally.finish() for tally in tallies]
    return CheckReport(instance, tuple(records))
