"""
配置管理模組

設定檔是可選的 JSON；檔案中的各區段逐鍵覆蓋預設值，缺少的鍵保留預設。
數值型的旋鈕（燃料、試驗次數、範圍等）在載入時檢查，不合法的值記錄警告後回到預設。
"""

import copy
import json
import logging
import os
from pathlib import Path
from typing import Any, Dict, Mapping, Optional

from dotenv import load_dotenv

from .constants import (
    DEFAULT_GENERATOR_FUEL, DEFAULT_LAMBDA_FUEL, DEFAULT_LISP_FUEL,
    DEFAULT_QUANTIFIER_BOUND, DEFAULT_SCAN_LIMIT, DEFAULT_SELF_INTERP_TRIALS,
    HARNESS_DEFAULTS
)

# 不經 utils.logger，避免設定與日誌互相匯入
logger = logging.getLogger(__name__)

# 從 .env 讀取 QUOSYN_CONFIG 等環境變數
load_dotenv()

DEFAULT_SETTINGS: Dict[str, Dict[str, Any]] = {
    "harness": dict(HARNESS_DEFAULTS),
    "lisp": {"fuel": DEFAULT_LISP_FUEL},
    "lambda": {
        "fuel": DEFAULT_LAMBDA_FUEL,
        "generator_fuel": DEFAULT_GENERATOR_FUEL,
        "self_interp_trials": DEFAULT_SELF_INTERP_TRIALS,
    },
    "goedel": {
        "quantifier_bound": DEFAULT_QUANTIFIER_BOUND,
        "scan_limit": DEFAULT_SCAN_LIMIT,
    },
    "logging": {"level": "WARNING", "file": ""},
}

# 整數旋鈕的下限
INTEGER_MINIMUMS: Dict[str, int] = {
    "harness.trials": 0,
    "harness.max_size": 1,
    "harness.seed": 0,
    "harness.workers": 1,
    "lisp.fuel": 0,
    "lambda.fuel": 0,
    "lambda.generator_fuel": 1,
    "lambda.self_interp_trials": 0,
    "goedel.quantifier_bound": 0,
    "goedel.scan_limit": 1,
}


def default_config_file() -> str:
    """設定檔路徑：QUOSYN_CONFIG 優先，否則為工作目錄下的 config.json"""
    return os.environ.get('QUOSYN_CONFIG', 'config.json')


def merge_settings(base: Mapping[str, Any], override: Mapping[str, Any]) -> Dict[str, Any]:
    """遞迴合併兩份設定，override 優先；兩邊都是物件的鍵往下合併"""
    merged = copy.deepcopy(dict(base))
    for key, value in override.items():
        if isinstance(value, Mapping) and isinstance(merged.get(key), Mapping):
            merged[key] = merge_settings(merged[key], value)
        else:
            merged[key] = copy.deepcopy(value)
    return merged


def _lookup(settings: Mapping[str, Any], key: str) -> Any:
    node: Any = settings
    for part in key.split('.'):
        if not isinstance(node, Mapping) or part not in node:
            raise KeyError(key)
        node = node[part]
    return node


def _valid_integer(value: Any, minimum: int) -> bool:
    return isinstance(value, int) and not isinstance(value, bool) and value >= minimum


class ConfigManager:
    """
    設定管理器（單例）

    第一次建立時決定設定檔路徑；之後的 ConfigManager() 都回傳同一個實例。
    命令列以 config_file 屬性加 reload() 切換設定檔。
    """

    _instance: Optional['ConfigManager'] = None
    _config: Dict[str, Any] = {}

    def __new__(cls, config_file: Optional[str] = None):
        if cls._instance is None:
            cls._instance = super().__new__(cls)
            cls._instance._initialized = False
        return cls._instance

    def __init__(self, config_file: Optional[str] = None):
        if self._initialized:
            return
        self.config_file = config_file or default_config_file()
        self._config = self._load_config()
        self._initialized = True

    def _load_config(self) -> Dict[str, Any]:
        path = Path(self.config_file)
        if not path.exists():
            logger.debug(f"設定檔 {self.config_file} 不存在，使用預設值")
            return copy.deepcopy(DEFAULT_SETTINGS)
        try:
            with open(path, 'r', encoding='utf-8') as f:
                loaded = json.load(f)
        except (OSError, ValueError) as e:
            logger.error(f"❌ 讀取設定檔失敗，使用預設值: {e}")
            return copy.deepcopy(DEFAULT_SETTINGS)
        if not isinstance(loaded, dict):
            logger.error(f"❌ 設定檔頂層必須是物件: {self.config_file}")
            return copy.deepcopy(DEFAULT_SETTINGS)
        logger.info(f"✅ 已載入設定檔: {self.config_file}")
        return self._validated(merge_settings(DEFAULT_SETTINGS, loaded))

    @staticmethod
    def _validated(settings: Dict[str, Any]) -> Dict[str, Any]:
        for section, defaults in DEFAULT_SETTINGS.items():
            if not isinstance(settings.get(section), dict):
                logger.warning(f"設定區段 {section} 不是物件，改用預設值")
                settings[section] = copy.deepcopy(defaults)
        for key, minimum in INTEGER_MINIMUMS.items():
            value = _lookup(settings, key)
            if not _valid_integer(value, minimum):
                fallback = _lookup(DEFAULT_SETTINGS, key)
                logger.warning(f"設定 {key}={value!r} 不是 >= {minimum} 的整數，改用 {fallback}")
                section, name = key.split('.')
                settings[section][name] = fallback
        return settings

    def get(self, key: str, default: Any = None) -> Any:
        """以點分隔的鍵取值，例如 'lisp.fuel'；不存在時回傳 default"""
        try:
            return _lookup(self._config, key)
        except KeyError:
            return default

    def get_int(self, key: str) -> int:
        """取整數旋鈕；鍵必須列在 INTEGER_MINIMUMS 中"""
        if key not in INTEGER_MINIMUMS:
            raise KeyError(f"不是整數設定: {key}")
        value = self.get(key)
        if not _valid_integer(value, INTEGER_MINIMUMS[key]):
            # set() 寫入的值不經載入檢查
            return _lookup(DEFAULT_SETTINGS, key)
        return value

    def set(self, key: str, value: Any) -> None:
        parts = key.split('.')
        node = self._config
        for part in parts[:-1]:
            node = node.setdefault(part, {})
        node[parts[-1]] = value

    def save(self) -> bool:
        """寫回設定檔，成功時回傳 True"""
        try:
            with open(self.config_file, 'w', encoding='utf-8') as f:
                json.dump(self._config, f, indent=4, ensure_ascii=False)
        except OSError as e:
            logger.error(f"❌ 寫入設定檔失敗: {e}")
            return False
        logger.info(f"✅ 設定已寫入 {self.config_file}")
        return True

    def reload(self) -> None:
        self._config = self._load_config()

    def section(self, name: str) -> Dict[str, Any]:
        """某個區段的副本；未知區段回傳空字典"""
        return dict(self._config.get(name, {}))

    @property
    def harness_config(self) -> Dict[str, Any]:
        return self.section('harness')

    @property
    def logging_config(self) -> Dict[str, Any]:
        return self.section('logging')
