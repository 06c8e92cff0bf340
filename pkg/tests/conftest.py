"""
pytest 固件

所有測試共用：縮小規模的設定檔、常用框架實例，以及每個測試前後的單例重置。
"""

import json
import logging
import sys
from pathlib import Path

import pytest

project_root = Path(__file__).parent.parent
sys.path.insert(0, str(project_root))

# 縮小規模，讓命令列與套件測試在單元測試時間內跑完
SMALL_SETTINGS = {
    "harness": {"trials": 25, "max_size": 8, "seed": 3, "workers": 2},
    "lisp": {"fuel": 5000},
    "lambda": {"fuel": 20000, "generator_fuel": 200},
    "goedel": {"quantifier_bound": 4},
}


@pytest.fixture
def test_config_file(tmp_path):
    """寫出 SMALL_SETTINGS 並回傳路徑（沒有 logging 區段）"""
    config_file = tmp_path / "test_config.json"
    config_file.write_text(json.dumps(SMALL_SETTINGS), encoding='utf-8')
    return str(config_file)


@pytest.fixture
def prop_framework():
    from src.instances import prop
    return prop.build_framework()


@pytest.fixture
def lisp_framework():
    from src.instances import minilisp
    return minilisp.build_framework()


@pytest.fixture
def small_config():
    def make(instance, trials=30, max_size=10, seed=7):
        from src.harness.generators import GenConfig
        return GenConfig(instance, max_size=max_size, seed=seed, trials=trials)
    return make


def _forget_singletons():
    from src.core.config import ConfigManager
    from src.utils.logger import LoggerManager
    ConfigManager._instance = None
    ConfigManager._config = {}
    LoggerManager.reset()


@pytest.fixture(autouse=True)
def reset_singletons(monkeypatch):
    """每個測試都從未載入的設定與未初始化的日誌開始"""
    monkeypatch.delenv('QUOSYN_CONFIG', raising=False)
    _forget_singletons()
    root = logging.getLogger()
    handlers_before = list(root.handlers)
    level_before = root.level
    yield
    _forget_singletons()
    # setup_logging 會清掉根日誌器的處理器，pytest 自己的要放回去
    for handler in list(root.handlers):
        if handler not in handlers_before:
            root.removeHandler(handler)
            handler.close()
    for handler in handlers_before:
        if handler not in root.handlers:
            root.addHandler(handler)
    root.setLevel(level_before)
