"""
日誌管理模組

日誌只寫到 stderr 與可選的輪轉文件；stdout 保留給命令結果，讓 check --json 的輸出可逐字比較。
試驗在執行緒池中執行，格式中帶執行緒名稱以便分辨。
"""

import dataclasses
import functools
import logging
import logging.handlers
import sys
import time
from pathlib import Path
from typing import Any, Mapping, Optional


LOG_FORMAT = '%(asctime)s [%(threadName)s] %(name)s %(levelname)s: %(message)s'
DATE_FORMAT = '%H:%M:%S'

LOG_LEVELS = {
    'DEBUG': logging.DEBUG,
    'INFO': logging.INFO,
    'WARNING': logging.WARNING,
    'ERROR': logging.ERROR,
    'CRITICAL': logging.CRITICAL
}


def _level(name: Optional[str], default: int = logging.WARNING) -> int:
    return LOG_LEVELS.get((name or '').upper(), default)


class LoggerManager:
    """日誌管理器"""

    _loggers = {}
    _initialized = False

    @classmethod
    def setup_logging(cls,
                      level: str = "WARNING",
                      log_file: Optional[str] = None,
                      console_output: bool = True,
                      file_output: bool = True,
                      max_bytes: int = 5 * 1024 * 1024,
                      backup_count: int = 5) -> None:
        """
        設置全局日誌配置；已設置過時不做任何事

        Args:
            level: 根日誌器級別
            log_file: 輪轉文件路徑，None 表示不寫文件
            console_output: 是否輸出到 stderr
            file_output: 是否啟用文件輸出
        """
        if cls._initialized:
            return

        root_logger = logging.getLogger()
        root_logger.setLevel(_level(level))
        root_logger.handlers.clear()

        if console_output:
            console_handler = logging.StreamHandler(sys.stderr)
            formatter_class = ColoredFormatter if sys.stderr.isatty() else logging.Formatter
            console_handler.setFormatter(formatter_class(LOG_FORMAT, datefmt=DATE_FORMAT))
            root_logger.addHandler(console_handler)

        if file_output and log_file:
            Path(log_file).parent.mkdir(parents=True, exist_ok=True)
            file_handler = logging.handlers.RotatingFileHandler(
                log_file, maxBytes=max_bytes, backupCount=backup_count, encoding='utf-8'
            )
            file_handler.setFormatter(logging.Formatter(LOG_FORMAT, datefmt=DATE_FORMAT))
            root_logger.addHandler(file_handler)

        cls._initialized = True

    @classmethod
    def configure(cls, settings: Mapping[str, Any], level: Optional[str] = None) -> None:
        """
        依設定檔的 logging 區段初始化

        Args:
            settings: {"level", "file", "max_bytes", "backup_count"}，皆可省略
            level: 命令列指定的級別，優先於設定
        """
        log_file = settings.get('file') or None
        cls.setup_logging(
            level=level or settings.get('level', 'WARNING'),
            log_file=log_file,
            console_output=True,
            file_output=bool(log_file),
            max_bytes=int(settings.get('max_bytes', 5 * 1024 * 1024)),
            backup_count=int(settings.get('backup_count', 5))
        )

    @classmethod
    def reset(cls) -> None:
        """重置初始化狀態（測試用）"""
        cls._initialized = False

    @classmethod
    def get_logger(cls, name: str) -> logging.Logger:
        if name not in cls._loggers:
            cls._loggers[name] = logging.getLogger(name)
        return cls._loggers[name]


class ColoredFormatter(logging.Formatter):
    """終端機用的彩色格式化器"""

    COLORS = {
        'DEBUG': '\033[36m',
        'INFO': '\033[32m',
        'WARNING': '\033[33m',
        'ERROR': '\033[31m',
        'CRITICAL': '\033[35m',
    }
    RESET = '\033[0m'

    def format(self, record):
        # 在副本上加顏色，文件處理器看到的記錄不變
        record = logging.makeLogRecord(record.__dict__)
        color = self.COLORS.get(record.levelname)
        if color:
            record.levelname = f"{color}{record.levelname}{self.RESET}"
        return super().format(record)


def get_logger(name: str) -> logging.Logger:
    """快捷方法：獲取日誌器"""
    return LoggerManager.get_logger(name)


def log_execution_time(logger: logging.Logger):
    """
    裝飾器：記錄函數執行時間

    回傳值是帶 elapsed 欄位的 dataclass（例如 CheckReport）時，把耗時填入該欄位。
    """
    def decorator(func):
        @functools.wraps(func)
        def wrapper(*args, **kwargs):
            start_time = time.perf_counter()
            result = func(*args, **kwargs)
            elapsed_time = time.perf_counter() - start_time
            logger.info(f"{func.__name__} 執行時間: {elapsed_time:.2f} 秒")
            if dataclasses.is_dataclass(result) and hasattr(result, 'elapsed'):
                result = dataclasses.replace(result, elapsed=elapsed_time)
            return result
        return wrapper
    return decorator
