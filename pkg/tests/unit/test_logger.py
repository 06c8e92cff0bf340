"""
日誌管理模組單元測試
"""

import logging
import logging.handlers
import sys
import time

from src.core.report import CheckReport
from src.utils.logger import ColoredFormatter, LoggerManager, get_logger, log_execution_time


class TestLoggerManager:
    """LoggerManager 測試類"""

    def test_setup_logging(self, tmp_path):
        """測試日誌設置"""
        log_file = tmp_path / "logs" / "test.log"

        LoggerManager.setup_logging(
            level="DEBUG",
            log_file=str(log_file),
            console_output=True,
            file_output=True
        )

        logger = LoggerManager.get_logger("test_logger")
        logger.debug("Debug message")
        logger.warning("Warning message")

        assert log_file.exists()
        log_content = log_file.read_text(encoding='utf-8')
        assert "Debug message" in log_content
        assert "Warning message" in log_content

    def test_setup_is_idempotent(self):
        LoggerManager.setup_logging(level="ERROR", file_output=False)
        LoggerManager.setup_logging(level="DEBUG", file_output=False)
        assert logging.getLogger().level == logging.ERROR

    def test_get_logger(self):
        """測試獲取日誌器"""
        logger1 = LoggerManager.get_logger("test.module1")
        logger2 = LoggerManager.get_logger("test.module2")
        logger3 = get_logger("test.module1")

        assert logger1 is not logger2
        assert logger1 is logger3

    def test_console_writes_to_stderr(self):
        """控制台處理器寫到 stderr，stdout 留給命令結果"""
        LoggerManager.setup_logging(level="INFO", console_output=True, file_output=False)

        root_logger = logging.getLogger()
        streams = [h.stream for h in root_logger.handlers
                   if type(h) is logging.StreamHandler]
        assert streams and all(s is sys.stderr for s in streams)
        assert not [h for h in root_logger.handlers if isinstance(h, logging.FileHandler)]

    def test_file_rotation_handler(self, tmp_path):
        """測試日誌輪轉"""
        log_file = tmp_path / "rotation_test.log"

        LoggerManager.setup_logging(
            level="DEBUG",
            log_file=str(log_file),
            console_output=False,
            file_output=True
        )

        handlers = [h for h in logging.getLogger().handlers
                    if isinstance(h, logging.handlers.RotatingFileHandler)]
        assert len(handlers) == 1
        assert handlers[0].backupCount == 5

    def test_configure_from_settings(self, tmp_path):
        log_file = tmp_path / "quosyn.log"
        LoggerManager.configure({"level": "INFO", "file": str(log_file), "backup_count": 2})

        root_logger = logging.getLogger()
        assert root_logger.level == logging.INFO
        handlers = [h for h in root_logger.handlers
                    if isinstance(h, logging.handlers.RotatingFileHandler)]
        assert handlers[0].backupCount == 2

    def test_configure_level_override(self):
        LoggerManager.configure({"level": "INFO"}, level="ERROR")
        assert logging.getLogger().level == logging.ERROR
        assert not [h for h in logging.getLogger().handlers if isinstance(h, logging.FileHandler)]

    def test_unknown_level_falls_back(self):
        LoggerManager.setup_logging(level="LOUD", file_output=False)
        assert logging.getLogger().level == logging.WARNING


class TestColoredFormatter:

    def test_does_not_mutate_record(self):
        formatter = ColoredFormatter('%(levelname)s %(message)s')
        record = logging.makeLogRecord({'levelname': 'ERROR', 'levelno': logging.ERROR, 'msg': 'boom'})
        text = formatter.format(record)
        assert '\033[31m' in text
        assert record.levelname == 'ERROR'


class TestLogDecorators:
    """測試日誌裝飾器"""

    def test_log_execution_time(self, caplog):
        """測試執行時間日誌裝飾器"""
        logger = get_logger("time_test")

        @log_execution_time(logger)
        def work():
            return "done"

        with caplog.at_level(logging.INFO):
            assert work() == "done"
        assert "work 執行時間" in caplog.text

    def test_preserves_metadata(self):
        @log_execution_time(get_logger("meta"))
        def documented():
            """文件"""

        assert documented.__name__ == "documented"
        assert documented.__doc__ == "文件"

    def test_fills_report_elapsed(self):
        @log_execution_time(get_logger("elapsed"))
        def run():
            time.sleep(0.01)
            return CheckReport("prop")

        report = run()
        assert report.elapsed >= 0.01
        assert report == CheckReport("prop")
