"""
例外定義

部分性（未定義的結果）一律以 None 表示；這裡的例外只用於契約違反。
"""

from typing import Optional

from .constants import ErrorCode


class QuosynError(Exception):
    """所有契約錯誤的基類"""

    code: ErrorCode = ErrorCode.INTERNAL_ERROR

    def __init__(self, message: str):
        super().__init__(message)
        self.message = message

    def __str__(self) -> str:
        return f"[{self.code.name}] {self.message}"


class MembershipError(QuosynError):
    """運算式不在要求的語言中，或跨實例比較值"""
    code = ErrorCode.MEMBERSHIP


class InputError(QuosynError):
    """參數、元數或不變量錯誤"""
    code = ErrorCode.INVALID_PARAM


class SortError(InputError):
    """多類別項的類別不符"""
    code = ErrorCode.SORT_ERROR


class UnsupportedInputError(QuosynError):
    """不支援的輸入（例如巢狀反引號）"""
    code = ErrorCode.UNSUPPORTED_INPUT


class ParseError(QuosynError):
    """文字解析失敗"""
    code = ErrorCode.PARSE_ERROR

    def __init__(self, message: str, offset: Optional[int] = None):
        if offset is not None:
            message = f"{message}（位置 {offset}）"
        super().__init__(message)
        self.offset = offset


class ReadError(ParseError):
    """S 式讀取失敗"""
    code = ErrorCode.READ_ERROR
