"""
系統常量定義
集中管理所有系統級常量，提高可維護性
"""

from enum import Enum, IntEnum


# 實例標識
class InstanceId(Enum):
    """語法框架實例枚舉"""
    PROP = "prop"
    STRLANG = "strlang"
    GOEDEL = "goedel"
    GOEDEL_RESTRICTED = "goedel-restricted"
    GOEDEL_BUILTIN = "goedel-builtin"
    MINILISP = "minilisp"
    LAMBDA = "lambda"
    RING = "ring"

    @classmethod
    def from_name(cls, name: str) -> 'InstanceId':
        """根據名稱獲取實例標識"""
        for item in cls:
            if item.value == name:
                return item
        raise ValueError(f"未知的實例: {name}")


# 語義值的種類
class ValueKind(Enum):
    """值種類枚舉"""
    TRUTH = "truth"
    NATURAL = "natural"
    INTEGER = "integer"
    STRING = "string"
    SYMBOL = "symbol"
    TREE = "tree"
    SEXPR = "sexpr"
    TERM = "term"
    POLYNOMIAL = "polynomial"
    BOTTOM = "bottom"


# 性質名稱
class PropertyName(Enum):
    """檢查報告中的性質名稱"""
    QUOTATION_AXIOM = "quotation_axiom"
    EVALUATION_AXIOM = "evaluation_axiom"
    DISQUOTATION = "disquotation"
    SYNTACTIC_DISQUOTATION = "syntactic_disquotation"
    QUOTE_INJECTIVITY = "quote_injectivity"
    REPRESENTATION_INJECTIVITY = "representation_injectivity"
    BUILTIN_SEPARATION = "builtin_separation"
    DIRECT_EVALUATION_TOTALITY = "direct_evaluation_totality"
    EVALUATION_TOTALITY = "evaluation_totality"
    EVALUATION_PARTIALITY = "evaluation_partiality"
    TRANSFORMER_SPECIFICATION = "transformer_specification"
    # 實例專屬
    ROUND_TRIP = "round_trip"
    VALUE_SOUNDNESS = "value_soundness"
    SIMPLIFICATION_CORRECTNESS = "simplification_correctness"
    HEAD_TAIL_LAWS = "head_tail_laws"
    DECODE_ROUND_TRIP = "decode_round_trip"
    ADD_EVALUATION = "add_evaluation"
    BUILTIN_QUOTATION = "builtin_quotation"
    IDENTITY_REPRESENTATION = "identity_representation"
    BACKQUOTE_EQUIVALENCE = "backquote_equivalence"
    PURITY = "purity"
    SCHEMA_NORMAL_FORM = "schema_normal_form"
    SELF_INTERPRETATION = "self_interpretation"
    DETERMINISM = "determinism"
    SEMANTIC_PRESERVATION = "semantic_preservation"
    IDEMPOTENCE = "idempotence"


# 錯誤碼
class ErrorCode(IntEnum):
    """系統錯誤碼"""
    SUCCESS = 0
    INVALID_PARAM = 1001
    MEMBERSHIP = 1002
    PARSE_ERROR = 1003
    READ_ERROR = 1004
    SORT_ERROR = 1005
    UNSUPPORTED_INPUT = 1006
    INTERNAL_ERROR = 9999


# 命令列退出碼
class ExitCode(IntEnum):
    """CLI 退出碼"""
    SUCCESS = 0
    PROPERTY_FAILURE = 1
    USAGE_ERROR = 2


# 預設資源上限
DEFAULT_LISP_FUEL = 100_000
DEFAULT_LAMBDA_FUEL = 100_000
DEFAULT_GENERATOR_FUEL = 500
DEFAULT_QUANTIFIER_BOUND = 8
DEFAULT_SCAN_LIMIT = 1_000_000
DEFAULT_SELF_INTERP_TRIALS = 50


# 產生器形狀
GENERATOR_DEPTH_DECAY = 0.7
PROP_VARIABLES = ("p", "q", "r", "s")
LISP_SYMBOLS = ("x", "y", "t", "foo")
LAMBDA_VARIABLES = ("x", "y", "z", "a", "b")
RING_MAX_VARIABLES = 4
RING_MAX_DEGREE = 5
RING_COEFFICIENT_RANGE = 5
RING_ASSIGNMENTS = 50
GOEDEL_MAX_QUANTIFIER_DEPTH = 2
TRANSFORMER_NUMERAL_RANGE = 50


# 測試套件預設值
HARNESS_DEFAULTS = {
    "trials": 1000,
    "max_size": 20,
    "seed": 0,
    "workers": 4
}


# 底值的顯示形式
BOTTOM_TEXT = "⊥"
UNDEFINED_TEXT = "undefined"
