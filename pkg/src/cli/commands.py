"""
命令列介面

quosyn 是單一入口、每個實例一個子命令群組。結果寫到 stdout，錯誤與日誌寫到 stderr。
退出碼：0 成功、1 性質失敗、2 用法或輸入錯誤。
"""

import functools
import sys
from typing import Callable, Optional

import click

from ..core.config import ConfigManager
from ..core.constants import BOTTOM_TEXT, UNDEFINED_TEXT, ExitCode, InstanceId
from ..core.exceptions import QuosynError
from ..core.quasi import quasiquote
from ..harness.generators import GenConfig
from ..harness.suite import run_suite
from ..instances import goedel, lambda_calc, minilisp, prop, ring, strlang
from ..utils.logger import LOG_LEVELS, LoggerManager, get_logger

logger = get_logger(__name__)

INSTANCE_NAMES = [item.value for item in InstanceId]


def setup_application(config_file: Optional[str] = None, log_level: Optional[str] = None) -> None:
    """載入設定並依設定初始化日誌"""
    config = ConfigManager()
    if config_file:
        config.config_file = config_file
        config.reload()
    LoggerManager.configure(config.logging_config, log_level)
    logger.debug(f"配置文件: {config.config_file}")


def handle_errors(func: Callable) -> Callable:
    """把 QuosynError 轉成一行錯誤訊息與退出碼 2"""
    @functools.wraps(func)
    def wrapper(*args, **kwargs):
        try:
            return func(*args, **kwargs)
        except QuosynError as exc:
            click.echo(f"error: {exc}", err=True)
            sys.exit(int(ExitCode.USAGE_ERROR))
    return wrapper


@click.group()
@click.option('--config', 'config_file', type=click.Path(dir_okay=False), default=None,
              help='設定檔路徑（預設 QUOSYN_CONFIG 或 config.json）')
@click.option('--log-level', type=click.Choice(list(LOG_LEVELS), case_sensitive=False),
              default=None, help='日誌級別')
def cli(config_file: Optional[str], log_level: Optional[str]):
    """quosyn：語法框架的引號、求值與擬引用工具"""
    setup_application(config_file, log_level)


# ----------------------------------------------------------------------
# check
# ----------------------------------------------------------------------

@cli.command()
@click.argument('instance', type=click.Choice(INSTANCE_NAMES))
@click.option('--trials', type=click.IntRange(min=0), default=None, help='試驗次數')
@click.option('--seed', type=int, default=None, help='亂數種子')
@click.option('--max-size', type=click.IntRange(min=1), default=None, help='運算式節點數上限')
@click.option('--workers', type=click.IntRange(min=1), default=None, help='執行緒數')
@click.option('--json', 'as_json', is_flag=True, help='輸出 CheckReport JSON')
@handle_errors
def check(instance: str, trials: Optional[int], seed: Optional[int], max_size: Optional[int],
          workers: Optional[int], as_json: bool):
    """對實例執行性質套件"""
    cfg = GenConfig.from_config(instance, trials=trials, seed=seed, max_size=max_size)
    report = run_suite(cfg, workers=workers)
    click.echo(report.to_json() if as_json else report.to_text())
    if not as_json and instance.startswith(InstanceId.GOEDEL.value):
        # 公式的真值依 ∀ 的上界而定
        click.echo(f"quantifier_bound: {ConfigManager().get_int('goedel.quantifier_bound')}")
    if not report.all_passed:
        sys.exit(int(ExitCode.PROPERTY_FAILURE))


# ----------------------------------------------------------------------
# repl
# ----------------------------------------------------------------------

@cli.command()
@click.option('--fuel', type=click.IntRange(min=0), default=None, help='每個運算式的求值步數')
def repl(fuel: Optional[int]):
    """逐行讀取 S 式並印出其值"""
    interpreter = minilisp.LispInterpreter(fuel)
    stdin = click.get_text_stream('stdin')
    interactive = stdin.isatty()
    while True:
        if interactive:
            click.echo("quosyn> ", nl=False)
        line = stdin.readline()
        if not line:
            break
        try:
            exprs = minilisp.read_all(line)
        except QuosynError as exc:
            click.echo(f"error: {exc}", err=True)
            continue
        for e in exprs:
            try:
                result = interpreter.interp_backquote(e)
            except QuosynError as exc:
                click.echo(f"error: {exc}", err=True)
                continue
            click.echo(BOTTOM_TEXT if result is None else minilisp.show(result))


# ----------------------------------------------------------------------
# prop
# ----------------------------------------------------------------------

@cli.group('prop')
def prop_group():
    """命題邏輯"""


@prop_group.command('eval')
@click.argument('formula')
@click.option('--assign', 'assignment', default='', help='變數賦值，例如 p=T,q=F')
@handle_errors
def prop_eval(formula: str, assignment: str):
    """求值或化簡公式"""
    click.echo(prop.interpret(formula, prop.parse_assignment(assignment)))


@prop_group.command('print')
@click.argument('formula')
@handle_errors
def prop_print(formula: str):
    """正規列印公式"""
    click.echo(prop.print_formula(prop.parse(formula)))


# ----------------------------------------------------------------------
# str
# ----------------------------------------------------------------------

@cli.group('str')
def str_group():
    """字串實例"""


@str_group.command('quote')
@click.argument('formula')
@handle_errors
def str_quote(formula: str):
    """公式 → 表示其正規字串的 cons 鏈"""
    click.echo(strlang.show_term(strlang.quote_str(prop.parse(formula))))


@str_group.command('eval')
@click.argument('term')
@handle_errors
def str_eval(term: str):
    """cons 鏈 → 它所表示的公式"""
    result = strlang.eval_str(strlang.parse_term(term))
    click.echo(UNDEFINED_TEXT if result is None else prop.print_formula(result))


# ----------------------------------------------------------------------
# goedel
# ----------------------------------------------------------------------

@cli.group('goedel')
def goedel_group():
    """
    哥德爾編碼

    \b
    公式中的 ∀ 只在 [0, quantifier_bound] 上檢查（設定鍵 goedel.quantifier_bound，預設 8），
    例如 "A x ~ = x S S S S S S S S S 0" 在預設上界下為 true。
    含 ∀ 的結果會連同所用的上界一起印出。
    """


@goedel_group.command('value')
@click.argument('expr')
@click.option('--bound', type=click.IntRange(min=0), default=None,
              help='∀ 的檢查上界（預設取設定的 goedel.quantifier_bound）')
@handle_errors
def goedel_value(expr: str, bound: Optional[int]):
    """項的值（自由變數為 0）或公式的真值"""
    if bound is None:
        bound = ConfigManager().get_int('goedel.quantifier_bound')
    e = goedel.parse(expr)
    value = goedel.ArithmeticEvaluator(bound).value(e, InstanceId.GOEDEL.value)
    click.echo(str(value.payload).lower())
    if goedel.has_quantifier(e):
        click.echo(f"quantifier_bound: {bound}")


@goedel_group.command('encode')
@click.argument('expr')
@click.option('--builtin', is_flag=True, help='允許 Q（內建引號）記號')
@handle_errors
def goedel_encode(expr: str, builtin: bool):
    """前綴記號串 → 編碼"""
    click.echo(str(goedel.encode(goedel.parse(expr, builtin))))


@goedel_group.command('decode')
@click.argument('code', type=int)
@click.option('--builtin', is_flag=True, help='允許 Q（內建引號）記號')
@handle_errors
def goedel_decode(code: int, builtin: bool):
    """編碼 → 前綴記號串（不是編碼時印出 undefined）"""
    result = goedel.decode(code, builtin)
    click.echo(UNDEFINED_TEXT if result is None else goedel.show(result))


@goedel_group.command('quote')
@click.argument('expr')
@handle_errors
def goedel_quote(expr: str):
    """運算式 → 其編碼的數字項"""
    click.echo(goedel.show(goedel.quote_num(goedel.parse(expr))))


@goedel_group.command('table')
def goedel_table():
    """印出記號與數字的對照表"""
    for symbol, digit in goedel.symbol_table():
        click.echo(f"{symbol}\t{digit}")


@goedel_group.command('non-code')
@click.option('--limit', type=click.IntRange(min=1), default=None, help='掃描上限')
@handle_errors
def goedel_non_code(limit: Optional[int]):
    """最小的非編碼自然數"""
    if limit is None:
        limit = ConfigManager().get_int('goedel.scan_limit')
    result = goedel.smallest_non_code(limit)
    click.echo(UNDEFINED_TEXT if result is None else str(result))


# ----------------------------------------------------------------------
# lambda
# ----------------------------------------------------------------------

@cli.group('lambda')
def lambda_group():
    """lambda 演算"""


@lambda_group.command('nf')
@click.argument('term')
@click.option('--fuel', type=click.IntRange(min=0), default=None, help='β 步數上限')
@handle_errors
def lambda_nf(term: str, fuel: Optional[int]):
    """最左最外化簡到正規形（燃料耗盡時印出 ⊥）"""
    result = lambda_calc.beta_nf(lambda_calc.parse_term(term), fuel)
    click.echo(BOTTOM_TEXT if result is None else lambda_calc.show_term(result))


@lambda_group.command('rep')
@click.argument('term')
@handle_errors
def lambda_rep(term: str):
    """表示綱要 ⟨t⟩"""
    click.echo(lambda_calc.show_term(lambda_calc.rep(lambda_calc.parse_term(term))))


@lambda_group.command('selfinterp')
@click.argument('term')
@click.option('--fuel', type=click.IntRange(min=0), default=None, help='β 步數上限')
@handle_errors
def lambda_selfinterp(term: str, fuel: Optional[int]):
    """以自我解釋器求值 E ⟨t⟩"""
    result = lambda_calc.run_self_interp(lambda_calc.parse_term(term), fuel)
    click.echo(BOTTOM_TEXT if result is None else lambda_calc.show_term(result))


# ----------------------------------------------------------------------
# ring
# ----------------------------------------------------------------------

@cli.group('ring')
def ring_group():
    """環正規化"""


@ring_group.command('normalize')
@click.argument('expr')
@handle_errors
def ring_normalize(expr: str):
    """印出有序單項式和"""
    click.echo(ring.show_normal(ring.normalize_expr(ring.parse_ring(expr))))


# ----------------------------------------------------------------------
# qq
# ----------------------------------------------------------------------

@cli.command()
@click.argument('expr')
@click.option('--fuel', type=click.IntRange(min=0), default=None, help='每個拼接的求值步數')
@handle_errors
def qq(expr: str, fuel: Optional[int]):
    """展開反引號：標記運算式、擬引用與其值"""
    interpreter = minilisp.LispInterpreter(fuel)
    inst = minilisp.build_framework(interpreter)
    marked = minilisp.expand_backquote(minilisp.read(expr))
    click.echo(f"base: {minilisp.show(marked.base)}")
    for position, splice_expr in marked.marks:
        click.echo(f"mark {position}: {minilisp.show(splice_expr)}")
    quoted = quasiquote(inst, marked)
    if quoted is None:
        click.echo(f"quasiquote: {UNDEFINED_TEXT}")
        return
    click.echo(f"quasiquote: {minilisp.show(quoted)}")
    value = interpreter.interp(quoted)
    click.echo(f"value: {BOTTOM_TEXT if value is None else minilisp.show(value)}")


def main() -> None:
    cli(prog_name='quosyn')
