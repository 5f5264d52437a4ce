"""
异常处理基础框架
定义系统中使用的所有自定义异常类，以及CLI退出码映射
"""

import traceback
from functools import wraps
from typing import Any, Callable, Dict, List, Optional, Type, Union


class JuliaSeekerException(Exception):
    """Julia-Seeker基础异常类"""

    exit_code: int = 1

    def __init__(self, message: str, error_code: Optional[str] = None, context: Optional[Dict[str, Any]] = None):
        super().__init__(message)
        self.message = message
        self.error_code = error_code
        self.context = context or {}

    def __str__(self) -> str:
        if self.error_code:
            return f"[{self.error_code}] {self.message}"
        return self.message

    def to_dict(self) -> Dict[str, Any]:
        """转换为字典格式"""
        return {
            "error_type": self.__class__.__name__,
            "message": self.message,
            "error_code": self.error_code,
            "context": self.context,
        }


class ConfigurationError(JuliaSeekerException):
    """配置相关异常"""

    exit_code = 2

    def __init__(self, message: str, config_key: Optional[str] = None, **kwargs):
        super().__init__(message, error_code="CONFIG_ERROR", **kwargs)
        self.config_key = config_key


class ValidationError(JuliaSeekerException):
    """参数验证异常（前置条件不满足）"""

    exit_code = 2

    def __init__(self, message: str, field_name: Optional[str] = None, **kwargs):
        super().__init__(message, error_code="VALIDATION_ERROR", **kwargs)
        self.field_name = field_name


class ParseError(JuliaSeekerException):
    """多项式表达式语法错误"""

    exit_code = 2

    def __init__(self, message: str, text: str = "", position: int = 0, **kwargs):
        self.text = text
        self.position = position
        self.line, self.column = self._line_column(text, position)
        super().__init__(
            f"{message} (line {self.line}, column {self.column})",
            error_code="PARSE_ERROR",
            **kwargs,
        )

    @staticmethod
    def _line_column(text: str, position: int):
        before = text[:position]
        line = before.count("\n") + 1
        column = position - (before.rfind("\n") + 1) + 1
        return line, column


class DomainError(JuliaSeekerException):
    """输入超出运算定义域"""

    exit_code = 2

    def __init__(self, message: str, operation: Optional[str] = None, **kwargs):
        super().__init__(message, error_code="DOMAIN_ERROR", **kwargs)
        self.operation = operation


class ConvergenceError(JuliaSeekerException):
    """数值迭代未收敛"""

    exit_code = 3

    def __init__(self, message: str, best_residual: Optional[float] = None, **kwargs):
        super().__init__(message, error_code="CONVERGENCE_ERROR", **kwargs)
        self.best_residual = best_residual


class NonRepellingError(JuliaSeekerException):
    """不存在排斥不动点"""

    exit_code = 3

    def __init__(self, message: str, multipliers: Optional[List[float]] = None, **kwargs):
        super().__init__(message, error_code="NON_REPELLING", **kwargs)
        self.multipliers = multipliers or []


class GuardViolation(JuliaSeekerException):
    """精确算术证明检查中出现越界中间点"""

    def __init__(self, message: str, step: Optional[int] = None, **kwargs):
        super().__init__(message, error_code="GUARD_VIOLATION", **kwargs)
        self.step = step


class OutputError(JuliaSeekerException):
    """报告或图像写入失败"""

    exit_code = 4

    def __init__(self, message: str, path: Optional[str] = None, **kwargs):
        super().__init__(message, error_code="OUTPUT_ERROR", **kwargs)
        self.path = path


def handle_exceptions(
    exceptions: Union[Type[Exception], List[Type[Exception]]] = Exception,
    default_return=None,
    log_error: bool = True,
    reraise: bool = False
):
    """
    异常处理装饰器

    Args:
        exceptions: 要捕获的异常类型
        default_return: 异常时的默认返回值
        log_error: 是否记录错误日志
        reraise: 是否重新抛出异常
    """

    if not isinstance(exceptions, (list, tuple)):
        exceptions = [exceptions]

    def decorator(func: Callable):
        @wraps(func)
        def wrapper(*args, **kwargs):
            try:
                return func(*args, **kwargs)
            except tuple(exceptions) as e:
                if log_error:
                    from .logger import get_logger
                    logger = get_logger()
                    logger.log_error(e, {
                        "function": func.__name__,
                        "args": str(args)[:200],
                        "kwargs": str(kwargs)[:200],
                        "traceback": traceback.format_exc()
                    })

                if reraise:
                    raise

                return default_return

        return wrapper
    return decorator
