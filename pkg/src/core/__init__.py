"""核心模块

包含系统的核心功能组件，如配置管理、日志系统、异常处理等。
"""

from .config import ConfigManager, RunConfig, load_run_file
from .logger import get_logger, setup_logging, JuliaSeekerLogger
from .exceptions import (
    JuliaSeekerException,
    ConfigurationError,
    ValidationError,
    ParseError,
    DomainError,
    ConvergenceError,
    NonRepellingError,
    GuardViolation,
    OutputError,
    handle_exceptions,
)

__all__ = [
    "ConfigManager",
    "RunConfig",
    "load_run_file",
    "get_logger",
    "setup_logging",
    "JuliaSeekerLogger",
    "JuliaSeekerException",
    "ConfigurationError",
    "ValidationError",
    "ParseError",
    "DomainError",
    "ConvergenceError",
    "NonRepellingError",
    "GuardViolation",
    "OutputError",
    "handle_exceptions",
]
