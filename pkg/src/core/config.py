"""
配置管理系统
支持YAML配置加载、环境变量覆盖，以及运行配置的分层合并（默认值 < 配置文件 < 命令行参数）
"""

import os
from dataclasses import asdict, dataclass, field, fields, replace
from pathlib import Path
from typing import Any, Dict, List, Optional, Tuple

import yaml
from dotenv import load_dotenv

from .exceptions import ConfigurationError

DEFAULT_CONFIG_PATH = Path(__file__).resolve().parents[2] / "config" / "config.yaml"


@dataclass
class RunSettings:
    """实验规模配置"""
    depth: int
    budget: int
    seed: int
    grid_cells: int
    workers: int


@dataclass
class ToleranceConfig:
    """数值容差配置"""
    compare_tol: float
    compare_samples: int
    green_max_iter: int


@dataclass
class RenderConfig:
    """图像输出配置"""
    width: int
    height: int
    window: Tuple[float, float, float, float]


@dataclass
class SystemConfig:
    """系统配置"""
    log_level: str
    log_dir: str
    debug_mode: bool


@dataclass
class RunConfig:
    """一次命令运行的完整配置"""
    generators: List[str] = field(default_factory=list)
    depth: int = 16
    budget: int = 1_000_000
    seed: int = 42
    grid_cells: int = 2048
    workers: int = 1
    tol: float = 1e-3
    samples: int = 4096
    max_iter: int = 512
    width: int = 512
    height: int = 512
    window: Tuple[float, float, float, float] = (-4.0, -4.0, 4.0, 4.0)
    mode: str = "single"
    out: Optional[str] = None
    image: Optional[str] = None

    def validate(self) -> "RunConfig":
        """验证数值字段，返回自身便于链式调用"""
        positive = ["budget", "grid_cells", "workers", "samples", "max_iter", "width", "height"]
        for name in positive:
            value = getattr(self, name)
            if not isinstance(value, int) or isinstance(value, bool) or value <= 0:
                raise ConfigurationError(f"{name} 必须是正整数, 实际为 {value!r}", config_key=name)

        for name in ["depth", "seed"]:
            value = getattr(self, name)
            if not isinstance(value, int) or isinstance(value, bool) or value < 0:
                raise ConfigurationError(f"{name} 必须是非负整数, 实际为 {value!r}", config_key=name)

        if not self.tol > 0:
            raise ConfigurationError(f"tol 必须为正数, 实际为 {self.tol!r}", config_key="tol")

        if len(self.window) != 4:
            raise ConfigurationError("window 需要4个数值 re0,im0,re1,im1", config_key="window")
        re0, im0, re1, im1 = self.window
        if not (re1 > re0 and im1 > im0):
            raise ConfigurationError(f"window 区域退化: {self.window}", config_key="window")

        return self

    def merged(self, overrides: Optional[Dict[str, Any]]) -> "RunConfig":
        """用非空覆盖项生成新的配置"""
        if not overrides:
            return self
        known = {f.name for f in fields(self)}
        unknown = set(overrides) - known
        if unknown:
            raise ConfigurationError(f"未知配置项: {sorted(unknown)}", config_key=sorted(unknown)[0])

        values = {k: v for k, v in overrides.items() if v is not None}
        if "generators" in values:
            values["generators"] = list(values["generators"])
            if not values["generators"]:
                del values["generators"]
        if "window" in values:
            values["window"] = tuple(float(x) for x in values["window"])
        if "tol" in values:
            values["tol"] = float(values["tol"])
        return replace(self, **values)

    def to_dict(self) -> Dict[str, Any]:
        """转换为可序列化的字典"""
        data = asdict(self)
        data["window"] = list(self.window)
        return data


class ConfigManager:
    """配置管理器"""

    def __init__(self, config_path: str = str(DEFAULT_CONFIG_PATH)):
        self.config_path = Path(config_path)
        self._config: Optional[Dict[str, Any]] = None
        self._load_config()

    def _load_config(self) -> None:
        """加载配置文件"""
        try:
            if not self.config_path.exists():
                raise FileNotFoundError(f"配置文件不存在: {self.config_path}")

            with open(self.config_path, 'r', encoding='utf-8') as f:
                self._config = yaml.safe_load(f) or {}

            load_dotenv()
            self._apply_env_overrides()

        except Exception as e:
            raise ConfigurationError(f"加载配置文件失败: {e}", config_key=str(self.config_path))

    def _apply_env_overrides(self) -> None:
        """应用环境变量覆盖"""
        env_mappings = {
            'LOG_LEVEL': ['system_config', 'log_level'],
            'DEBUG_MODE': ['system_config', 'debug_mode'],
            'JULIA_SEEKER_LOG_DIR': ['system_config', 'log_dir'],
            'JULIA_SEEKER_WORKERS': ['run_config', 'workers'],
        }

        for env_var, config_path in env_mappings.items():
            env_value = os.getenv(env_var)
            if env_value:
                current = self._config
                for key in config_path[:-1]:
                    current = current.setdefault(key, {})
                current[config_path[-1]] = env_value

    def get_run_settings(self) -> RunSettings:
        """获取实验规模配置"""
        config = self._config.get('run_config', {})
        return RunSettings(
            depth=int(config.get('depth', 16)),
            budget=int(config.get('budget', 1_000_000)),
            seed=int(config.get('seed', 42)),
            grid_cells=int(config.get('grid_cells', 2048)),
            workers=int(config.get('workers', 1))
        )

    def get_tolerance_config(self) -> ToleranceConfig:
        """获取数值容差配置"""
        config = self._config.get('tolerance_config', {})
        return ToleranceConfig(
            compare_tol=float(config.get('compare_tol', 1e-3)),
            compare_samples=int(config.get('compare_samples', 4096)),
            green_max_iter=int(config.get('green_max_iter', 512))
        )

    def get_render_config(self) -> RenderConfig:
        """获取图像输出配置"""
        config = self._config.get('render_config', {})
        window = config.get('window', [-4.0, -4.0, 4.0, 4.0])
        return RenderConfig(
            width=int(config.get('width', 512)),
            height=int(config.get('height', 512)),
            window=tuple(float(x) for x in window)
        )

    def get_system_config(self) -> SystemConfig:
        """获取系统配置"""
        config = self._config.get('system_config', {})
        debug_mode = config.get('debug_mode', False)
        if isinstance(debug_mode, str):
            debug_mode = debug_mode.strip().lower() in ("1", "true", "yes", "on")
        return SystemConfig(
            log_level=str(config.get('log_level', 'INFO')).upper(),
            log_dir=str(config.get('log_dir', './logs')),
            debug_mode=bool(debug_mode)
        )

    def get_run_config(self) -> RunConfig:
        """由配置文件各节组装默认运行配置"""
        settings = self.get_run_settings()
        tolerance = self.get_tolerance_config()
        render = self.get_render_config()
        return RunConfig(
            depth=settings.depth,
            budget=settings.budget,
            seed=settings.seed,
            grid_cells=settings.grid_cells,
            workers=settings.workers,
            tol=tolerance.compare_tol,
            samples=tolerance.compare_samples,
            max_iter=tolerance.green_max_iter,
            width=render.width,
            height=render.height,
            window=render.window
        )

    def reload_config(self) -> None:
        """重新加载配置"""
        self._load_config()

    def get_raw_config(self) -> Dict[str, Any]:
        """获取原始配置字典"""
        return self._config.copy() if self._config else {}


def load_run_file(path: str) -> Dict[str, Any]:
    """读取用户提供的运行配置文件（JSON或YAML，字段与RunConfig一致）"""
    file_path = Path(path)
    try:
        with open(file_path, 'r', encoding='utf-8') as f:
            data = yaml.safe_load(f) or {}
    except OSError as e:
        raise ConfigurationError(f"无法读取运行配置文件: {e}", config_key=str(file_path))
    except yaml.YAMLError as e:
        raise ConfigurationError(f"运行配置文件格式错误: {e}", config_key=str(file_path))

    if not isinstance(data, dict):
        raise ConfigurationError("运行配置文件顶层必须是对象", config_key=str(file_path))
    return data
