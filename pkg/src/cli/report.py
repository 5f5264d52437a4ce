"""
JSON 报告

报告结构固定为 command / config / results / reproducibility / timings 五个键；
精确有理数序列化为 "p/q"，复数为 [re, im]，∞ 为 "infinity"。
除 timings 外，相同参数两次运行得到的报告逐字节相同。
"""

import dataclasses
import json
import math
from enum import Enum
from fractions import Fraction
from pathlib import Path
from typing import Any, Dict, List, Optional

import click
import numpy as np

from .. import __version__
from ..core.exceptions import OutputError, ValidationError
from ..sphere.point import SpherePoint

INFINITY = "infinity"

REPORT_SCHEMA: Dict[str, Any] = {
    "type": "object",
    "required": ["command", "config", "results", "reproducibility", "timings"],
    "properties": {
        "command": {"type": "string"},
        "config": {"type": "object"},
        "results": {"type": "object"},
        "reproducibility": {
            "type": "object",
            "required": ["seed", "version"],
            "properties": {"seed": {"type": "integer"}, "version": {"type": "string"}},
        },
        "timings": {"type": "object"},
    },
}

_JSON_TYPES = {"object": dict, "string": str, "integer": int}


def _complex_pair(z: complex) -> Any:
    if not (math.isfinite(z.real) and math.isfinite(z.imag)):
        return INFINITY
    return [float(z.real), float(z.imag)]


def to_jsonable(obj: Any) -> Any:
    """把结果对象递归转换为 JSON 兼容值"""
    if isinstance(obj, Enum):
        return obj.value
    if obj is None or isinstance(obj, (bool, str)):
        return obj
    if isinstance(obj, Fraction):
        return f"{obj.numerator}/{obj.denominator}"
    if isinstance(obj, (int, np.integer)):
        return int(obj)
    if isinstance(obj, (float, np.floating)):
        value = float(obj)
        if math.isnan(value):
            return None
        if math.isinf(value):
            return INFINITY if value > 0 else f"-{INFINITY}"
        return value
    if isinstance(obj, SpherePoint):
        return INFINITY if obj.infinite else [obj.re, obj.im]
    if isinstance(obj, (complex, np.complexfloating)):
        return _complex_pair(complex(obj))
    if isinstance(obj, np.ndarray):
        return [to_jsonable(x) for x in obj.tolist()]
    if dataclasses.is_dataclass(obj) and not isinstance(obj, type):
        return {f.name: to_jsonable(getattr(obj, f.name)) for f in dataclasses.fields(obj)
                if f.repr and not f.name.startswith("_")}
    if isinstance(obj, dict):
        return {_key(k): to_jsonable(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [to_jsonable(x) for x in obj]
    raise TypeError(f"无法序列化的类型: {type(obj).__name__}")


def _key(key: Any) -> str:
    if isinstance(key, tuple):
        return ",".join(str(k) for k in key)
    return str(key)


def build_report(command: str,
                 config: Dict[str, Any],
                 results: Dict[str, Any],
                 seed: int,
                 timings: Optional[Dict[str, float]] = None) -> Dict[str, Any]:
    return {
        "command": command,
        "config": to_jsonable(config),
        "results": to_jsonable(results),
        "reproducibility": {"seed": int(seed), "version": __version__},
        "timings": to_jsonable(timings or {}),
    }


def _check(value: Any, schema: Dict[str, Any], path: str, problems: List[str]) -> None:
    expected = _JSON_TYPES[schema["type"]]
    if not isinstance(value, expected) or (expected is int and isinstance(value, bool)):
        problems.append(f"{path}: 期望 {schema['type']}")
        return
    if expected is dict:
        for key in schema.get("required", []):
            if key not in value:
                problems.append(f"{path}.{key}: 缺失")
        for key, sub in schema.get("properties", {}).items():
            if key in value:
                _check(value[key], sub, f"{path}.{key}", problems)


def validate_report(report: Dict[str, Any]) -> Dict[str, Any]:
    """按 REPORT_SCHEMA 校验报告，返回报告本身"""
    problems: List[str] = []
    _check(report, REPORT_SCHEMA, "$", problems)
    if problems:
        raise ValidationError(f"报告结构不合法: {'; '.join(problems)}", field_name="report")
    return report


def dumps_report(report: Dict[str, Any]) -> str:
    return json.dumps(report, indent=2, ensure_ascii=False, allow_nan=False)


def write_report(report: Dict[str, Any], out: Optional[str] = None) -> None:
    """写到 out 指定的文件，缺省写到 stdout"""
    text = dumps_report(validate_report(report))
    if out is None:
        click.echo(text)
        return
    try:
        path = Path(out)
        if path.parent and not path.parent.exists():
            path.parent.mkdir(parents=True, exist_ok=True)
        path.write_text(text + "\n", encoding="utf-8")
    except OSError as e:
        raise OutputError(f"无法写入报告: {e}", path=str(out))
