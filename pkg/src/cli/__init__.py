"""命令行界面：click 命令、JSON 报告与图像输出"""

from .commands import cli, main
from .render import escape_image, rasterize, write_image
from .report import build_report, to_jsonable, validate_report, write_report

__all__ = [
    "cli",
    "main",
    "escape_image",
    "rasterize",
    "write_image",
    "build_report",
    "to_jsonable",
    "validate_report",
    "write_report",
]
