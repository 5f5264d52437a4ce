"""
点云与逃逸时间图像的栅格化和写出

PPM (P6) 总是可用；路径以 .png 结尾且安装了 Pillow 时写 PNG。
"""

from pathlib import Path
from typing import Sequence, Tuple

import numpy as np

from ..core.exceptions import OutputError, ValidationError
from ..core.logger import get_logger
from ..dynamics.single import DEFAULT_MAX_ITER, green_array
from ..poly.polynomial import Polynomial
from ..sphere.point import infinite_mask

try:
    from PIL import Image
except ImportError:  # Pillow 是可选依赖
    Image = None

BACKGROUND = 0
FOREGROUND = 255

Window = Tuple[float, float, float, float]


def _check_window(width: int, height: int, window: Sequence[float]) -> Window:
    if width < 1 or height < 1:
        raise ValidationError(f"图像尺寸必须为正: {width}x{height}", field_name="width")
    if len(window) != 4:
        raise ValidationError("window 需要4个数值 re0,im0,re1,im1", field_name="window")
    re0, im0, re1, im1 = (float(x) for x in window)
    if not (re1 > re0 and im1 > im0):
        raise ValidationError(f"window 区域退化: {tuple(window)}", field_name="window")
    return re0, im0, re1, im1


def pixel_coordinates(points: np.ndarray, width: int, height: int, window: Sequence[float]) -> Tuple[np.ndarray, np.ndarray]:
    """落在窗口内的有限点的 (列, 行)；第 0 行对应 im1"""
    re0, im0, re1, im1 = _check_window(width, height, window)
    points = np.asarray(points, dtype=np.complex128).ravel()
    points = points[~infinite_mask(points)]
    col = np.floor((points.real - re0) / (re1 - re0) * width).astype(np.int64)
    row = np.floor((im1 - points.imag) / (im1 - im0) * height).astype(np.int64)
    inside = (col >= 0) & (col < width) & (row >= 0) & (row < height)
    return col[inside], row[inside]


def pixel_centers(width: int, height: int, window: Sequence[float]) -> np.ndarray:
    """每个像素中心对应的复数，形状 (height, width)"""
    re0, im0, re1, im1 = _check_window(width, height, window)
    xs = re0 + (np.arange(width) + 0.5) * (re1 - re0) / width
    ys = im1 - (np.arange(height) + 0.5) * (im1 - im0) / height
    return xs[None, :] + 1j * ys[:, None]


def rasterize(points: np.ndarray, width: int, height: int, window: Sequence[float]) -> np.ndarray:
    """把点云画成 8 位灰度图，点所在像素为 255，其余为 0"""
    image = np.full((height, width), BACKGROUND, dtype=np.uint8)
    col, row = pixel_coordinates(points, width, height, window)
    image[row, col] = FOREGROUND
    return image


def escape_image(p: Polynomial, width: int, height: int, window: Sequence[float],
                 max_iter: int = DEFAULT_MAX_ITER) -> np.ndarray:
    """按 Green 函数着色的逃逸图: 有界轨道为 0，越远离填充 Julia 集越亮"""
    grid = pixel_centers(width, height, window)
    values, _, _ = green_array(p, grid.ravel(), max_iter)
    shade = np.round(FOREGROUND * values / (1.0 + values))
    return shade.reshape(height, width).astype(np.uint8)


def encode_ppm(image: np.ndarray) -> bytes:
    """P6 编码；灰度图复制到三个通道"""
    if image.ndim == 2:
        image = np.repeat(image[:, :, None], 3, axis=2)
    height, width, _ = image.shape
    header = f"P6\n{width} {height}\n255\n".encode("ascii")
    return header + np.ascontiguousarray(image, dtype=np.uint8).tobytes()


def write_image(path: str, image: np.ndarray) -> str:
    """写出图像，返回实际写入的路径"""
    target = Path(path)
    try:
        if target.parent and not target.parent.exists():
            target.parent.mkdir(parents=True, exist_ok=True)
        if target.suffix.lower() == ".png":
            if Image is not None:
                Image.fromarray(image).save(target)
                return str(target)
            target = target.with_suffix(".ppm")
            get_logger().warning("未安装 Pillow, 改写为 PPM", {"path": str(target)})
        target.write_bytes(encode_ppm(image))
    except OSError as e:
        raise OutputError(f"无法写入图像: {e}", path=str(path))
    return str(target)
