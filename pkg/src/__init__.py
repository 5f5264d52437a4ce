"""
Julia-Seeker
多项式半群动力学的数值实验工具：J(G) 与 E(G) 点云、Green 函数比较与精确算术引理检查
"""

__version__ = "0.1.0"
__author__ = "Julia-Seeker Team"
