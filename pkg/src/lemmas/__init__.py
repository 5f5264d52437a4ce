"""精确算术与数值检查：对数坐标直线动力学、圆周展开与单项式刚性"""

from .circles import (
    CircleReport,
    RigidityOutcome,
    circle_lemma_check,
    minimal_turns,
    monomial_pair_julia_radius,
    monomial_rigidity_check,
)
from .line_dynamics import (
    DensityMarch,
    LineLetter,
    LineWord,
    LogDynParams,
    as_fraction,
    commutator_value,
    d_n_value,
    density_march,
    line_apply,
    reversed_commutator_value,
    s_power,
    t_power,
)

__all__ = [
    "CircleReport",
    "RigidityOutcome",
    "circle_lemma_check",
    "minimal_turns",
    "monomial_pair_julia_radius",
    "monomial_rigidity_check",
    "DensityMarch",
    "LineLetter",
    "LineWord",
    "LogDynParams",
    "as_fraction",
    "commutator_value",
    "d_n_value",
    "density_march",
    "line_apply",
    "reversed_commutator_value",
    "s_power",
    "t_power",
]
