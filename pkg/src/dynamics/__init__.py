"""动力学引擎：单映射 Green/Böttcher/逆迭代，半群字轨道与 Julia 集比较"""

from .cloud import CloudKind, SetApprox
from .compare import (
    CompareResult,
    Verdict,
    hausdorff_distance,
    invariance_defect,
    isolation_radius,
    julia_compare,
)
from .semigroup import (
    CoverageResult,
    Direction,
    Letter,
    SemigroupSpec,
    SignedWord,
    apply_letter,
    apply_word,
    approx_E,
    approx_J_semigroup,
    coverage_experiment,
    reverse_word,
)
from .single import (
    BottcherValue,
    GreenEstimate,
    bottcher_value,
    green_array,
    green_value,
    julia_cloud_single,
    natural_depth,
    seed_repelling_cycle,
    seed_repelling_point,
)

__all__ = [
    "CloudKind",
    "SetApprox",
    "CompareResult",
    "Verdict",
    "hausdorff_distance",
    "invariance_defect",
    "isolation_radius",
    "julia_compare",
    "CoverageResult",
    "Direction",
    "Letter",
    "SemigroupSpec",
    "SignedWord",
    "apply_letter",
    "apply_word",
    "approx_E",
    "approx_J_semigroup",
    "coverage_experiment",
    "reverse_word",
    "BottcherValue",
    "GreenEstimate",
    "bottcher_value",
    "green_array",
    "green_value",
    "julia_cloud_single",
    "natural_depth",
    "seed_repelling_cycle",
    "seed_repelling_point",
]
