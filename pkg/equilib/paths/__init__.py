"""
paths - 梯度、最大反应路径、动态/准化学平衡曲线与可行组成路径
"""

from .feasible import LinkageOffsets, build_profile, continue_branch
from .gradient import gradient_at, in_region
from .level_curves import (trace_dynamic_equilibrium, trace_quasi_equilibrium,
                           verify_dynamic_equilibrium)
from .maximal import implicit_invariant, trace_maximal_reaction
from .traced_path import PathKind, PathPoint, StopReason, TracedPath

__all__ = [
    "gradient_at",
    "in_region",
    "trace_maximal_reaction",
    "implicit_invariant",
    "trace_dynamic_equilibrium",
    "trace_quasi_equilibrium",
    "verify_dynamic_equilibrium",
    "LinkageOffsets",
    "build_profile",
    "continue_branch",
    "TracedPath",
    "PathPoint",
    "PathKind",
    "StopReason",
]
