"""
electrochem - Nernst 电位、测量反解与电位调度
"""

from .cell import (CellSpec, cell_potential, delta_g_from_potential, dg_dxi_from_measurement,
                   nernst_potential)
from .steering import Measurement, calibrate_cell, steering_schedule

__all__ = [
    "CellSpec",
    "nernst_potential",
    "delta_g_from_potential",
    "dg_dxi_from_measurement",
    "cell_potential",
    "Measurement",
    "calibrate_cell",
    "steering_schedule",
]
