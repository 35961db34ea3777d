"""
henry.py - Henry 定律修正 ν_i·κ_i(T)，κ_i(T) = RT·ln(k_i/P°)
"""

import math
from typing import Optional, Tuple

from ..core.base_error_term import BaseErrorTerm, SeparablePart
from ..core.constants import P_STANDARD, R
from ..core.exceptions import ConfigError


class HenryTerm(BaseErrorTerm):
    """Henry 修正项，关于 T 线性"""

    signature = "T"

    def __init__(self, species: str, nu: float, henry_constant: Optional[float],
                 p_standard: float = P_STANDARD, gas_constant: float = R):
        super().__init__(species, nu)
        if henry_constant is None or not henry_constant > 0:
            raise ConfigError("Henry 模式需要 henry_constant > 0",
                              field=f"species.{species}.henry_constant")
        self.henry_constant = float(henry_constant)
        self.p_standard = p_standard
        self.gas_constant = gas_constant

    @property
    def slope(self) -> float:
        """∂/∂T = ν·R·ln(k/P°)"""
        return self.nu * self.gas_constant * math.log(self.henry_constant / self.p_standard)

    def value(self, T: float, P: float) -> float:
        return self._checked(self.slope * T, T, P)

    def analytic_partials(self, T: float, P: float) -> Tuple[float, float]:
        return self.slope, 0.0

    def separable_part(self) -> SeparablePart:
        return SeparablePart(a=lambda P: 0.0, a_prime=lambda P: 0.0, b=self.slope)
