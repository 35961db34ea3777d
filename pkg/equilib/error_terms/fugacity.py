"""
fugacity.py - 逸度修正项
溶质 ψ_i(T,P) = RT·ln γ_i(T,P) + RT·ln(k_i·δ_i(T,P)/P°)；
溶剂或直接给出的势函数项 ν·φ(T,P)
"""

import math
from typing import Optional, Tuple

from ..core.base_error_term import BaseErrorTerm
from ..core.constants import P_STANDARD, R
from ..core.exceptions import ConfigError, DomainError
from ..core.fields import FieldLike, as_field


class FugacityTerm(BaseErrorTerm):
    """逸度修正；γ ≡ δ ≡ 1 时退化为 Henry 项"""

    signature = "TP"

    def __init__(self, species: str, nu: float, henry_constant: Optional[float],
                 gamma: FieldLike = 1.0, delta: FieldLike = 1.0,
                 p_standard: float = P_STANDARD, gas_constant: float = R):
        super().__init__(species, nu)
        if henry_constant is None or not henry_constant > 0:
            raise ConfigError("逸度模式需要 henry_constant > 0",
                              field=f"species.{species}.henry_constant")
        self.henry_constant = float(henry_constant)
        self.gamma = as_field(gamma, f"errors.{species}.gamma")
        self.delta = as_field(delta, f"errors.{species}.delta")
        self.p_standard = p_standard
        self.gas_constant = gas_constant

    def psi(self, T: float, P: float) -> float:
        """单个溶质的 ψ_i(T, P)"""
        g = self.gamma(T, P)
        d = self.delta(T, P)
        if g <= 0 or d <= 0:
            raise DomainError(f"活度系数 γ={g!r} 与逸度 δ={d!r} 必须 > 0", species=self.species)
        rt = self.gas_constant * T
        return rt * math.log(g) + rt * math.log(self.henry_constant * d / self.p_standard)

    def value(self, T: float, P: float) -> float:
        return self._checked(self.nu * self.psi(T, P), T, P)

    def analytic_partials(self, T: float, P: float) -> Optional[Tuple[float, float]]:
        pg = self.gamma.partials(T, P)
        pd = self.delta.partials(T, P)
        if pg is None or pd is None:
            return None
        g = self.gamma(T, P)
        d = self.delta(T, P)
        r = self.gas_constant
        d_t = (self.psi(T, P) / T + r * T * (pg[0] / g + pd[0] / d))
        d_p = r * T * (pg[1] / g + pd[1] / d)
        return self.nu * d_t, self.nu * d_p


class PotentialTerm(BaseErrorTerm):
    """直接给出的势函数项 ν·φ(T, P)（溶剂的 φ_0 或用户的 ψ_i）"""

    signature = "TP"

    def __init__(self, species: str, nu: float, potential: FieldLike):
        super().__init__(species, nu)
        self.potential = as_field(potential, f"errors.{species}.potential")

    def value(self, T: float, P: float) -> float:
        return self._checked(self.nu * self.potential(T, P), T, P)

    def analytic_partials(self, T: float, P: float) -> Optional[Tuple[float, float]]:
        analytic = self.potential.partials(T, P)
        if analytic is None:
            return None
        return self.nu * analytic[0], self.nu * analytic[1]
