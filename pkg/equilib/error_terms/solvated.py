"""
solvated.py - 稀溶液溶剂活度修正 −RT·ln a_0(T, P)

活度商按 Q/a_0 使用，因此误差项为 −RT·ln a_0；a_0 ≡ 1 时退化为无误差。
"""

import math
from typing import Optional, Tuple

from ..core.base_error_term import BaseErrorTerm
from ..core.constants import R
from ..core.exceptions import DomainError
from ..core.fields import FieldLike, as_field


class SolventActivityTerm(BaseErrorTerm):
    """溶剂活度项"""

    signature = "TP"

    def __init__(self, species: str, a0: FieldLike = 1.0, gas_constant: float = R):
        super().__init__(species, 1.0)
        self.a0 = as_field(a0, f"errors.{species}.a0")
        self.gas_constant = gas_constant

    def activity(self, T: float, P: float) -> float:
        a = self.a0(T, P)
        if not a > 0:
            raise DomainError(f"溶剂活度 a0={a!r} 必须 > 0", species=self.species)
        return a

    def value(self, T: float, P: float) -> float:
        return -self.nu * self.gas_constant * T * math.log(self.activity(T, P))

    def analytic_partials(self, T: float, P: float) -> Optional[Tuple[float, float]]:
        analytic = self.a0.partials(T, P)
        if analytic is None:
            return None
        a = self.activity(T, P)
        r = self.gas_constant
        d_t = -r * math.log(a) - r * T * analytic[0] / a
        d_p = -r * T * analytic[1] / a
        return self.nu * d_t, self.nu * d_p
