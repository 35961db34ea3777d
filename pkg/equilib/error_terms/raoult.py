"""
raoult.py - Raoult 定律偏差项 ν_i·γ_i(P)，γ_i(P) = V_m,i·(2P − P_i* − P′)
"""

from typing import Optional, Tuple

from ..core.base_error_term import BaseErrorTerm, SeparablePart
from ..core.exceptions import ConfigError
from ..core.fields import CallableField, Field, FieldLike, as_field
from ..numerics.differences import central_difference


class RaoultTerm(BaseErrorTerm):
    """Raoult 偏差项

    P_i* 可以是常数或温度的函数；为函数时对 T 的偏导用有限差分。
    """

    signature = "P"

    def __init__(self, species: str, nu: float, molar_volume: Optional[float],
                 p_star: FieldLike, p_prime: float):
        super().__init__(species, nu)
        if molar_volume is None or not molar_volume > 0:
            raise ConfigError("Raoult 误差项需要 molar_volume > 0",
                              field=f"species.{species}.molar_volume")
        self.molar_volume = float(molar_volume)
        if callable(p_star) and not isinstance(p_star, Field):
            p_star = CallableField(p_star, depends_on_pressure=False)
        self.p_star = as_field(p_star, f"errors.{species}.p_star")
        if self.p_star.depends_on_pressure and not self.p_star.is_constant:
            raise ConfigError("P_i* 只能依赖温度",
                              field=f"errors.{species}.p_star")
        self.p_prime = float(p_prime)
        if not self.p_star.is_constant:
            self.signature = "TP"

    def gamma(self, T: float, P: float) -> float:
        """单个物种的 γ_i(P)"""
        return self.molar_volume * (2.0 * P - self.p_star(T) - self.p_prime)

    def value(self, T: float, P: float) -> float:
        return self._checked(self.nu * self.gamma(T, P), T, P)

    def analytic_partials(self, T: float, P: float) -> Optional[Tuple[float, float]]:
        d_p = 2.0 * self.nu * self.molar_volume
        if self.p_star.is_constant:
            return 0.0, d_p
        analytic = self.p_star.partials(T)
        if analytic is not None:
            return -self.nu * self.molar_volume * analytic[0], d_p
        d_t = -self.nu * self.molar_volume * central_difference(lambda t: self.p_star(t), T)
        return d_t, d_p

    def partials(self, T: float, P: float) -> Tuple[float, float, bool]:
        d_t, d_p = self.analytic_partials(T, P)
        exact = self.p_star.is_constant or self.p_star.partials(T) is not None
        return d_t, d_p, exact

    def separable_part(self) -> Optional[SeparablePart]:
        if not self.p_star.is_constant:
            return None
        coef = self.nu * self.molar_volume
        offset = self.p_star(0.0) + self.p_prime
        return SeparablePart(a=lambda P: coef * (2.0 * P - offset),
                             a_prime=lambda P: 2.0 * coef, b=0.0)

    def balance_pressure(self, T: float) -> float:
        """γ_i = 0 的压力 (P_i* + P′)/2"""
        return 0.5 * (self.p_star(T) + self.p_prime)
