import math

import numpy as np
import pytest

from equilib.core.constants import P_STANDARD, R, T_REF
from equilib.core.error_model import ErrorModel
from equilib.core.exceptions import ConfigError, LevelNotAttained
from equilib.core.gibbs_model import AffineGibbsModel, RegimeTag
from equilib.error_terms import RaoultTerm
from equilib.paths import (PathKind, trace_dynamic_equilibrium, trace_quasi_equilibrium,
                           verify_dynamic_equilibrium)
from equilib.paths.level_curves import solve_level_pressure


def _raoult_errors():
    return ErrorModel(RegimeTag.IDEAL_RAOULT, [
        RaoultTerm("A", -1, 2.0e-5, 9.0e4, 1.1e5),
        RaoultTerm("B", 2, 1.5e-5, 8.0e4, 1.2e5),
    ])


class TestDynamicEquilibrium:
    def test_unit_level_is_standard_pressure(self, model):
        path = trace_dynamic_equilibrium(model, None, 1.0, 280.0, 320.0, n_points=5)
        assert path.kind is PathKind.DYNAMIC_EQUILIBRIUM
        assert path.pressures == pytest.approx([P_STANDARD] * 5)
        assert path.quotients == pytest.approx([1.0] * 5)

    def test_closed_form_pressure(self):
        model = AffineGibbsModel(0.0, eps=R * T_REF)
        path = trace_dynamic_equilibrium(model, None, math.e, T_REF, T_REF, n_points=1)
        assert path.points[0].P == pytest.approx(math.e * P_STANDARD, rel=1e-12)

    def test_pressure_rises_with_temperature(self, model):
        path = trace_dynamic_equilibrium(model, None, 2.0, 280.0, 340.0, n_points=7)
        assert np.all(np.diff(path.pressures) > 0)

    def test_error_terms_use_root_finding(self, model):
        path = trace_dynamic_equilibrium(model, _raoult_errors(), 1.5, 280.0, 320.0, n_points=5)
        assert len(path) == 5
        assert path.max_deviation <= 1e-10
        # 取最接近 P° 的根
        assert np.all(path.pressures < 1e6)
        assert path.invariants == pytest.approx(path.quotients)

    def test_unreachable_level_is_skipped(self, model):
        path = trace_dynamic_equilibrium(model, None, 1e300, 280.0, 320.0, n_points=4)
        assert len(path) == 0
        assert [T for T, _ in path.skipped] == pytest.approx([280.0, 280.0 + 40 / 3,
                                                              280.0 + 80 / 3, 320.0])

    def test_unreachable_level_raises_for_single_point(self, model):
        with pytest.raises(LevelNotAttained):
            solve_level_pressure(model, None, 300.0, 1e300)

    @pytest.mark.parametrize("level", [0.0, -1.0])
    def test_level_must_be_positive(self, model, level):
        with pytest.raises(ConfigError):
            trace_dynamic_equilibrium(model, None, level, 280.0, 320.0)

    def test_invalid_temperature_range(self, model):
        with pytest.raises(ConfigError):
            trace_dynamic_equilibrium(model, None, 1.0, 320.0, 280.0)


class TestQuasiEquilibrium:
    def test_level_curve(self, model):
        path = trace_quasi_equilibrium(model, 500.0, 300.0, 320.0, n_points=11)
        assert path.kind is PathKind.QUASI_CHEMICAL_EQUILIBRIUM
        assert path.points[0].P == pytest.approx(P_STANDARD, rel=1e-12)
        assert path.max_deviation <= 1e-9
        for point in path.points:
            assert model.dg_dxi(point.T, point.P) == pytest.approx(500.0, abs=1e-6)

    def test_vertical_line(self):
        model = AffineGibbsModel(-300.0, beta=1.0)
        path = trace_quasi_equilibrium(model, 0.0, 250.0, 350.0)
        assert len(path) == 0
        assert path.vertical_lines == pytest.approx((300.0,))

    def test_vertical_line_outside_range(self):
        path = trace_quasi_equilibrium(AffineGibbsModel(-300.0, beta=1.0), 0.0, 400.0, 500.0)
        assert path.vertical_lines == ()


class TestVerifyDynamicEquilibrium:
    def test_constant_composition(self, pair_system):
        check = verify_dynamic_equilibrium([[1.0, 2.0]] * 4, pair_system)
        assert check.is_dynamic
        assert check.max_dn == 0.0
        assert check.max_quotient_deviation == 0.0

    def test_changing_composition(self, pair_system):
        check = verify_dynamic_equilibrium([[1.0, 2.0], [1.5, 1.5]], pair_system)
        assert not check.is_dynamic
        assert check.max_dn == pytest.approx(0.5)
        assert check.max_quotient_deviation == pytest.approx(0.5)

    def test_shape(self):
        with pytest.raises(ConfigError):
            verify_dynamic_equilibrium([1.0, 2.0])
