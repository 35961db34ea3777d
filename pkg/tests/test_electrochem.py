import math
from dataclasses import replace

import numpy as np
import pytest

from equilib.core.constants import F, P_STANDARD, R, T_REF
from equilib.core.error_model import create_error_model
from equilib.core.exceptions import CalibrationError, ConfigError, DomainError
from equilib.core.fields import AffineField
from equilib.core.gibbs_model import AffineGibbsModel, RegimeTag
from equilib.core.system import ReactionSystem, Species
from equilib.electrochem import (CellSpec, Measurement, calibrate_cell, cell_potential,
                                 delta_g_from_potential, dg_dxi_from_measurement,
                                 nernst_potential, steering_schedule)
from equilib.paths import StopReason
from equilib.paths.level_curves import solve_level_pressure


def _henry_errors():
    system = ReactionSystem((
        Species("A", -1, henry_constant=0.5 * P_STANDARD),
        Species("B", 1, henry_constant=3.0 * P_STANDARD),
    ))
    return create_error_model(system, RegimeTag.HENRY_NO_INTERACTION)


class TestNernst:
    def test_standard_cell(self, model):
        cell = CellSpec(2, model, quotient=math.e)
        assert nernst_potential(cell, T_REF, 2e5) == pytest.approx(-R * T_REF / (2 * F),
                                                                   rel=1e-12)

    def test_catalyst_halves_offset(self, model):
        two = nernst_potential(CellSpec(2, model, quotient=math.e), T_REF, 2e5)
        four = nernst_potential(CellSpec(4, model, quotient=math.e), T_REF, 2e5)
        assert four == pytest.approx(0.5 * two, rel=1e-12)

    def test_zero_at_standard_pressure(self, model):
        assert nernst_potential(CellSpec(2, model), 310.0, P_STANDARD) == 0.0

    def test_closed_form_quotient(self, model):
        cell = CellSpec(2, model, _henry_errors())
        T, P = 305.0, 3e5
        shift = model.dg_dxi(T, P) - model.delta_g_standard(T)
        assert nernst_potential(cell, T, P) == pytest.approx(-shift / (2 * F), rel=1e-10)

    def test_zero_eps_has_no_pressure_dependence(self):
        cell = CellSpec(2, AffineGibbsModel(-1000.0, beta=5.0))
        for P in (1e3, 1e5, 1e7):
            assert nernst_potential(cell, 300.0, P) == 0.0


class TestMeasurementInversion:
    def test_delta_g(self, model):
        cell = CellSpec(2, model)
        assert delta_g_from_potential(cell, -0.1, 0.0) == pytest.approx(-19297.07, abs=0.01)

    def test_solvent_correction(self, model):
        cell = CellSpec(2, model)
        value = delta_g_from_potential(cell, 0.0, 0.0, a0_standard=0.9, T=300.0)
        assert value == pytest.approx(R * 300.0 * math.log(0.9), rel=1e-12)

    def test_solvent_correction_needs_temperature(self, model):
        with pytest.raises(ConfigError):
            delta_g_from_potential(CellSpec(2, model), 0.0, 0.0, a0_standard=0.9)

    def test_standard_point(self, model):
        cell = CellSpec(2, model, quotient=1.0)
        assert dg_dxi_from_measurement(cell, 300.0, 2e5, 1.2, 1.2, -500.0) == -500.0

    @pytest.mark.parametrize("T,P", [(290.0, 5e4), (310.0, 2e5), (330.0, 8e5)])
    def test_round_trip_through_forward_relation(self, model, T, P):
        cell = CellSpec(2, model, _henry_errors(), e_standard=1.23,
                        quotient=AffineField(1.5, 1e-3))
        E = 1.23 + cell_potential(cell, T, P)
        dg = dg_dxi_from_measurement(cell, T, P, E, 1.23, model.delta_g_standard(T))
        assert dg == pytest.approx(model.dg_dxi(T, P), rel=1e-10, abs=1e-8)


class TestCellValidation:
    @pytest.mark.parametrize("n", [0, 2.5, -2])
    def test_electron_count(self, model, n):
        with pytest.raises(ConfigError):
            CellSpec(n, model)

    def test_non_positive_quotient(self, model):
        with pytest.raises(DomainError):
            nernst_potential(CellSpec(2, model, quotient=-1.0), 300.0, 1e5)

    def test_missing_standard_potential(self, model):
        with pytest.raises(ConfigError):
            CellSpec(2, model).standard_potential(300.0)

    def test_tabulated_standard_potential(self, model):
        cell = CellSpec(2, model, e_standard={"kind": "table_T", "T": [280.0, 320.0],
                                              "values": [1.20, 1.24]})
        assert cell.standard_potential(300.0) == pytest.approx(1.22)
        with pytest.raises(DomainError):
            cell.standard_potential(350.0)


def _measurements(true_cell, e_standard=1.23, temps=np.linspace(290.0, 310.0, 5)):
    rows = []
    for T in temps:
        T = float(T)
        P = solve_level_pressure(true_cell.model, None, T, 1.5)
        rows.append(Measurement(T, P, e_standard + cell_potential(true_cell, T, P)))
    return rows


class TestCalibration:
    def test_recovers_pressure_sensitivity(self, model):
        true_cell = CellSpec(2, model, e_standard=1.23, quotient=1.5)
        guess = CellSpec(2, AffineGibbsModel(-1000.0, eps=500.0, beta=5.0), e_standard=1.23,
                         quotient=1.5)
        calibration = calibrate_cell(guess, _measurements(true_cell))
        assert calibration.eps_hat == pytest.approx(2000.0, rel=1e-9)
        assert calibration.model.eps == calibration.eps_hat
        assert calibration.residual_rms <= 1e-6

    def test_offsets_without_standard_potential(self, model):
        true_cell = CellSpec(2, model, quotient=1.5)
        guess = CellSpec(2, AffineGibbsModel(-1000.0, beta=5.0), quotient=1.5)
        calibration = calibrate_cell(guess, _measurements(true_cell, e_standard=0.0))
        assert calibration.eps_hat == pytest.approx(2000.0, rel=1e-9)

    def test_recovers_dg_dxi_along_measured_curve(self, model):
        true_cell = CellSpec(2, model, e_standard=1.23, quotient=1.5)
        guess = CellSpec(2, AffineGibbsModel(-1000.0, eps=500.0, beta=5.0), e_standard=1.23,
                         quotient=1.5)
        data = _measurements(true_cell)
        calibration = calibrate_cell(guess, data)
        expected = [model.dg_dxi(m.T, m.P) for m in data]
        assert calibration.dg_dxi == pytest.approx(expected, rel=1e-10)
        assert calibration.model.lam == pytest.approx(-1000.0, abs=1e-6)
        assert calibration.model.beta == pytest.approx(5.0, rel=1e-9)
        assert calibration.model.sigma == 0.0

    def test_anchors_on_tabulated_standard_gibbs(self, model):
        true_cell = CellSpec(2, model, e_standard=1.23, quotient=1.5)
        table = {"kind": "table_T", "T": [280.0, 320.0], "values": [320.0, 480.0]}
        guess = CellSpec(2, AffineGibbsModel(-1000.0, eps=500.0, beta=5.0), e_standard=1.23,
                         quotient=1.5, dg_standard=table)
        data = _measurements(true_cell)
        calibration = calibrate_cell(guess, data)
        assert calibration.eps_hat == pytest.approx(2000.0, rel=1e-9)
        assert calibration.model.lam == pytest.approx(-800.0, abs=1e-6)
        assert calibration.model.beta == pytest.approx(4.0, rel=1e-9)
        assert calibration.model.sigma == 0.0
        assert calibration.standard_rms <= 1e-8
        expected = [-800.0 + 4.0 * m.T + 2000.0 * math.log(m.P / P_STANDARD) for m in data]
        assert calibration.dg_dxi == pytest.approx(expected, rel=1e-9)

    def test_empty(self, model):
        with pytest.raises(CalibrationError):
            calibrate_cell(CellSpec(2, model, e_standard=1.0), [])

    def test_standard_pressure_only(self, model):
        data = [Measurement(T, P_STANDARD, 1.0) for T in (290.0, 300.0, 310.0)]
        with pytest.raises(CalibrationError):
            calibrate_cell(CellSpec(2, model, e_standard=1.0), data)

    def test_noisy_measurements(self, model, rng):
        true_cell = CellSpec(2, model, e_standard=1.23, quotient=1.5)
        noisy = [Measurement(m.T, m.P, m.E + 1e-3 * rng.standard_normal())
                 for m in _measurements(true_cell)]
        with pytest.raises(CalibrationError) as info:
            calibrate_cell(true_cell, noisy)
        assert len(info.value.residuals) == 5
        assert info.value.residual > 0


class TestSteeringSchedule:
    def test_schedule_follows_true_potential(self, model):
        true_cell = CellSpec(2, model, e_standard=1.23, quotient=1.5)
        guess = CellSpec(2, AffineGibbsModel(-1000.0, eps=500.0, beta=5.0), e_standard=1.23,
                         quotient=1.5)
        schedule = steering_schedule(guess, _measurements(true_cell), (T_REF, 2e5),
                                     direction=-1)
        assert schedule.stop_reason is StopReason.REGION_EXIT
        assert len(schedule) > 2
        for row in schedule.rows:
            expected = cell_potential(true_cell, row.T, row.P)
            assert row.E_offset == pytest.approx(expected, rel=1e-9, abs=1e-12)
        assert all(row.in_region for row in schedule.rows[:-1])
        assert not schedule.rows[-1].in_region
        assert schedule.calibration.eps_hat == pytest.approx(2000.0, rel=1e-9)

    def test_closed_form_quotient_uses_calibrated_model(self):
        # q 取闭式时 E − E° = 0 只在标定后的模型下成立
        kappa = 1500.0 / (2 * F)
        data = [Measurement(T, P, 1.23 + kappa * math.log(P / P_STANDARD))
                for T in (290.0, 300.0, 310.0) for P in (5e4, 2e5, 4e5)]
        guess = CellSpec(2, AffineGibbsModel(-1000.0, eps=500.0, beta=5.0), e_standard=1.23)
        schedule = steering_schedule(guess, data, (T_REF, 2e5), direction=-1)
        calibration = schedule.calibration
        assert calibration.eps_hat == pytest.approx(2000.0, rel=1e-9)
        calibrated = replace(guess, model=calibration.model)
        assert len(schedule) > 2
        for row in schedule.rows:
            assert row.E_offset == pytest.approx(0.0, abs=1e-12)
            assert row.E_offset == cell_potential(calibrated, row.T, row.P)
            stale = cell_potential(guess, row.T, row.P, model=calibration.model)
            assert stale != pytest.approx(0.0, abs=1e-6)
