import math

import numpy as np
import pytest

from equilib.core.enthalpy import (MixtureHeatModel, bound_w, delta_h_of_T, error_w,
                                   reaction_heat_capacity, transport_delta_g)
from equilib.core.exceptions import ConfigError, DomainError
from equilib.core.fields import AffineField
from equilib.core.gibbs_model import gibbs_helmholtz_transport


def _single(capacity, m_mix=1.0, dh_ref=-4.0e4, T0=298.15, mass=1.0):
    return MixtureHeatModel([1.0], [mass], [capacity], m_mix, dh_ref, T0, names=["W"])


class TestReactionHeatCapacity:
    def test_single_species(self):
        hm = _single(4184.0, mass=0.018)
        assert reaction_heat_capacity(hm, 300.0) == pytest.approx(-75.312, rel=1e-12)

    def test_cancellation(self):
        hm = MixtureHeatModel([-1.0, 1.0], [0.028, 0.014], [1000.0, 2000.0], 1.0, 0.0, 298.15)
        assert reaction_heat_capacity(hm, 350.0) == pytest.approx(0.0, abs=1e-12)

    def test_vanishes_with_mixture_mass(self):
        small = reaction_heat_capacity(_single(4184.0, m_mix=1.0), 300.0)
        large = reaction_heat_capacity(_single(4184.0, m_mix=2.0), 300.0)
        assert large == pytest.approx(0.5 * small, rel=1e-12)

    def test_non_positive_capacity(self):
        with pytest.raises(DomainError) as info:
            reaction_heat_capacity(_single(0.0), 300.0)
        assert info.value.species == "W"

    def test_pressure_dependent_capacity_rejected(self):
        with pytest.raises(ConfigError):
            _single(AffineField(1000.0, 0.0, 1e-3))

    def test_mixture_mass_positive(self):
        with pytest.raises(ConfigError):
            _single(1000.0, m_mix=0.0)


class TestDeltaH:
    def test_reference_temperature(self):
        hm = _single(10.0)
        assert delta_h_of_T(hm, hm.T0) == hm.dh_ref

    def test_constant_capacity(self):
        hm = _single(10.0)
        assert delta_h_of_T(hm, hm.T0 + 50.0) == pytest.approx(hm.dh_ref - 500.0, rel=1e-12)

    def test_table_matches_affine(self):
        table = _single({"kind": "table", "T": [200.0, 300.0, 400.0],
                         "values": [1000.0, 1100.0, 1200.0]})
        affine = _single({"kind": "affine", "a": 800.0, "b_T": 1.0})
        assert table.linear_coefficients is None
        assert affine.linear_coefficients == pytest.approx((-800.0, -1.0))
        for T in (210.0, 298.15, 350.0, 400.0):
            assert delta_h_of_T(table, T) == pytest.approx(delta_h_of_T(affine, T), rel=1e-10)

    def test_table_out_of_range(self):
        hm = _single({"kind": "table", "T": [200.0, 400.0], "values": [1000.0, 1200.0]})
        with pytest.raises(DomainError) as info:
            delta_h_of_T(hm, 450.0)
        assert info.value.species == "W"

    def test_from_system(self, dimer_system):
        hm = MixtureHeatModel.from_system(dimer_system, {"A": 1040.0, "B": 1300.0}, 1.0,
                                          -4.0e4, 298.15)
        # −(−0.028·1040 + 2·0.014·1300)
        assert reaction_heat_capacity(hm, 300.0) == pytest.approx(-7.28, rel=1e-12)

    def test_from_system_unknown_species(self, dimer_system):
        with pytest.raises(ConfigError):
            MixtureHeatModel.from_system(dimer_system, {"A": 1040.0, "B": 1300.0, "C": 5.0},
                                         1.0, 0.0, 298.15)

    def test_from_system_missing_capacity(self, dimer_system):
        with pytest.raises(ConfigError, match="enthalpy.heat_capacity.B"):
            MixtureHeatModel.from_system(dimer_system, {"A": 1040.0}, 1.0, 0.0, 298.15)


class TestErrorW:
    def test_same_temperature(self):
        assert error_w(_single(10.0), 320.0, 320.0) == 0.0

    def test_constant_closed_form(self):
        hm = _single(10.0)
        c, T0, T1, T2 = -10.0, hm.T0, 300.0, 360.0
        expected = T1 * c * (math.log(T2 / T1) + T0 * (1.0 / T2 - 1.0 / T1))
        assert error_w(hm, T1, T2) == pytest.approx(expected, rel=1e-12)

    def test_quadrature_matches_closed_form(self):
        closed = _single(10.0)
        table = _single({"kind": "table", "T": [200.0, 500.0], "values": [10.0, 10.0]})
        for T1, T2 in [(300.0, 360.0), (420.0, 250.0)]:
            assert error_w(table, T1, T2) == pytest.approx(error_w(closed, T1, T2), rel=1e-8)

    @pytest.mark.parametrize("T1,T2", [(300.0, 360.0), (250.0, 400.0), (380.0, 320.0)])
    def test_bound(self, T1, T2):
        hm = _single({"kind": "affine", "a": 800.0, "b_T": 1.0}, m_mix=0.5)
        c_bound = hm.capacity_sup(T1, T2)
        assert abs(error_w(hm, T1, T2)) <= bound_w(hm, T1, T2, c_bound) * (1 + 1e-12)

    def test_negative_bound(self):
        with pytest.raises(ConfigError):
            bound_w(_single(10.0), 300.0, 350.0, -1.0)

    def test_scales_with_mixture_mass(self):
        w1 = error_w(_single(10.0, m_mix=1.0), 300.0, 380.0)
        w4 = error_w(_single(10.0, m_mix=4.0), 300.0, 380.0)
        assert w4 == pytest.approx(0.25 * w1, rel=1e-12)


class TestTransport:
    def test_reduces_without_heat_capacity(self):
        hm = MixtureHeatModel([-1.0, 1.0], [0.028, 0.014], [1000.0, 2000.0], 1.0, -5.0e4, 298.15)
        assert transport_delta_g(hm, -1.0e5, 300.0, 400.0) == pytest.approx(
            gibbs_helmholtz_transport(-1.0e5, -5.0e4, 300.0, 400.0), rel=1e-12)

    def test_exact_for_constant_capacity(self):
        # ΔH(T) = ΔH0 + c(T − T0)，ΔS(T) = ΔS0 + c·ln(T/T0)
        hm = _single(10.0, dh_ref=-5.0e4)
        c, T0, dh0, ds0 = -10.0, hm.T0, -5.0e4, -80.0

        def dg(T):
            return dh0 + c * (T - T0) - T * (ds0 + c * math.log(T / T0))

        assert transport_delta_g(hm, dg(400.0), 300.0, 400.0) == pytest.approx(dg(300.0),
                                                                             rel=1e-10)


def _random_heat_model(rng, tabulated):
    size = int(rng.integers(2, 4))
    nu = rng.choice([-2.0, -1.0, 1.0, 2.0], size=size)
    masses = rng.uniform(0.01, 0.1, size)
    if tabulated:
        caps = []
        for _ in range(size):
            knots = np.concatenate([[200.0], np.sort(rng.uniform(220.0, 480.0, 2)), [500.0]])
            caps.append({"kind": "table", "T": knots.tolist(),
                         "values": rng.uniform(500.0, 4000.0, knots.size).tolist()})
    else:
        caps = [{"kind": "affine", "a": float(a), "b_T": float(b)}
                for a, b in zip(rng.uniform(1000.0, 3000.0, size), rng.uniform(-1.0, 1.0, size))]
    return MixtureHeatModel(nu, masses, caps, rng.uniform(0.5, 5.0), -4.0e4,
                            rng.uniform(250.0, 350.0))


class TestErrorWBoundRandom:
    def test_bound_holds_for_random_models(self, rng):
        for k in range(100):
            hm = _random_heat_model(rng, tabulated=k % 2 == 0)
            T1, T2 = rng.uniform(220.0, 480.0, 2)
            c_bound = hm.capacity_sup(T1, T2)
            assert abs(error_w(hm, T1, T2)) <= bound_w(hm, T1, T2, c_bound) * (1 + 1e-9)

    @pytest.mark.parametrize("capacity", [
        {"kind": "table", "T": [200.0, 320.0, 500.0], "values": [1000.0, 1500.0, 1100.0]},
        {"kind": "affine", "a": 800.0, "b_T": 1.0},
    ], ids=["table", "affine"])
    def test_vanishes_as_inverse_mixture_mass(self, capacity):
        masses = np.logspace(0.0, 3.0, 7)
        values = [abs(error_w(_single(capacity, m_mix=m_mix), 300.0, 380.0)) for m_mix in masses]
        slope, _ = np.polyfit(np.log(masses), np.log(values), 1)
        assert slope == pytest.approx(-1.0, abs=0.01)
