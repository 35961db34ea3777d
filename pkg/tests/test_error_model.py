import math

import pytest

from equilib.core.constants import P_STANDARD, R
from equilib.core.error_model import ErrorModel, create_error_model
from equilib.core.exceptions import ConfigError, DomainError
from equilib.core.fields import AffineField, CallableField, LogAffineField
from equilib.core.gibbs_model import RegimeTag
from equilib.core.system import QuotientConvention, ReactionSystem, SolventMode, Species
from equilib.error_terms import (FugacityTerm, HenryTerm, PotentialTerm, RaoultTerm,
                                 SolventActivityTerm)
from equilib.numerics.differences import partial_derivatives


def _henry_system():
    return ReactionSystem((
        Species("A", -1, henry_constant=P_STANDARD),
        Species("B", 1, henry_constant=math.e * P_STANDARD),
    ))


class TestIdealized:
    def test_zero(self):
        em = ErrorModel.idealized()
        assert em.epsilon(300.0, 2e5) == 0.0
        partials = em.epsilon_partials(300.0, 2e5)
        assert (partials.d_T, partials.d_P) == (0.0, 0.0)
        assert em.signature == ""

    def test_terms_rejected(self):
        with pytest.raises(ConfigError):
            ErrorModel(RegimeTag.IDEALIZED, [HenryTerm("B", 1, 2e5)])


class TestHenry:
    def test_single_solute(self):
        em = ErrorModel(RegimeTag.HENRY_NO_INTERACTION, [HenryTerm("B", 1, math.e * P_STANDARD)])
        assert em.epsilon(300.0, 5e4) == pytest.approx(R * 300.0, rel=1e-12)
        assert em.epsilon(300.0, 5e4) == pytest.approx(2494.34, abs=0.01)
        partials = em.epsilon_partials(300.0, 5e4)
        assert partials.d_T == pytest.approx(R, rel=1e-12)
        assert partials.d_P == 0.0
        assert partials.analytic
        assert em.signature == "T"

    def test_from_system(self):
        em = create_error_model(_henry_system(), RegimeTag.HENRY_NO_INTERACTION)
        # A 的 Henry 常数等于 P°，贡献为零
        assert em.epsilon(350.0, 1e5) == pytest.approx(R * 350.0, rel=1e-12)

    def test_requires_henry_constant(self, pair_system):
        with pytest.raises(ConfigError, match="henry_constant"):
            create_error_model(pair_system, RegimeTag.HENRY_NO_INTERACTION)

    def test_interacting_needs_interacting_solvent(self):
        with pytest.raises(ConfigError, match="solvent_mode"):
            create_error_model(_henry_system(), RegimeTag.HENRY_INTERACTING)

    def test_non_finite_value_rejected(self):
        term = HenryTerm("B", 1, math.e * P_STANDARD)
        with pytest.raises(DomainError) as info:
            term.value(math.inf, 1e5)
        assert info.value.species == "B"


class TestRaoult:
    def test_vanishes_at_balance_pressure(self):
        term = RaoultTerm("A", 1, 2.0e-5, 9.0e4, 1.1e5)
        assert term.balance_pressure(300.0) == pytest.approx(1.0e5)
        assert term.value(300.0, 1.0e5) == pytest.approx(0.0, abs=1e-12)

    def test_all_species_at_balance(self):
        em = ErrorModel(RegimeTag.IDEAL_RAOULT, [
            RaoultTerm("A", -1, 2.0e-5, 9.0e4, 1.1e5),
            RaoultTerm("B", 2, 1.5e-5, 8.0e4, 1.2e5),
        ])
        assert em.epsilon(300.0, 1.0e5) == pytest.approx(0.0, abs=1e-12)
        assert em.signature == "P"

    def test_partials_closed_form(self):
        em = ErrorModel(RegimeTag.IDEAL_RAOULT, [
            RaoultTerm("A", -1, 2.0e-5, 9.0e4, 1.1e5),
            RaoultTerm("B", 2, 1.5e-5, 8.0e4, 1.2e5),
        ])
        partials = em.epsilon_partials(300.0, 1.3e5)
        assert partials.d_T == 0.0
        assert partials.d_P == pytest.approx(-1 * 2 * 2.0e-5 + 2 * 2 * 1.5e-5)
        assert partials.analytic

    def test_temperature_dependent_vapor_pressure(self):
        p_star = CallableField(lambda t: 9.0e4 + 10.0 * t, depends_on_pressure=False)
        term = RaoultTerm("A", 1, 2.0e-5, p_star, 1.1e5)
        d_t, d_p, exact = term.partials(300.0, 1.0e5)
        assert not exact
        assert d_t == pytest.approx(-2.0e-5 * 10.0, rel=1e-6)
        assert d_p == pytest.approx(4.0e-5)
        assert term.signature == "TP"

    def test_requires_molar_volume(self, pair_system):
        with pytest.raises(ConfigError, match="molar_volume"):
            create_error_model(pair_system, RegimeTag.IDEAL_RAOULT,
                               {"A": {"p_star": 9e4}, "B": {"p_star": 9e4}})

    def test_requires_vapor_pressure(self, dimer_system):
        with pytest.raises(ConfigError, match="errors.A.p_star"):
            create_error_model(dimer_system, RegimeTag.IDEAL_RAOULT)

    def test_pressure_dependent_vapor_pressure_rejected(self):
        with pytest.raises(ConfigError, match="errors.A.p_star"):
            RaoultTerm("A", 1, 2.0e-5, AffineField(9.0e4, 0.0, 1e-3), 1.1e5)

    def test_plain_callable_vapor_pressure(self):
        term = RaoultTerm("A", 1, 2.0e-5, lambda t: 9.0e4 + 10.0 * t, 1.1e5)
        assert term.value(300.0, 1.0e5) == pytest.approx(2.0e-5 * (2.0e5 - 9.3e4 - 1.1e5))
        assert term.balance_pressure(300.0) == pytest.approx(1.065e5)


class TestFields:
    @pytest.mark.parametrize("field", [AffineField(1.0, 0.0, 1e-3),
                                       LogAffineField(1.0, 0.0, 0.5)])
    def test_pressure_dependent_field_needs_pressure(self, field):
        with pytest.raises(ConfigError):
            field(300.0)

    def test_temperature_only_field_without_pressure(self):
        assert AffineField(1.0, 2.0)(300.0) == 601.0
        assert LogAffineField(1.0, 2.0)(300.0) == pytest.approx(1.0 + 2.0 * math.log(300.0))


class TestFugacity:
    def test_reduces_to_henry(self):
        fugacity = FugacityTerm("B", 2, 3.0e5)
        henry = HenryTerm("B", 2, 3.0e5)
        for T, P in [(280.0, 5e4), (330.0, 2e5)]:
            assert fugacity.value(T, P) == pytest.approx(henry.value(T, P), rel=1e-12)

    def test_analytic_partials_match_finite_differences(self):
        term = FugacityTerm("B", 1, 2.0e5, gamma=AffineField(1.0, 1e-3, 1e-7),
                            delta=AffineField(0.9, 0.0, 2e-7))
        d_t, d_p, exact = term.partials(300.0, 1.0e5)
        assert exact
        fd_t, fd_p = partial_derivatives(term.value, 300.0, 1.0e5)
        assert d_t == pytest.approx(fd_t, rel=1e-6)
        assert d_p == pytest.approx(fd_p, rel=1e-6)

    def test_user_potential_finite_differences(self):
        em = ErrorModel(RegimeTag.FUGACITY_NO_INTERACTION, [
            PotentialTerm("B", 1, CallableField(lambda T, P: T * P * 1e-6)),
        ])
        T, P = 310.0, 1.7e5
        partials = em.epsilon_partials(T, P)
        assert not partials.analytic
        assert partials.d_T == pytest.approx(P * 1e-6, rel=1e-6)
        assert partials.d_P == pytest.approx(T * 1e-6, rel=1e-6)
        assert em.signature == "TP"

    def test_non_positive_coefficient_names_species(self):
        term = FugacityTerm("B", 1, 2.0e5, gamma=0.0)
        with pytest.raises(DomainError) as info:
            term.value(300.0, 1e5)
        assert info.value.species == "B"

    def test_psi_overrides_fugacity(self):
        system = ReactionSystem((
            Species("A", -1, henry_constant=2e5),
            Species("B", 1, henry_constant=3e5),
        ))
        em = create_error_model(system, RegimeTag.FUGACITY_NO_INTERACTION,
                                {"B": {"psi": {"kind": "affine", "a": 10.0, "b_T": 0.5}}})
        expected = -R * 300.0 * math.log(2.0) + (10.0 + 0.5 * 300.0)
        assert em.epsilon(300.0, 1e5) == pytest.approx(expected, rel=1e-12)


class TestSolvated:
    def test_unit_activity(self):
        assert SolventActivityTerm("W", 1.0).value(300.0, 1e5) == 0.0

    def test_activity_correction(self):
        system = ReactionSystem(
            (Species("W", 0, is_solvent=True), Species("A", -1), Species("B", 1)),
            SolventMode.NO_INTERACTION, QuotientConvention.Q_WITH_A0,
        )
        em = create_error_model(system, RegimeTag.DILUTE_SOLVATED, {"W": {"a0": 0.98}})
        assert em.epsilon(300.0, 1e5) == pytest.approx(-R * 300.0 * math.log(0.98), rel=1e-12)

    def test_requires_solvent(self, pair_system):
        with pytest.raises(ConfigError, match="solvent_mode"):
            create_error_model(pair_system, RegimeTag.DILUTE_SOLVATED)


class TestAggregation:
    def test_doubling_stoichiometry_doubles_epsilon(self):
        system = _henry_system()
        em = create_error_model(system, RegimeTag.HENRY_NO_INTERACTION)
        doubled = create_error_model(system.with_scaled_nu(2.0), RegimeTag.HENRY_NO_INTERACTION)
        assert doubled.epsilon(320.0, 1e5) == pytest.approx(2 * em.epsilon(320.0, 1e5))
        assert em.scaled(2.0).epsilon(320.0, 1e5) == pytest.approx(2 * em.epsilon(320.0, 1e5))

    def test_unknown_species_in_settings(self, pair_system):
        with pytest.raises(ConfigError, match="未知物种"):
            create_error_model(pair_system, RegimeTag.IDEALIZED, {"C": {"p_star": 1.0}})

    def test_wrong_term_for_regime(self):
        with pytest.raises(ConfigError):
            ErrorModel(RegimeTag.IDEAL_RAOULT, [HenryTerm("B", 1, 2e5)])

    def test_separable_part(self):
        em = ErrorModel(RegimeTag.HENRY_INTERACTING, [
            RaoultTerm("W", -1, 1.8e-5, 3.0e3, 1.0e5),
            HenryTerm("B", 1, 2.0e5),
        ])
        part = em.separable_pressure_part()
        T, P = 300.0, 1.5e5
        assert part.a(P) + part.b * T == pytest.approx(em.epsilon(T, P), rel=1e-12)
        assert part.a_prime(P) == pytest.approx(em.epsilon_partials(T, P).d_P)
