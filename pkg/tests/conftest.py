"""
测试共用的体系与模型
"""

import numpy as np
import pytest

from equilib.core.gibbs_model import AffineGibbsModel
from equilib.core.system import QuotientConvention, ReactionSystem, SolventMode, Species


@pytest.fixture
def pair_system():
    """A ⇌ B"""
    return ReactionSystem((Species("A", -1), Species("B", 1)))


@pytest.fixture
def dimer_system():
    """A ⇌ 2B"""
    return ReactionSystem((
        Species("A", -1, molar_mass=0.028, molar_volume=2.0e-5),
        Species("B", 2, molar_mass=0.014, molar_volume=1.5e-5),
    ))


@pytest.fixture
def solvent_system():
    """溶剂 S 不参与反应，W 约定"""
    return ReactionSystem(
        (Species("S", 0, is_solvent=True), Species("A", -1), Species("B", 1)),
        SolventMode.NO_INTERACTION, QuotientConvention.W,
    )


@pytest.fixture
def model():
    return AffineGibbsModel(lam=-1000.0, eps=2000.0, beta=5.0)


@pytest.fixture
def rng():
    return np.random.default_rng(20240615)
