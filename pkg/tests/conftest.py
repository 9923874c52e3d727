from __future__ import annotations

import math

import pytest

from cnot_cavity_sim import CavityParams, ClonerModel, ControlState, TargetState, coefficients

# kappa_s/kappa = g/kappa = 0.01, rho = 0.1*kappa: the design's quoted optimum
PAPER_POINT = CavityParams(kappa=1.0, kappa_s=0.01, g=0.01, rho=0.1)


@pytest.fixture
def paper_params() -> CavityParams:
    return PAPER_POINT


@pytest.fixture
def paper_coeffs():
    return coefficients(PAPER_POINT)


@pytest.fixture
def cloner_56() -> ClonerModel:
    return ClonerModel(5.0 / 6.0)


@pytest.fixture
def plus_control() -> ControlState:
    s = 1.0 / math.sqrt(2.0)
    return ControlState(s, s)


@pytest.fixture
def l_target() -> TargetState:
    return TargetState(0.0, 1.0)
