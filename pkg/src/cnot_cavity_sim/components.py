"""Discrete optical and spin elements of the gate, as amplitude transforms.

Polarization qubits live on two rails (right/left circular); each element is
a small pure function on complex rail amplitudes or on the spin label.  The
cloner is an effective scalar gain 2*sqrt(F) and the balanced splitter halves
the amplitude on each output arm, so the cloner-splitter chain hands
sqrt(F) * amplitude to each arm; the model is deliberately non-unitary and
the deficit is accounted as success probability downstream.
"""

from __future__ import annotations

import cmath
import enum
import math
from dataclasses import dataclass


class SpinState(enum.Enum):
    """Electron spin label; the gate starts and ends with spin up."""

    UP = "up"
    DOWN = "down"


def _require_finite(name: str, value: complex) -> complex:
    value = complex(value)
    if not (math.isfinite(value.real) and math.isfinite(value.imag)):
        raise ValueError(f"{name} must be finite, got {value!r}")
    return value


@dataclass(frozen=True)
class ControlState:
    """Control photon: a_r * |R> + a_l * |L>."""

    a_r: complex
    a_l: complex

    def __post_init__(self) -> None:
        object.__setattr__(self, "a_r", _require_finite("a_r", self.a_r))
        object.__setattr__(self, "a_l", _require_finite("a_l", self.a_l))

    @property
    def norm_sq(self) -> float:
        return abs(self.a_r) ** 2 + abs(self.a_l) ** 2


@dataclass(frozen=True)
class TargetState:
    """Target photon: a_r * |R> + a_l * |L>."""

    a_r: complex
    a_l: complex

    def __post_init__(self) -> None:
        object.__setattr__(self, "a_r", _require_finite("a_r", self.a_r))
        object.__setattr__(self, "a_l", _require_finite("a_l", self.a_l))

    @property
    def norm_sq(self) -> float:
        return abs(self.a_r) ** 2 + abs(self.a_l) ** 2


@dataclass(frozen=True)
class ClonerModel:
    """Universal cloner reduced to its effective pre-split gain 2*sqrt(f_uc)."""

    f_uc: float

    def __post_init__(self) -> None:
        if not math.isfinite(self.f_uc) or not 0.0 < self.f_uc <= 1.0:
            raise ValueError(f"f_uc must lie in (0, 1], got {self.f_uc!r}")

    @property
    def gain(self) -> float:
        return 2.0 * math.sqrt(self.f_uc)


@dataclass(frozen=True)
class PhaseGateParams:
    """Scalar phase gate exp(i * phi * pi) acting on both rail components."""

    phi: float

    def __post_init__(self) -> None:
        if not math.isfinite(self.phi):
            raise ValueError(f"phi must be finite, got {self.phi!r}")


def apply_phase_gate(amplitude: complex, params: PhaseGateParams) -> complex:
    """Multiply by exp(i * phi * pi); phi = 1 is the sign flip the gate uses."""
    amplitude = _require_finite("amplitude", amplitude)
    return amplitude * cmath.exp(1j * math.pi * params.phi)


def apply_cloner(amplitude: complex, cloner: ClonerModel) -> complex:
    """Scale by the cloner gain 2*sqrt(f_uc)."""
    amplitude = _require_finite("amplitude", amplitude)
    return cloner.gain * amplitude


def split_bs5050(amplitude: complex) -> tuple[complex, complex]:
    # Effective halving, not 1/sqrt(2): paired with the cloner gain this puts
    # sqrt(f_uc) of the input on each arm, which is the bookkeeping the rest
    # of the circuit assumes.
    half = amplitude / 2.0
    return half, half


def cpbs_route(state: ControlState) -> tuple[complex, complex]:
    """Split a polarization state onto (transmit, reflect) = (R, L) rails."""
    return state.a_r, state.a_l


def cpbs_merge(rail_r: complex, rail_l: complex) -> ControlState:
    """Inverse of :func:`cpbs_route`: recombine two rails into one state."""
    return ControlState(a_r=rail_r, a_l=rail_l)


def apply_sigma_x_spin(spin: SpinState) -> SpinState:
    """Flip the spin label (microwave pi pulse); an involution."""
    return SpinState.DOWN if spin is SpinState.UP else SpinState.UP
