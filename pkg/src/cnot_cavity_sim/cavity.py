"""Spin-dependent scattering coefficients of a double-sided optical microcavity.

A dot-loaded double-sided cavity acts as a frequency-dependent beam splitter
for a photon crossing it.  With the dipole transition coupled (the "hot"
cavity, coupling strength g active) the transmission amplitude is

    t1 = -kappa * Dx / (Dx * Dc + g**2),        r1 = 1 + t1,

where Dx = rho/2 - i*delta_x and Dc = kappa + kappa_s/2 - i*delta_c.  The
uncoupled ("cold") cavity is the g = 0 reduction, t0 = -kappa / Dc and
r0 = 1 + t0.  All rates share one unit; only ratios enter the coefficients,
so rescaling every rate and detuning by a common positive factor leaves
(t0, r0, t1, r1) unchanged.

Structural identities used throughout the rest of the package:

* r = 1 + t exactly, for both configurations;
* passivity |t|**2 + |r|**2 <= 1 whenever kappa_s >= 0 and rho >= 0, with
  equality for the lossless cold cavity (kappa_s = 0) at any detuning.
"""

from __future__ import annotations

import math
from dataclasses import dataclass


def _require_rate(name: str, value: float, positive: bool = False) -> None:
    if not math.isfinite(value):
        raise ValueError(f"{name} must be finite, got {value!r}")
    if positive:
        if value <= 0.0:
            raise ValueError(f"{name} must be > 0, got {value!r}")
    elif value < 0.0:
        raise ValueError(f"{name} must be >= 0, got {value!r}")


@dataclass(frozen=True)
class CavityParams:
    """Physical rates of the dot-cavity system, in units of the mirror decay.

    kappa is the mirror decay rate (conventionally 1), kappa_s the side
    leakage, g the dot-cavity coupling, rho the exciton dipole decay rate.
    delta_c and delta_x are the photon detunings from the cavity mode and
    from the dipole transition; the operating point of the gate is resonance
    (both zero).
    """

    kappa: float = 1.0
    kappa_s: float = 0.0
    g: float = 0.0
    rho: float = 0.0
    delta_c: float = 0.0
    delta_x: float = 0.0

    def __post_init__(self) -> None:
        _require_rate("kappa", self.kappa, positive=True)
        _require_rate("kappa_s", self.kappa_s)
        _require_rate("g", self.g)
        _require_rate("rho", self.rho)
        for name in ("delta_c", "delta_x"):
            if not math.isfinite(getattr(self, name)):
                raise ValueError(f"{name} must be finite, got {getattr(self, name)!r}")


@dataclass(frozen=True)
class CavityCoefficients:
    """The four scattering amplitudes (cold t0/r0, hot t1/r1)."""

    t0: complex
    r0: complex
    t1: complex
    r1: complex


def _detuning_factors(params: CavityParams) -> tuple[complex, complex]:
    d_x = complex(params.rho / 2.0, -params.delta_x)
    d_c = complex(params.kappa + params.kappa_s / 2.0, -params.delta_c)
    return d_x, d_c


def cold_coefficients(params: CavityParams) -> tuple[complex, complex]:
    """Transmission and reflection of the uncoupled cavity, (t0, r0)."""
    _, d_c = _detuning_factors(params)
    t0 = -params.kappa / d_c
    return t0, 1.0 + t0


def hot_coefficients(params: CavityParams) -> tuple[complex, complex]:
    """Transmission and reflection of the coupled cavity, (t1, r1).

    At g = 0 the dipole factor cancels and the hot cavity degenerates to the
    cold one; that reduction is taken explicitly so the rho = 0, g = 0 corner
    stays well defined.
    """
    if params.g == 0.0:
        return cold_coefficients(params)
    d_x, d_c = _detuning_factors(params)
    t1 = -params.kappa * d_x / (d_x * d_c + params.g * params.g)
    return t1, 1.0 + t1


def coefficients(params: CavityParams) -> CavityCoefficients:
    """Bundle cold and hot coefficients for one parameter set."""
    t0, r0 = cold_coefficients(params)
    t1, r1 = hot_coefficients(params)
    return CavityCoefficients(t0=t0, r0=r0, t1=t1, r1=r1)


def as_coefficients(cavity: CavityParams | CavityCoefficients) -> CavityCoefficients:
    """Accept either raw parameters or precomputed coefficients.

    Fidelity-level code takes this union so limiting coefficient sets (for
    example the lossless strong-coupling idealization t0=-1, r0=0, t1=0, r1=1)
    can be injected directly without a parameter set that realizes them.
    """
    if isinstance(cavity, CavityCoefficients):
        return cavity
    if isinstance(cavity, CavityParams):
        return coefficients(cavity)
    raise TypeError(
        f"expected CavityParams or CavityCoefficients, got {type(cavity).__name__}"
    )
