"""Gate fidelity under an enumerable family of comparison conventions.

There is no single canonical way to score this circuit against "the" ideal
CNOT: the weak-coupling design transmits on both control branches (both
transmissions near -1), so which ideal target flip to compare against, how to
treat the R-branch sign, whether to renormalize the lossy output, and which
input distribution to average over are all free choices.  Each choice is a
field of :class:`FidelityConvention`; the full 3 x 2 x 2 x 3 = 36 grid can be
scanned with :func:`convention_search` to find which convention reproduces a
quoted average-fidelity figure.

Conventions serialize to short strings, e.g. ``flipboth/aswritten/raw/uniform``:
ideal variant / R-branch sign / normalization / averaging measure.

Averaging measures:

* ``uniform``  - real amplitudes cos/sin of one angle per photon, angles
  uniform on [0, 2*pi); quadrature uses the periodic trapezoid rule, which is
  exact here once the point count exceeds the trigonometric degree.
* ``haar``     - independent Haar-random single-qubit states; quadrature uses
  Gauss-Legendre in the polar coordinate times periodic trapezoid in the
  relative phase, likewise exact at modest point counts.
* ``basis``    - the four computational-basis input pairs, equally weighted.
"""

from __future__ import annotations

import enum
import itertools
import math
from dataclasses import dataclass

import numpy as np

from .cavity import CavityCoefficients, CavityParams, as_coefficients
from .circuit import JointState, closed_form_output
from .components import ClonerModel, ControlState, SpinState, TargetState


class IdealVariant(enum.Enum):
    """Which control branch flips the target in the reference gate.

    In the output basis order {R1R2, R1L2, L1L2, L1R2}, with control
    alpha|R> + beta|L> and target gamma|R> + delta|L>, the reference
    amplitudes are:

    ==========  =============================================
    flipl       (alpha*gamma, alpha*delta, beta*gamma, beta*delta)
    flipr       (alpha*delta, alpha*gamma, beta*delta, beta*gamma)
    flipboth    (alpha*delta, alpha*gamma, beta*gamma, beta*delta)
    ==========  =============================================

    ``flipl`` is the textbook CNOT (flip when control is L); ``flipboth``
    applies the target flip on both branches, which is the action this
    circuit's closed form approaches in the weak-coupling limit.
    """

    FLIP_ON_R = "flipr"
    FLIP_ON_L = "flipl"
    FLIP_BOTH = "flipboth"


class RBranchSign(enum.Enum):
    """Extra -1 on the reference state's R-branch components before comparing."""

    AS_WRITTEN = "aswritten"
    NEGATED = "negated"


class Normalization(enum.Enum):
    RAW_OVERLAP = "raw"
    RENORMALIZED = "renorm"


class Measure(enum.Enum):
    UNIFORM_ANGLES = "uniform"
    HAAR_PRODUCT = "haar"
    BASIS_STATES = "basis"


class AveragingMethod(enum.Enum):
    QUADRATURE = "quadrature"
    MONTE_CARLO = "monte_carlo"


_FIELD_ENUMS = (IdealVariant, RBranchSign, Normalization, Measure)


@dataclass(frozen=True)
class FidelityConvention:
    ideal_variant: IdealVariant
    r_branch_sign: RBranchSign
    normalization: Normalization
    measure: Measure

    def canonical(self) -> str:
        return "/".join(
            (
                self.ideal_variant.value,
                self.r_branch_sign.value,
                self.normalization.value,
                self.measure.value,
            )
        )

    @classmethod
    def parse(cls, text: str) -> "FidelityConvention":
        parts = text.strip().split("/")
        if len(parts) != 4:
            raise ValueError(
                f"convention string must have 4 '/'-separated fields, got {text!r}"
            )
        fields = []
        for part, enum_cls in zip(parts, _FIELD_ENUMS):
            try:
                fields.append(enum_cls(part))
            except ValueError:
                valid = ", ".join(m.value for m in enum_cls)
                raise ValueError(
                    f"unknown token {part!r} in convention {text!r}; expected one of: {valid}"
                ) from None
        return cls(*fields)


def all_conventions() -> list[FidelityConvention]:
    """All 36 conventions, in a fixed enumeration order."""
    return [
        FidelityConvention(v, s, n, m)
        for v, s, n, m in itertools.product(*_FIELD_ENUMS)
    ]


DEFAULT_CONVENTION = FidelityConvention(
    IdealVariant.FLIP_BOTH,
    RBranchSign.AS_WRITTEN,
    Normalization.RAW_OVERLAP,
    Measure.UNIFORM_ANGLES,
)


@dataclass(frozen=True)
class AveragingSpec:
    """How to average input fidelity over the convention's measure."""

    method: AveragingMethod = AveragingMethod.QUADRATURE
    quadrature_points: int = 64
    mc_samples: int = 100_000
    seed: int = 0

    def __post_init__(self) -> None:
        if self.quadrature_points < 8:
            raise ValueError(f"quadrature_points must be >= 8, got {self.quadrature_points}")
        if self.mc_samples < 1000:
            raise ValueError(f"mc_samples must be >= 1000, got {self.mc_samples}")
        if not 0 <= self.seed < 2**64:
            raise ValueError(f"seed must be an unsigned 64-bit integer, got {self.seed}")


@dataclass(frozen=True)
class FidelityEstimate:
    """Average fidelity plus, for Monte Carlo, its standard error."""

    value: float
    std_error: float | None
    n_points: int

    def __float__(self) -> float:
        return self.value


def ideal_output(control: ControlState, target: TargetState,
                 variant: IdealVariant) -> JointState:
    """Reference output state for one ideal-gate variant (see IdealVariant)."""
    a, b = control.a_r, control.a_l
    g, d = target.a_r, target.a_l
    if variant is IdealVariant.FLIP_ON_L:
        comps = (a * g, a * d, b * g, b * d)
    elif variant is IdealVariant.FLIP_ON_R:
        comps = (a * d, a * g, b * d, b * g)
    elif variant is IdealVariant.FLIP_BOTH:
        comps = (a * d, a * g, b * g, b * d)
    else:
        raise ValueError(f"unknown ideal variant {variant!r}")
    return JointState(*comps, spin=SpinState.UP)


def state_overlap_fidelity(ideal: JointState, actual: JointState,
                           normalization: Normalization) -> float:
    """|<ideal|actual>|^2, optionally divided by the actual state's norm.

    The raw overlap is only a fidelity in [0, 1] when the ideal state is
    normalized and the actual one has norm at most 1, which circuit outputs
    from normalized inputs satisfy.  A zero actual state renormalizes to 0.
    """
    overlap = complex(np.vdot(ideal.as_array(), actual.as_array()))
    raw = abs(overlap) ** 2
    if normalization is Normalization.RAW_OVERLAP:
        return raw
    norm_sq = actual.norm_sq
    return 0.0 if norm_sq == 0.0 else raw / norm_sq


def _signed_ideal(control: ControlState, target: TargetState,
                  convention: FidelityConvention) -> JointState:
    idl = ideal_output(control, target, convention.ideal_variant)
    if convention.r_branch_sign is RBranchSign.NEGATED:
        idl = JointState(-idl.c_rr, -idl.c_rl, idl.c_ll, idl.c_lr, spin=idl.spin)
    return idl


def input_fidelity(control: ControlState, target: TargetState,
                   cavity: CavityParams | CavityCoefficients,
                   cloner: ClonerModel, convention: FidelityConvention) -> float:
    """Fidelity of the circuit output for one normalized input pair."""
    coeffs = as_coefficients(cavity)
    actual = closed_form_output(control, target, coeffs, cloner)
    idl = _signed_ideal(control, target, convention)
    return state_overlap_fidelity(idl, actual, convention.normalization)


# ---------------------------------------------------------------------------
# Vectorized averaging.  Every quantity factorizes over the two photons:
# output component i is R_i(control) * S_i(target) and the reference component
# is P_i(control) * Q_i(target), so the overlap on a product grid is a rank-4
# bilinear form and norms are rank-4 positive forms.  Quadrature sums stay in
# a fixed order for reproducibility.
# ---------------------------------------------------------------------------

_CHUNK_ELEMENTS = 1 << 21  # cap on per-block scratch size for full-grid sums


def _qubit_grid(measure: Measure, points: int) -> tuple[np.ndarray, np.ndarray, np.ndarray]:
    """Single-photon quadrature nodes (a_r, a_l, weight) for one measure."""
    if measure is Measure.UNIFORM_ANGLES:
        theta = 2.0 * np.pi * np.arange(points) / points
        a_r = np.cos(theta).astype(complex)
        a_l = np.sin(theta).astype(complex)
        w = np.full(points, 1.0 / points)
    elif measure is Measure.HAAR_PRODUCT:
        z, wz = np.polynomial.legendre.leggauss(points)
        phi = 2.0 * np.pi * np.arange(points) / points
        zz = np.repeat(z, points)
        pp = np.tile(phi, points)
        a_r = np.sqrt((1.0 + zz) / 2.0).astype(complex)
        a_l = np.exp(1j * pp) * np.sqrt((1.0 - zz) / 2.0)
        w = np.repeat(wz / 2.0, points) / points
    elif measure is Measure.BASIS_STATES:
        a_r = np.array([1.0, 0.0], dtype=complex)
        a_l = np.array([0.0, 1.0], dtype=complex)
        w = np.array([0.5, 0.5])
    else:
        raise ValueError(f"unknown measure {measure!r}")
    return a_r, a_l, w


def _control_out_factors(alpha: np.ndarray, beta: np.ndarray,
                         cloner: ClonerModel) -> np.ndarray:
    sf = math.sqrt(cloner.f_uc)
    return np.stack([alpha, alpha, sf * beta, sf * beta], axis=1)


def _target_out_factors(gamma: np.ndarray, delta: np.ndarray,
                        coeffs: CavityCoefficients) -> np.ndarray:
    t0, r0, t1, r1 = coeffs.t0, coeffs.r0, coeffs.t1, coeffs.r1
    return np.stack(
        [
            t0 * delta + r0 * gamma,
            r0 * delta + t0 * gamma,
            r1 * delta + t1 * gamma,
            t1 * delta + r1 * gamma,
        ],
        axis=1,
    )


def _control_ideal_factors(alpha: np.ndarray, beta: np.ndarray,
                           convention: FidelityConvention) -> np.ndarray:
    p = np.stack([alpha, alpha, beta, beta], axis=1)
    if convention.r_branch_sign is RBranchSign.NEGATED:
        p = p.copy()
        p[:, :2] *= -1.0
    return p


def _target_ideal_factors(gamma: np.ndarray, delta: np.ndarray,
                          variant: IdealVariant) -> np.ndarray:
    if variant is IdealVariant.FLIP_ON_L:
        cols = (gamma, delta, gamma, delta)
    elif variant is IdealVariant.FLIP_ON_R:
        cols = (delta, gamma, delta, gamma)
    else:
        cols = (delta, gamma, gamma, delta)
    return np.stack(cols, axis=1)


def _avg_quadrature(coeffs: CavityCoefficients, cloner: ClonerModel,
                    convention: FidelityConvention, points: int) -> tuple[float, int]:
    a_r, a_l, w = _qubit_grid(convention.measure, points)
    n = a_r.size

    r_fac = _control_out_factors(a_r, a_l, cloner)
    s_fac = _target_out_factors(a_r, a_l, coeffs)
    f_fac = np.conj(_control_ideal_factors(a_r, a_l, convention)) * r_fac
    g_fac = np.conj(_target_ideal_factors(a_r, a_l, convention.ideal_variant)) * s_fac

    if convention.normalization is Normalization.RAW_OVERLAP:
        # sum_ct w_c w_t |sum_i F_ci G_ti|^2 contracts to a 4x4 moment pairing.
        c_mom = (f_fac.T * w) @ np.conj(f_fac)
        t_mom = (g_fac.T * w) @ np.conj(g_fac)
        return float(np.sum(c_mom * t_mom).real), n * n

    g_t = g_fac.T
    s_abs_t = np.abs(s_fac.T) ** 2
    r_abs = np.abs(r_fac) ** 2
    block = max(1, _CHUNK_ELEMENTS // n)
    total = 0.0
    for start in range(0, n, block):
        stop = min(start + block, n)
        overlap = f_fac[start:stop] @ g_t
        norm_sq = r_abs[start:stop] @ s_abs_t
        fid = np.divide(
            np.abs(overlap) ** 2,
            norm_sq,
            out=np.zeros_like(norm_sq),
            where=norm_sq > 0.0,
        )
        total += float(w[start:stop] @ fid @ w)
    return total, n * n


def _sample_qubits(measure: Measure, count: int,
                   rng: np.random.Generator) -> tuple[np.ndarray, np.ndarray]:
    if measure is Measure.UNIFORM_ANGLES:
        theta = rng.uniform(0.0, 2.0 * np.pi, count)
        return np.cos(theta).astype(complex), np.sin(theta).astype(complex)
    if measure is Measure.HAAR_PRODUCT:
        z = rng.uniform(-1.0, 1.0, count)
        phi = rng.uniform(0.0, 2.0 * np.pi, count)
        return (
            np.sqrt((1.0 + z) / 2.0).astype(complex),
            np.exp(1j * phi) * np.sqrt((1.0 - z) / 2.0),
        )
    if measure is Measure.BASIS_STATES:
        idx = rng.integers(0, 2, count)
        return (idx == 0).astype(complex), (idx == 1).astype(complex)
    raise ValueError(f"unknown measure {measure!r}")


def _avg_monte_carlo(coeffs: CavityCoefficients, cloner: ClonerModel,
                     convention: FidelityConvention,
                     spec: AveragingSpec) -> tuple[float, float, int]:
    rng = np.random.Generator(np.random.PCG64(spec.seed))
    n = spec.mc_samples
    ca_r, ca_l = _sample_qubits(convention.measure, n, rng)
    ta_r, ta_l = _sample_qubits(convention.measure, n, rng)

    f_fac = np.conj(_control_ideal_factors(ca_r, ca_l, convention)) \
        * _control_out_factors(ca_r, ca_l, cloner)
    g_fac = np.conj(_target_ideal_factors(ta_r, ta_l, convention.ideal_variant)) \
        * _target_out_factors(ta_r, ta_l, coeffs)
    overlap = np.einsum("ki,ki->k", f_fac, g_fac)
    fid = np.abs(overlap) ** 2
    if convention.normalization is Normalization.RENORMALIZED:
        norm_sq = np.einsum(
            "ki,ki->k",
            np.abs(_control_out_factors(ca_r, ca_l, cloner)) ** 2,
            np.abs(_target_out_factors(ta_r, ta_l, coeffs)) ** 2,
        ).real
        fid = np.divide(fid, norm_sq, out=np.zeros_like(fid), where=norm_sq > 0.0)
    mean = float(fid.mean())
    std_error = float(fid.std(ddof=1) / math.sqrt(n))
    return mean, std_error, n


def average_fidelity(cavity: CavityParams | CavityCoefficients,
                     cloner: ClonerModel, convention: FidelityConvention,
                     avg: AveragingSpec | None = None) -> FidelityEstimate:
    """Mean input fidelity over the convention's measure.

    Quadrature is deterministic and, for these integrands, exact well below
    the default point count; Monte Carlo reports a standard error alongside
    the estimate and is reproducible for a fixed seed.
    """
    if avg is None:
        avg = AveragingSpec()
    coeffs = as_coefficients(cavity)
    if avg.method is AveragingMethod.QUADRATURE:
        value, n = _avg_quadrature(coeffs, cloner, convention, avg.quadrature_points)
        return FidelityEstimate(value=value, std_error=None, n_points=n)
    value, std_error, n = _avg_monte_carlo(coeffs, cloner, convention, avg)
    return FidelityEstimate(value=value, std_error=std_error, n_points=n)


@dataclass(frozen=True)
class ConventionResult:
    convention: FidelityConvention
    value: float
    deviation: float
    matched: bool


def convention_search(cavity: CavityParams | CavityCoefficients,
                      cloner: ClonerModel, target_value: float, tol: float,
                      quadrature_points: int = 64) -> list[ConventionResult]:
    """Score all 36 conventions against a target average fidelity.

    Returns every convention with its quadrature average, sorted by absolute
    deviation from ``target_value`` (ties broken by canonical string); entries
    within ``tol`` are flagged as matches.
    """
    if not (math.isfinite(target_value) and 0.0 < target_value <= 1.0):
        raise ValueError(f"target_value must lie in (0, 1], got {target_value!r}")
    if not (math.isfinite(tol) and tol > 0.0):
        raise ValueError(f"tol must be > 0, got {tol!r}")
    coeffs = as_coefficients(cavity)
    spec = AveragingSpec(method=AveragingMethod.QUADRATURE,
                         quadrature_points=quadrature_points)
    results = []
    for convention in all_conventions():
        value = average_fidelity(coeffs, cloner, convention, spec).value
        deviation = abs(value - target_value)
        results.append(
            ConventionResult(
                convention=convention,
                value=value,
                deviation=deviation,
                matched=deviation <= tol,
            )
        )
    results.sort(key=lambda r: (r.deviation, r.convention.canonical()))
    return results
