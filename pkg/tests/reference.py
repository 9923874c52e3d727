"""Independent reference implementations used to check the package.

Everything here is written with plain loops and direct formula substitution,
on purpose: these functions share no code with the package, so agreement
between the two is meaningful.  Frozen expected literals in the test modules
were produced by these routines.
"""

from __future__ import annotations

import cmath
import math

import numpy as np


def cavity_coefficients(kappa: float, kappa_s: float, g: float, rho: float,
                        delta_c: float = 0.0, delta_x: float = 0.0) -> tuple[complex, complex]:
    d_x = complex(rho / 2.0, -delta_x)
    d_c = complex(kappa + kappa_s / 2.0, -delta_c)
    if g == 0.0:
        t = -kappa / d_c
    else:
        t = -kappa * d_x / (d_x * d_c + g * g)
    return t, 1.0 + t


def coefficient_set(kappa_s: float, g: float, rho: float = 0.1) -> tuple[complex, complex, complex, complex]:
    t0, r0 = cavity_coefficients(1.0, kappa_s, 0.0, rho)
    t1, r1 = cavity_coefficients(1.0, kappa_s, g, rho)
    return t0, r0, t1, r1


def closed_output(alpha: complex, beta: complex, gamma: complex, delta: complex,
                  t0: complex, r0: complex, t1: complex, r1: complex,
                  f_uc: float) -> tuple[complex, complex, complex, complex]:
    s = math.sqrt(f_uc)
    return (
        alpha * (t0 * delta + r0 * gamma),
        alpha * (r0 * delta + t0 * gamma),
        s * beta * (r1 * delta + t1 * gamma),
        s * beta * (t1 * delta + r1 * gamma),
    )


def ideal_components(alpha: complex, beta: complex, gamma: complex, delta: complex,
                     variant: str, sign: str) -> tuple[complex, complex, complex, complex]:
    if variant == "flipl":
        v = (alpha * gamma, alpha * delta, beta * gamma, beta * delta)
    elif variant == "flipr":
        v = (alpha * delta, alpha * gamma, beta * delta, beta * gamma)
    elif variant == "flipboth":
        v = (alpha * delta, alpha * gamma, beta * gamma, beta * delta)
    else:
        raise ValueError(variant)
    if sign == "negated":
        v = (-v[0], -v[1], v[2], v[3])
    return v


def single_fidelity(alpha: complex, beta: complex, gamma: complex, delta: complex,
                    t0: complex, r0: complex, t1: complex, r1: complex,
                    f_uc: float, variant: str, sign: str, norm: str) -> float:
    out = closed_output(alpha, beta, gamma, delta, t0, r0, t1, r1, f_uc)
    idl = ideal_components(alpha, beta, gamma, delta, variant, sign)
    overlap = sum(i.conjugate() * o for i, o in zip(idl, out))
    raw = abs(overlap) ** 2
    if norm == "raw":
        return raw
    norm_sq = sum(abs(o) ** 2 for o in out)
    return 0.0 if norm_sq == 0.0 else raw / norm_sq


def _haar_nodes(points: int) -> tuple[list[tuple[complex, complex]], list[float]]:
    z, wz = np.polynomial.legendre.leggauss(points)
    states, weights = [], []
    for zi, wi in zip(z, wz):
        for k in range(points):
            phi = 2.0 * math.pi * k / points
            states.append((
                complex(math.sqrt((1.0 + zi) / 2.0)),
                cmath.exp(1j * phi) * math.sqrt((1.0 - zi) / 2.0),
            ))
            weights.append((wi / 2.0) / points)
    return states, weights


def brute_average(t0: complex, r0: complex, t1: complex, r1: complex, f_uc: float,
                  variant: str, sign: str, norm: str, measure: str,
                  points: int = 48) -> float:
    """Average fidelity by direct nested loops over the measure's nodes."""
    if measure == "uniform":
        total = 0.0
        for a in range(points):
            theta_c = 2.0 * math.pi * a / points
            alpha, beta = math.cos(theta_c), math.sin(theta_c)
            for b in range(points):
                theta_t = 2.0 * math.pi * b / points
                gamma, delta = math.cos(theta_t), math.sin(theta_t)
                total += single_fidelity(alpha, beta, gamma, delta,
                                         t0, r0, t1, r1, f_uc, variant, sign, norm)
        return total / (points * points)
    if measure == "haar":
        states, weights = _haar_nodes(points)
        total = 0.0
        for (alpha, beta), wc in zip(states, weights):
            for (gamma, delta), wt in zip(states, weights):
                total += wc * wt * single_fidelity(alpha, beta, gamma, delta,
                                                   t0, r0, t1, r1, f_uc,
                                                   variant, sign, norm)
        return total
    if measure == "basis":
        pairs = ((1.0, 0.0), (0.0, 1.0))
        total = 0.0
        for alpha, beta in pairs:
            for gamma, delta in pairs:
                total += single_fidelity(alpha, beta, gamma, delta,
                                         t0, r0, t1, r1, f_uc, variant, sign, norm)
        return total / 4.0
    raise ValueError(measure)


def moment_average(t0: complex, r0: complex, t1: complex, r1: complex, f_uc: float,
                   variant: str, sign: str, measure: str) -> float:
    """Closed-form raw-overlap average via second moments of the measure.

    For real coefficients the raw overlap is (A + B*s)^2 with
    A = u*x0 + sqrt(F)*v*x1, B = u*y0 + sqrt(F)*v*y1, u = |alpha|^2,
    v = |beta|^2, s = 2*Re(conj(gamma)*delta), and the cross term E[s] = 0,
    so the average needs only E[u^2], E[u*v] and E[s^2].
    """
    s = math.sqrt(f_uc)
    if variant == "flipboth":
        x0, y0, x1, y1 = t0, r0, t1, r1
    elif variant == "flipl":
        x0, y0, x1, y1 = r0, t0, t1, r1
    elif variant == "flipr":
        x0, y0, x1, y1 = t0, r0, r1, t1
    else:
        raise ValueError(variant)
    if sign == "negated":
        x0, y0 = -x0, -y0
    if measure == "uniform":
        e_u2 = e_v2 = 3.0 / 8.0
        e_uv = 1.0 / 8.0
        e_s2 = 0.5
    elif measure == "haar":
        e_u2 = e_v2 = 1.0 / 3.0
        e_uv = 1.0 / 6.0
        e_s2 = 1.0 / 3.0
    else:
        raise ValueError(measure)
    e_a2 = e_u2 * x0.real**2 + 2.0 * e_uv * s * x0.real * x1.real + e_v2 * f_uc * x1.real**2
    e_b2 = e_u2 * y0.real**2 + 2.0 * e_uv * s * y0.real * y1.real + e_v2 * f_uc * y1.real**2
    return e_a2 + e_s2 * e_b2
