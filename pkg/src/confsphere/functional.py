"""The conformal energy, the negative-power norm and the invariant functional.

For ``2m > n`` the objects are

    E_2m(u, v) = integral of (P_2m u) v over S^n     (a diagonal quadratic form),
    |u^{-1}|^2_{L^q}  with  q = 2n/(2m - n),
    I_2m(u) = |u^{-1}|^2_{L^q} * E_2m(u),

the last being invariant under rescaling u -> c u and under conformal
pullback.  Negative powers require strict positivity, enforced by the
oversampled-grid gate of :mod:`confsphere.spectral`.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Optional

import numpy as np

from .errors import NonPositiveFunction
from .gjms import apply_operator, multiplier_floats, s1_derivative_form_coefficients
from .spectral import (
    POSITIVITY_THRESHOLD,
    QuadratureRule,
    SpectralFunction,
    _aligned,
    analyze,
    min_on_grid,
    quadrature_for_degree,
    synthesize,
)


@dataclass(frozen=True)
class EnergyReport:
    """Diagnostics of one function under the order-2m functional."""

    n: int
    m: int
    energy: float
    neg_norm: float
    functional: float
    el_residual: float
    min_value: float


def exponent_q(n: int, m: int) -> float:
    if not 2 * m > n:
        raise ValueError("the negative-power norm requires 2m > n")
    return 2.0 * n / (2 * m - n)


def energy(u: SpectralFunction, v: SpectralFunction, m: int) -> float:
    """Bilinear energy: sum of p_2m(alpha) times coefficient products.

    Evaluated as p . (a b), which is symmetric in the arguments down to
    the floating-point rounding.
    """
    a, b = _aligned(u, v)
    degree = max(u.degree, v.degree)
    p = multiplier_floats(u.n, m, degree)
    full = SpectralFunction(u.n, a, u.axis)
    return float(p[full.degree_of_coeff()] @ (a * b))


def energy_quadratic(u: SpectralFunction, m: int) -> float:
    return energy(u, u, m)


def _positivity_gate(u: SpectralFunction, rule: QuadratureRule) -> tuple:
    """Values on the rule nodes plus the oversampled minimum; raises on failure."""
    mv = min_on_grid(u, oversample=4)
    if mv <= POSITIVITY_THRESHOLD:
        raise NonPositiveFunction(
            f"function is not strictly positive (grid minimum {mv:.3e})"
        )
    return synthesize(u, rule.nodes), mv


def _default_rule(u: SpectralFunction, rule: Optional[QuadratureRule]) -> QuadratureRule:
    # negative powers are not band-limited: 4x oversampling by default
    return rule if rule is not None else quadrature_for_degree(u.n, u.degree, oversample=4)


def neg_power_integral(u: SpectralFunction, m: int, rule: Optional[QuadratureRule] = None) -> float:
    """integral of u^{-q} over S^n by quadrature (q = 2n/(2m-n))."""
    rule = _default_rule(u, rule)
    q = exponent_q(u.n, m)
    vals, _ = _positivity_gate(u, rule)
    return float(rule.weights @ vals ** (-q))


def neg_power_norm(u: SpectralFunction, m: int, rule: Optional[QuadratureRule] = None) -> float:
    """|u^{-1}|^2_{L^q}; computed through the log to survive large powers."""
    q = exponent_q(u.n, m)
    integ = neg_power_integral(u, m, rule)
    return math.exp((2.0 / q) * math.log(integ))


def functional_value(u: SpectralFunction, m: int, rule: Optional[QuadratureRule] = None) -> float:
    return neg_power_norm(u, m, rule) * energy_quadratic(u, m)


def el_residual(u: SpectralFunction, m: int, rule: Optional[QuadratureRule] = None) -> float:
    """L^2 norm of P_2m u - kappa u^{-q-1} with kappa = E(u) / integral(u^{-q}).

    kappa is the unique multiplier making the residual orthogonal to u, so
    the residual vanishes exactly at critical points of the functional.
    """
    rule = _default_rule(u, rule)
    q = exponent_q(u.n, m)
    vals, _ = _positivity_gate(u, rule)
    pu_vals = synthesize(apply_operator(u, m), rule.nodes)
    kappa = energy_quadratic(u, m) / float(rule.weights @ vals ** (-q))
    res = pu_vals - kappa * vals ** (-q - 1.0)
    return math.sqrt(float(rule.weights @ res**2))


def functional_report(
    u: SpectralFunction, m: int, rule: Optional[QuadratureRule] = None
) -> EnergyReport:
    rule = _default_rule(u, rule)
    e = energy_quadratic(u, m)
    nn = neg_power_norm(u, m, rule)
    return EnergyReport(
        n=u.n,
        m=m,
        energy=e,
        neg_norm=nn,
        functional=nn * e,
        el_residual=el_residual(u, m, rule),
        min_value=min_on_grid(u, oversample=4),
    )


def gradient(u: SpectralFunction, m: int, rule: Optional[QuadratureRule] = None) -> SpectralFunction:
    """Spectral projection of the L^2 gradient of the functional.

    grad I = 2 |u^{-1}|^2 P_2m u - 2 (integral u^{-q})^{2/q - 1} E(u) u^{-q-1},
    truncated at the degree of u.
    """
    rule = _default_rule(u, rule)
    q = exponent_q(u.n, m)
    vals, _ = _positivity_gate(u, rule)
    integ = float(rule.weights @ vals ** (-q))
    e = energy_quadratic(u, m)
    pointwise = -2.0 * integ ** (2.0 / q - 1.0) * e * vals ** (-q - 1.0)
    grad = analyze(pointwise, rule, u.degree, axis=u.axis)
    spectral_part = apply_operator(u, m).scaled(2.0 * integ ** (2.0 / q))
    return grad + spectral_part


def s1_energy_from_derivatives(
    derivative_values: list, m: int, rule: QuadratureRule
) -> float:
    """E_2m on the circle from pointwise theta-derivative values.

    ``derivative_values[j]`` holds d^j u / dtheta^j on the rule nodes for
    j = 0..m; the quadratic form is sum_j e_j * integral (u^{(j)})^2 with
    the exact coefficients of the multiplier polynomial (for m = 1 this is
    the classical integral of u'^2 - u^2/4).
    """
    if rule.n != 1:
        raise ValueError("derivative-form energy is a circle computation")
    if len(derivative_values) != m + 1:
        raise ValueError(f"need derivatives of order 0..{m}")
    coeffs = s1_derivative_form_coefficients(m)
    total = 0.0
    for j, ej in enumerate(coeffs):
        vj = np.asarray(derivative_values[j], dtype=float)
        total += float(ej) * float(rule.weights @ vj**2)
    return total
