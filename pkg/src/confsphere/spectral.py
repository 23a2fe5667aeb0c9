"""Spectral representations of functions on S^n.

Two representations cover the library's needs:

* ``n = 1``: full Fourier series on the circle in the orthonormal basis
  ``1/sqrt(2 pi)``, ``cos(k th)/sqrt(pi)``, ``sin(k th)/sqrt(pi)``, with the
  angle measured from the reference pole ``(1, 0)``.
* odd ``n >= 3``: zonal functions about an axis ``xi``, expanded in
  Gegenbauer polynomials ``C_alpha^{(n-1)/2}(t)`` of ``t = zeta . xi``,
  normalized to unit L^2(mu_{S^n}) norm.

Coefficients are packed in one array: ``[a_0, a_1, b_1, ..., a_L, b_L]``
for the circle and ``[c_0, ..., c_L]`` for zonal functions.  Both bases
are orthonormal, so Parseval holds with plain coefficient squares and
every diagonal operator acts coefficientwise.
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass, field
from typing import Optional

import numpy as np
from scipy.special import roots_jacobi

from .errors import AxisMismatch, InsufficientNodes
from .geometry import north_pole, sphere_measure, sphere_surface_area, unit_vector

TWO_PI = 2.0 * math.pi

#: truncation defaults: acceptance runs / convergence studies
DEFAULT_DEGREE = 32
REFINED_DEGREE = 64

#: strict-positivity threshold used by the oversampled-grid gate
POSITIVITY_THRESHOLD = 1e-8


# ---------------------------------------------------------------------------
# quadrature
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class QuadratureRule:
    """Nodes and weights integrating over S^n.

    For ``n = 1`` the nodes are angles on a uniform midpoint grid with equal
    weights ``2 pi / K``.  For ``n >= 2`` they are Gauss-Jacobi nodes in
    ``t in (-1, 1)`` for the weight ``(1 - t^2)^{(n-2)/2}``, scaled by the
    surface area of S^{n-1} so that the weights sum to ``mu(S^n)``.
    """

    n: int
    nodes: np.ndarray
    weights: np.ndarray

    @property
    def size(self) -> int:
        return self.nodes.size


def circle_quadrature(num_nodes: int) -> QuadratureRule:
    theta = (np.arange(num_nodes) + 0.5) * TWO_PI / num_nodes
    weights = np.full(num_nodes, TWO_PI / num_nodes)
    return QuadratureRule(n=1, nodes=theta, weights=weights)


def zonal_quadrature(n: int, num_nodes: int) -> QuadratureRule:
    a = (n - 2) / 2.0
    t, w = roots_jacobi(num_nodes, a, a)
    return QuadratureRule(n=n, nodes=t, weights=w * sphere_surface_area(n))


def quadrature_for_degree(n: int, degree: int, oversample: int = 2) -> QuadratureRule:
    """Rule large enough to analyze degree-``degree`` functions, oversampled."""
    if n == 1:
        return circle_quadrature(oversample * (2 * degree + 2))
    return zonal_quadrature(n, oversample * (degree + 1))


def integrate(values: np.ndarray, rule: QuadratureRule) -> float:
    """Plain weighted sum; implements the surface integral over S^n."""
    return float(rule.weights @ np.asarray(values, dtype=float))


# ---------------------------------------------------------------------------
# basis evaluation
# ---------------------------------------------------------------------------


def circle_basis_matrix(degree: int, theta: np.ndarray, deriv: int = 0) -> np.ndarray:
    """Rows of the orthonormal Fourier basis (or its theta-derivatives)."""
    theta = np.asarray(theta, dtype=float)
    rows = np.zeros((2 * degree + 1, theta.size))
    if deriv == 0:
        rows[0] = 1.0 / math.sqrt(TWO_PI)
    inv_sqrt_pi = 1.0 / math.sqrt(math.pi)
    for k in range(1, degree + 1):
        c, s = np.cos(k * theta), np.sin(k * theta)
        r = deriv % 4
        if r == 0:
            dc, ds = c, s
        elif r == 1:
            dc, ds = -s, c
        elif r == 2:
            dc, ds = -c, -s
        else:
            dc, ds = s, -c
        scale = float(k) ** deriv * inv_sqrt_pi
        rows[2 * k - 1] = scale * dc
        rows[2 * k] = scale * ds
    return rows


def _log_gegenbauer_norm_sq(alpha: int, nu: float) -> float:
    # \int_{-1}^{1} C_alpha^nu(t)^2 (1 - t^2)^{nu - 1/2} dt, in log form
    return (
        math.log(math.pi)
        + (1.0 - 2.0 * nu) * math.log(2.0)
        + math.lgamma(alpha + 2.0 * nu)
        - math.lgamma(alpha + 1.0)
        - math.log(alpha + nu)
        - 2.0 * math.lgamma(nu)
    )


def zonal_basis_matrix(n: int, degree: int, t: np.ndarray) -> np.ndarray:
    """Rows Z_alpha(t) of the unit-L^2(mu_{S^n}) zonal Gegenbauer basis."""
    nu = (n - 1) / 2.0
    t = np.asarray(t, dtype=float)
    raw = np.zeros((degree + 1, t.size))
    raw[0] = 1.0
    if degree >= 1:
        raw[1] = 2.0 * nu * t
    for a in range(1, degree):
        raw[a + 1] = (2.0 * (a + nu) * t * raw[a] - (a + 2.0 * nu - 1.0) * raw[a - 1]) / (a + 1.0)
    log_area = math.log(sphere_surface_area(n))
    for a in range(degree + 1):
        raw[a] *= math.exp(-0.5 * (log_area + _log_gegenbauer_norm_sq(a, nu)))
    return raw


# ---------------------------------------------------------------------------
# the spectral function type
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class SpectralFunction:
    """A function on S^n held as orthonormal spectral coefficients.

    ``n == 1`` is a full Fourier series; odd ``n >= 3`` is zonal about
    ``axis``.  Instances are immutable and safe to share.
    """

    n: int
    coeffs: np.ndarray
    axis: Optional[np.ndarray] = field(default=None)

    def __post_init__(self):
        c = np.asarray(self.coeffs, dtype=float)
        if not np.all(np.isfinite(c)):
            raise ValueError("spectral coefficients must be finite")
        object.__setattr__(self, "coeffs", c)
        if self.n == 1:
            if self.axis is not None:
                raise ValueError("circle functions carry no zonal axis")
            if c.size % 2 == 0:
                raise ValueError("circle coefficients pack as [a0, a1, b1, ...]")
        else:
            if self.n % 2 == 0 or self.n < 3:
                raise ValueError("zonal representation requires odd n >= 3")
            if self.axis is None:
                raise ValueError("zonal functions require an axis")
            object.__setattr__(self, "axis", unit_vector(self.axis))

    @property
    def kind(self) -> str:
        return "circle" if self.n == 1 else "zonal"

    @property
    def degree(self) -> int:
        return (self.coeffs.size - 1) // 2 if self.n == 1 else self.coeffs.size - 1

    def degree_of_coeff(self) -> np.ndarray:
        """Spherical-harmonic degree of each packed coefficient."""
        if self.n == 1:
            d = np.zeros(self.coeffs.size, dtype=int)
            for k in range(1, self.degree + 1):
                d[2 * k - 1] = d[2 * k] = k
            return d
        return np.arange(self.coeffs.size)

    def norm_sq(self) -> float:
        """L^2(mu) norm squared; equals the integral of u^2 by Parseval."""
        return float(self.coeffs @ self.coeffs)

    def scaled(self, factor: float) -> "SpectralFunction":
        return SpectralFunction(self.n, self.coeffs * factor, self.axis)

    def __add__(self, other: "SpectralFunction") -> "SpectralFunction":
        a, b = _aligned(self, other)
        return SpectralFunction(self.n, a + b, self.axis)

    def __sub__(self, other: "SpectralFunction") -> "SpectralFunction":
        a, b = _aligned(self, other)
        return SpectralFunction(self.n, a - b, self.axis)


def _aligned(u: SpectralFunction, v: SpectralFunction):
    if u.n != v.n:
        raise ValueError("dimension mismatch")
    if u.n != 1 and float(np.max(np.abs(u.axis - v.axis))) > 1e-12:
        raise AxisMismatch("zonal functions have different axes")
    size = max(u.coeffs.size, v.coeffs.size)
    a = np.zeros(size)
    b = np.zeros(size)
    a[: u.coeffs.size] = u.coeffs
    b[: v.coeffs.size] = v.coeffs
    return a, b


def synthesize(u: SpectralFunction, points: np.ndarray, deriv: int = 0) -> np.ndarray:
    """Pointwise values of the expansion.

    ``points`` are angles for ``n = 1`` and axis cosines ``t`` for zonal
    functions.  ``deriv`` (circle only) evaluates the theta-derivative of
    that order, which is exact for the truncated series.
    """
    if u.n == 1:
        return circle_basis_matrix(u.degree, points, deriv).T @ u.coeffs
    if deriv != 0:
        raise ValueError("derivative synthesis is only provided on the circle")
    return zonal_basis_matrix(u.n, u.degree, points).T @ u.coeffs


def analyze(
    values: np.ndarray,
    rule: QuadratureRule,
    degree: int,
    axis: Optional[np.ndarray] = None,
) -> SpectralFunction:
    """Orthogonal projection of nodal values onto degrees <= ``degree``.

    Exact (to rounding) on band-limited input when the rule meets the
    Gauss exactness bound; :class:`InsufficientNodes` otherwise.
    """
    values = np.asarray(values, dtype=float)
    if rule.n == 1:
        if rule.size < 2 * degree + 2:
            raise InsufficientNodes(
                f"circle grid of {rule.size} nodes cannot resolve degree {degree}"
            )
        coeffs = circle_basis_matrix(degree, rule.nodes) @ (rule.weights * values)
        return SpectralFunction(1, coeffs)
    if rule.size < degree + 1:
        raise InsufficientNodes(
            f"Gauss-Jacobi rule of {rule.size} nodes cannot resolve degree {degree}"
        )
    if axis is None:
        axis = north_pole(rule.n)
    coeffs = zonal_basis_matrix(rule.n, degree, rule.nodes) @ (rule.weights * values)
    return SpectralFunction(rule.n, coeffs, axis)


def min_on_grid(u: SpectralFunction, oversample: int = 4) -> float:
    """Minimum of u over an oversampled grid; the positivity surrogate.

    Gauss-Jacobi nodes are interior, so for zonal functions the poles
    t = +-1 are appended; a dip exactly at a pole must not pass the gate.
    """
    rule = quadrature_for_degree(u.n, max(u.degree, 1), oversample=oversample)
    points = rule.nodes
    if u.n != 1:
        points = np.concatenate([[-1.0], points, [1.0]])
    return float(np.min(synthesize(u, points)))


# ---------------------------------------------------------------------------
# constructors
# ---------------------------------------------------------------------------


def _coeff_count(n: int, degree: int) -> int:
    return 2 * degree + 1 if n == 1 else degree + 1


def constant_function(
    n: int, value: float, degree: int = DEFAULT_DEGREE, axis: Optional[np.ndarray] = None
) -> SpectralFunction:
    coeffs = np.zeros(_coeff_count(n, degree))
    coeffs[0] = value * math.sqrt(sphere_measure(n))
    if n != 1 and axis is None:
        axis = north_pole(n)
    return SpectralFunction(n, coeffs, axis if n != 1 else None)


def harmonic_basis_function(
    n: int,
    harmonic_degree: int,
    degree: int = DEFAULT_DEGREE,
    axis: Optional[np.ndarray] = None,
    component: str = "cos",
) -> SpectralFunction:
    """Unit-norm basis element of one spherical-harmonic degree."""
    if harmonic_degree > degree:
        raise ValueError("harmonic degree exceeds the truncation degree")
    coeffs = np.zeros(_coeff_count(n, degree))
    if n == 1:
        if harmonic_degree == 0:
            coeffs[0] = 1.0
        else:
            offset = 0 if component == "cos" else 1
            coeffs[2 * harmonic_degree - 1 + offset] = 1.0
        return SpectralFunction(1, coeffs)
    coeffs[harmonic_degree] = 1.0
    if axis is None:
        axis = north_pole(n)
    return SpectralFunction(n, coeffs, axis)


def random_band_limited(
    n: int,
    degree: int,
    max_degree: int,
    rng: np.random.Generator,
    decay: float = 0.0,
    axis: Optional[np.ndarray] = None,
) -> SpectralFunction:
    """Zero-mean random function supported on degrees 1..max_degree."""
    if n != 1 and axis is None:
        axis = north_pole(n)
    coeffs = np.zeros(_coeff_count(n, degree))
    u = SpectralFunction(n, coeffs, axis if n != 1 else None)
    degs = u.degree_of_coeff()
    idx = (degs >= 1) & (degs <= max_degree)
    coeffs = coeffs.copy()
    coeffs[idx] = rng.standard_normal(int(idx.sum())) * np.exp(-decay * degs[idx])
    return SpectralFunction(n, coeffs, axis if n != 1 else None)


def random_positive_function(
    n: int,
    degree: int,
    max_degree: int,
    rng: np.random.Generator,
    amplitude: float = 0.45,
    decay: float = 0.25,
    axis: Optional[np.ndarray] = None,
) -> SpectralFunction:
    """1 + a bounded random ripple; strictly positive by construction."""
    ripple = random_band_limited(n, degree, max_degree, rng, decay=decay, axis=axis)
    rule = quadrature_for_degree(n, degree, oversample=4)
    vals = synthesize(ripple, rule.nodes)
    peak = float(np.max(np.abs(vals)))
    if peak > 0:
        ripple = ripple.scaled(amplitude / peak)
    return constant_function(n, 1.0, degree, axis=ripple.axis) + ripple


# ---------------------------------------------------------------------------
# serialization
# ---------------------------------------------------------------------------


def to_json_dict(u: SpectralFunction) -> dict:
    out = {"dim": u.n, "kind": u.kind, "coeffs": [float(c) for c in u.coeffs]}
    if u.axis is not None:
        out["axis"] = [float(a) for a in u.axis]
    return out


def from_json_dict(data: dict) -> SpectralFunction:
    axis = np.asarray(data["axis"], dtype=float) if "axis" in data else None
    return SpectralFunction(int(data["dim"]), np.asarray(data["coeffs"], dtype=float), axis)


def dumps(u: SpectralFunction) -> str:
    return json.dumps(to_json_dict(u))


def loads(text: str) -> SpectralFunction:
    return from_json_dict(json.loads(text))
