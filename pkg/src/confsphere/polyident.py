"""Exact verification of the flat Laplacian induction identities.

A tiny sparse multivariate polynomial type over the rationals is enough:
the identities are coefficient-linear in the test polynomial, so exact
equality over random low-degree inputs verifies the computational content
completely.  With W = (1 + |x|^2)/2, the two statements are

    Delta(W^{m+1} Delta^m u) + m(m+1) W^{m-1} Delta^m u = W^m Delta^{m+1}(W u)

and the product rule it rests on,

    Delta^k(W u) = k(2k+n-2) Delta^{k-1} u + 2k sum_i x_i Delta^{k-1} d_i u
                  + W Delta^k u.

For m = 0 the middle term carries the factor m(m+1) = 0, so the negative
power of W is never formed.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Dict, Tuple

import numpy as np

Monomial = Tuple[int, ...]


@dataclass(frozen=True)
class RationalPolynomial:
    """Sparse exact polynomial: map from exponent tuples to Fractions."""

    num_vars: int
    terms: Dict[Monomial, Fraction]

    def __post_init__(self):
        clean = {e: c for e, c in self.terms.items() if c != 0}
        object.__setattr__(self, "terms", clean)

    @classmethod
    def constant(cls, num_vars: int, value) -> "RationalPolynomial":
        value = Fraction(value)
        return cls(num_vars, {(0,) * num_vars: value} if value else {})

    @classmethod
    def variable(cls, num_vars: int, index: int) -> "RationalPolynomial":
        e = [0] * num_vars
        e[index] = 1
        return cls(num_vars, {tuple(e): Fraction(1)})

    @property
    def is_zero(self) -> bool:
        return not self.terms

    def degree(self) -> int:
        return max((sum(e) for e in self.terms), default=0)

    def __add__(self, other: "RationalPolynomial") -> "RationalPolynomial":
        out = dict(self.terms)
        for e, c in other.terms.items():
            out[e] = out.get(e, Fraction(0)) + c
        return RationalPolynomial(self.num_vars, out)

    def __sub__(self, other: "RationalPolynomial") -> "RationalPolynomial":
        return self + other.scaled(Fraction(-1))

    def scaled(self, factor) -> "RationalPolynomial":
        factor = Fraction(factor)
        return RationalPolynomial(self.num_vars, {e: c * factor for e, c in self.terms.items()})

    def __mul__(self, other: "RationalPolynomial") -> "RationalPolynomial":
        out: Dict[Monomial, Fraction] = {}
        for e1, c1 in self.terms.items():
            for e2, c2 in other.terms.items():
                key = tuple(a + b for a, b in zip(e1, e2))
                out[key] = out.get(key, Fraction(0)) + c1 * c2
        return RationalPolynomial(self.num_vars, out)

    def __pow__(self, exponent: int) -> "RationalPolynomial":
        if exponent < 0:
            raise ValueError("only nonnegative integer powers are defined")
        out = RationalPolynomial.constant(self.num_vars, 1)
        for _ in range(exponent):
            out = out * self
        return out

    def __eq__(self, other) -> bool:
        return isinstance(other, RationalPolynomial) and self.terms == other.terms

    def __hash__(self):
        return hash((self.num_vars, frozenset(self.terms.items())))


def partial(p: RationalPolynomial, index: int) -> RationalPolynomial:
    out: Dict[Monomial, Fraction] = {}
    for e, c in p.terms.items():
        if e[index] == 0:
            continue
        new = list(e)
        new[index] -= 1
        key = tuple(new)
        out[key] = out.get(key, Fraction(0)) + c * e[index]
    return RationalPolynomial(p.num_vars, out)


def laplacian(p: RationalPolynomial) -> RationalPolynomial:
    out = RationalPolynomial.constant(p.num_vars, 0)
    for i in range(p.num_vars):
        out = out + partial(partial(p, i), i)
    return out


def iterated_laplacian(p: RationalPolynomial, k: int) -> RationalPolynomial:
    for _ in range(k):
        p = laplacian(p)
    return p


def half_one_plus_norm_sq(num_vars: int) -> RationalPolynomial:
    """The weight polynomial W = (1 + |x|^2) / 2."""
    out = {(0,) * num_vars: Fraction(1, 2)}
    for i in range(num_vars):
        e = [0] * num_vars
        e[i] = 2
        out[tuple(e)] = Fraction(1, 2)
    return RationalPolynomial(num_vars, out)


def check_identity_2_1(u: RationalPolynomial, m: int):
    """Exact residual of the induction identity; (True, zero) when it holds."""
    if m < 0:
        raise ValueError("m must be a nonnegative integer")
    w = half_one_plus_norm_sq(u.num_vars)
    delta_m_u = iterated_laplacian(u, m)
    lhs = laplacian(w ** (m + 1) * delta_m_u)
    if m >= 1:
        lhs = lhs + (w ** (m - 1) * delta_m_u).scaled(Fraction(m * (m + 1)))
    rhs = w**m * iterated_laplacian(w * u, m + 1)
    residual = lhs - rhs
    return residual.is_zero, residual


def check_delta_k_product(u: RationalPolynomial, k: int) -> bool:
    """Exact equality of the k-fold Laplacian product rule for W u."""
    if k < 1:
        raise ValueError("k must be a positive integer")
    n = u.num_vars
    w = half_one_plus_norm_sq(n)
    lhs = iterated_laplacian(w * u, k)
    rhs = iterated_laplacian(u, k - 1).scaled(Fraction(k * (2 * k + n - 2)))
    cross = RationalPolynomial.constant(n, 0)
    for i in range(n):
        cross = cross + RationalPolynomial.variable(n, i) * iterated_laplacian(partial(u, i), k - 1)
    rhs = rhs + cross.scaled(Fraction(2 * k)) + w * iterated_laplacian(u, k)
    return (lhs - rhs).is_zero


def random_polynomial(
    num_vars: int, degree: int, rng: np.random.Generator, num_terms: int = 8
) -> RationalPolynomial:
    """Random sparse polynomial with small integer coefficients."""
    terms: Dict[Monomial, Fraction] = {}
    for _ in range(num_terms):
        exps = []
        remaining = degree
        for _ in range(num_vars):
            e = int(rng.integers(0, remaining + 1))
            exps.append(e)
            remaining -= e
        coeff = int(rng.integers(-9, 10))
        key = tuple(exps)
        terms[key] = terms.get(key, Fraction(0)) + Fraction(coeff)
    return RationalPolynomial(num_vars, terms)
