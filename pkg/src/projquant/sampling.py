"""Seeded random instances for the check suites and the test battery."""

from __future__ import annotations

import random
from fractions import Fraction
from itertools import product

from .coefficients import Weights, critical_pairs
from .errors import ValidationError
from .exact import Poly, Universe
from .geometry import ChristoffelField, OneForm
from .quantization import AffineMap, Symbol


def rational(rng: random.Random, bound: int = 5, den: int = 4) -> Fraction:
    return Fraction(rng.randint(-bound, bound), rng.randint(1, den))


def nonzero_rational(rng: random.Random, bound: int = 5, den: int = 4) -> Fraction:
    while True:
        q = rational(rng, bound, den)
        if q:
            return q


def poly(
    rng: random.Random,
    uni: Universe,
    degree: int,
    terms: int = 3,
    xi_degree: int = 0,
) -> Poly:
    """Sparse random polynomial with x-degree <= degree and xi-degree <= xi_degree."""
    m = uni.m
    xs = [e for e in product(range(degree + 1), repeat=m) if sum(e) <= degree]
    xis = [e for e in product(range(xi_degree + 1), repeat=m) if sum(e) <= xi_degree]
    out = uni.zero
    for _ in range(terms):
        e = rng.choice(xs) + rng.choice(xis)
        out = out + Poly.monomial(e, rational(rng))
    return out


def christoffel(rng: random.Random, m: int, degree: int = 2, fill: float = 0.4, terms: int = 2) -> ChristoffelField:
    uni = Universe(m)
    entries = {}
    for i in range(m):
        for j in range(m):
            for k in range(j, m):
                if rng.random() < fill:
                    entries[i, j, k] = poly(rng, uni, degree, terms)
    return ChristoffelField.from_entries(m, entries)


def one_form(rng: random.Random, m: int, degree: int = 2, terms: int = 2) -> OneForm:
    uni = Universe(m)
    return OneForm(tuple(poly(rng, uni, degree, terms) for _ in range(m)))


def symbol(rng: random.Random, m: int, k: int, degree: int = 2, terms: int = 2) -> Symbol:
    uni = Universe(m)
    idxs = [idx for idx in product(range(m), repeat=k) if list(idx) == sorted(idx)]
    comps = {idx: poly(rng, uni, degree, terms) for idx in idxs}
    if not any(comps.values()):
        comps[idxs[0]] = uni.one
    return Symbol(m, k, comps)


def noncritical_weights(rng: random.Random, m: int, k: int) -> Weights:
    while True:
        lam = rational(rng, 3, 6)
        mu = rational(rng, 3, 6)
        w = Weights(lam, mu)
        if not critical_pairs(m, k, w.delta):
            return w


def affine_map(rng: random.Random, m: int) -> AffineMap:
    while True:
        A = [[Fraction(rng.randint(-2, 2)) for _ in range(m)] for _ in range(m)]
        phi = AffineMap(tuple(map(tuple, A)), tuple(rational(rng, 2, 2) for _ in range(m)))
        try:
            phi.inverse_matrix()
        except ValidationError:
            continue
        return phi


def covector_basis(rng: random.Random, m: int) -> tuple:
    j = rng.randrange(m)
    return tuple(Fraction(int(i == j)) for i in range(m))
