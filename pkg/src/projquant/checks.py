"""Verification suites shared by the CLI ``check`` verb and the test battery."""

from __future__ import annotations

import random
from itertools import product

from . import sampling
from .calculus import (
    FiberFunction,
    commutator_defect_div,
    commutator_defect_nabla,
    omega_realize,
)
from .coefficients import Weights
from .errors import ConventionViolation
from .exact import Universe
from .geometry import ChristoffelField, OneForm, normal_cartan, projective_shift
from .graded import ValueSpec
from .quantization import Symbol, flat_equivariance_residual, quantize, sl_generators


def random_fiber_function(rng: random.Random, m: int, spec: ValueSpec, degree: int = 2) -> FiberFunction:
    """G_0-equivariant test input: components depend on x and (linearly) on xi."""
    uni = Universe(m)
    comps = {}
    for idx in product(range(m), repeat=spec.degree):
        key = tuple(sorted(idx))
        if key not in comps:
            comps[key] = sampling.poly(rng, uni, degree, 2, xi_degree=1)
    full = {idx: comps[tuple(sorted(idx))] for idx in product(range(m), repeat=spec.degree)}
    return FiberFunction(m, spec, {k: v for k, v in full.items() if v})


def lemma_cases(gamma: ChristoffelField, k: int, rng: random.Random):
    """Yield (name, thunk) pairs; each thunk raises ConventionViolation on failure."""
    m = gamma.m
    omega = omega_realize(normal_cartan(gamma))
    delta = sampling.rational(rng, 3, 4)
    lam = sampling.rational(rng, 3, 4)
    h = sampling.covector_basis(rng, m)
    S = random_fiber_function(rng, m, ValueSpec.symbol(k, delta))
    f = random_fiber_function(rng, m, ValueSpec.density(lam))
    for l in range(1, k + 1):
        yield f"div k={k} l={l}", lambda l=l: commutator_defect_div(S, h, l, omega)
    yield f"nabla k={k}", lambda: commutator_defect_nabla(f, h, k, omega)


def check_lemmas(gamma: ChristoffelField, k_max: int, seed: int, samples: int = 1) -> dict:
    rng = random.Random(seed)
    results = []
    for _ in range(samples):
        for k in range(k_max + 1):
            for name, thunk in lemma_cases(gamma, k, rng):
                try:
                    thunk()
                    results.append({"case": name, "passed": True})
                except ConventionViolation as exc:
                    results.append({"case": name, "passed": False, "message": str(exc)})
    return {
        "suite": "lemmas",
        "passed": all(r["passed"] for r in results),
        "cases": results,
    }


def check_invariance(gamma: ChristoffelField, symbol: Symbol, weights: Weights,
                     alpha: OneForm | None, seed: int) -> dict:
    if alpha is None:
        alpha = sampling.one_form(random.Random(seed), gamma.m)
    D1 = quantize(gamma, symbol, weights)
    D2 = quantize(projective_shift(gamma, alpha), symbol, weights)
    equal = D1 == D2
    return {"suite": "invariance", "passed": equal, "exact-equal": equal}


def check_flat_equivariance(symbol: Symbol, weights: Weights, table=None) -> dict:
    residuals = {
        X.label: flat_equivariance_residual(weights, symbol.k, symbol, X, table).is_zero()
        for X in sl_generators(symbol.m)
    }
    return {
        "suite": "flat-equivariance",
        "passed": all(residuals.values()),
        "generators": residuals,
    }
