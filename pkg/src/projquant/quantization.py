"""Assembly of the quantization map and the checks that surround it.

A symbol of degree k is stored by its components on sorted multi-indices.
The operator Q(Gamma, S) is recovered from its action on the monomials
x^beta, |beta| <= k, which determines an order-k operator exactly.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from itertools import product
from math import factorial
from typing import Callable

from .calculus import (
    FiberFunction,
    iterated_derivatives,
    iterated_divergences,
    lift,
    multiplicity,
    omega_realize,
    pairing,
    project,
    symmetric_indices,
)
from .coefficients import CoefficientTable, NoExistence, Weights, table_for
from .errors import DegreeMismatch, NoExistenceError, ValidationError
from .exact import Poly, Universe, as_rational
from .geometry import ChristoffelField, normal_cartan
from .graded import ValueSpec


@dataclass(frozen=True)
class Symbol:
    m: int
    k: int
    components: dict  # sorted index tuple -> Poly in x

    def __post_init__(self):
        uni = Universe(self.m)
        clean = {}
        for idx, p in self.components.items():
            idx = tuple(sorted(idx))
            if len(idx) != self.k or any(not 0 <= i < self.m for i in idx):
                raise DegreeMismatch(f"index {idx} invalid for degree {self.k}")
            if not isinstance(p, Poly):
                p = uni.const(p)
            if not uni.is_base(p):
                raise ValidationError("symbol components may only depend on x")
            if p:
                clean[idx] = clean[idx] + p if idx in clean else p
        object.__setattr__(self, "components", {k: v for k, v in clean.items() if v})

    def __getitem__(self, idx) -> Poly:
        return self.components.get(tuple(sorted(idx)), Universe(self.m).zero)

    def full(self) -> dict:
        """Components on every index tuple (the symmetric tensor)."""
        out = {}
        for idx in product(range(self.m), repeat=self.k):
            p = self[idx]
            if p:
                out[idx] = p
        return out

    @classmethod
    def from_full(cls, m: int, k: int, components: dict) -> Symbol:
        return cls(m, k, {idx: components[idx] for idx in components if list(idx) == sorted(idx)})

    def lift(self, delta) -> FiberFunction:
        return lift(self.full(), ValueSpec.symbol(self.k, delta), self.m)


@dataclass(frozen=True)
class DifferentialOperator:
    """sum_alpha coefficients[alpha](x) d^alpha, alpha an exponent vector."""

    m: int
    order: int
    weights: Weights
    coefficients: dict

    def __post_init__(self):
        for alpha, p in self.coefficients.items():
            if sum(alpha) > self.order:
                raise ValidationError(f"multi-index {alpha} exceeds order {self.order}")
        object.__setattr__(
            self, "coefficients", {a: p for a, p in self.coefficients.items() if p}
        )

    def is_zero(self) -> bool:
        return not self.coefficients

    def __sub__(self, other: DifferentialOperator) -> DifferentialOperator:
        out = dict(self.coefficients)
        for a, p in other.coefficients.items():
            out[a] = out[a] - p if a in out else -p
        return DifferentialOperator(self.m, max(self.order, other.order), self.weights, out)


def multi_indices(m: int, k: int) -> list[tuple]:
    """Exponent vectors of total degree <= k, by degree then descending lex."""
    out = [a for a in product(range(k + 1), repeat=m) if sum(a) <= k]
    return sorted(out, key=lambda a: (sum(a), tuple(-x for x in a)))


def _falling(n: int, r: int) -> int:
    out = 1
    for t in range(r):
        out *= n - t
    return out


def apply_operator(D: DifferentialOperator, f: Poly) -> Poly:
    uni = Universe(D.m)
    acc = uni.zero
    for alpha, c in D.coefficients.items():
        g = f
        for i, a in enumerate(alpha):
            for _ in range(a):
                g = g.diff(i)
            if not g:
                break
        if g:
            acc = acc + c * g
    return acc


def operator_from_action(
    action: Callable[[Poly], Poly], m: int, order: int, weights: Weights
) -> DifferentialOperator:
    """Recover an operator of order <= ``order`` from its values on monomials."""
    uni = Universe(m)
    coeffs: dict = {}
    for beta in multi_indices(m, order):
        value = action(uni.x_monomial(beta))
        for alpha, c in coeffs.items():
            if all(a <= b for a, b in zip(alpha, beta)):
                gap = tuple(b - a for a, b in zip(alpha, beta))
                factor = 1
                for a, b in zip(alpha, beta):
                    factor *= _falling(b, a)
                value = value - c * uni.x_monomial(gap, factor)
        norm = 1
        for b in beta:
            norm *= factorial(b)
        coeffs[beta] = value / norm
    return DifferentialOperator(m, order, weights, coeffs)


def principal_symbol(D: DifferentialOperator, k: int) -> Symbol:
    if D.order > k and any(sum(a) > k for a in D.coefficients):
        raise DegreeMismatch(f"operator has order above {k}")
    comps = {}
    for alpha, c in D.coefficients.items():
        if sum(alpha) == k:
            idx = tuple(i for i, a in enumerate(alpha) for _ in range(a))
            comps[idx] = c / multiplicity(idx)
    return Symbol(D.m, k, comps)


def resolve_table(m: int, k: int, weights: Weights, table=None) -> CoefficientTable:
    if table is None:
        table = table_for(m, k, weights)
    if isinstance(table, NoExistence):
        raise NoExistenceError(
            f"no equivariant quantization for m={m}, k={k}, "
            f"lambda={table.weights.lam}, mu={table.weights.mu}"
        )
    if table.k != k or table.m != m:
        raise DegreeMismatch("coefficient table does not match the symbol")
    return table


class Quantizer:
    """Caches the Cartan realization and the divergences of one symbol.

    With ``strict=False`` the operator is read off on the section (xi = 0)
    even when the combination is not fiber-constant; only mutation tests of
    the coefficient table need that.
    """

    def __init__(self, gamma: ChristoffelField, S: Symbol, weights: Weights, table=None,
                 strict: bool = True):
        if S.m != gamma.m:
            raise ValidationError("symbol and connection live on different charts")
        self.gamma = gamma
        self.symbol = S
        self.weights = weights
        self.strict = strict
        self.table = resolve_table(gamma.m, S.k, weights, table)
        self.nc = normal_cartan(gamma)
        self.omega = omega_realize(self.nc)
        self.divergences = iterated_divergences(S.lift(weights.delta), S.k, self.omega)

    def combination(self, f: Poly) -> FiberFunction:
        """sum_l C_{k,l} <div^l p*S, nabla^{k-l} p*f> before projection."""
        k = self.symbol.k
        m = self.gamma.m
        F = lift({(): f}, ValueSpec.density(self.weights.lam), m)
        needed = max((k - l for l in range(k + 1) if self.table[l]), default=0)
        nablas = iterated_derivatives(F, needed, self.omega)
        total = FiberFunction(m, ValueSpec("", self.weights.mu), {})
        for l in range(k + 1):
            c = self.table[l]
            if c:
                total = total + pairing(self.divergences[l], nablas[k - l]).scale(c)
        return total

    def apply(self, f: Poly) -> Poly:
        F = self.combination(f)
        comps = project(F) if self.strict else F.at_fiber_origin()
        return comps.get((), Universe(self.gamma.m).zero)

    def operator(self) -> DifferentialOperator:
        return operator_from_action(self.apply, self.gamma.m, self.symbol.k, self.weights)


def quantize(gamma: ChristoffelField, S: Symbol, weights: Weights, table=None,
             strict: bool = True) -> DifferentialOperator:
    return Quantizer(gamma, S, weights, table, strict).operator()


# -- flat case: projective vector fields and Lie derivatives ----------------


@dataclass(frozen=True)
class VectorField:
    components: tuple
    label: str = ""

    @property
    def m(self) -> int:
        return len(self.components)

    def apply(self, f: Poly) -> Poly:
        acc = f * 0
        for i, X in enumerate(self.components):
            if X:
                acc = acc + X * f.diff(i)
        return acc

    def divergence(self) -> Poly:
        return sum((X.diff(i) for i, X in enumerate(self.components)), self.components[0] * 0)


def vector_field_bracket(X: VectorField, Y: VectorField) -> VectorField:
    comps = tuple(X.apply(Y.components[i]) - Y.apply(X.components[i]) for i in range(X.m))
    return VectorField(comps, f"[{X.label},{Y.label}]")


def sl_generators(m: int) -> list[VectorField]:
    """Constant, linear and quadratic generators of the projective algebra on R^m."""
    uni = Universe(m)
    z = uni.zero
    out = []
    for i in range(m):
        out.append(VectorField(tuple(uni.one if r == i else z for r in range(m)), f"d{i + 1}"))
    for i in range(m):
        for j in range(m):
            out.append(
                VectorField(tuple(uni.x(j) if r == i else z for r in range(m)), f"x{j + 1}d{i + 1}")
            )
    for a in range(m):
        out.append(VectorField(tuple(uni.x(a) * uni.x(r) for r in range(m)), f"x{a + 1}E"))
    return out


def lie_derivative_density(X: VectorField, f: Poly, lam) -> Poly:
    return X.apply(f) + X.divergence() * f * as_rational(lam)


def lie_derivative_symbol(X: VectorField, S: Symbol, delta) -> Symbol:
    m, k = S.m, S.k
    full = S.full()
    dX = [[X.components[i].diff(p) for p in range(m)] for i in range(m)]
    div = X.divergence() * as_rational(delta)
    out = {}
    for idx in symmetric_indices(m, k):
        acc = X.apply(S[idx]) + div * S[idx]
        for s in range(k):
            for p in range(m):
                d = dX[idx[s]][p]
                if d:
                    src = idx[:s] + (p,) + idx[s + 1 :]
                    v = full.get(src)
                    if v:
                        acc = acc - d * v
        out[idx] = acc
    return Symbol(m, k, out)


def lie_derivative_operator(X: VectorField, D: DifferentialOperator) -> DifferentialOperator:
    lam, mu = D.weights.lam, D.weights.mu

    def action(f):
        return lie_derivative_density(X, apply_operator(D, f), mu) - apply_operator(
            D, lie_derivative_density(X, f, lam)
        )

    return operator_from_action(action, D.m, D.order, D.weights)


def flat_equivariance_residual(
    weights: Weights, k: int, S: Symbol, X: VectorField, table=None, strict: bool = True
) -> DifferentialOperator:
    """L_X Q(S) - Q(L_X S) for the flat connection on R^m."""
    flat = ChristoffelField.flat(S.m)
    Q = quantize(flat, S, weights, table, strict)
    LS = lie_derivative_symbol(X, S, weights.delta)
    return lie_derivative_operator(X, Q) - quantize(flat, LS, weights, table, strict)


# -- affine changes of chart -----------------------------------------------


@dataclass(frozen=True)
class AffineMap:
    """phi(x) = A x + b with rational A invertible."""

    A: tuple
    b: tuple

    @property
    def m(self) -> int:
        return len(self.b)

    def inverse_matrix(self) -> list[list[Fraction]]:
        m = self.m
        M = [[as_rational(a) for a in row] + [Fraction(int(i == j)) for j in range(m)]
             for i, row in enumerate(self.A)]
        for c in range(m):
            piv = next((r for r in range(c, m) if M[r][c]), None)
            if piv is None:
                raise ValidationError("affine map is not invertible")
            M[c], M[piv] = M[piv], M[c]
            inv = 1 / M[c][c]
            M[c] = [v * inv for v in M[c]]
            for r in range(m):
                if r != c and M[r][c]:
                    f = M[r][c]
                    M[r] = [v - f * w for v, w in zip(M[r], M[c])]
        return [row[m:] for row in M]

    def compose(self, p: Poly) -> Poly:
        """p o phi."""
        uni = Universe(self.m)
        images = []
        for i in range(self.m):
            acc = uni.const(self.b[i])
            for j in range(self.m):
                acc = acc + uni.x(j) * as_rational(self.A[i][j])
            images.append(acc)
        images += [uni.xi(i) for i in range(self.m)]
        return p.substitute(images)


def pullback_connection(phi: AffineMap, g: ChristoffelField) -> ChristoffelField:
    m = g.m
    Ainv = phi.inverse_matrix()
    A = [[as_rational(a) for a in row] for row in phi.A]
    G = [[[phi.compose(g.gamma[i][j][k]) for k in range(m)] for j in range(m)] for i in range(m)]
    z = g.universe.zero
    out = [[[z] * m for _ in range(m)] for _ in range(m)]
    for i in range(m):
        for j in range(m):
            for k in range(m):
                acc = z
                for p in range(m):
                    if not Ainv[i][p]:
                        continue
                    for q in range(m):
                        for r in range(m):
                            c = Ainv[i][p] * A[q][j] * A[r][k]
                            if c and G[p][q][r]:
                                acc = acc + G[p][q][r] * c
                out[i][j][k] = acc
    return ChristoffelField(m, out)


def pullback_symbol(phi: AffineMap, S: Symbol) -> Symbol:
    """Tensorial pullback, leaving out the constant |det A| density factor."""
    m, k = S.m, S.k
    Ainv = phi.inverse_matrix()
    moved = {idx: phi.compose(p) for idx, p in S.full().items()}
    out = {}
    for idx in symmetric_indices(m, k):
        acc = Universe(m).zero
        for src, p in moved.items():
            c = Fraction(1)
            for i, s in zip(idx, src):
                c *= Ainv[i][s]
                if not c:
                    break
            if c:
                acc = acc + p * c
        out[idx] = acc
    return Symbol(m, k, out)

