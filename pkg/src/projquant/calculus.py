"""Invariant differentiation on the trivialized projective bundle.

The bundle over the chart is modelled near the section s by points
s(x) exp(xi) g0 with xi in g_1 = R^{m*} and g0 in G_0.  A G_0-equivariant
function is stored through its restriction to g0 = e: a tensor whose
components are polynomials in (x, xi).  H-equivariance then means the
components do not depend on xi.

On the slice the Cartan form reads

    omega(a d_x + b d_xi + c*) = Ad(exp(-xi)) s*omega(a) + b + c,

so omega^{-1}(e_j) has a = e_j, while c (in g_0) and b (in g_1) are read off
grade by grade.  Differentiating along c* is replaced by -rho_*(c) using
G_0-equivariance.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from itertools import permutations, product
from math import factorial

from .coefficients import gamma_value
from .errors import ConventionViolation, DegreeMismatch, DegreeZero, NotFiberConstant
from .exact import Poly, Universe, as_rational
from .geometry import NormalCartanData
from .graded import GradedElement, ValueSpec, ad_exp_neg, rho_star


@dataclass(frozen=True)
class FiberFunction:
    m: int
    spec: ValueSpec
    components: dict  # index tuple -> nonzero Poly in (x, xi)

    @property
    def universe(self) -> Universe:
        return Universe(self.m)

    @property
    def slots(self) -> str:
        return self.spec.slots

    @property
    def weight(self) -> Fraction:
        return self.spec.weight

    def __getitem__(self, idx) -> Poly:
        return self.components.get(tuple(idx), self.universe.zero)

    def _combine(self, other, sign):
        if self.spec != other.spec or self.m != other.m:
            raise DegreeMismatch(f"cannot combine {self.spec} with {other.spec}")
        out = dict(self.components)
        for k, v in other.components.items():
            out[k] = out[k] + v * sign if k in out else v * sign
        return FiberFunction(self.m, self.spec, _clean(out))

    def __add__(self, other):
        return self._combine(other, 1)

    def __sub__(self, other):
        return self._combine(other, -1)

    def scale(self, c) -> FiberFunction:
        c = as_rational(c)
        return FiberFunction(
            self.m, self.spec, _clean({k: v * c for k, v in self.components.items()})
        )

    def is_zero(self) -> bool:
        return not self.components

    def xi_degree(self) -> int:
        uni = self.universe
        return max((uni.xi_degree(p) for p in self.components.values()), default=-1)

    def is_fiber_constant(self) -> bool:
        return self.xi_degree() <= 0

    def at_fiber_origin(self) -> dict:
        uni = self.universe
        return _clean({k: uni.at_fiber_origin(p) for k, p in self.components.items()})

    def scalar(self) -> Poly:
        if self.slots:
            raise DegreeMismatch("not a scalar function")
        return self[()]


def _clean(components: dict) -> dict:
    return {k: v for k, v in components.items() if v}


def zero_function(m: int, spec: ValueSpec) -> FiberFunction:
    return FiberFunction(m, spec, {})


def lift(components: dict, spec: ValueSpec, m: int) -> FiberFunction:
    """p*: extend a chart tensor constantly along the G_1 fiber."""
    uni = Universe(m)
    comps = {}
    for idx, p in components.items():
        idx = tuple(idx)
        if len(idx) != spec.degree or any(not 0 <= i < m for i in idx):
            raise DegreeMismatch(f"index {idx} does not fit {spec}")
        if not isinstance(p, Poly):
            p = uni.const(p)
        if not uni.is_base(p):
            raise ValueError("lifted functions must not depend on the fiber")
        comps[idx] = p
    return FiberFunction(m, spec, _clean(comps))


def project(F: FiberFunction) -> dict:
    """Inverse of :func:`lift`; only defined on fiber-constant functions."""
    if not F.is_fiber_constant():
        raise NotFiberConstant(
            f"function of spec {F.spec} has fiber degree {F.xi_degree()}"
        )
    return dict(F.components)


@dataclass(frozen=True)
class OmegaRealization:
    """omega^{-1}(e_j) = a[j] d_x + b[j] d_xi + c[j]* on the slice."""

    nc: NormalCartanData
    a: tuple  # a[j][i]
    b: tuple  # b[j][q]
    c: tuple  # c[j] is an m x m matrix of Polys

    @property
    def m(self) -> int:
        return self.nc.m

    def residual(self, j: int) -> GradedElement:
        nc = self.nc
        m = self.m
        uni = nc.universe
        xi = GradedElement.covector([uni.xi(q) for q in range(m)], uni.zero)
        form = GradedElement.zero(m, uni.zero)
        for k in range(m):
            if self.a[j][k]:
                form = form + nc.form(k).scale(self.a[j][k])
        value = ad_exp_neg(xi, form)
        value = value + GradedElement.covector(self.b[j], uni.zero)
        value = value + GradedElement.endo(self.c[j], uni.zero)
        target = GradedElement.vector(
            [uni.one if i == j else uni.zero for i in range(m)], uni.zero
        )
        return value - target


def _realize(nc: NormalCartanData) -> OmegaRealization:
    m = nc.m
    uni = nc.universe
    xi = GradedElement.covector([uni.xi(q) for q in range(m)], uni.zero)
    A, B, C = [], [], []
    for j in range(m):
        # grade -1: Ad(exp(-xi)) leaves the g_{-1} part alone, so a = e_j
        a = tuple(uni.one if i == j else uni.zero for i in range(m))
        value = ad_exp_neg(xi, nc.form(j))
        A.append(a)
        C.append(tuple(tuple(-p for p in row) for row in value.A))
        B.append(tuple(-p for p in value.xi))
    return OmegaRealization(nc, tuple(A), tuple(B), tuple(C))


@lru_cache(maxsize=32)
def omega_realize(nc: NormalCartanData) -> OmegaRealization:
    return _realize(nc)


def _as_omega(omega) -> OmegaRealization:
    if isinstance(omega, NormalCartanData):
        return omega_realize(omega)
    return omega


def fundamental_lie(h, F: FiberFunction) -> FiberFunction:
    """L_{h*} for h in g_1: the xi-directional derivative along h."""
    uni = F.universe
    h = [as_rational(c) for c in h]
    out = {}
    for idx, p in F.components.items():
        acc = uni.zero
        for q, hq in enumerate(h):
            if hq:
                acc = acc + uni.dxi(p, q) * hq
        if acc:
            out[idx] = acc
    return FiberFunction(F.m, F.spec, out)


def invariant_derivative(F: FiberFunction, omega) -> FiberFunction:
    """nabla^omega F; the new covariant slot is placed first."""
    om = _as_omega(omega)
    m = F.m
    uni = F.universe
    dxi = {
        idx: [uni.dxi(p, q) for q in range(m)] for idx, p in F.components.items()
    }
    out = {}
    for j in range(m):
        bj = om.b[j]
        comp = {}
        for idx, p in F.components.items():
            acc = uni.dx(p, j)
            for q in range(m):
                if bj[q] and dxi[idx][q]:
                    acc = acc + bj[q] * dxi[idx][q]
            comp[idx] = acc
        rho = rho_star(GradedElement.endo(om.c[j], uni.zero), F.spec)(F.components)
        for idx, val in rho.items():
            comp[idx] = comp[idx] - val if idx in comp else -val
        for idx, val in comp.items():
            if val:
                out[(j,) + idx] = val
    return FiberFunction(m, ValueSpec("d" + F.slots, F.weight), out)


def symmetrize(F: FiberFunction, n: int | None = None) -> FiberFunction:
    """Average over permutations of the first ``n`` slots (all by default)."""
    n = len(F.slots) if n is None else n
    if n <= 1:
        return F
    if len(set(F.slots[:n])) > 1:
        raise DegreeMismatch("cannot symmetrize slots of mixed variance")
    perms = list(permutations(range(n)))
    w = Fraction(1, len(perms))
    out: dict = {}
    for idx, p in F.components.items():
        head, tail = idx[:n], idx[n:]
        for perm in perms:
            key = tuple(head[s] for s in perm) + tail
            out[key] = out[key] + p if key in out else p
    return FiberFunction(F.m, F.spec, _clean({k: v * w for k, v in out.items()}))


def iterated_derivatives(F: FiberFunction, k: int, omega) -> list[FiberFunction]:
    """[F, nabla F, (nabla)^2 F, ..., (nabla)^k F], each symmetrized in its new slots."""
    om = _as_omega(omega)
    out = [F]
    for step in range(1, k + 1):
        out.append(symmetrize(invariant_derivative(out[-1], om), step))
    return out


def iterated_symmetrized(F: FiberFunction, k: int, omega) -> FiberFunction:
    if k < 0:
        raise ValueError("k must be non-negative")
    return iterated_derivatives(F, k, omega)[-1]


def divergence(S: FiberFunction, omega) -> FiberFunction:
    """div S = sum_j i(eps^j) nabla_{e_j} S, contracting the first slot of S."""
    if not S.slots or S.slots[0] != "u":
        raise DegreeZero("divergence needs a leading contravariant slot")
    D = invariant_derivative(S, omega)
    out: dict = {}
    for idx, p in D.components.items():
        if idx[0] == idx[1]:
            key = idx[2:]
            out[key] = out[key] + p if key in out else p
    return FiberFunction(S.m, ValueSpec(S.slots[1:], S.weight), _clean(out))


def iterated_divergences(S: FiberFunction, l: int, omega) -> list[FiberFunction]:
    om = _as_omega(omega)
    out = [S]
    for _ in range(l):
        out.append(divergence(out[-1], om))
    return out


def pairing(S: FiberFunction, T: FiberFunction) -> FiberFunction:
    """Full contraction S^{i1..ij} T_{i1..ij} over all index tuples."""
    j = len(S.slots)
    if S.slots != "u" * j or T.slots != "d" * j:
        raise DegreeMismatch(f"cannot pair {S.slots!r} with {T.slots!r}")
    uni = S.universe
    acc = uni.zero
    for idx, p in S.components.items():
        q = T.components.get(idx)
        if q:
            acc = acc + p * q
    spec = ValueSpec("", S.weight + T.weight)
    return FiberFunction(S.m, spec, {(): acc} if acc else {})


def insert_first(h, S: FiberFunction) -> FiberFunction:
    """i(h) S: contract the covector h into the first (contravariant) slot."""
    if not S.slots or S.slots[0] != "u":
        raise DegreeZero("nothing to contract")
    h = [as_rational(c) for c in h]
    out: dict = {}
    for idx, p in S.components.items():
        c = h[idx[0]]
        if c:
            key = idx[1:]
            out[key] = out[key] + p * c if key in out else p * c
    return FiberFunction(S.m, ValueSpec(S.slots[1:], S.weight), _clean(out))


def vee(T: FiberFunction, h) -> FiberFunction:
    """Symmetrized product of a covariant symmetric T with the covector h."""
    if set(T.slots) - {"d"}:
        raise DegreeMismatch("vee expects a covariant tensor")
    h = [as_rational(c) for c in h]
    out = {}
    for idx, p in T.components.items():
        for q, c in enumerate(h):
            if c:
                out[idx + (q,)] = p * c
    prod = FiberFunction(T.m, ValueSpec(T.slots + "d", T.weight), out)
    return symmetrize(prod)


def vertical_family(F: FiberFunction) -> FiberFunction:
    """h -> L_{h*} F as one function with an extra trailing R^m slot.

    L_{h*}F is not G_0-equivariant for a fixed h, but the family over all h is,
    once the extra slot transforms like R^m = (g_1)^*; invariant derivatives
    of the family then carry the correct compensation term.
    """
    uni = F.universe
    out = {}
    for idx, p in F.components.items():
        for q in range(F.m):
            d = uni.dxi(p, q)
            if d:
                out[idx + (q,)] = d
    return FiberFunction(F.m, ValueSpec(F.slots + "u", F.weight), out)


def contract_last(T: FiberFunction, h) -> FiberFunction:
    if not T.slots or T.slots[-1] != "u":
        raise DegreeMismatch("no trailing family slot")
    h = [as_rational(c) for c in h]
    out: dict = {}
    for idx, p in T.components.items():
        c = h[idx[-1]]
        if c:
            key = idx[:-1]
            out[key] = out[key] + p * c if key in out else p * c
    return FiberFunction(T.m, ValueSpec(T.slots[:-1], T.weight), _clean(out))


def commutator_defect_div(S: FiberFunction, h, l: int, omega, check: bool = True) -> FiberFunction:
    """L_{h*} div^l S - div^l L_{h*} S, checked against (m+1) l gamma_{2k-l} i(h) div^{l-1} S."""
    k = len(S.slots)
    if S.slots != "u" * k:
        raise DegreeMismatch("expected a symbol-type function")
    if not 1 <= l <= k:
        raise ValueError(f"need 1 <= l <= k, got l={l}, k={k}")
    om = _as_omega(omega)
    divs = iterated_divergences(S, l, om)
    fam = iterated_divergences(vertical_family(S), l, om)[-1]
    defect = fundamental_lie(h, divs[l]) - contract_last(fam, h)
    if check:
        coeff = (S.m + 1) * l * gamma_value(S.m, k, l, S.weight)
        expected = insert_first(h, divs[l - 1]).scale(coeff)
        if (defect - expected).components:
            raise ConventionViolation(f"divergence commutator fails for k={k}, l={l}")
    return defect


def commutator_defect_nabla(f: FiberFunction, h, k: int, omega, check: bool = True) -> FiberFunction:
    """L_{h*} nabla^k f - nabla^k L_{h*} f, checked against -k((m+1)lam+k-1) nabla^{k-1} f v h."""
    if f.slots:
        raise DegreeMismatch("expected a density")
    om = _as_omega(omega)
    if k == 0:
        defect = fundamental_lie(h, f) - fundamental_lie(h, f)
        return defect
    its = iterated_derivatives(f, k, om)
    fam = vertical_family(f)
    for step in range(1, k + 1):
        fam = symmetrize(invariant_derivative(fam, om), step)
    defect = fundamental_lie(h, its[k]) - contract_last(fam, h)
    if check:
        coeff = -k * ((f.m + 1) * f.weight + k - 1)
        expected = vee(its[k - 1], h).scale(coeff)
        if (defect - expected).components:
            raise ConventionViolation(f"nabla commutator fails for k={k}")
    return defect


@lru_cache(maxsize=None)
def symmetric_indices(m: int, k: int) -> tuple:
    """Sorted multi-indices of length k over range(m)."""
    return tuple(
        idx for idx in product(range(m), repeat=k) if list(idx) == sorted(idx)
    )


def multiplicity(idx) -> int:
    """Number of index tuples that sort to ``idx``."""
    counts: dict = {}
    for i in idx:
        counts[i] = counts.get(i, 0) + 1
    out = factorial(len(idx))
    for c in counts.values():
        out //= factorial(c)
    return out
