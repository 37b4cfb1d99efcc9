"""The graded algebra sl(m+1) = g_{-1} + g_0 + g_1 and its action on weighted tensors.

Elements are triples (v, A, xi) with v in R^m, A in gl(m) and xi in R^{m*}.
The bracket is computed on the (m+1)x(m+1) representative [[A, v], [xi, 0]]
and read back through [[A, v], [xi, a]] -> (v, A - a Id, xi).

Entries may be any exact ring elements (``Fraction`` or ``Poly``), which lets
the same code serve both the abstract algebra and Cartan-form computations on
a chart.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Callable

from .exact import as_rational

ZERO = Fraction(0)


def _zero_like(*values):
    for v in values:
        if not isinstance(v, (int, Fraction)):
            return v * 0
    return ZERO


@dataclass(frozen=True)
class GradedElement:
    v: tuple
    A: tuple
    xi: tuple

    @property
    def m(self) -> int:
        return len(self.v)

    @classmethod
    def zero(cls, m: int, zero=ZERO) -> GradedElement:
        return cls(
            (zero,) * m, tuple((zero,) * m for _ in range(m)), (zero,) * m
        )

    @classmethod
    def vector(cls, v, zero=ZERO) -> GradedElement:
        m = len(v)
        return cls(tuple(v), tuple((zero,) * m for _ in range(m)), (zero,) * m)

    @classmethod
    def endo(cls, A, zero=ZERO) -> GradedElement:
        m = len(A)
        return cls((zero,) * m, tuple(tuple(r) for r in A), (zero,) * m)

    @classmethod
    def covector(cls, xi, zero=ZERO) -> GradedElement:
        m = len(xi)
        return cls((zero,) * m, tuple((zero,) * m for _ in range(m)), tuple(xi))

    @classmethod
    def basis_vector(cls, m: int, j: int) -> GradedElement:
        return cls.vector([Fraction(int(i == j)) for i in range(m)])

    @classmethod
    def basis_covector(cls, m: int, j: int) -> GradedElement:
        return cls.covector([Fraction(int(i == j)) for i in range(m)])

    def matrix(self) -> list[list]:
        m = self.m
        z = _zero_like(*self.v, *self.xi, *(a for r in self.A for a in r))
        rows = [list(self.A[i]) + [self.v[i]] for i in range(m)]
        rows.append(list(self.xi) + [z])
        return rows

    @classmethod
    def from_matrix(cls, M) -> GradedElement:
        m = len(M) - 1
        a = M[m][m]
        A = tuple(
            tuple(M[i][j] - a if i == j else M[i][j] for j in range(m))
            for i in range(m)
        )
        return cls(tuple(M[i][m] for i in range(m)), A, tuple(M[m][:m]))

    def map(self, fn: Callable) -> GradedElement:
        return GradedElement(
            tuple(fn(x) for x in self.v),
            tuple(tuple(fn(x) for x in r) for r in self.A),
            tuple(fn(x) for x in self.xi),
        )

    def _zip(self, other, fn):
        return GradedElement(
            tuple(fn(x, y) for x, y in zip(self.v, other.v)),
            tuple(
                tuple(fn(x, y) for x, y in zip(r, s)) for r, s in zip(self.A, other.A)
            ),
            tuple(fn(x, y) for x, y in zip(self.xi, other.xi)),
        )

    def __add__(self, other):
        return self._zip(other, lambda x, y: x + y)

    def __sub__(self, other):
        return self._zip(other, lambda x, y: x - y)

    def __neg__(self):
        return self.map(lambda x: -x)

    def scale(self, c) -> GradedElement:
        return self.map(lambda x: x * c)

    def part(self, grade: int) -> GradedElement:
        z = _zero_like(*self.v, *self.xi, *(a for r in self.A for a in r))
        m = self.m
        if grade == -1:
            return GradedElement.vector(self.v, z)
        if grade == 0:
            return GradedElement.endo(self.A, z)
        if grade == 1:
            return GradedElement.covector(self.xi, z)
        raise ValueError(f"no component of grade {grade} (m={m})")

    def is_zero(self) -> bool:
        return not any(self.v) and not any(self.xi) and not any(any(r) for r in self.A)


def _matmul(X, Y):
    n = len(X)
    out = []
    for i in range(n):
        row = []
        for j in range(n):
            acc = None
            for p in range(n):
                x, y = X[i][p], Y[p][j]
                if x and y:
                    acc = x * y if acc is None else acc + x * y
            row.append(acc if acc is not None else _zero_like(X[i][0], Y[0][j]))
        out.append(row)
    return out


def bracket(a: GradedElement, b: GradedElement) -> GradedElement:
    if a.m != b.m:
        raise ValueError("bracket of elements of different dimension")
    X, Y = a.matrix(), b.matrix()
    XY, YX = _matmul(X, Y), _matmul(Y, X)
    n = len(X)
    C = [[XY[i][j] - YX[i][j] for j in range(n)] for i in range(n)]
    return GradedElement.from_matrix(C)


def ad_exp_neg(xi: GradedElement, y: GradedElement) -> GradedElement:
    """Ad(exp(-xi)) y for xi in g_1; the series stops after two brackets."""
    b1 = bracket(xi, y)
    b2 = bracket(xi, b1)
    assert bracket(xi, b2).is_zero(), "g_1 must act nilpotently"
    return y - b1 + b2.scale(Fraction(1, 2))


@dataclass(frozen=True)
class ValueSpec:
    """A weighted tensor space: ``slots`` lists 'u' (R^m) / 'd' (R^{m*}) factors.

    The symmetric spaces of the construction are the all-'u' and all-'d'
    cases; mixed slot strings appear for vertical-derivative families.
    """

    slots: str
    weight: Fraction

    def __post_init__(self):
        if set(self.slots) - {"u", "d"}:
            raise ValueError(f"bad slot string {self.slots!r}")
        object.__setattr__(self, "weight", as_rational(self.weight))

    @classmethod
    def symbol(cls, k: int, delta) -> ValueSpec:
        return cls("u" * k, delta)

    @classmethod
    def covariant(cls, k: int, lam) -> ValueSpec:
        return cls("d" * k, lam)

    @classmethod
    def density(cls, lam) -> ValueSpec:
        return cls("", lam)

    @property
    def degree(self) -> int:
        return len(self.slots)

    @property
    def variance(self) -> str:
        if not self.slots:
            return "scalar"
        if set(self.slots) == {"u"}:
            return "contravariant-symmetric"
        if set(self.slots) == {"d"}:
            return "covariant-symmetric"
        return "mixed"


def rho_star(h: GradedElement, spec: ValueSpec) -> Callable[[dict], dict]:
    """Infinitesimal H-action on ``spec``: only the g_0 part of ``h`` acts.

    The returned map takes and returns component dicts (index tuple -> value).
    """
    A = h.A
    m = h.m
    trace = None
    for i in range(m):
        if A[i][i]:
            trace = A[i][i] if trace is None else trace + A[i][i]
    dens = -spec.weight
    slots = spec.slots

    def apply(components: dict) -> dict:
        out: dict = {}

        def add(key, val):
            cur = out.get(key)
            out[key] = val if cur is None else cur + val

        for idx, val in components.items():
            if not val:
                continue
            if trace is not None and dens:
                add(idx, val * trace * dens)
            for s, kind in enumerate(slots):
                p = idx[s]
                if kind == "u":
                    # (A T)^{..i..} = A^i_p T^{..p..}
                    for i in range(m):
                        a = A[i][p]
                        if a:
                            add(idx[:s] + (i,) + idx[s + 1 :], a * val)
                else:
                    # (A T)_{..i..} = -T_{..p..} A^p_i
                    for i in range(m):
                        a = A[p][i]
                        if a:
                            add(idx[:s] + (i,) + idx[s + 1 :], -(a * val))
        return {k: v for k, v in out.items() if v}

    return apply
