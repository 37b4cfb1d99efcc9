"""Exact sparse polynomials over Q and dense rational linear solving.

A polynomial lives in a fixed variable universe of ``nvars`` variables and is
stored as a dict mapping exponent tuples to nonzero ``Fraction`` coefficients.
For a chart of dimension m the universe is x_1..x_m followed by the fiber
coordinates xi_1..xi_m (see :class:`Universe`).
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from numbers import Rational
from typing import Hashable, Iterable, Mapping, Sequence

from .errors import InconsistentSystem, SingularSystem

Exponent = tuple[int, ...]


def as_rational(value) -> Fraction:
    """Coerce ints, Fractions and ``"p/q"`` strings; floats are rejected."""
    if isinstance(value, Fraction):
        return value
    if isinstance(value, (int, Rational)) and not isinstance(value, bool):
        return Fraction(value)
    if isinstance(value, str):
        return Fraction(value.strip())
    raise TypeError(f"not an exact rational: {value!r}")


class Poly:
    __slots__ = ("nvars", "terms", "_hash")

    def __init__(self, nvars: int, terms: Mapping[Exponent, Fraction] | None = None):
        self.nvars = nvars
        if terms:
            self.terms = {e: c for e, c in terms.items() if c}
        else:
            self.terms = {}
        self._hash = None

    @classmethod
    def _raw(cls, nvars, terms):
        # terms already canonical: no zero coefficients
        p = cls.__new__(cls)
        p.nvars = nvars
        p.terms = terms
        p._hash = None
        return p

    @classmethod
    def constant(cls, nvars: int, value) -> Poly:
        c = as_rational(value)
        return cls._raw(nvars, {(0,) * nvars: c} if c else {})

    @classmethod
    def variable(cls, nvars: int, index: int) -> Poly:
        if not 0 <= index < nvars:
            raise IndexError(f"variable {index} outside universe of size {nvars}")
        e = [0] * nvars
        e[index] = 1
        return cls._raw(nvars, {tuple(e): Fraction(1)})

    @classmethod
    def monomial(cls, exponent: Sequence[int], coeff=1) -> Poly:
        c = as_rational(coeff)
        return cls._raw(len(exponent), {tuple(exponent): c} if c else {})

    # -- coercion -------------------------------------------------------

    def _coerce(self, other) -> Poly:
        if isinstance(other, Poly):
            if other.nvars != self.nvars:
                raise ValueError(
                    f"mixing variable universes ({self.nvars} vs {other.nvars})"
                )
            return other
        return Poly.constant(self.nvars, other)

    # -- ring operations --------------------------------------------------

    def __add__(self, other):
        try:
            other = self._coerce(other)
        except TypeError:
            return NotImplemented
        if not other.terms:
            return self
        if not self.terms:
            return other
        out = dict(self.terms)
        for e, c in other.terms.items():
            s = out.get(e)
            if s is None:
                out[e] = c
            else:
                s += c
                if s:
                    out[e] = s
                else:
                    del out[e]
        return Poly._raw(self.nvars, out)

    __radd__ = __add__

    def __neg__(self):
        return Poly._raw(self.nvars, {e: -c for e, c in self.terms.items()})

    def __sub__(self, other):
        try:
            other = self._coerce(other)
        except TypeError:
            return NotImplemented
        return self + (-other)

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        if not isinstance(other, Poly):
            try:
                c = as_rational(other)
            except TypeError:
                return NotImplemented
            return self.scale(c)
        other = self._coerce(other)
        if not self.terms or not other.terms:
            return Poly._raw(self.nvars, {})
        a, b = self.terms, other.terms
        if len(a) < len(b):
            a, b = b, a
        out: dict[Exponent, Fraction] = {}
        get = out.get
        for eb, cb in b.items():
            for ea, ca in a.items():
                e = tuple([i + j for i, j in zip(ea, eb)])
                s = get(e)
                out[e] = ca * cb if s is None else s + ca * cb
        return Poly._raw(self.nvars, {e: c for e, c in out.items() if c})

    __rmul__ = __mul__

    def scale(self, c) -> Poly:
        c = as_rational(c)
        if not c:
            return Poly._raw(self.nvars, {})
        if c == 1:
            return self
        return Poly._raw(self.nvars, {e: v * c for e, v in self.terms.items()})

    def __truediv__(self, other):
        # division by rational scalars only
        c = as_rational(other)
        if not c:
            raise ZeroDivisionError("polynomial divided by zero")
        return self.scale(1 / c)

    def __pow__(self, n: int):
        if not isinstance(n, int) or n < 0:
            raise ValueError("exponent must be a non-negative integer")
        result = Poly.constant(self.nvars, 1)
        base = self
        while n:
            if n & 1:
                result = result * base
            n >>= 1
            if n:
                base = base * base
        return result

    # -- comparison -------------------------------------------------------

    def __eq__(self, other):
        if isinstance(other, Poly):
            return self.nvars == other.nvars and self.terms == other.terms
        try:
            return self.terms == Poly.constant(self.nvars, other).terms
        except (TypeError, ValueError):
            return NotImplemented

    def __hash__(self):
        if self._hash is None:
            self._hash = hash((self.nvars, frozenset(self.terms.items())))
        return self._hash

    def __bool__(self):
        return bool(self.terms)

    def __repr__(self):
        return f"Poly({self.nvars}, {self.terms!r})"

    # -- calculus and inspection -------------------------------------------

    def diff(self, index: int) -> Poly:
        """Formal partial derivative with respect to variable ``index``."""
        if not 0 <= index < self.nvars:
            raise IndexError(f"variable {index} outside universe of size {self.nvars}")
        out = {}
        for e, c in self.terms.items():
            k = e[index]
            if k:
                e2 = e[:index] + (k - 1,) + e[index + 1 :]
                out[e2] = c * k
        return Poly._raw(self.nvars, out)

    def degree(self, indices: Iterable[int] | None = None) -> int:
        """Total degree in the given variables (all by default); -1 for zero."""
        if not self.terms:
            return -1
        if indices is None:
            return max(sum(e) for e in self.terms)
        idx = list(indices)
        return max(sum(e[i] for i in idx) for e in self.terms)

    def is_constant(self) -> bool:
        return all(not any(e) for e in self.terms)

    def constant_term(self) -> Fraction:
        return self.terms.get((0,) * self.nvars, Fraction(0))

    def evaluate(self, point: Sequence):
        """Evaluate at a point; works for Fractions and floats alike."""
        total = 0
        for e, c in self.terms.items():
            t = c if not isinstance(point[0], float) else float(c)
            for v, k in zip(point, e):
                if k:
                    t = t * v**k
            total = total + t
        return total

    def substitute(self, images: Sequence[Poly]) -> Poly:
        """Compose: replace variable i by ``images[i]`` (all in one universe)."""
        if len(images) != self.nvars:
            raise ValueError("need one image per variable")
        target = images[0].nvars
        powers: dict[tuple[int, int], Poly] = {}

        def power(i, k):
            key = (i, k)
            if key not in powers:
                powers[key] = images[i] ** k
            return powers[key]

        total = Poly.constant(target, 0)
        for e, c in self.terms.items():
            t = Poly.constant(target, c)
            for i, k in enumerate(e):
                if k:
                    t = t * power(i, k)
            total = total + t
        return total

    def restrict(self, fixed: Mapping[int, Fraction]) -> Poly:
        """Set some variables to constants, keeping the universe."""
        out: dict[Exponent, Fraction] = {}
        for e, c in self.terms.items():
            e2 = list(e)
            for i, v in fixed.items():
                k = e2[i]
                if k:
                    c = c * as_rational(v) ** k
                    e2[i] = 0
            if c:
                t = tuple(e2)
                out[t] = out.get(t, 0) + c
        return Poly(self.nvars, out)

    def sorted_terms(self) -> list[tuple[Exponent, Fraction]]:
        """Terms in canonical order: graded, then lexicographic, descending."""
        return sorted(self.terms.items(), key=lambda t: (sum(t[0]), t[0]), reverse=True)


@dataclass(frozen=True)
class Universe:
    """Variables x_1..x_m (indices 0..m-1) then xi_1..xi_m (indices m..2m-1)."""

    m: int

    @property
    def nvars(self) -> int:
        return 2 * self.m

    def x(self, i: int) -> Poly:
        if not 0 <= i < self.m:
            raise IndexError(i)
        return Poly.variable(self.nvars, i)

    def xi(self, i: int) -> Poly:
        if not 0 <= i < self.m:
            raise IndexError(i)
        return Poly.variable(self.nvars, self.m + i)

    def const(self, value) -> Poly:
        return Poly.constant(self.nvars, value)

    @property
    def zero(self) -> Poly:
        return Poly.constant(self.nvars, 0)

    @property
    def one(self) -> Poly:
        return Poly.constant(self.nvars, 1)

    def x_monomial(self, alpha: Sequence[int], coeff=1) -> Poly:
        return Poly.monomial(tuple(alpha) + (0,) * self.m, coeff)

    def dx(self, p: Poly, i: int) -> Poly:
        return p.diff(i)

    def dxi(self, p: Poly, i: int) -> Poly:
        return p.diff(self.m + i)

    def xi_degree(self, p: Poly) -> int:
        return p.degree(range(self.m, 2 * self.m))

    def x_degree(self, p: Poly) -> int:
        return p.degree(range(self.m))

    def is_base(self, p: Poly) -> bool:
        return self.xi_degree(p) <= 0

    def at_fiber_origin(self, p: Poly) -> Poly:
        return p.restrict({self.m + i: 0 for i in range(self.m)})

    def names(self) -> list[str]:
        return [f"x{i + 1}" for i in range(self.m)] + [f"xi{i + 1}" for i in range(self.m)]


@dataclass(frozen=True)
class LinearSystem:
    """``matrix @ u = rhs`` with rational matrix and Poly (or rational) rhs."""

    matrix: Sequence[Sequence[Fraction]]
    rhs: Sequence
    unknowns: Sequence[Hashable] = field(default=())

    def labels(self):
        ncols = len(self.matrix[0]) if self.matrix else 0
        return list(self.unknowns) if self.unknowns else list(range(ncols))


def solve_linear(system: LinearSystem) -> dict:
    """Gauss-Jordan elimination over Q.

    Overdetermined systems are accepted as long as they are consistent; the
    solution is always required to be unique.
    """
    rows = [[as_rational(a) for a in row] for row in system.matrix]
    rhs = list(system.rhs)
    nrows = len(rows)
    labels = system.labels()
    ncols = len(labels)
    if any(len(r) != ncols for r in rows) or len(rhs) != nrows:
        raise ValueError("malformed linear system")
    pivot_row = 0
    for col in range(ncols):
        piv = next((r for r in range(pivot_row, nrows) if rows[r][col]), None)
        if piv is None:
            raise SingularSystem(f"no pivot in column {labels[col]!r}")
        rows[pivot_row], rows[piv] = rows[piv], rows[pivot_row]
        rhs[pivot_row], rhs[piv] = rhs[piv], rhs[pivot_row]
        inv = 1 / rows[pivot_row][col]
        rows[pivot_row] = [a * inv for a in rows[pivot_row]]
        rhs[pivot_row] = rhs[pivot_row] * inv
        for r in range(nrows):
            f = rows[r][col]
            if r != pivot_row and f:
                rows[r] = [a - f * b for a, b in zip(rows[r], rows[pivot_row])]
                rhs[r] = rhs[r] - rhs[pivot_row] * f
        pivot_row += 1
    for r in range(pivot_row, nrows):
        if rhs[r]:
            raise InconsistentSystem("overdetermined system has no solution")
    solution = {labels[i]: rhs[i] for i in range(ncols)}
    _check_residual(system, solution, labels)
    return solution


def _check_residual(system, solution, labels):
    for row, b in zip(system.matrix, system.rhs):
        acc = 0
        for a, lab in zip(row, labels):
            if a:
                acc = acc + solution[lab] * as_rational(a)
        if acc - b:
            raise SingularSystem("nonzero residual after back-substitution")
