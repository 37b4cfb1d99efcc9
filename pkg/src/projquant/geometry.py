"""Torsion-free connections on a chart and their normal projective Cartan data.

Index conventions (all 0-based):

* ``gamma[i][j][k]`` is the Christoffel symbol Gamma^i_{jk}.
* ``R[i][j][k][l]`` is R^i_{jkl} = d_k G^i_{lj} - d_l G^i_{kj}
  + G^i_{kp} G^p_{lj} - G^i_{lp} G^p_{kj}, so R(d_k, d_l) d_j = R^i_{jkl} d_i.
* ``Ric[j][l] = R^i_{jil}``.
* ``p[j][k]`` is P_{jk}: the g_1 part of the pulled-back Cartan form on d_j
  has components (P_{j0}, ..., P_{j,m-1}).
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache

from .errors import DimensionTooSmall, ValidationError
from .exact import LinearSystem, Poly, Universe, solve_linear
from .graded import GradedElement, bracket


@dataclass(frozen=True)
class ChristoffelField:
    m: int
    gamma: tuple

    def __post_init__(self):
        m = self.m
        if m < 2:
            raise DimensionTooSmall(f"projective normality needs m >= 2, got {m}")
        uni = Universe(m)
        g = tuple(
            tuple(tuple(self.gamma[i][j][k] for k in range(m)) for j in range(m))
            for i in range(m)
        )
        for i in range(m):
            for j in range(m):
                for k in range(m):
                    p = g[i][j][k]
                    if not isinstance(p, Poly) or p.nvars != uni.nvars:
                        raise ValidationError(f"Gamma[{i}][{j}][{k}] is not in the chart universe")
                    if not uni.is_base(p):
                        raise ValidationError("Christoffel symbols may only depend on x")
                    if p != g[i][k][j]:
                        raise ValidationError(
                            f"connection has torsion: Gamma^{i}_{j}{k} != Gamma^{i}_{k}{j}"
                        )
        object.__setattr__(self, "gamma", g)

    @property
    def universe(self) -> Universe:
        return Universe(self.m)

    @classmethod
    def flat(cls, m: int) -> ChristoffelField:
        z = Universe(m).zero
        return cls(m, [[[z] * m for _ in range(m)] for _ in range(m)])

    @classmethod
    def from_entries(cls, m: int, entries: dict) -> ChristoffelField:
        """Build from ``{(i, j, k): Poly}``; the (i, k, j) mirror is filled in."""
        z = Universe(m).zero
        g = [[[z] * m for _ in range(m)] for _ in range(m)]
        for (i, j, k), p in entries.items():
            for a, b in ((j, k), (k, j)):
                if g[i][a][b] and g[i][a][b] != p:
                    raise ValidationError(f"conflicting entries for Gamma^{i}_{j}{k}")
                g[i][a][b] = p
        return cls(m, g)

    def is_flat(self) -> bool:
        return not any(p for a in self.gamma for b in a for p in b)

    def matrix(self, k: int) -> tuple:
        """The gl(m) part of the pulled-back form on d_k: entries Gamma^i_{kp}."""
        m = self.m
        return tuple(tuple(self.gamma[i][k][p] for p in range(m)) for i in range(m))


@dataclass(frozen=True)
class OneForm:
    components: tuple

    @property
    def m(self) -> int:
        return len(self.components)


@dataclass(frozen=True)
class NormalCartanData:
    gamma: ChristoffelField
    p_tensor: tuple

    @property
    def m(self) -> int:
        return self.gamma.m

    @property
    def universe(self) -> Universe:
        return self.gamma.universe

    def form(self, k: int) -> GradedElement:
        """s*omega(d_k) = (e_k, Gamma_k, P_k) in the local trivialization."""
        uni = self.universe
        v = tuple(uni.one if i == k else uni.zero for i in range(self.m))
        return GradedElement(v, self.gamma.matrix(k), tuple(self.p_tensor[k]))


def curvature(g: ChristoffelField) -> list:
    m = g.m
    G = g.gamma
    z = g.universe.zero
    R = [[[[z] * m for _ in range(m)] for _ in range(m)] for _ in range(m)]
    for i in range(m):
        for j in range(m):
            for k in range(m):
                for l in range(k + 1, m):
                    val = G[i][l][j].diff(k) - G[i][k][j].diff(l)
                    for p in range(m):
                        val = val + G[i][k][p] * G[p][l][j] - G[i][l][p] * G[p][k][j]
                    R[i][j][k][l] = val
                    R[i][j][l][k] = -val
    return R


def ricci(R) -> list:
    m = len(R)
    out = []
    for j in range(m):
        row = []
        for l in range(m):
            acc = R[0][j][0][l]
            for i in range(1, m):
                acc = acc + R[i][j][i][l]
            row.append(acc)
        out.append(row)
    return out


def projective_shift(g: ChristoffelField, alpha: OneForm) -> ChristoffelField:
    """Gamma'^i_{jk} = Gamma^i_{jk} + alpha_j delta^i_k + alpha_k delta^i_j."""
    m = g.m
    if alpha.m != m:
        raise ValidationError("one-form and connection live on different charts")
    a = alpha.components
    G = g.gamma
    out = [
        [
            [G[i][j][k] + (a[j] if i == k else 0) + (a[k] if i == j else 0) for k in range(m)]
            for j in range(m)
        ]
        for i in range(m)
    ]
    return ChristoffelField(m, out)


@lru_cache(maxsize=None)
def normality_matrix(m: int) -> tuple:
    """Coefficients of the Ricci-type trace of the g_0 curvature in the entries of P.

    Row (j, l) holds d/dP_{ab} of sum_i Omega_0(d_i, d_l)^i_j; the matrix only
    depends on m.
    """
    rows = []
    cols = [(a, b) for a in range(m) for b in range(m)]
    # contribution of a unit P = E_ab to Omega_0(d_k, d_l) = [e_k, P_l] + [P_k, e_l]
    contrib = {}
    for a, b in cols:
        P = [[Fraction(int((r, c) == (a, b))) for c in range(m)] for r in range(m)]
        table = {}
        for k in range(m):
            for l in range(m):
                ek = GradedElement.basis_vector(m, k)
                el = GradedElement.basis_vector(m, l)
                Pk = GradedElement.covector(P[k])
                Pl = GradedElement.covector(P[l])
                table[k, l] = (bracket(ek, Pl) + bracket(Pk, el)).A
        contrib[a, b] = table
    for j in range(m):
        for l in range(m):
            rows.append(
                tuple(sum(contrib[c][i, l][i][j] for i in range(m)) for c in cols)
            )
    return tuple(rows)


def normal_cartan(g: ChristoffelField) -> NormalCartanData:
    m = g.m
    if m < 2:
        raise DimensionTooSmall(m)
    Ric = ricci(curvature(g))
    labels = [(a, b) for a in range(m) for b in range(m)]
    rhs = [-Ric[j][l] for j in range(m) for l in range(m)]
    sol = solve_linear(LinearSystem(normality_matrix(m), rhs, labels))
    P = tuple(tuple(sol[a, b] for b in range(m)) for a in range(m))
    return NormalCartanData(g, P)


@dataclass(frozen=True)
class CartanCurvature:
    """Graded parts of Omega(d_k, d_l) on the section, indexed ``[k][l]``."""

    minus: list  # vectors
    zero: list  # m x m matrices, zero[k][l][i][j] = K^i_{jkl}
    one: list  # covectors


def cartan_curvature(nc: NormalCartanData) -> CartanCurvature:
    m = nc.m
    forms = [nc.form(k) for k in range(m)]
    minus, zero, one = [], [], []
    for k in range(m):
        rm, r0, r1 = [], [], []
        for l in range(m):
            d = forms[l].map(lambda p: p.diff(k)) - forms[k].map(lambda p: p.diff(l))
            om = d + bracket(forms[k], forms[l])
            rm.append(om.v)
            r0.append(om.A)
            r1.append(om.xi)
        minus.append(rm)
        zero.append(r0)
        one.append(r1)
    return CartanCurvature(minus, zero, one)


def normality_defects(nc: NormalCartanData) -> dict:
    """All quantities that vanish for a normal connection, keyed by name."""
    m = nc.m
    om = cartan_curvature(nc)
    out = {}
    for k in range(m):
        for l in range(m):
            for i in range(m):
                out["torsion", i, k, l] = om.minus[k][l][i]
            out["trace", k, l] = sum((om.zero[k][l][i][i] for i in range(m)), 0)
    for j in range(m):
        for l in range(m):
            out["ricci", j, l] = sum((om.zero[i][l][i][j] for i in range(m)), 0)
    return out


def is_normal(nc: NormalCartanData) -> bool:
    return not any(v for v in normality_defects(nc).values())
