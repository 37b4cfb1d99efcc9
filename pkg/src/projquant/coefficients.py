"""Critical values and the coefficient tables C_{k,l} of the quantization formula."""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from math import comb

from .errors import CriticalDelta, DimensionTooSmall
from .exact import as_rational


def gamma_value(m: int, k: int, l: int, delta) -> Fraction:
    """gamma_{2k-l} = (m + 2k - l - (m+1) delta) / (m+1)."""
    if m < 2:
        raise DimensionTooSmall(m)
    if not 1 <= l <= k:
        raise ValueError(f"need 1 <= l <= k, got k={k}, l={l}")
    delta = as_rational(delta)
    return (m + 2 * k - l - (m + 1) * delta) / (m + 1)


def critical_pairs(m: int, k_max: int, delta) -> list[tuple[int, int]]:
    return [
        (k, l)
        for k in range(1, k_max + 1)
        for l in range(1, k + 1)
        if gamma_value(m, k, l, delta) == 0
    ]


@dataclass(frozen=True)
class Weights:
    lam: Fraction
    mu: Fraction

    def __post_init__(self):
        object.__setattr__(self, "lam", as_rational(self.lam))
        object.__setattr__(self, "mu", as_rational(self.mu))

    @property
    def delta(self) -> Fraction:
        return self.mu - self.lam


@dataclass(frozen=True)
class CoefficientTable:
    m: int
    k: int
    weights: Weights
    entries: tuple
    gammas: tuple
    critical: tuple = ()
    rescued_from: int | None = None  # first zeroed index i, if rescued

    def __getitem__(self, l: int) -> Fraction:
        return self.entries[l]

    def recurrence_residuals(self) -> list[Fraction]:
        """C_{k,l} l (m+2k-l-(m+1)delta) - C_{k,l-1} (k-l+1)((m+1)lambda+k-l)."""
        m, k = self.m, self.k
        lam, delta = self.weights.lam, self.weights.delta
        return [
            self.entries[l] * l * (m + 2 * k - l - (m + 1) * delta)
            - self.entries[l - 1] * (k - l + 1) * ((m + 1) * lam + k - l)
            for l in range(1, k + 1)
        ]

    def with_entry(self, l: int, value) -> CoefficientTable:
        """Copy with one coefficient replaced (used for mutation checks)."""
        entries = list(self.entries)
        entries[l] = as_rational(value)
        return CoefficientTable(
            self.m, self.k, self.weights, tuple(entries), self.gammas, self.critical,
            self.rescued_from,
        )


@dataclass(frozen=True)
class NoExistence:
    m: int
    k: int
    weights: Weights
    critical: tuple = field(default=())

    def __bool__(self):
        return False


def _gammas(m, k, delta):
    return tuple(gamma_value(m, k, l, delta) for l in range(1, k + 1))


def coefficient_table(m: int, k: int, weights: Weights) -> CoefficientTable:
    """Coefficients from the recurrence; the closed product form is asserted alongside."""
    delta = weights.delta
    gammas = _gammas(m, k, delta)
    crit = tuple((k, l) for l in range(1, k + 1) if gammas[l - 1] == 0)
    if crit:
        raise CriticalDelta(crit)
    lam = weights.lam
    entries = [Fraction(1)]
    for l in range(1, k + 1):
        entries.append(
            entries[-1] * (k - l + 1) * ((m + 1) * lam + k - l)
            / (l * (m + 2 * k - l - (m + 1) * delta))
        )
    table = CoefficientTable(m, k, weights, tuple(entries), gammas)
    assert table.entries == product_formula(m, k, weights)
    return table


def product_formula(m: int, k: int, weights: Weights) -> tuple:
    lam = weights.lam
    gammas = _gammas(m, k, weights.delta)
    out = [Fraction(1)]
    for l in range(1, k + 1):
        num = Fraction(1)
        den = Fraction(1)
        for r in range(1, l + 1):
            num *= lam + Fraction(k - r, m + 1)
            den *= gammas[r - 1]
        out.append(num / den * comb(k, l))
    return tuple(out)


def rescue_table(m: int, k: int, weights: Weights) -> CoefficientTable | NoExistence:
    """Critical case: zero the tail C_{k,i..k} when lambda = -(k-i)/(m+1), i <= r."""
    delta = weights.delta
    gammas = _gammas(m, k, delta)
    crit = tuple((k, l) for l in range(1, k + 1) if gammas[l - 1] == 0)
    if not crit:
        raise ValueError("rescue_table called for a non-critical shift")
    # gamma_{2k-l} is strictly decreasing in l, so at most one r is critical
    (_, r), = crit
    i = k + (m + 1) * weights.lam
    if i.denominator != 1 or not 1 <= i <= r:
        return NoExistence(m, k, weights, crit)
    i = int(i)
    lam = weights.lam
    entries = [Fraction(1)]
    for l in range(1, k + 1):
        if l >= i:
            entries.append(Fraction(0))
        else:
            entries.append(
                entries[-1] * (k - l + 1) * ((m + 1) * lam + k - l)
                / (l * (m + 2 * k - l - (m + 1) * delta))
            )
    return CoefficientTable(m, k, weights, tuple(entries), gammas, crit, rescued_from=i)


def table_for(m: int, k: int, weights: Weights) -> CoefficientTable | NoExistence:
    """Regular table when possible, otherwise the rescue outcome."""
    try:
        return coefficient_table(m, k, weights)
    except CriticalDelta:
        return rescue_table(m, k, weights)
