"""Job files: JSON documents describing one chart computation.

Example::

    {
      "m": 2, "lambda": "1/2", "mu": "1", "k": 1,
      "christoffel": {"1,1,1": "x2", "2,1,2": "x1^2"},
      "symbol": {"1": "x1*x2", "2": "1"},
      "alpha": {"1": "x2"}
    }

Christoffel keys "i,j,k" name Gamma^i_{jk}; symbol keys are comma separated
index lists (order irrelevant, "" for k = 0).  Indices are 1-based.
Rationals are strings so no float ever enters.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from fractions import Fraction
from pathlib import Path

from .coefficients import Weights
from .errors import ValidationError
from .exact import Universe, as_rational
from .geometry import ChristoffelField, OneForm
from .parsing import parse_expression
from .quantization import Symbol


@dataclass(frozen=True)
class Job:
    m: int
    weights: Weights
    k: int
    christoffel: ChristoffelField
    symbol: Symbol
    alpha: OneForm | None = None
    params: dict = field(default_factory=dict)


def _rational(doc, key, default=None) -> Fraction:
    if key not in doc:
        if default is None:
            raise ValidationError(f"missing field {key!r}")
        return default
    value = doc[key]
    if isinstance(value, float) or isinstance(value, bool):
        raise ValidationError(f"{key!r} must be an integer or a 'p/q' string")
    try:
        return as_rational(value)
    except (TypeError, ValueError, ZeroDivisionError) as exc:
        raise ValidationError(f"{key!r}: {exc}") from None


def _indices(key: str, m: int, length: int | None, what: str) -> tuple:
    key = key.strip()
    parts = [s for s in key.replace(" ", "").split(",") if s] if key else []
    try:
        idx = tuple(int(s) - 1 for s in parts)
    except ValueError:
        raise ValidationError(f"bad {what} key {key!r}") from None
    if length is not None and len(idx) != length:
        raise ValidationError(f"{what} key {key!r} needs {length} indices")
    if any(not 0 <= i < m for i in idx):
        raise ValidationError(f"{what} key {key!r} has an index outside 1..{m}")
    return idx


def job_from_dict(doc: dict) -> Job:
    if not isinstance(doc, dict):
        raise ValidationError("job must be a JSON object")
    m = doc.get("m")
    if not isinstance(m, int) or isinstance(m, bool):
        raise ValidationError("'m' must be an integer")
    if m < 2:
        raise ValidationError("'m' must be at least 2")
    lam = _rational(doc, "lambda")
    mu = _rational(doc, "mu")
    k = doc.get("k", 0)
    if not isinstance(k, int) or k < 0:
        raise ValidationError("'k' must be a non-negative integer")

    entries = {}
    for key, expr in (doc.get("christoffel") or {}).items():
        i, j, l = _indices(key, m, 3, "christoffel")
        p = parse_expression(str(expr), m)
        for a, b in ((j, l), (l, j)):
            if (i, a, b) in entries and entries[i, a, b] != p:
                raise ValidationError(f"christoffel entries {key!r} conflict with their mirror")
        entries[i, j, l] = p
    gamma = ChristoffelField.from_entries(m, entries)

    comps = {}
    for key, expr in (doc.get("symbol") or {}).items():
        idx = tuple(sorted(_indices(key, m, k, "symbol")))
        if idx in comps:
            raise ValidationError(f"symbol index {key!r} given twice")
        comps[idx] = parse_expression(str(expr), m)
    symbol = Symbol(m, k, comps)

    alpha = None
    if doc.get("alpha") is not None:
        uni = Universe(m)
        comp = [uni.zero] * m
        for key, expr in doc["alpha"].items():
            (j,) = _indices(key, m, 1, "alpha")
            comp[j] = parse_expression(str(expr), m)
        alpha = OneForm(tuple(comp))

    known = {"m", "lambda", "mu", "k", "christoffel", "symbol", "alpha"}
    params = {key: v for key, v in doc.items() if key not in known}
    return Job(m, Weights(lam, mu), k, gamma, symbol, alpha, params)


def load_job(path: str | Path) -> Job:
    try:
        doc = json.loads(Path(path).read_text())
    except OSError as exc:
        raise ValidationError(f"cannot read job file: {exc}") from None
    except json.JSONDecodeError as exc:
        raise ValidationError(f"job file is not valid JSON: {exc}") from None
    return job_from_dict(doc)
