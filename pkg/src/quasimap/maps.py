"""Perturbed quadratic map families as one-step updates on the real plane.

All families share the scalar kernel :func:`step_xy`, which is compiled with
numba and used both by the Python-facing :func:`step` and by the grid
kernels in :mod:`quasimap.engine`.  Keeping a single definition is what makes
the reduction identities (a=0, alpha=2, b=0 against the classical map) hold
bitwise at the grid level.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import NamedTuple

import numba

CLASSICAL, EPSILON, CONJUGATE, ALPHA, BALGEBRA = range(5)

KIND_CODES = {
    "classical": CLASSICAL,
    "epsilon": EPSILON,
    "conjugate": CONJUGATE,
    "alpha": ALPHA,
    "balgebra": BALGEBRA,
}

# name of the family parameter as used in flags and JSON
PARAM_NAMES = {
    "classical": None,
    "epsilon": "eps",
    "conjugate": "a",
    "alpha": "alpha",
    "balgebra": "b",
}


class PlanePoint(NamedTuple):
    x: float
    y: float


class ParamPoint(NamedTuple):
    c1: float
    c2: float


@dataclass(frozen=True)
class MapFamily:
    """A map family tag plus its scalar parameter.

    ``param`` is ignored for the classical family.  Use the constructors
    (:meth:`classical`, :meth:`epsilon`, ...) rather than building by hand.
    """

    kind: str
    param: float = 0.0

    def __post_init__(self):
        if self.kind not in KIND_CODES:
            raise ValueError(f"unknown family {self.kind!r}; expected one of {sorted(KIND_CODES)}")
        if not math.isfinite(self.param):
            raise ValueError(f"family parameter must be finite, got {self.param}")
        if self.kind == "classical" and self.param != 0.0:
            object.__setattr__(self, "param", 0.0)

    @classmethod
    def classical(cls) -> MapFamily:
        return cls("classical")

    @classmethod
    def epsilon(cls, eps: float) -> MapFamily:
        return cls("epsilon", float(eps))

    @classmethod
    def conjugate(cls, a: float) -> MapFamily:
        return cls("conjugate", float(a))

    @classmethod
    def alpha(cls, alpha: float) -> MapFamily:
        return cls("alpha", float(alpha))

    @classmethod
    def balgebra(cls, b: float) -> MapFamily:
        return cls("balgebra", float(b))

    @classmethod
    def from_name(cls, kind: str, param: float | None = None) -> MapFamily:
        if kind not in KIND_CODES:
            raise ValueError(f"unknown family {kind!r}; expected one of {sorted(KIND_CODES)}")
        if kind != "classical" and param is None:
            raise ValueError(f"family {kind!r} requires --{PARAM_NAMES[kind]}")
        return cls(kind, 0.0 if param is None else float(param))

    @property
    def code(self) -> int:
        return KIND_CODES[self.kind]

    def with_param(self, value: float) -> MapFamily:
        return MapFamily(self.kind, float(value))

    def to_json(self) -> dict:
        d = {"kind": self.kind}
        name = PARAM_NAMES[self.kind]
        if name is not None:
            d[name] = self.param
        return d

    def __str__(self):
        name = PARAM_NAMES[self.kind]
        return self.kind if name is None else f"{self.kind}({name}={self.param:g})"


@numba.njit(nogil=True, cache=True)
def step_xy(kind, param, x, y, c1, c2):
    if kind == CLASSICAL:
        return x * x - y * y + c1, 2.0 * x * y + c2
    elif kind == EPSILON:
        dyx = y - x
        dxy = x - y
        return x * x - param * (dyx * dyx) + c1, y * y - param * (dxy * dxy) + c2
    elif kind == CONJUGATE:
        return (x * x - y * y + c1) + param * x, (2.0 * x * y + c2) - param * y
    elif kind == ALPHA:
        return x * x - y * y + c1, param * x * y + c2
    else:
        return x * x - y * y + c1, (2.0 * x * y + param * (y * y)) + c2


def step(family: MapFamily, s: tuple[float, float], c: tuple[float, float]) -> PlanePoint:
    """One application of the family's map at state ``s`` with parameter ``c``."""
    x, y = step_xy(family.code, family.param, float(s[0]), float(s[1]), float(c[0]), float(c[1]))
    return PlanePoint(x, y)


def to_epsilon(pt: tuple[float, float]) -> ParamPoint:
    """Classical coordinates (Re, Im) to epsilon-family coordinates (Re+Im, Re-Im)."""
    return ParamPoint(pt[0] + pt[1], pt[0] - pt[1])


def from_epsilon(pt: tuple[float, float]) -> ParamPoint:
    return ParamPoint((pt[0] + pt[1]) / 2.0, (pt[0] - pt[1]) / 2.0)


def epsilon_transform(direction: str, pt: tuple[float, float]) -> ParamPoint:
    if direction == "to":
        return to_epsilon(pt)
    if direction == "from":
        return from_epsilon(pt)
    raise ValueError(f"direction must be 'to' or 'from', got {direction!r}")


def characteristic_split(pt: tuple[float, float]) -> tuple[float, float]:
    """Characteristic coordinates ``(x + y, x - y)``; the epsilon=0 map decouples in them."""
    return pt[0] + pt[1], pt[0] - pt[1]
