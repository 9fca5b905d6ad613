"""Two-dimensional real algebras with unit square ``i**2 = p + q*i``.

Every such algebra is isomorphic to exactly one of the complex, dual or
perplex (split-complex) numbers, decided by the sign of ``p + q**2/4``.
"""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass

# Tolerance on the discriminant for the dual (parabolic) class.
DUAL_TOL = 1e-12


class AlgebraClass(str, enum.Enum):
    COMPLEX = "complex"
    DUAL = "dual"
    PERPLEX = "perplex"


@dataclass(frozen=True)
class AlgebraSpec:
    """Algebra with ``i**2 = p + q*i``."""

    p: float
    q: float

    def __post_init__(self):
        if not (math.isfinite(self.p) and math.isfinite(self.q)):
            raise ValueError(f"algebra coefficients must be finite, got p={self.p}, q={self.q}")

    @property
    def discriminant(self) -> float:
        return self.p + self.q * self.q / 4.0

    def multiply(self, u: tuple[float, float], v: tuple[float, float]) -> tuple[float, float]:
        """Product of ``u[0] + u[1]*i`` and ``v[0] + v[1]*i``."""
        a, b = u
        c, d = v
        bd = b * d
        return (a * c + self.p * bd, a * d + b * c + self.q * bd)


def classify_algebra(spec: AlgebraSpec) -> AlgebraClass:
    d = spec.discriminant
    if not math.isfinite(d):
        raise ValueError("discriminant overflowed")
    if abs(d) <= DUAL_TOL:
        return AlgebraClass.DUAL
    return AlgebraClass.COMPLEX if d < 0 else AlgebraClass.PERPLEX


def complex_isomorphism_params(spec: AlgebraSpec) -> tuple[float, float]:
    """Return ``(shift, scale)`` such that ``i = shift + scale*J`` with ``J**2 = -1``.

    Raises ValueError unless the algebra is complex-isomorphic.
    """
    cls = classify_algebra(spec)
    if cls is not AlgebraClass.COMPLEX:
        raise ValueError(f"algebra {spec} is {cls.value}-isomorphic, not complex")
    return spec.q / 2.0, math.sqrt(-spec.discriminant)


def induced_algebra_epsilon(eps: float) -> AlgebraSpec:
    """Algebra whose squaring reproduces the epsilon-family update.

    In the basis e1=(1,0), e2=(0,1) the squaring map gives e1**2 = (1-eps, -eps),
    e2**2 = (-eps, 1-eps) and e1*e2 = (eps, eps), with unit (1, 1). Taking
    i = e1 - e2 yields i**2 = (1 - 4*eps) * unit.
    """
    if not math.isfinite(eps):
        raise ValueError(f"eps must be finite, got {eps}")
    return AlgebraSpec(1.0 - 4.0 * eps, 0.0)


def induced_algebra_b(b: float) -> AlgebraSpec:
    if not math.isfinite(b):
        raise ValueError(f"b must be finite, got {b}")
    return AlgebraSpec(-1.0, b)
