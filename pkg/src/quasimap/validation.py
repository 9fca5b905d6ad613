"""Independent oracles for the escape-time engine.

None of the oracles here call the grid kernels for their own answer: the
real-axis interval and the main cardioid are closed-form facts about
``z -> z**2 + c``, and the equivalence checks compare two different map
families against each other.
"""

from __future__ import annotations

import cmath
import math
from dataclasses import asdict, dataclass

import numpy as np

from .engine import MEMBER, EscapeParams, escape_times, max_orbit_norm, orbit
from .maps import MapFamily, step, to_epsilon

KINDS = ("conj_zero", "alpha_two", "b_zero", "epsilon_half")

_REDUCTIONS = {
    "conj_zero": MapFamily.conjugate(0.0),
    "alpha_two": MapFamily.alpha(2.0),
    "b_zero": MapFamily.balgebra(0.0),
}

SAMPLE_BOX = (-3.0, 3.0)
GRAZE_TOL = 1e-9
MAX_MISMATCH_RATE = 1e-3


def real_axis_oracle(c1: float) -> bool:
    """Bounded zero orbit of ``x -> x**2 + c1``: exactly ``-2 <= c1 <= 1/4``."""
    return -2.0 <= c1 <= 0.25


def cardioid_interior_test(c: tuple[float, float]) -> bool:
    """True iff ``c = mu/2 - mu**2/4`` for some ``|mu| < 1``.

    Solves ``mu**2 - 2*mu + 4c = 0``; both roots are checked.
    """
    cc = complex(c[0], c[1])
    root = cmath.sqrt(1.0 - 4.0 * cc)
    return abs(1.0 + root) < 1.0 or abs(1.0 - root) < 1.0


def cardioid_distance(c: tuple[float, float], n: int = 4096) -> float:
    """Approximate distance from ``c`` to the main cardioid curve (sampled at ``n`` angles)."""
    t = np.linspace(0.0, 2.0 * np.pi, n, endpoint=False)
    mu = np.exp(1j * t)
    curve = mu / 2 - mu * mu / 4
    return float(np.min(np.abs(curve - complex(c[0], c[1]))))


@dataclass
class EquivalenceReport:
    kind: str
    samples: int
    seed: int
    mismatches: int
    total: int
    passed: bool
    max_iter: int = 512
    membership_mismatches: int = 0
    grazing: int = 0
    max_step_defect_ulps: float = 0.0

    def to_json(self) -> dict:
        d = asdict(self)
        d["pass"] = d.pop("passed")
        return d


def sample_params(samples: int, seed: int, box: tuple[float, float] = SAMPLE_BOX) -> np.ndarray:
    rng = np.random.default_rng(seed)
    return rng.uniform(box[0], box[1], size=(samples, 2))


def _step_defect_ulps(c: tuple[float, float], n_steps: int) -> float:
    """Worst per-step disagreement of ``T(F(s))`` and ``G(T(s))`` along the classical orbit, in ulps."""
    classical = MapFamily.classical()
    eps_half = MapFamily.epsilon(0.5)
    pts, _ = orbit(classical, c, n_steps)
    tc = to_epsilon(c)
    worst = 0.0
    for s in pts[:-1]:
        lhs = to_epsilon(step(classical, s, c))
        rhs = step(eps_half, to_epsilon(s), tc)
        for a, b in zip(lhs, rhs):
            if not (math.isfinite(a) and math.isfinite(b)):
                continue
            scale = math.ulp(max(abs(a), abs(b), 1.0))
            worst = max(worst, abs(a - b) / scale)
    return worst


def equivalence_check(kind: str, samples: int = 10_000, seed: int = 0, max_iter: int = 512,
                      escape_radius: float = 2.0) -> EquivalenceReport:
    """Compare escape results of a family against the classical map on seeded samples.

    Reduction kinds must agree exactly.  ``epsilon_half`` compares the
    epsilon=0.5 family at transformed parameters with radius ``sqrt(2)*R``
    (the transform scales norms by sqrt(2)); floating-point rounding differs
    between the two paths, so a small mismatch rate is tolerated.
    """
    if kind not in KINDS:
        raise ValueError(f"unknown equivalence kind {kind!r}; expected one of {KINDS}")
    if samples < 1:
        raise ValueError("samples must be >= 1")
    pts = sample_params(samples, seed)
    c1, c2 = pts[:, 0], pts[:, 1]
    base_params = EscapeParams(max_iter, escape_radius)
    base = escape_times(MapFamily.classical(), c1, c2, base_params)
    if kind == "epsilon_half":
        other = escape_times(MapFamily.epsilon(0.5), c1 + c2, c1 - c2,
                             EscapeParams(max_iter, math.sqrt(2.0) * escape_radius))
    else:
        other = escape_times(_REDUCTIONS[kind], c1, c2, base_params)

    bad = np.flatnonzero(base != other)
    membership_bad = int(np.count_nonzero((base == MEMBER) != (other == MEMBER)))
    grazing = 0
    defect = 0.0
    for i in bad:
        c = (float(c1[i]), float(c2[i]))
        n = int(min(v for v in (base[i], other[i]) if v != MEMBER) or max_iter)
        # orbit up to, not including, the first escape
        peak = max_orbit_norm(MapFamily.classical(), c, n - 1) if n > 1 else 0.0
        if abs(peak - escape_radius) <= GRAZE_TOL:
            grazing += 1
        if kind == "epsilon_half":
            defect = max(defect, _step_defect_ulps(c, n))

    mismatches = int(bad.size)
    if kind == "epsilon_half":
        passed = mismatches / samples <= MAX_MISMATCH_RATE
    else:
        passed = mismatches == 0
    return EquivalenceReport(kind=kind, samples=samples, seed=seed, mismatches=mismatches, total=samples,
                             passed=passed, max_iter=max_iter, membership_mismatches=membership_bad,
                             grazing=grazing, max_step_defect_ulps=defect)


def real_axis_disagreements(samples: int = 10_000, seed: int = 0, max_iter: int = 10_000,
                            lo: float = -2.5, hi: float = 0.5) -> list[float]:
    """Sampled ``c1`` where escape-time membership and :func:`real_axis_oracle` disagree.

    Points inside the parabolic bands ``|c1 - 1/4| < 1e-6`` and ``|c1 + 2| < 1e-9``
    are skipped: a finite budget cannot resolve them.
    """
    rng = np.random.default_rng(seed)
    c1 = rng.uniform(lo, hi, size=samples)
    keep = (np.abs(c1 - 0.25) >= 1e-6) & (np.abs(c1 + 2.0) >= 1e-9)
    c1 = c1[keep]
    got = escape_times(MapFamily.classical(), c1, np.zeros_like(c1), EscapeParams(max_iter, 2.0)) == MEMBER
    want = np.array([real_axis_oracle(v) for v in c1])
    return [float(v) for v in c1[got != want]]


def perplex_rectangle_disagreements(samples: int = 10_000, seed: int = 0, max_iter: int = 1000,
                                    lo: float = -2.5, hi: float = 0.75) -> list[tuple[float, float]]:
    """Points where epsilon=0 membership differs from the product of two real-axis oracles."""
    rng = np.random.default_rng(seed)
    lam = rng.uniform(lo, hi, size=(samples, 2))
    near_end = np.any((np.abs(lam - 0.25) < 1e-6) | (np.abs(lam + 2.0) < 1e-6), axis=1)
    lam = lam[~near_end]
    got = escape_times(MapFamily.epsilon(0.0), lam[:, 0], lam[:, 1], EscapeParams(max_iter, 4.0)) == MEMBER
    want = np.array([real_axis_oracle(a) and real_axis_oracle(b) for a, b in lam])
    return [tuple(map(float, p)) for p in lam[got != want]]
