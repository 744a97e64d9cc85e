"""Wigner d-matrices and exchange of two spins by rotation.

Rotations are active, ``R = exp(-i theta n.J)``, with z-y-z Euler angles.
At ``theta = pi`` the d-matrix is a signed permutation and is kept as exact
integers; other angles go through double precision.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from functools import lru_cache

import numpy as np

from .cgc_engine import build_table
from .exact_number import HalfInt, SignedSqrtRational, to_float
from .spin_space import IndexOutOfRange, check_two_s, valid_projection

__all__ = [
    "WignerDMatrix",
    "EulerRotation",
    "SingletVerdict",
    "d_matrix_pi",
    "d_matrix",
    "wigner_D",
    "exchange_by_rotation_same_spin",
    "exchange_by_rotation_opposite_spin",
    "singlet_state",
    "singlet_rotation_invariance",
]


@dataclass(frozen=True)
class WignerDMatrix:
    """``d^j_{m',m}(theta)``; rows ``m'`` and columns ``m`` run from ``j`` down to ``-j``."""

    two_j: int
    theta: float
    entries: np.ndarray
    exact: bool = False

    @property
    def projections(self) -> range:
        return range(self.two_j, -self.two_j - 1, -2)

    def position(self, two_m: int) -> int:
        if not valid_projection(self.two_j, two_m):
            raise IndexOutOfRange(f"m={HalfInt(two_m)} invalid for j={HalfInt(self.two_j)}")
        return (self.two_j - two_m) // 2

    def element(self, m_prime, m):
        """``d_{m',m}``; labels accept anything :meth:`HalfInt.coerce` takes."""
        i = self.position(HalfInt.coerce(m_prime).twice)
        k = self.position(HalfInt.coerce(m).twice)
        value = self.entries[i, k]
        return int(value) if self.exact else float(value)

    def to_json(self) -> dict:
        return {
            "two_j": self.two_j,
            "theta": "pi" if self.exact else self.theta,
            "exact": self.exact,
            "rows": [[int(x) if self.exact else float(x) for x in row] for row in self.entries],
        }


@dataclass(frozen=True)
class EulerRotation:
    alpha: float = 0.0
    beta: float = 0.0
    gamma: float = 0.0


def d_matrix_pi(two_j: int) -> WignerDMatrix:
    """Exact ``d^j(pi)``: ``d_{m',m} = (-1)^{j-m}`` when ``m' = -m``, else 0."""
    check_two_s(two_j)
    n = two_j + 1
    d = np.zeros((n, n), dtype=np.int64)
    for k, two_m in enumerate(range(two_j, -two_j - 1, -2)):
        d[n - 1 - k, k] = -1 if ((two_j - two_m) // 2) % 2 else 1
    return WignerDMatrix(two_j, math.pi, d, exact=True)


@lru_cache(maxsize=128)
def _d_terms(two_j: int) -> tuple:
    """Per entry, the terms ``(signed coefficient, cos power, sin power)`` of the factorial sum."""
    f = math.factorial
    proj = range(two_j, -two_j - 1, -2)
    out = []
    for tmp in proj:
        row = []
        for tm in proj:
            # integer combinations: j+m, j-m, j-m', m'-m
            jpm, jmm = (two_j + tm) // 2, (two_j - tm) // 2
            jmp = (two_j - tmp) // 2
            diff = (tmp - tm) // 2
            num = f(jpm) * f(jmm) * f(jpm + diff) * f(jmp)
            terms = []
            for k in range(max(0, -diff), min(jpm, jmp) + 1):
                den = f(jpm - k) * f(k) * f(jmp - k) * f(k + diff)
                coef = to_float(SignedSqrtRational(1, num, den * den))
                sign = -1.0 if (k + diff) % 2 else 1.0
                terms.append((sign * coef, two_j - 2 * k - diff, 2 * k + diff))
            row.append(tuple(terms))
        out.append(tuple(row))
    return tuple(out)


def d_matrix(two_j: int, theta: float) -> WignerDMatrix:
    """Floating ``d^j(theta)`` from the explicit factorial sum."""
    check_two_s(two_j)
    if not math.isfinite(theta):
        raise ValueError("theta must be finite")
    c, s = math.cos(theta / 2), math.sin(theta / 2)
    n = two_j + 1
    d = np.zeros((n, n))
    for i, row in enumerate(_d_terms(two_j)):
        for k, terms in enumerate(row):
            d[i, k] = math.fsum(coef * c**pc * s**ps for coef, pc, ps in terms)
    return WignerDMatrix(two_j, float(theta), d)


def wigner_D(two_j: int, rotation: EulerRotation) -> np.ndarray:
    """``D_{m',m} = exp(-i alpha m') d_{m',m}(beta) exp(-i gamma m)``."""
    d = d_matrix(two_j, rotation.beta).entries
    m = np.arange(two_j, -two_j - 1, -2) / 2
    left = np.exp(-1j * rotation.alpha * m)
    right = np.exp(-1j * rotation.gamma * m)
    return left[:, None] * d * right[None, :]


def _check_m(two_s: int, m) -> int:
    check_two_s(two_s)
    two_m = HalfInt.coerce(m).twice
    if not valid_projection(two_s, two_m):
        raise IndexOutOfRange(f"m={HalfInt(two_m)} invalid for s={HalfInt(two_s)}")
    return two_m


def exchange_by_rotation_same_spin(two_s: int, m) -> int:
    """Phase of ``exp(-i pi J_z)`` on ``|m, m>`` (orbital part only swaps arguments).

    Each spin contributes ``exp(-i pi m) = (-i)^{2m}``; the phase is tracked
    as a power of ``-i`` so half-integer ``m`` stays exact.
    """
    two_m = _check_m(two_s, m)
    quarter_turns = (2 * two_m) % 4  # (-i)^{2m} twice over
    if quarter_turns % 2:
        raise ArithmeticError("two-spin z-rotation phase is not real")
    return 1 if quarter_turns == 0 else -1


def exchange_by_rotation_opposite_spin(two_s: int, m) -> int:
    """Phase of ``exp(-i pi J_y)`` taking ``|-m, m>`` to ``|m, -m>``.

    ``d(pi)`` maps each ``|mu>`` to ``|-mu>`` alone, so the two-spin amplitude
    is ``d_{m,-m}(pi) * d_{-m,m}(pi)``.
    """
    two_m = _check_m(two_s, m)
    d = d_matrix_pi(two_s)
    return d.element(HalfInt(two_m), HalfInt(-two_m)) * d.element(HalfInt(-two_m), HalfInt(two_m))


def singlet_state(two_s: int) -> np.ndarray:
    """The ``j = 0`` state as a ``(2s+1)^2`` float vector over ``(m1, m2)``, ``m`` descending."""
    table = build_table(two_s)
    n = two_s + 1
    vec = np.zeros(n * n)
    for two_m1, two_m2 in table.pairs_for(0):
        i, k = (two_s - two_m1) // 2, (two_s - two_m2) // 2
        vec[i * n + k] = to_float(table.get(0, 0, two_m1, two_m2))
    return vec


@dataclass(frozen=True)
class SingletVerdict:
    two_s: int
    rotation: EulerRotation
    max_deviation: float
    rotation_sign: int
    tolerance: float = 1e-10

    @property
    def invariant(self) -> bool:
        return self.max_deviation < self.tolerance

    @property
    def statistics_sign(self) -> int:
        return -1 if self.two_s % 2 else 1

    @property
    def reproduces_statistics(self) -> bool:
        """Whether this rotation gives the exchange sign ``(-1)^{2s}``."""
        return self.rotation_sign == self.statistics_sign

    def summary(self) -> str:
        note = (
            "rotation cannot supply the fermionic sign"
            if not self.reproduces_statistics
            else "rotation sign agrees with (-1)^{2s}"
        )
        return (
            f"max deviation {self.max_deviation:.1e} {'<' if self.invariant else '>='} {self.tolerance:g}; "
            f"rotation sign {self.rotation_sign:+d}, expected (-1)^{{2s}} = {self.statistics_sign:+d}; {note}"
        )


def singlet_rotation_invariance(two_s: int, rotation: EulerRotation, tolerance: float = 1e-10) -> SingletVerdict:
    """Apply ``D(R) (x) D(R)`` to the two-spin singlet and measure the change."""
    check_two_s(two_s)
    if two_s < 1:
        raise IndexOutOfRange("the singlet check needs two_s >= 1")
    psi = singlet_state(two_s).astype(complex)
    D = wigner_D(two_s, rotation)
    n = two_s + 1
    rotated = (D @ psi.reshape(n, n) @ D.T).reshape(-1)
    deviation = float(np.max(np.abs(rotated - psi)))
    overlap = np.vdot(psi, rotated)
    sign = 1 if overlap.real >= 0 else -1
    return SingletVerdict(two_s, rotation, deviation, sign, tolerance)
