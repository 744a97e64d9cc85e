"""Two identical spins: uncoupled and coupled bases and the maps between them.

A state is a sparse map from ``(OrbitalOrder, index)`` to an exact amplitude.
The orbital order is a formal token recording whether the spatial factor is
evaluated at ``(r1, r2)`` or at the swapped arguments ``(r2, r1)``; with no
orbital angular momentum that token is all the spatial structure needed.
"""

from __future__ import annotations

import enum
from typing import TYPE_CHECKING, Iterator, Mapping, NamedTuple

from .exact_number import (
    NUMBER_SCHEMA,
    HalfInt,
    ParseError,
    RadicalSum,
    SignedSqrtRational,
    accumulate,
    accumulate_product,
)

if TYPE_CHECKING:
    from .cgc_engine import CgcTable

__all__ = [
    "IndexOutOfRange",
    "SpinPair",
    "UncoupledIndex",
    "CoupledIndex",
    "OrbitalOrder",
    "TwoParticleState",
    "CoupledState",
    "to_coupled",
    "to_uncoupled",
    "SplitMix64",
    "derive_seed",
    "random_state",
    "STATE_SCHEMA",
]


class IndexOutOfRange(ValueError):
    """Raised for spin labels outside the allowed range."""


class SpinPair(NamedTuple):
    """Two spins of magnitude ``two_s / 2``."""

    two_s: int

    @property
    def s(self) -> HalfInt:
        return HalfInt(self.two_s)

    @property
    def dim(self) -> int:
        return self.two_s + 1

    @property
    def pair_dim(self) -> int:
        return (self.two_s + 1) ** 2

    def projections(self) -> range:
        """Twice-values of m, from +s down to -s."""
        return range(self.two_s, -self.two_s - 1, -2)

    def total_spins(self) -> range:
        """Twice-values of j, from 2s down to 0."""
        return range(2 * self.two_s, -1, -2)


def check_two_s(two_s) -> int:
    if isinstance(two_s, bool) or not isinstance(two_s, int) or two_s < 0:
        raise IndexOutOfRange(f"two_s must be a nonnegative int, got {two_s!r}")
    return two_s


def valid_projection(two_s: int, two_m: int) -> bool:
    return abs(two_m) <= two_s and (two_s - two_m) % 2 == 0


class UncoupledIndex(NamedTuple):
    """``|m1, m2>`` as twice-values."""

    two_m1: int
    two_m2: int

    @property
    def m1(self) -> HalfInt:
        return HalfInt(self.two_m1)

    @property
    def m2(self) -> HalfInt:
        return HalfInt(self.two_m2)

    @property
    def two_m(self) -> int:
        return self.two_m1 + self.two_m2

    def swapped(self) -> UncoupledIndex:
        return UncoupledIndex(self.two_m2, self.two_m1)

    def validate(self, two_s: int) -> None:
        if not (valid_projection(two_s, self.two_m1) and valid_projection(two_s, self.two_m2)):
            raise IndexOutOfRange(f"(m1, m2) = ({self.m1}, {self.m2}) invalid for s = {HalfInt(two_s)}")


class CoupledIndex(NamedTuple):
    """``|j, m>`` as twice-values; both are integers for identical spins."""

    two_j: int
    two_m: int

    @property
    def j(self) -> HalfInt:
        return HalfInt(self.two_j)

    @property
    def m(self) -> HalfInt:
        return HalfInt(self.two_m)

    def validate(self, two_s: int) -> None:
        ok = (
            self.two_j % 2 == 0
            and 0 <= self.two_j <= 2 * two_s
            and self.two_m % 2 == 0
            and abs(self.two_m) <= self.two_j
        )
        if not ok:
            raise IndexOutOfRange(f"(j, m) = ({self.j}, {self.m}) invalid for s = {HalfInt(two_s)}")


class OrbitalOrder(enum.Enum):
    R12 = "R12"
    R21 = "R21"

    def swap(self) -> OrbitalOrder:
        return OrbitalOrder.R21 if self is OrbitalOrder.R12 else OrbitalOrder.R12


_ORDERS = (OrbitalOrder.R12, OrbitalOrder.R21)


class _SparseState:
    """Shared machinery of the two state types; zero amplitudes are dropped."""

    _index_type: type = tuple

    __slots__ = ("two_s", "_amps")

    def __init__(self, two_s: int, amplitudes: Mapping | None = None):
        self.two_s = check_two_s(two_s)
        amps = {}
        for key, amp in (amplitudes or {}).items():
            order, idx = key
            order = OrbitalOrder(order)
            idx = self._index_type(*idx)
            idx.validate(two_s)
            amp = RadicalSum.coerce(amp)
            if amp:
                amps[(order, idx)] = amp
        self._amps = amps

    @classmethod
    def _trusted(cls, two_s: int, amps: dict):
        obj = cls.__new__(cls)
        obj.two_s = two_s
        obj._amps = amps
        return obj

    @property
    def amplitudes(self) -> dict:
        return dict(self._amps)

    def items(self) -> Iterator:
        return iter(self._amps.items())

    def __len__(self) -> int:
        return len(self._amps)

    def __bool__(self) -> bool:
        return bool(self._amps)

    def __getitem__(self, key) -> RadicalSum:
        order, idx = key
        return self._amps.get((OrbitalOrder(order), self._index_type(*idx)), _ZERO)

    def __eq__(self, other):
        if type(other) is not type(self):
            return NotImplemented
        return self.two_s == other.two_s and self._amps == other._amps

    def __hash__(self):
        return hash((type(self).__name__, self.two_s, frozenset(self._amps.items())))

    def norm_squared(self) -> RadicalSum:
        """``sum |amp|^2``; exact, and rational for single-root amplitudes."""
        out: dict = {}
        for amp in self._amps.values():
            accumulate_product(out, amp, amp)
        return RadicalSum._wrap(out)

    def _combine(self, other, sign: int):
        if type(other) is not type(self) or other.two_s != self.two_s:
            raise ValueError("states of different type or spin cannot be combined")
        raw = {k: dict(v._terms) for k, v in self._amps.items()}
        for k, v in other._amps.items():
            accumulate(raw.setdefault(k, {}), v, sign)
        return self._trusted(self.two_s, _finish(raw))

    def __add__(self, other):
        return self._combine(other, 1)

    def __sub__(self, other):
        return self._combine(other, -1)

    def __neg__(self):
        return self._trusted(self.two_s, {k: -v for k, v in self._amps.items()})

    def __mul__(self, scalar):
        try:
            c = RadicalSum.coerce(scalar)
        except TypeError:
            return NotImplemented
        amps = {}
        for k, v in self._amps.items():
            prod = v * c
            if prod:
                amps[k] = prod
        return self._trusted(self.two_s, amps)

    __rmul__ = __mul__

    def sorted_items(self) -> list:
        """Items in a fixed order: R12 before R21, then labels descending."""
        return sorted(self._amps.items(), key=lambda kv: (kv[0][0] is OrbitalOrder.R21, [-x for x in kv[0][1]]))

    def __repr__(self) -> str:
        body = ", ".join(f"{o.value}{tuple(str(HalfInt(x)) for x in idx)}: {a}" for (o, idx), a in self.sorted_items())
        return f"{type(self).__name__}(two_s={self.two_s}, {{{body}}})"


def _finish(raw: dict) -> dict:
    out = {}
    for k, terms in raw.items():
        amp = RadicalSum._wrap(terms)
        if amp:
            out[k] = amp
    return out


_ZERO = RadicalSum()


class TwoParticleState(_SparseState):
    """Amplitudes ``psi_{m1,m2}`` in the uncoupled basis."""

    _index_type = UncoupledIndex
    __slots__ = ()

    @classmethod
    def basis(cls, two_s: int, two_m1: int, two_m2: int, order=OrbitalOrder.R12, amp=1) -> TwoParticleState:
        return cls(two_s, {(order, (two_m1, two_m2)): amp})

    def to_json(self) -> dict:
        return {
            "two_s": self.two_s,
            "terms": [
                {"orbital": o.value, "two_m1": idx.two_m1, "two_m2": idx.two_m2, "amp": a.to_json()}
                for (o, idx), a in self.sorted_items()
            ],
        }

    @classmethod
    def from_json(cls, obj: dict) -> TwoParticleState:
        try:
            two_s = obj["two_s"]
            raw: dict = {}
            for t in obj["terms"]:
                key = (OrbitalOrder(t["orbital"]), UncoupledIndex(int(t["two_m1"]), int(t["two_m2"])))
                accumulate(raw.setdefault(key, {}), RadicalSum.from_json(t["amp"]))
        except (KeyError, TypeError, ValueError) as exc:
            if isinstance(exc, (ParseError, IndexOutOfRange)):
                raise
            raise ParseError(f"bad state JSON: {exc}") from None
        return cls(two_s, _finish(raw))


class CoupledState(_SparseState):
    """Amplitudes ``chi_{j,m}`` in the total-spin basis."""

    _index_type = CoupledIndex
    __slots__ = ()

    @classmethod
    def basis(cls, two_s: int, two_j: int, two_m: int, order=OrbitalOrder.R12, amp=1) -> CoupledState:
        return cls(two_s, {(order, (two_j, two_m)): amp})


def _require_table(two_s: int, table: CgcTable) -> None:
    if table.two_s != two_s:
        raise ValueError(f"table built for two_s={table.two_s}, state has two_s={two_s}")


def to_coupled(state: TwoParticleState, table: CgcTable) -> CoupledState:
    """``chi_{j,m} = sum_{m1+m2=m} C(j,m;m1,m2) psi_{m1,m2}`` per orbital slot."""
    _require_table(state.two_s, table)
    raw: dict = {}
    for (order, idx), amp in state.items():
        two_m = idx.two_m1 + idx.two_m2
        for two_j in table.js_for(two_m):
            c = table.radical(two_j, two_m, idx.two_m1, idx.two_m2)
            if c:
                accumulate_product(raw.setdefault((order, CoupledIndex(two_j, two_m)), {}), c, amp)
    return CoupledState._trusted(state.two_s, _finish(raw))


def to_uncoupled(state: CoupledState, table: CgcTable) -> TwoParticleState:
    """``psi_{m1,m2} = sum_j C(j,m;m1,m2) chi_{j,m}``; inverse of :func:`to_coupled`."""
    _require_table(state.two_s, table)
    raw: dict = {}
    for (order, idx), amp in state.items():
        for two_m1, two_m2 in table.pairs_for(idx.two_m):
            c = table.radical(idx.two_j, idx.two_m, two_m1, two_m2)
            if c:
                accumulate_product(raw.setdefault((order, UncoupledIndex(two_m1, two_m2)), {}), c, amp)
    return TwoParticleState._trusted(state.two_s, _finish(raw))


# ---------------------------------------------------------------------------
# seeded random states

_MASK64 = (1 << 64) - 1
_GOLDEN = 0x9E3779B97F4A7C15


class SplitMix64:
    """The SplitMix64 generator (Steele, Lea & Flood); 64-bit outputs."""

    def __init__(self, seed: int):
        self.state = seed & _MASK64

    def next(self) -> int:
        self.state = (self.state + _GOLDEN) & _MASK64
        z = self.state
        z = ((z ^ (z >> 30)) * 0xBF58476D1CE4E5B9) & _MASK64
        z = ((z ^ (z >> 27)) * 0x94D049BB133111EB) & _MASK64
        return z ^ (z >> 31)


def derive_seed(seed: int, stream: int) -> int:
    """Independent per-trial seed: the first output of SplitMix64 at ``seed + stream*golden``."""
    return SplitMix64((seed + stream * _GOLDEN) & _MASK64).next()


def random_state(two_s: int, seed: int, orders=_ORDERS) -> TwoParticleState:
    """Dense random state with amplitudes ``sign * sqrt(k/64)``, ``k`` in 0..64.

    Keys are visited R12 then R21, ``m1`` descending, ``m2`` descending; each
    key consumes one 64-bit draw ``u``: ``k = (u >> 1) % 65`` and the sign is
    negative when ``u`` is odd.
    """
    check_two_s(two_s)
    rng = SplitMix64(seed)
    amps = {}
    pair = SpinPair(two_s)
    for order in orders:
        for two_m1 in pair.projections():
            for two_m2 in pair.projections():
                u = rng.next()
                k = (u >> 1) % 65
                if k:
                    amps[(order, UncoupledIndex(two_m1, two_m2))] = RadicalSum.coerce(
                        SignedSqrtRational(-1 if u & 1 else 1, k, 64)
                    )
    return TwoParticleState._trusted(two_s, amps)


STATE_SCHEMA = {
    "type": "object",
    "required": ["two_s", "terms"],
    "properties": {
        "two_s": {"type": "integer", "minimum": 0},
        "terms": {
            "type": "array",
            "items": {
                "type": "object",
                "required": ["orbital", "two_m1", "two_m2", "amp"],
                "properties": {
                    "orbital": {"enum": ["R12", "R21"]},
                    "two_m1": {"type": "integer"},
                    "two_m2": {"type": "integer"},
                    "amp": NUMBER_SCHEMA,
                },
            },
        },
    },
}
