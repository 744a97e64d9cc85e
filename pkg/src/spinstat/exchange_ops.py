"""Parity, spin swap and particle exchange on two-spin states."""

from __future__ import annotations

from dataclasses import dataclass

from .cgc_engine import CgcTable, build_table
from .spin_space import (
    STATE_SCHEMA,
    CoupledState,
    TwoParticleState,
    UncoupledIndex,
    derive_seed,
    random_state,
    to_coupled,
    to_uncoupled,
)

__all__ = [
    "ExchangeReport",
    "parity",
    "spin_swap",
    "exchange",
    "swapped_parity",
    "orbital_swap",
    "relabel",
    "symmetrize",
    "statistics_sign",
    "compare_exchange",
    "verify_spin_statistics",
    "REPORT_SCHEMA",
]


def statistics_sign(two_s: int) -> int:
    """``(-1)^{2s}``."""
    return -1 if two_s % 2 else 1


def parity(state: TwoParticleState, table: CgcTable | None = None) -> TwoParticleState:
    """Spatial inversion about the centre of mass.

    Spins are only touched through the coupled-basis phase ``(-1)^j``;
    the orbital order is swapped.
    """
    if table is None:
        table = build_table(state.two_s)
    coupled = to_coupled(state, table)
    flipped = {}
    for (order, idx), amp in coupled.items():
        flipped[(order.swap(), idx)] = -amp if (idx.two_j // 2) % 2 else amp
    return to_uncoupled(CoupledState._trusted(state.two_s, flipped), table)


def spin_swap(state: TwoParticleState) -> TwoParticleState:
    """``|m1, m2> -> |m2, m1>``; orbital order untouched."""
    return TwoParticleState._trusted(
        state.two_s, {(order, idx.swapped()): amp for (order, idx), amp in state.items()}
    )


def exchange(state: TwoParticleState, table: CgcTable | None = None) -> TwoParticleState:
    """Exchange of the two particles realized by spatial inversion.

    The orbital arguments swap and each total-spin component picks up
    ``(-1)^j``.  The spin permutation needs no separate step: by
    ``C(j,m;m2,m1) = (-1)^{2s-j} C(j,m;m1,m2)`` the phase ``(-1)^j`` already
    equals ``(-1)^{2s}`` times ``|m1,m2> -> |m2,m1>``.  Composing
    :func:`spin_swap` on top would undo that swap, leaving
    ``(-1)^{2s} * orbital_swap(state)`` (see :func:`swapped_parity`).
    """
    return parity(state, table)


def swapped_parity(state: TwoParticleState, table: CgcTable | None = None) -> TwoParticleState:
    """``spin_swap(parity(state))``, the literal product of the two operators."""
    return spin_swap(parity(state, table))


def orbital_swap(state: TwoParticleState) -> TwoParticleState:
    """Swap the orbital order only."""
    return TwoParticleState._trusted(
        state.two_s, {(order.swap(), idx): amp for (order, idx), amp in state.items()}
    )


def relabel(state: TwoParticleState) -> TwoParticleState:
    """Swap both orbital order and spin labels without any phase.

    The spin-statistics relation reads ``exchange(psi) == (-1)^{2s} relabel(psi)``.
    """
    return TwoParticleState._trusted(
        state.two_s, {(order.swap(), idx.swapped()): amp for (order, idx), amp in state.items()}
    )


def symmetrize(state: TwoParticleState) -> TwoParticleState:
    """``psi + (-1)^{2s} relabel(psi)``, a fixed point of :func:`exchange`."""
    return state + relabel(state) * statistics_sign(state.two_s)


@dataclass
class ExchangeReport:
    two_s: int
    states_tested: int
    sign_observed: int | str
    witness: TwoParticleState | None = None
    witness_image: TwoParticleState | None = None

    @property
    def passed(self) -> bool:
        return self.sign_observed == statistics_sign(self.two_s)

    def to_json(self) -> dict:
        return {
            "two_s": self.two_s,
            "trials": self.states_tested,
            "sign": self.sign_observed,
            "witness": None if self.witness is None else self.witness.to_json(),
        }


def compare_exchange(state: TwoParticleState, image: TwoParticleState) -> set:
    """Ratios ``image[(o', m2, m1)] / state[(o, m1, m2)]`` seen over all keys.

    Returns a subset of ``{1, -1, "mixed"}``; any key where the image is not
    exactly plus or minus the original contributes ``"mixed"``.
    """
    seen = set()
    keys = {(o, idx) for (o, idx), _ in state.items()}
    keys |= {(o.swap(), idx.swapped()) for (o, idx), _ in image.items()}
    for order, idx in keys:
        before = state[(order, idx)]
        after = image[(order.swap(), UncoupledIndex(idx.two_m2, idx.two_m1))]
        if after == before:
            seen.add(1 if before else None)
        elif after == -before:
            seen.add(-1)
        else:
            seen.add("mixed")
    seen.discard(None)
    return seen


def verify_spin_statistics(two_s: int, trials: int = 100, seed: int = 42, table: CgcTable | None = None) -> ExchangeReport:
    """Check ``E psi_{m1,m2}(r1,r2) = (-1)^{2s} psi_{m2,m1}(r2,r1)`` on random states.

    Every amplitude is compared exactly.  Trial ``t`` uses the state seeded
    with ``derive_seed(seed, t)``.
    """
    if trials < 1:
        raise ValueError("trials must be >= 1")
    if table is None:
        table = build_table(two_s)
    observed: set = set()
    for t in range(trials):
        psi = random_state(two_s, derive_seed(seed, t))
        image = exchange(psi, table)
        seen = compare_exchange(psi, image)
        if "mixed" in seen or len(seen) > 1:
            return ExchangeReport(two_s, t + 1, "mixed", psi, image)
        observed |= seen
    if len(observed) != 1:
        # only possible when every trial state was zero
        return ExchangeReport(two_s, trials, "mixed")
    return ExchangeReport(two_s, trials, observed.pop())


REPORT_SCHEMA = {
    "type": "object",
    "required": ["two_s", "trials", "sign", "witness"],
    "properties": {
        "two_s": {"type": "integer", "minimum": 0},
        "trials": {"type": "integer", "minimum": 1},
        "sign": {"enum": [-1, 1, "mixed"]},
        "witness": {"oneOf": [{"type": "null"}, STATE_SCHEMA]},
    },
}
