"""Exact two-spin angular momentum algebra and the spin-statistics sign."""

from .cgc_engine import (
    CgcTable,
    HighestWeightCoeffs,
    Verdict,
    build_table,
    cgc,
    highest_weight_coeffs,
    racah_oracle,
    ratio_factor,
)
from .exact_number import (
    HalfInt,
    IncommensurableRadicals,
    ParseError,
    RadicalSum,
    SignedSqrtRational,
    format_value,
    parse,
)
from .exchange_ops import ExchangeReport, exchange, parity, spin_swap, verify_spin_statistics
from .rotations import (
    EulerRotation,
    WignerDMatrix,
    d_matrix,
    d_matrix_pi,
    exchange_by_rotation_opposite_spin,
    exchange_by_rotation_same_spin,
    singlet_rotation_invariance,
)
from .spin_space import (
    CoupledIndex,
    CoupledState,
    IndexOutOfRange,
    OrbitalOrder,
    SpinPair,
    TwoParticleState,
    UncoupledIndex,
    random_state,
    to_coupled,
    to_uncoupled,
)

__version__ = "0.1.0"
