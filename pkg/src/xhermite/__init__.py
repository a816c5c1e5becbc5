"""Exact exceptional Hermite connection polynomials, propagators and their checks."""

from .connection import QTable, build_qtable, verify_connection_lemma, verify_parity, verify_sum_rule
from .errors import (
    ArityMismatch,
    InvalidSequence,
    IrrationalScaleMismatch,
    LambdaTooLarge,
    MissingVariable,
    NearPole,
    NonSquare,
    NotKreinAdler,
    SingularTime,
    TruncationTooSmall,
    WronskianZero,
    XHermiteError,
)
from .exactalg import PolyMatrix, ScaledPoly, det, det_bareiss, det_cofactor, to_text
from .hermite import hermite, normalized_hermite_pair, rescaled_hermite, umbral_compose
from .propagator import (
    PotentialModel,
    PropagatorModel,
    closed_form_propagator,
    green_function,
    k_osc,
    k_sigma,
    potential,
)
from .report import VerificationReport
from .verify import VerifyConfig, run_all, verify_mehler, verify_xmehler
from .wronskian import LevelSequence, wronskian, xhermite_pair, xhermite_wronskian

__version__ = "0.1.0"
