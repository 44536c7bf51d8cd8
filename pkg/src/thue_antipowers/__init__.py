"""Antipowers in prefixes of the Thue-Morse word."""

from .antipower import (
    AntipowerVerdict,
    BlockRef,
    ShiftCriterionQuery,
    ap_membership,
    blocks_equal,
    is_antipower_word,
    matching_pair_congruence_check,
    tm_blocks_equal_direct,
    tm_blocks_equal_shift,
    tm_prefix_is_antipower,
)
from .errors import CapExceededError, InfeasibleParametersError, ParityError, ResourceLimitError
from .extremal import ExtremalRecord, big_gamma, complement_set, extremal, gamma
from .kappa import KappaRecord, kappa, kappa_lower_bound
from .tm_core import FiniteWord, generalized_letter, tm_equiv, tm_factor, tm_letter, tm_prefix

__version__ = "0.1.0"
