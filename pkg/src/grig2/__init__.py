"""Grigorchuk groups G_omega, the universal group Gr2, and entropy of induced random walks."""

from .action import OmegaPrefix, evaluate, find_move, is_trivial_gw
from .algebra import GroupMeasure, MeasureMatrix, convolve, entropy
from .universal import UNIVERSAL, GroupSpec, ball, is_trivial_universal, witness_omega
from .words import Word, parse, reduce

__version__ = "0.1.0"
