"""Integral BNS invariants of deficiency-1 presentations and random few-relator groups."""

__version__ = "0.1.0"

from .characters import Character, character_lattice, evaluate, normalize
from .fox import GroupRingElement, fox_derivative, grade, leading_unit_test, structural_verify
from .presentation import (
    Presentation,
    abelianization_matrix,
    first_betti,
    parse_presentation,
    small_cancellation_check,
)
from .sections import Status, classify, cycle_walk, lower_section, upper_section
from .sigma import Membership, decide, symmetry_report
from .transform import insert_commutators, remove_commutators
from .words import CyclicWord, Word, conjugacy_length, cyclic_reduce, free_reduce, parse_word
