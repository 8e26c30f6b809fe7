"""Exact-rational tools for random assignment of indivisible objects
under ordinal preferences: stochastic-dominance comparisons, efficiency
decision procedures with certificates, serial-dictatorship-family
mechanisms (including hierarchies of monarchies and diarchies), axiom
verification, Birkhoff-von Neumann decomposition, and welfare analysis.
"""

from .core import (
    Allocation,
    Preference,
    Profile,
    apply_object_permutation,
    enumerate_profiles,
    profile_of,
    validate_allocation,
)
from .sd import SdComparison, compare_sd, cumulative_prefix
from .efficiency import (
    Certified,
    Dominated,
    Efficient,
    Improvement,
    InefficiencyCertificate,
    ShiftProfile,
    VnmUtility,
    falsifying_utilities,
    is_ambiguously_efficient,
    is_pareto_efficient_at,
    is_unambiguously_efficient,
)
from .mechanisms import (
    Diarchy,
    History,
    HistorySignature,
    Monarchy,
    hmd_run,
    is_adjacent_k_set,
    make_adjacent_k_set,
    rsd,
    serial_dictatorship,
    uniform_rsd,
)
from .bvn import Decomposition, decompose, recompose
from .welfare import SymmetryCostReport, exchange_rate, symmetry_cost

__version__ = "0.1.0"
