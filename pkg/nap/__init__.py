"""
Exact non-Archimedean probability on fair and weighted lotteries over the
naturals, the rationals, the reals and infinite coin tosses
"""

from .engine import (
    ArchValue,
    AxiomReport,
    NAPSpace,
    ProbabilityValue,
    ValueKind,
    arch_probability,
    asymptotic_density,
    axiom_report,
    conditional,
    conditional_given_finite,
    epsilon0,
    infinite_sum,
    numerosity,
    point_probability,
    probability,
)
from .errors import NAPError
from .eventual import DirectedFamily, LimitResult, QuasiPolynomial, limit
from .events import SpaceKind, WeightFn
from .hyperreal import ALPHA, GAMMA, ONE, TAU, ZERO, HyperReal

__version__ = '1.0.0'

__all__ = [
    'ALPHA', 'ArchValue', 'AxiomReport', 'DirectedFamily', 'GAMMA', 'HyperReal', 'LimitResult', 'NAPError',
    'NAPSpace', 'ONE', 'ProbabilityValue', 'QuasiPolynomial', 'SpaceKind', 'TAU', 'ValueKind', 'WeightFn',
    'ZERO', 'arch_probability', 'asymptotic_density', 'axiom_report', 'conditional',
    'conditional_given_finite', 'epsilon0', 'infinite_sum', 'limit', 'numerosity', 'point_probability',
    'probability',
]
