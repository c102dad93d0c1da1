"""
Stochastic Proximal Algorithms Package.
"""

__title__ = 'sproxlib'
__version__ = '0.1.0'

from .data import Algorithm, Mode, OpCounters, SolverConfig
from .problem import CompositeProblem, FiniteSumOracle, StochasticOracle, SmoothnessInfo
from .regularizers import Mcp, Scad, ZeroRegularizer, BlockComposite, prox, moreau_envelope
from .projections import FreeSet, Simplex, HalfspacePair, NonnegBall, project
from .solvers import solve, run_mbspa, run_vrspa, run_baseline, schedule
from .applications import build_pca, build_fair_classification, build_portfolio, build_quadratic
from .console import Color
from .errors import SproxError
