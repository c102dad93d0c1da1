# -*- coding: utf-8 -*-

"""
Plain record classes shared by the solvers and the benchmark harness.

Licensed under the MIT License, see LICENSE.
"""

from .algorithm import Algorithm, Mode
from .counters import OpCounters
from .dataset import DatasetMatrix
from .results import ProxResult, IterationTrace, RunReport
from .solver_config import SolverConfig
