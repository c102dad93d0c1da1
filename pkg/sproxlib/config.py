# -*- coding: utf-8 -*-

"""
Benchmark configuration, a JSON file validated with pydantic.

Example:

    {
        "problem": {
            "kind": "pca",
            "synthetic": {"d": 50, "n": 2000, "sparsity": 0.1, "seed": 7},
            "regularizer": {"kind": "mcp", "nu": 1.0}
        },
        "solvers": [
            {"algorithm": "MBSPA", "gradient_budget": 2000000},
            {"algorithm": "VRSPA", "gradient_budget": 2000000},
            {"algorithm": "DeterministicBaseline", "gradient_budget": 2000000}
        ],
        "seeds": [1, 2, 3],
        "output_dir": "results",
        "workers": 2
    }

Licensed under the MIT License, see LICENSE.
"""

import json
import logging
from typing import List, Literal, Optional

from pydantic import BaseModel, ConfigDict, Field, ValidationError, field_validator, model_validator

from .applications import build_fair_classification, build_pca, build_portfolio
from .data.algorithm import Mode
from .data.solver_config import SolverConfig
from .datasets import DEFAULT_MAX_D, DEFAULT_MAX_N
from .errors import ConfigurationError
from .regularizers import DEFAULT_SCAD_NU, build_regularizer
from .solvers import budget_for_gradient_calls

log = logging.getLogger(__name__)


class SyntheticSpec(BaseModel):
    """
    Parameters of the synthetic PCA generator.
    """
    model_config = ConfigDict(extra='forbid')

    d: int = Field(default=50, ge=1)
    n: int = Field(default=2000, ge=1)
    sparsity: float = Field(default=0.1, ge=0.0, le=1.0)
    seed: Optional[int] = Field(default=0, ge=0)
    noise: float = Field(default=1.0, ge=0.0)
    signal: float = Field(default=3.0, ge=0.0)


class RegularizerSpec(BaseModel):
    """
    A regularizer, kappa defaults to 1/d and nu to 1 (MCP) or 3.7 (SCAD).
    """
    model_config = ConfigDict(extra='forbid')

    kind: Literal['mcp', 'scad', 'zero'] = 'mcp'
    kappa: Optional[float] = Field(default=None, gt=0.0)
    nu: Optional[float] = Field(default=None, gt=0.0)

    def build(self, dimension):
        """
        Create the regularizer, bound to a dimension.

        :rtype: sproxlib.regularizers.Regularizer
        """
        if self.kind == 'zero':
            return build_regularizer('zero', dimension)

        kappa = 1.0 / dimension if self.kappa is None else self.kappa
        nu = self.nu
        if nu is None:
            nu = 1.0 if self.kind == 'mcp' else DEFAULT_SCAD_NU

        return build_regularizer(self.kind, dimension, kappa=kappa, nu=nu)


class ProblemSpec(BaseModel):
    """
    The application and where its data comes from.

    Without a dataset path synthetic PCA samples are generated.
    """
    model_config = ConfigDict(extra='forbid')

    kind: Literal['pca', 'fair_classification', 'portfolio'] = 'pca'
    name: Optional[str] = None
    dataset: Optional[str] = None
    synthetic: Optional[SyntheticSpec] = None
    regularizer: Optional[RegularizerSpec] = None

    # first iterate, 0 is stationary for pca so pca defaults to uniform
    start: Optional[Literal['zeros', 'uniform', 'random']] = None
    start_seed: int = Field(default=0, ge=0)

    # pca
    radius: float = Field(default=1.0, gt=0.0)

    # fair_classification, regularizer is g on v and regularizer_z on z
    regularizer_z: Optional[RegularizerSpec] = None
    sensitive_index: int = Field(default=0, ge=0)
    c: float = Field(default=0.1, gt=0.0)

    # portfolio
    psi1: float = Field(default=2.0, gt=0.0)
    psi2: float = Field(default=1.0, gt=0.0)

    @model_validator(mode='after')
    def _check_source(self):
        if self.dataset is not None and self.synthetic is not None:
            raise ValueError('give either `dataset` or `synthetic`, not both.')

        if self.dataset is None:
            if self.kind != 'pca':
                raise ValueError(f'{self.kind} needs a `dataset` file.')
            if self.synthetic is None:
                self.synthetic = SyntheticSpec()

        if self.start is None:
            self.start = 'uniform' if self.kind == 'pca' else 'zeros'

        return self


class SolverSpec(BaseModel):
    """
    One solver of a benchmark, with either an iteration budget
    `budget_N` or a gradient call budget `gradient_budget`.
    """
    model_config = ConfigDict(extra='forbid')

    algorithm: Literal['MBSPA', 'VRSPA', 'VRSPA2', 'DeterministicBaseline']
    budget_N: Optional[int] = Field(default=None, ge=1)
    gradient_budget: Optional[int] = Field(default=None, ge=1)
    theta: Optional[float] = Field(default=None, gt=0.0)
    alpha: Optional[float] = Field(default=None, gt=0.0)
    tau: float = Field(default=0.0, ge=0.0)
    trace_every: int = Field(default=1, ge=1)
    trace_stationarity: bool = False
    debug: bool = False

    @model_validator(mode='after')
    def _check_budget(self):
        if (self.budget_N is None) == (self.gradient_budget is None):
            raise ValueError('give exactly one of `budget_N` and `gradient_budget`.')

        return self

    def to_solver_config(self, seed, component_count=None):
        """
        The Trace mode SolverConfig of one run.

        :param seed: The run seed.
        :type seed: int
        :param component_count: n, needed to turn a gradient budget into N.
        :type component_count: int | None
        :rtype: SolverConfig
        """
        budget_N = self.budget_N
        if budget_N is None:
            budget_N = budget_for_gradient_calls(self.algorithm, self.gradient_budget,
                                                 component_count, self.alpha)

        options = {
            'tau': self.tau,
            'seed': seed,
            'mode': Mode.TRACE,
            'trace_every': self.trace_every,
            'trace_stationarity': self.trace_stationarity,
            'debug': self.debug
        }
        if self.theta is not None:
            options['theta'] = self.theta
        if self.alpha is not None:
            options['alpha'] = self.alpha

        return SolverConfig(self.algorithm, budget_N, **options)


class BenchmarkConfig(BaseModel):
    """
    A benchmark, every solver is run once per seed.
    """
    model_config = ConfigDict(extra='forbid')

    problem: ProblemSpec = Field(default_factory=ProblemSpec)
    solvers: List[SolverSpec] = Field(min_length=1)
    seeds: List[int] = Field(min_length=1)
    output_dir: str = 'results'
    max_n: int = Field(default=DEFAULT_MAX_N, ge=1)
    max_d: int = Field(default=DEFAULT_MAX_D, ge=1)
    workers: int = Field(default=1, ge=1)

    @field_validator('seeds')
    @classmethod
    def _check_seeds(cls, seeds):
        for seed in seeds:
            if not 0 <= seed < 2 ** 64:
                raise ValueError(f'seed {seed} is not a 64-bit unsigned integer.')

        # job names and summary rows are keyed by seed
        if len(set(seeds)) != len(seeds):
            raise ValueError(f'seeds must be distinct, got {seeds}.')

        return seeds


def parse_config(raw):
    """
    Validate a config dictionary.

    :param raw: The decoded JSON.
    :type raw: dict
    :rtype: BenchmarkConfig
    """
    try:
        return BenchmarkConfig.model_validate(raw)
    except ValidationError as e:
        raise ConfigurationError(f'invalid benchmark config: {e}')


def load_config(path):
    """
    Read and validate a JSON config file.

    :param path: The config file path.
    :type path: str
    :rtype: BenchmarkConfig
    """
    try:
        with open(path, 'r') as f:
            raw = json.load(f)
    except OSError as e:
        raise ConfigurationError(f'can not read config `{path}`: {e}')
    except json.JSONDecodeError as e:
        raise ConfigurationError(f'config `{path}` is not valid JSON: {e}')

    config = parse_config(raw)
    log.info(f'loaded config {path}: {len(config.solvers)} solvers, {len(config.seeds)} seeds')

    return config


def build_problem(spec, data):
    """
    Build the problem a spec describes over loaded data.

    :param spec: The problem spec.
    :type spec: ProblemSpec
    :param data: The loaded data.
    :type data: sproxlib.data.DatasetMatrix
    :rtype: sproxlib.problem.CompositeProblem
    """
    name = spec.name or spec.kind

    if spec.kind == 'pca':
        reg = spec.regularizer.build(data.dimension) if spec.regularizer else None
        return build_pca(data, reg, spec.radius, name)

    elif spec.kind == 'portfolio':
        reg = spec.regularizer.build(data.dimension) if spec.regularizer else None
        return build_portfolio(data, spec.psi1, spec.psi2, reg, name=name)

    p = data.dimension - 1
    g1 = spec.regularizer.build(p) if spec.regularizer else None
    g2 = spec.regularizer_z.build(data.count) if spec.regularizer_z else None

    return build_fair_classification(data, None, spec.sensitive_index, spec.c, g1, g2, name)
