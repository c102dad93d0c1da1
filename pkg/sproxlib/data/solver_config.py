# -*- coding: utf-8 -*-

"""
Licensed under the MIT License, see LICENSE.
"""

from ..errors import ConfigurationError
from .algorithm import Algorithm, Mode

# Default exponents of the two schedules.
DEFAULT_THETA = 1.0 / 3.0
DEFAULT_ALPHA_MBSPA = 2.0 / 3.0
DEFAULT_ALPHA_VRSPA = 1.0 / 3.0

# Largest d*n for which VRSPA keeps the snapshot component gradients.
SNAPSHOT_CACHE_LIMIT = 5_000_000


class SolverConfig(object):
    """
    Algorithm selection, schedule exponents, budget and output mode.

    The config takes the following optional keyword arguments.

    :keyword theta: Exponent of lambda, defaults to 1/3.
    :type theta: float

    :keyword alpha: Exponent of the mini-batch or epoch size, defaults to
    2/3 for MBSPA and the baseline, 1/3 for VRSPA and VRSPA2.
    :type alpha: float

    :keyword tau: Exponent of gamma_bar = N**-tau, defaults to 0.
    :type tau: float

    :keyword seed: Seed of the run's random stream.
    :type seed: int | None

    :keyword mode: Mode.THEORY or Mode.TRACE
    :type mode: str

    :keyword trace_every: Record every this many iterations.
    :type trace_every: int

    :keyword trace_stationarity: Fill the stationarity column of the trace.
    :type trace_stationarity: bool

    :keyword debug: Check the mapping identity and feasibility every step.
    :type debug: bool

    :keyword snapshot_cache_limit: Largest d*n for which VRSPA caches
    the snapshot component gradients.
    :type snapshot_cache_limit: int
    """
    def __init__(self, algorithm, budget_N, **options):
        """
        Initialize and validate the config.

        :param algorithm: One of Algorithm.ALL
        :type algorithm: str
        :param budget_N: The iteration budget N.
        :type budget_N: int
        """
        if algorithm not in Algorithm.ALL:
            raise ConfigurationError(f'unknown algorithm `{algorithm}`, '
                                     f'expected one of {Algorithm.ALL}.')

        if isinstance(budget_N, bool) or int(budget_N) != budget_N or budget_N < 1:
            raise ConfigurationError(f'budget_N must be a positive integer, got {budget_N}.')

        self._algorithm = algorithm
        self._budget_N = int(budget_N)

        default_alpha = DEFAULT_ALPHA_MBSPA
        if algorithm in (Algorithm.VRSPA, Algorithm.VRSPA2):
            default_alpha = DEFAULT_ALPHA_VRSPA

        self._theta = float(options.get('theta', DEFAULT_THETA))
        self._alpha = float(options.get('alpha', default_alpha))
        self._tau = float(options.get('tau', 0.0))
        self._seed = options.get('seed')
        self._mode = options.get('mode', Mode.TRACE)
        self._trace_every = options.get('trace_every', 1)
        self._trace_stationarity = bool(options.get('trace_stationarity', False))
        self._debug = bool(options.get('debug', False))
        self._snapshot_cache_limit = int(options.get('snapshot_cache_limit',
                                                     SNAPSHOT_CACHE_LIMIT))

        if self._tau > self._theta:
            raise ConfigurationError(f'tau ({self._tau}) must be <= theta ({self._theta}).')

        if self._mode not in Mode.ALL:
            raise ConfigurationError(f'unknown mode `{self._mode}`.')

        if int(self._trace_every) != self._trace_every or self._trace_every < 1:
            raise ConfigurationError(f'trace_every must be a positive integer, '
                                     f'got {self._trace_every}.')
        self._trace_every = int(self._trace_every)

    def replace(self, **changes):
        """
        A copy of the config with some fields changed.

        :return: A new config.
        :rtype: SolverConfig
        """
        fields = self.as_dict()
        fields.update(changes)
        algorithm = fields.pop('algorithm')
        budget_N = fields.pop('budget_N')

        return SolverConfig(algorithm, budget_N, **fields)

    def as_dict(self):
        """
        The config fields as a dictionary.

        :rtype: dict
        """
        return {
            'algorithm': self._algorithm,
            'budget_N': self._budget_N,
            'theta': self._theta,
            'alpha': self._alpha,
            'tau': self._tau,
            'seed': self._seed,
            'mode': self._mode,
            'trace_every': self._trace_every,
            'trace_stationarity': self._trace_stationarity,
            'debug': self._debug,
            'snapshot_cache_limit': self._snapshot_cache_limit
        }

    @property
    def algorithm(self):
        return self._algorithm

    @property
    def budget_N(self):
        return self._budget_N

    @property
    def theta(self):
        return self._theta

    @property
    def alpha(self):
        return self._alpha

    @property
    def tau(self):
        return self._tau

    @property
    def seed(self):
        return self._seed

    @property
    def mode(self):
        return self._mode

    @property
    def trace_every(self):
        return self._trace_every

    @property
    def trace_stationarity(self):
        return self._trace_stationarity

    @property
    def debug(self):
        return self._debug

    @property
    def snapshot_cache_limit(self):
        return self._snapshot_cache_limit

    @property
    def gamma_bar(self):
        """
        The stationarity stepsize N**-tau.

        :rtype: float
        """
        return float(self._budget_N) ** (-self._tau)

    def __repr__(self):
        return f'SolverConfig({self.as_dict()})'
