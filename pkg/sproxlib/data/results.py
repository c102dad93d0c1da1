# -*- coding: utf-8 -*-

"""
Licensed under the MIT License, see LICENSE.
"""

import numpy as np


class ProxResult(object):
    """
    The result of a regularizer proximal operation.
    """
    def __init__(self, zeta, envelope_value):
        """
        :param zeta: The prox point.
        :type zeta: numpy.ndarray
        :param envelope_value: The Moreau envelope value at the input.
        :type envelope_value: float
        """
        self._zeta = zeta
        self._envelope_value = float(envelope_value)

    @property
    def zeta(self):
        """
        A minimizer of ||w - x||^2/(2 lambda) + g(x).

        :rtype: numpy.ndarray
        """
        return self._zeta

    @property
    def envelope_value(self):
        """
        The Moreau envelope of g at the input point.

        :rtype: float
        """
        return self._envelope_value

    def __iter__(self):
        # allows `zeta, env = prox(...)`
        yield self._zeta
        yield self._envelope_value


class IterationTrace(object):
    """
    One traced iteration of a solver run.
    """
    FIELDS = ('iter', 'grad_calls', 'prox_calls', 'phi', 'stationarity', 'elapsed_s')

    def __init__(self, iteration, gradient_calls, prox_calls, phi,
                 stationarity=None, elapsed_seconds=0.0):
        self.iteration = int(iteration)
        self.gradient_calls = int(gradient_calls)
        self.prox_calls = int(prox_calls)
        self.phi = float(phi)
        self.stationarity = None if stationarity is None else float(stationarity)
        self.elapsed_seconds = float(elapsed_seconds)

    def as_row(self):
        """
        The trace as a CSV row, in the column order of FIELDS.

        :rtype: tuple
        """
        stationarity = np.nan if self.stationarity is None else self.stationarity
        return (self.iteration, self.gradient_calls, self.prox_calls,
                self.phi, stationarity, self.elapsed_seconds)

    def __repr__(self):
        return (f'IterationTrace(iter={self.iteration}, '
                f'grad_calls={self.gradient_calls}, phi={self.phi})')


class RunReport(object):
    """
    Everything a solver run produced.
    """
    def __init__(self, algorithm, theory_output, final_iterate, counters, **kwargs):
        """
        Initialize the report.

        :param algorithm: The algorithm name.
        :type algorithm: str
        :param theory_output: The prox point at the randomly drawn iterate.
        :type theory_output: numpy.ndarray
        :param final_iterate: The last iterate of the run.
        :type final_iterate: numpy.ndarray
        :param counters: The run counters.
        :type counters: OpCounters

        :keyword trace: The traced iterations.
        :type trace: list

        :keyword stationarity: Stationarity measure at the theory output.
        :type stationarity: float | None

        :keyword schedule: The schedule the run used.
        :type schedule: sproxlib.solvers.Schedule

        :keyword output_index: The drawn (R, T), T is None for MBSPA.
        :type output_index: tuple

        :keyword final_phi: Objective at the final iterate.
        :type final_phi: float | None
        """
        self.algorithm = algorithm
        self.theory_output = theory_output
        self.final_iterate = final_iterate
        self.counters = counters
        self.trace = kwargs.get('trace', [])
        self.stationarity = kwargs.get('stationarity')
        self.schedule = kwargs.get('schedule')
        self.output_index = kwargs.get('output_index', (None, None))
        self.final_phi = kwargs.get('final_phi')

    @property
    def theory_nonzeros(self):
        """
        The number of nonzero entries of the theory output.

        :rtype: int
        """
        return int(np.count_nonzero(self.theory_output))

    def __repr__(self):
        return (f'RunReport({self.algorithm}, '
                f'{self.counters}, final_phi={self.final_phi})')
