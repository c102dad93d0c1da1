# -*- coding: utf-8 -*-

"""
Licensed under the MIT License, see LICENSE.
"""


class OpCounters(object):
    """
    Gradient call and proximal operation counters for a single run.

    Counters only go up while a run is in progress. A solver owns
    its counters; nothing here is shared between runs.
    """
    def __init__(self):
        self._gradient_calls = 0
        self._raw_gradient_evaluations = 0
        self._prox_g_calls = 0
        self._prox_h_calls = 0

    def add_gradient_calls(self, count, raw=None):
        """
        Count gradient calls.

        :param count: Gradient calls as the complexity analysis counts them.
        :type count: int
        :param raw: Component gradient evaluations actually performed,
        defaults to count.
        :type raw: int | None
        """
        if count < 0 or (raw is not None and raw < 0):
            raise ValueError('counters can not decrease.')

        self._gradient_calls += int(count)
        self._raw_gradient_evaluations += int(count if raw is None else raw)

    def add_raw_evaluations(self, count):
        """
        Count component gradient evaluations that are not gradient calls.

        :param count: The number of extra evaluations.
        :type count: int
        """
        if count < 0:
            raise ValueError('counters can not decrease.')

        self._raw_gradient_evaluations += int(count)

    def add_prox_g(self):
        self._prox_g_calls += 1

    def add_prox_h(self):
        self._prox_h_calls += 1

    def reset(self):
        """
        Reset all counters. Only call this between runs.
        """
        self.__init__()

    @property
    def gradient_calls(self):
        """
        Gradient calls, a pair of snapshot corrected
        component gradients counting as one.

        :rtype: int
        """
        return self._gradient_calls

    @property
    def raw_gradient_evaluations(self):
        """
        Component gradient evaluations actually performed.

        :rtype: int
        """
        return self._raw_gradient_evaluations

    @property
    def prox_g_calls(self):
        """
        Proximal operations of the regularizer.

        :rtype: int
        """
        return self._prox_g_calls

    @property
    def prox_h_calls(self):
        """
        Projections onto the constraint set.

        :rtype: int
        """
        return self._prox_h_calls

    @property
    def prox_calls(self):
        """
        All proximal operations.

        :rtype: int
        """
        return self._prox_g_calls + self._prox_h_calls

    def as_dict(self):
        """
        The counters as a dictionary.

        :rtype: dict
        """
        return {
            'gradient_calls': self._gradient_calls,
            'raw_gradient_evaluations': self._raw_gradient_evaluations,
            'prox_g_calls': self._prox_g_calls,
            'prox_h_calls': self._prox_h_calls
        }

    def __repr__(self):
        return f'OpCounters({self.as_dict()})'
