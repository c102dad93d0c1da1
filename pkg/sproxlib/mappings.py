# -*- coding: utf-8 -*-

"""
Gradient mappings, the smooth majorizer of f + e_{lambda} g, and the
stationarity measure reported by the solvers.

Given the anchor w_k and zeta = prox_{lambda g}(w_k), the majorizer is

    E(w) = f(w) + ||w||^2/(2 lambda) - (D(w_k) + zeta'(w - w_k)/lambda)
    D(w_k) = w_k' zeta / lambda - ||zeta||^2/(2 lambda) - g(zeta)

with gradient grad f(w) + (w - zeta)/lambda. It touches f + e_{lambda} g
at w_k and lies above it everywhere else.

Licensed under the MIT License, see LICENSE.
"""

import logging

import numpy as np

from .projections import FreeSet, project
from .regularizers import prox
from .utils import as_vector, check_positive

log = logging.getLogger(__name__)


def gradient_mapping(constraint, gamma, w, s, counters=None):
    """
    P_gamma(w, s) = (w - prox_{gamma h}(w - gamma s)) / gamma.

    :param constraint: The constraint set of h.
    :type constraint: sproxlib.projections.Constraint
    :param gamma: gamma > 0
    :type gamma: float
    :param w: The point.
    :type w: array_like
    :param s: The (sub)gradient.
    :type s: array_like
    :param counters: The projection is counted as one prox_h operation.
    :type counters: OpCounters | None
    :rtype: numpy.ndarray
    """
    gamma = check_positive(gamma, 'gamma')
    w = as_vector(w, constraint.dimension)
    s = as_vector(s, w.shape[0], 's')

    if isinstance(constraint, FreeSet):
        return s.copy()

    return (w - project(constraint, w - gamma * s, counters)) / gamma


class MajorizerState(object):
    """
    The anchor of the majorizer E^k_lambda.
    """
    def __init__(self, anchor, zeta, lam, d_value):
        """
        :param anchor: The iterate w_k.
        :type anchor: numpy.ndarray
        :param zeta: prox_{lambda g}(w_k)
        :type zeta: numpy.ndarray
        :param lam: lambda
        :type lam: float
        :param d_value: D^lambda(w_k)
        :type d_value: float
        """
        self._anchor = anchor
        self._zeta = zeta
        self._lam = check_positive(lam, 'lambda')
        self._d_value = float(d_value)

    @classmethod
    def at(cls, regularizer, lam, anchor, counters=None):
        """
        Build the state anchored at a point.

        The supremum defining D is attained at zeta, so
        it is evaluated there.

        :param regularizer: g
        :type regularizer: sproxlib.regularizers.Regularizer
        :param lam: lambda > 0
        :type lam: float
        :param anchor: w_k
        :type anchor: array_like
        :param counters: The prox is counted as one prox_g operation.
        :type counters: OpCounters | None
        :rtype: MajorizerState
        """
        anchor = as_vector(anchor, regularizer.dimension)
        zeta = prox(regularizer, lam, anchor, counters).zeta
        d_value = (float(anchor @ zeta) / lam - float(zeta @ zeta) / (2.0 * lam)
                   - regularizer.value(zeta))

        return cls(anchor, zeta, lam, d_value)

    @property
    def anchor(self):
        return self._anchor

    @property
    def zeta(self):
        return self._zeta

    @property
    def lam(self):
        return self._lam

    @property
    def d_value(self):
        return self._d_value


def majorizer_gradient(state, grad_f, w):
    """
    grad E(w) = grad f(w) + (w - zeta)/lambda.

    :param state: The majorizer anchor.
    :type state: MajorizerState
    :param grad_f: grad f(w), or an estimate of it.
    :type grad_f: array_like
    :param w: The point.
    :type w: array_like
    :rtype: numpy.ndarray
    """
    d = state.zeta.shape[0]
    w = as_vector(w, d)

    return as_vector(grad_f, d, 'grad_f') + (w - state.zeta) / state.lam


def eval_majorizer(state, f_value, w):
    """
    E(w) = f(w) + U(w).

    :param state: The majorizer anchor.
    :type state: MajorizerState
    :param f_value: f(w)
    :type f_value: float
    :param w: The point.
    :type w: array_like
    :rtype: float
    """
    w = as_vector(w, state.zeta.shape[0])
    lam = state.lam
    upper = float(w @ w) / (2.0 * lam) - (state.d_value + float(state.zeta @ (w - state.anchor)) / lam)

    return float(f_value) + upper


def stationarity_measure(problem, w_anchor, lam, gamma_bar, counters=None):
    """
    ||P_gamma_bar(w_bar, s)|| at w_bar = prox_{lambda g}(w_anchor).

    s = grad f(w_bar) + (w_anchor - w_bar)/lambda is one element of
    grad f(w_bar) + dg(w_bar), so the result bounds dist(0, G(w_bar)).
    Diagnostic only, nothing is counted unless counters are given.

    :param problem: The problem.
    :type problem: sproxlib.problem.CompositeProblem
    :param w_anchor: The point the prox is taken at.
    :type w_anchor: array_like
    :param lam: lambda > 0
    :type lam: float
    :param gamma_bar: gamma_bar > 0
    :type gamma_bar: float
    :param counters: Optional counters.
    :type counters: OpCounters | None
    :rtype: float
    """
    lam = check_positive(lam, 'lambda')
    gamma_bar = check_positive(gamma_bar, 'gamma_bar')
    w_anchor = as_vector(w_anchor, problem.dimension)

    w_bar = prox(problem.regularizer, lam, w_anchor, counters).zeta
    s = problem.smooth.full_gradient(w_bar, counters) + (w_anchor - w_bar) / lam
    mapping = gradient_mapping(problem.constraint, gamma_bar, w_bar, s, counters)

    return float(np.linalg.norm(mapping))
