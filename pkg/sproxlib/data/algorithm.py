# -*- coding: utf-8 -*-

"""
Licensed under the MIT License, see LICENSE.
"""


class Algorithm:
    """
    Algorithm names understood by the solvers.
    """
    # Mini-batch stochastic proximal algorithm.
    MBSPA = 'MBSPA'

    # Variance reduced stochastic proximal algorithm, gamma = 1/(6 L_lambda).
    VRSPA = 'VRSPA'

    # VRSPA using the MBSPA stepsize gamma = 1/L_lambda.
    VRSPA2 = 'VRSPA2'

    # Full gradient proximal iteration on the majorizer.
    BASELINE = 'DeterministicBaseline'

    ALL = (MBSPA, VRSPA, VRSPA2, BASELINE)

    # These need a finite-sum oracle.
    FINITE_SUM = (VRSPA, VRSPA2, BASELINE)


class Mode:
    """
    Output modes of a solver run.
    """
    # Stop at a uniformly drawn iteration, as the convergence analysis does.
    THEORY = 'Theory'

    # Run the whole budget and record a trace.
    TRACE = 'Trace'

    ALL = (THEORY, TRACE)
