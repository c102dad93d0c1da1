# -*- coding: utf-8 -*-

"""
Small helpers shared across sproxlib.

Licensed under the MIT License, see LICENSE.
"""

import math

import numpy as np
from scipy import sparse

from .errors import InvalidArgumentError


def as_vector(w, dimension=None, name='w'):
    """
    Convert input to a 1-D float64 array.

    :param w: The input vector.
    :type w: array_like
    :param dimension: The expected length, or None to accept any length.
    :type dimension: int | None
    :param name: Name used in the error message.
    :type name: str
    :return: A float64 array. A copy is NOT guaranteed.
    :rtype: numpy.ndarray
    """
    vec = np.asarray(w, dtype=np.float64)
    if vec.ndim == 0:
        vec = vec.reshape(1)

    if vec.ndim != 1:
        raise InvalidArgumentError(f'{name} must be a vector, got shape {vec.shape}.')

    if dimension is not None and vec.shape[0] != dimension:
        raise InvalidArgumentError(f'{name} has length {vec.shape[0]}, '
                                   f'expected {dimension}.')
    return vec


def check_positive(value, name):
    """
    Make sure a scalar is strictly positive.

    :param value: The value to check.
    :type value: int | float
    :param name: Name used in the error message.
    :type name: str
    :return: The value as float.
    :rtype: float
    """
    if not value > 0:
        raise InvalidArgumentError(f'{name} must be > 0, got {value}.')

    return float(value)


def ceil_power(base, exponent):
    """
    Integer ceiling of base**exponent.

    NOTE: a power that should land on an integer, such as
    1000**(2/3), can come back a hair above it, which a plain
    math.ceil would push to the next integer.

    :param base: A positive base.
    :type base: int | float
    :param exponent: The exponent.
    :type exponent: float
    :return: ceil(base**exponent)
    :rtype: int
    """
    value = float(base) ** float(exponent)
    nearest = round(value)
    if abs(value - nearest) <= 1e-9 * max(1.0, abs(nearest)):
        return int(nearest)

    return int(math.ceil(value))


def make_rng(seed):
    """
    Create a seeded random stream.

    :param seed: A 64-bit seed, or an existing Generator.
    :type seed: int | numpy.random.Generator | None
    :return: A PCG64 backed generator.
    :rtype: numpy.random.Generator
    """
    if isinstance(seed, np.random.Generator):
        return seed

    return np.random.Generator(np.random.PCG64(seed))


def column_sq_norms(x):
    """
    Squared Euclidean norm of every column of a dense or sparse matrix.

    :param x: A d x n matrix.
    :type x: numpy.ndarray | scipy.sparse.spmatrix
    :return: A length n array.
    :rtype: numpy.ndarray
    """
    if sparse.issparse(x):
        return np.asarray(x.multiply(x).sum(axis=0)).ravel()

    return np.einsum('ij,ij->j', x, x)


def dense_columns(x, indices):
    """
    Select columns as a dense array.

    :param x: A d x n matrix.
    :type x: numpy.ndarray | scipy.sparse.spmatrix
    :param indices: Column indices.
    :type indices: numpy.ndarray
    :return: A dense d x len(indices) array.
    :rtype: numpy.ndarray
    """
    cols = x[:, indices]
    if sparse.issparse(cols):
        return cols.toarray()

    return cols
