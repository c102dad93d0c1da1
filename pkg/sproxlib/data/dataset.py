# -*- coding: utf-8 -*-

"""
Licensed under the MIT License, see LICENSE.
"""

import numpy as np
from scipy import sparse

from ..errors import InvalidArgumentError


class DatasetMatrix(object):
    """
    A d x n sample matrix, columns are samples.
    """
    def __init__(self, samples, labels=None, feature_names=None):
        """
        Initialize and validate the dataset.

        :param samples: The d x n sample matrix.
        :type samples: numpy.ndarray | scipy.sparse.spmatrix
        :param labels: Optional labels, one per sample.
        :type labels: numpy.ndarray | None
        :param feature_names: Optional names, one per feature.
        :type feature_names: list | None
        """
        if sparse.issparse(samples):
            samples = sparse.csc_matrix(samples, dtype=np.float64)
            values = samples.data
        else:
            samples = np.asarray(samples, dtype=np.float64)
            values = samples

        if samples.ndim != 2:
            raise InvalidArgumentError(f'samples must be a matrix, got shape {samples.shape}.')

        if not np.all(np.isfinite(values)):
            raise InvalidArgumentError('samples contain NaN or Inf entries.')

        if labels is not None:
            labels = np.asarray(labels, dtype=np.float64).ravel()
            if labels.shape[0] != samples.shape[1]:
                raise InvalidArgumentError(f'{labels.shape[0]} labels for '
                                           f'{samples.shape[1]} samples.')
            if not np.all(np.isfinite(labels)):
                raise InvalidArgumentError('labels contain NaN or Inf entries.')

        if feature_names is not None:
            feature_names = list(feature_names)
            if len(feature_names) != samples.shape[0]:
                raise InvalidArgumentError(f'{len(feature_names)} feature names for '
                                           f'{samples.shape[0]} features.')

        self._samples = samples
        self._labels = labels
        self._feature_names = feature_names

    @property
    def samples(self):
        """
        The d x n sample matrix.

        :rtype: numpy.ndarray | scipy.sparse.csc_matrix
        """
        return self._samples

    @property
    def labels(self):
        return self._labels

    @property
    def feature_names(self):
        return self._feature_names

    @property
    def dimension(self):
        """
        Number of features d.

        :rtype: int
        """
        return self._samples.shape[0]

    @property
    def count(self):
        """
        Number of samples n.

        :rtype: int
        """
        return self._samples.shape[1]

    @property
    def is_sparse(self):
        return sparse.issparse(self._samples)

    def dense(self):
        """
        The sample matrix as a dense array.

        :rtype: numpy.ndarray
        """
        if self.is_sparse:
            return self._samples.toarray()

        return self._samples

    def __repr__(self):
        kind = 'sparse' if self.is_sparse else 'dense'
        return f'DatasetMatrix({kind}, d={self.dimension}, n={self.count})'
