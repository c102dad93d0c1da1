# -*- coding: utf-8 -*-

"""
Dataset ingestion and synthetic data.

Two file formats are read, the sparse text format with one sample per
line (`label idx:val idx:val ...`, 1-based indices), and dense CSV with
one sample per row and an optional leading `label` column. The format
is picked by file extension, `.csv` is dense and anything else sparse.

Licensed under the MIT License, see LICENSE.
"""

import logging
import math
import os

import numpy as np
import pandas as pd
from scipy import sparse

from .data.dataset import DatasetMatrix
from .errors import DatasetParseError, InvalidArgumentError
from .utils import make_rng

log = logging.getLogger(__name__)

LABEL_COLUMN = 'label'

# Desk-scale subsample limits.
DEFAULT_MAX_N = 5000
DEFAULT_MAX_D = 784


def _parse_sparse_line(line, path, line_number, max_d):
    """
    Parse one sample line.

    :return: The label and the (0-based index, value) pairs below max_d.
    :rtype: tuple
    """
    parts = line.split()
    try:
        label = float(parts[0])
    except ValueError:
        raise DatasetParseError(f'bad label `{parts[0]}`.', path=path, line_number=line_number)

    entries = []
    for token in parts[1:]:
        index, sep, value = token.partition(':')
        if not sep:
            raise DatasetParseError(f'expected idx:val, got `{token}`.',
                                    path=path, line_number=line_number)
        try:
            index = int(index)
            value = float(value)
        except ValueError:
            raise DatasetParseError(f'bad entry `{token}`.', path=path, line_number=line_number)

        if index < 1:
            raise DatasetParseError(f'feature indices are 1-based, got {index}.',
                                    path=path, line_number=line_number)

        if not math.isfinite(value):
            raise DatasetParseError(f'non-finite value in `{token}`.',
                                    path=path, line_number=line_number)

        if max_d is None or index <= max_d:
            entries.append((index - 1, value))

    return label, entries


def _read_sparse_text(path, max_n, max_d):
    labels = []
    rows = []
    cols = []
    values = []
    widest = 0

    with open(path, 'r') as f:
        for line_number, line in enumerate(f, start=1):
            line = line.split('#', 1)[0].strip()
            if not line:
                continue

            if max_n is not None and len(labels) >= max_n:
                break

            label, entries = _parse_sparse_line(line, path, line_number, max_d)
            sample = len(labels)
            labels.append(label)
            for index, value in entries:
                rows.append(index)
                cols.append(sample)
                values.append(value)
                widest = max(widest, index + 1)

            if len(labels) % 10000 == 0:
                log.debug(f'read {len(labels)} samples from {path}')

    if not labels:
        raise InvalidArgumentError(f'{path} holds no samples.')

    d = max_d if max_d is not None else max(widest, 1)
    # duplicate indices on a line are summed by the conversion
    samples = sparse.coo_matrix((values, (rows, cols)), shape=(d, len(labels))).tocsc()

    return DatasetMatrix(samples, np.asarray(labels))


def read_sparse_dataset(path, max_n=None, max_d=None):
    """
    Read a dataset file.

    :param path: The file path, `.csv` files are read as dense CSV.
    :type path: str
    :param max_n: Keep the first max_n samples, None keeps all.
    :type max_n: int | None
    :param max_d: Truncate or zero pad to max_d features, None keeps the widest.
    :type max_d: int | None
    :rtype: DatasetMatrix
    """
    if not os.path.isfile(path):
        raise InvalidArgumentError(f'dataset file `{path}` does not exist.')

    for name, limit in (('max_n', max_n), ('max_d', max_d)):
        if limit is not None and (int(limit) != limit or limit < 1):
            raise InvalidArgumentError(f'{name} must be a positive integer, got {limit}.')

    if path.lower().endswith('.csv'):
        data = read_dense_csv(path, max_n, max_d)
    else:
        data = _read_sparse_text(path, max_n, max_d)

    log.info(f'loaded {data} from {path}')
    return data


def write_dense_csv(matrix, path):
    """
    Write a dataset as dense CSV, one sample per row.

    Values are written with 17 significant digits so they read back exactly.

    :param matrix: The dataset.
    :type matrix: DatasetMatrix
    :param path: The output path.
    :type path: str
    """
    names = matrix.feature_names or [f'x{i + 1}' for i in range(matrix.dimension)]
    frame = pd.DataFrame(matrix.dense().T, columns=names)
    if matrix.labels is not None:
        frame.insert(0, LABEL_COLUMN, matrix.labels)

    frame.to_csv(path, index=False, float_format='%.17g')
    log.debug(f'wrote {matrix} to {path}')


def read_dense_csv(path, max_n=None, max_d=None):
    """
    Read a dense CSV dataset, one sample per row with a header line.

    :param path: The file path.
    :type path: str
    :param max_n: Keep the first max_n samples.
    :type max_n: int | None
    :param max_d: Truncate or zero pad to max_d features.
    :type max_d: int | None
    :rtype: DatasetMatrix
    """
    try:
        frame = pd.read_csv(path, nrows=max_n)
    except pd.errors.EmptyDataError:
        raise InvalidArgumentError(f'{path} holds no samples.')
    except pd.errors.ParserError as e:
        raise DatasetParseError(str(e), path=path)

    if frame.empty:
        raise InvalidArgumentError(f'{path} holds no samples.')

    numeric = frame.apply(pd.to_numeric, errors='coerce')
    bad = np.flatnonzero(~np.isfinite(numeric.to_numpy(dtype=np.float64)).all(axis=1))
    if bad.size:
        # the header is line 1
        raise DatasetParseError('non-numeric or missing value.', path=path, line_number=int(bad[0]) + 2)

    labels = None
    if LABEL_COLUMN in numeric.columns:
        labels = numeric.pop(LABEL_COLUMN).to_numpy(dtype=np.float64)

    samples = numeric.to_numpy(dtype=np.float64).T
    names = [str(c) for c in numeric.columns]

    if max_d is not None:
        if samples.shape[0] > max_d:
            samples = samples[:max_d]
            names = names[:max_d]
        elif samples.shape[0] < max_d:
            pad = max_d - samples.shape[0]
            samples = np.vstack([samples, np.zeros((pad, samples.shape[1]))])
            names = names + [f'pad{i + 1}' for i in range(pad)]

    return DatasetMatrix(samples, labels, names)


def planted_direction(d, sparsity, seed):
    """
    The planted direction generate_synthetic_pca uses for a seed.

    :rtype: numpy.ndarray
    """
    return _planted(make_rng(seed), d, sparsity)


def _planted(rng, d, sparsity):
    support_size = int(math.ceil(sparsity * d))
    direction = np.zeros(d)
    if support_size == 0:
        return direction

    support = np.sort(rng.choice(d, size=support_size, replace=False))
    direction[support] = np.abs(rng.standard_normal(support_size)) + 0.1

    return direction / np.linalg.norm(direction)


def generate_synthetic_pca(d, n, sparsity, seed=None, noise=1.0, signal=3.0):
    """
    Generate samples with a planted sparse non-negative principal direction.

    x_j = signal * s_j * u + noise * e_j, with s_j ~ N(0, 1), e_j ~ N(0, I)
    and u a unit vector with ceil(sparsity * d) positive entries on a
    random support. u is drawn first, so planted_direction() with the
    same seed returns it.

    :param d: The dimension, >= 1.
    :type d: int
    :param n: The number of samples, >= 1.
    :type n: int
    :param sparsity: Fraction of nonzero entries of u, in [0, 1].
    :type sparsity: float
    :param seed: The random seed.
    :type seed: int | None
    :param noise: Standard deviation of the isotropic noise, >= 0.
    :type noise: float
    :param signal: Standard deviation along u, >= 0.
    :type signal: float
    :rtype: DatasetMatrix
    """
    if int(d) != d or d < 1 or int(n) != n or n < 1:
        raise InvalidArgumentError(f'd and n must be positive integers, got d={d}, n={n}.')

    if not 0.0 <= sparsity <= 1.0:
        raise InvalidArgumentError(f'sparsity must lie in [0, 1], got {sparsity}.')

    if noise < 0 or signal < 0:
        raise InvalidArgumentError('noise and signal must be >= 0.')

    d, n = int(d), int(n)
    rng = make_rng(seed)
    direction = _planted(rng, d, sparsity)

    scores = rng.standard_normal(n)
    samples = signal * np.outer(direction, scores)
    if noise > 0:
        samples += noise * rng.standard_normal((d, n))

    log.debug(f'synthetic PCA data d={d}, n={n}, support={np.count_nonzero(direction)}')
    return DatasetMatrix(samples)


def load_dataset(spec, max_n=None, max_d=None):
    """
    Load the data a problem spec names, a file or synthetic samples.

    :param spec: A problem spec with a `dataset` path or `synthetic` params.
    :type spec: sproxlib.config.ProblemSpec
    :param max_n: Subsample limit on the samples.
    :type max_n: int | None
    :param max_d: Subsample limit on the features.
    :type max_d: int | None
    :rtype: DatasetMatrix
    """
    if spec.dataset is not None:
        return read_sparse_dataset(spec.dataset, max_n, max_d)

    syn = spec.synthetic
    d = syn.d if max_d is None else min(syn.d, max_d)
    n = syn.n if max_n is None else min(syn.n, max_n)

    return generate_synthetic_pca(d, n, syn.sparsity, syn.seed, syn.noise, syn.signal)
