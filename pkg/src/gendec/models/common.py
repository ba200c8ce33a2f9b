"""Shared label and matrix plumbing for the classifier implementations."""

from __future__ import annotations

from typing import Sequence, Union

import numpy as np
import scipy.sparse as sp

from ..errors import DimensionMismatchError, LabelError
from ..name_core import GENDERS, Gender
from ..vectorize import FeatureMatrix

MatrixLike = Union[FeatureMatrix, sp.csr_matrix]


def as_csr(X: MatrixLike) -> sp.csr_matrix:
    matrix = X.matrix if isinstance(X, FeatureMatrix) else X
    return sp.csr_matrix(matrix, dtype=np.float64)


def labels_to_ints(y: Sequence[Gender]) -> np.ndarray:
    """Encode labels as int8: female -> 0, male -> 1."""
    out = np.empty(len(y), dtype=np.int8)
    for i, label in enumerate(y):
        if label is Gender.FEMALE:
            out[i] = 0
        elif label is Gender.MALE:
            out[i] = 1
        else:
            raise LabelError(f"labels must be Gender values, got {label!r}")
    return out


def ints_to_labels(values: np.ndarray) -> list[Gender]:
    return [GENDERS[int(v)] for v in values]


def check_n_features(model_features: int, X: sp.csr_matrix) -> None:
    if X.shape[1] != model_features:
        raise DimensionMismatchError(
            f"matrix has {X.shape[1]} columns, model expects {model_features}"
        )
