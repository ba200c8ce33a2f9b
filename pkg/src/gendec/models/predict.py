"""Prediction interface shared by all five classifier kinds.

Every tie breaks female-first (the canonical gender order), and
``predict`` always equals the argmax of ``predict_proba`` where the
latter exists.  SVM models expose no probabilities.
"""

from __future__ import annotations

from typing import Union

import numpy as np

from ..errors import UnsupportedModelError
from ..name_core import Gender
from .common import MatrixLike, ints_to_labels
from .forest import ForestModel, forest_predict_ints, forest_predict_proba
from .logistic import LRModel, lr_predict_ints, lr_predict_proba
from .naive_bayes import NBModel, nb_predict_ints, nb_predict_proba
from .svm import SVMModel, svm_predict_ints
from .tree import TreeModel, tree_predict_ints, tree_predict_proba

TrainedModel = Union[NBModel, LRModel, TreeModel, ForestModel, SVMModel]


def predict(model: TrainedModel, X: MatrixLike) -> list[Gender]:
    if isinstance(model, NBModel):
        ints = nb_predict_ints(model, X)
    elif isinstance(model, LRModel):
        ints = lr_predict_ints(model, X)
    elif isinstance(model, TreeModel):
        ints = tree_predict_ints(model, X)
    elif isinstance(model, ForestModel):
        ints = forest_predict_ints(model, X)
    elif isinstance(model, SVMModel):
        ints = svm_predict_ints(model, X)
    else:
        raise UnsupportedModelError(f"unknown model type {type(model).__name__}")
    return ints_to_labels(ints)


def predict_proba(model: TrainedModel, X: MatrixLike) -> np.ndarray:
    """Per-row (P(female), P(male)); rows sum to 1."""
    if isinstance(model, NBModel):
        return nb_predict_proba(model, X)
    if isinstance(model, LRModel):
        return lr_predict_proba(model, X)
    if isinstance(model, TreeModel):
        return tree_predict_proba(model, X)
    if isinstance(model, ForestModel):
        return forest_predict_proba(model, X)
    raise UnsupportedModelError(
        f"{type(model).__name__} does not provide class probabilities"
    )


def supports_proba(model: TrainedModel) -> bool:
    return not isinstance(model, SVMModel)
