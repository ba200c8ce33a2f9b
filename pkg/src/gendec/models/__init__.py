"""Five classical binary classifiers implemented natively."""

from enum import Enum

from .common import as_csr, ints_to_labels, labels_to_ints
from .forest import ForestModel, train_forest
from .logistic import LRModel, loss_and_gradient, train_logistic
from .naive_bayes import NBModel, train_naive_bayes
from .predict import TrainedModel, predict, predict_proba, supports_proba
from .svm import SVMModel, hinge_loss, train_svm
from .tree import TreeModel, train_tree


class ModelKind(str, Enum):
    """Classifier families, in canonical report order."""

    NB = "nb"
    LR = "lr"
    DT = "dt"
    RF = "rf"
    SVM = "svm"


__all__ = [
    "ModelKind",
    "NBModel",
    "LRModel",
    "TreeModel",
    "ForestModel",
    "SVMModel",
    "TrainedModel",
    "train_naive_bayes",
    "train_logistic",
    "train_tree",
    "train_forest",
    "train_svm",
    "predict",
    "predict_proba",
    "supports_proba",
    "loss_and_gradient",
    "hinge_loss",
    "labels_to_ints",
    "ints_to_labels",
    "as_csr",
]
