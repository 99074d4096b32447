"""From-scratch genre classifiers over count vectors and token sequences."""

from .common import (
    MLP_DEFAULT_CONFIG,
    N_GENRES,
    TrainConfig,
    learning_rate_schedule,
    one_hot,
    predict_genre,
    predict_genres,
    softmax,
)
from .forest import ForestModel, predict_proba_forest, train_forest
from .io import (
    KIND_NAMES,
    load_model,
    model_kind,
    save_model,
)
from .linear import (
    OVR_HINGE,
    SOFTMAX_REGRESSION,
    LinearModel,
    ce_loss_and_grad,
    decision_scores,
    hinge_loss_and_grad,
    predict_proba_linear,
    train_logreg,
    train_svm,
)
from .mlp import (
    MlpModel,
    init_mlp,
    loss_and_grads,
    predict_proba_mlp,
    train_mlp,
)
from .naive_bayes import NaiveBayesModel, predict_proba_nb, train_nb

MODEL_KINDS = ("nb", "logreg", "svm", "mlp", "forest")


def predict_proba(model, features):
    """Dispatch probability prediction on the model type.

    `features` is a dense count matrix for the classical models and an id
    sequence matrix for the MLP.
    """
    if isinstance(model, NaiveBayesModel):
        return predict_proba_nb(model, features)
    if isinstance(model, LinearModel):
        return predict_proba_linear(model, features)
    if isinstance(model, MlpModel):
        return predict_proba_mlp(model, features)
    if isinstance(model, ForestModel):
        return predict_proba_forest(model, features)
    raise TypeError(f"cannot predict with {type(model).__name__}")


def emits_calibrated_probabilities(model) -> bool:
    """False for margin-based models whose softmax scores are
    calibration-free (the hinge SVM); True for the probabilistic ones."""
    return not (isinstance(model, LinearModel) and model.kind == OVR_HINGE)


__all__ = [
    "MLP_DEFAULT_CONFIG",
    "MODEL_KINDS",
    "N_GENRES",
    "TrainConfig",
    "ForestModel",
    "LinearModel",
    "MlpModel",
    "NaiveBayesModel",
    "OVR_HINGE",
    "SOFTMAX_REGRESSION",
    "KIND_NAMES",
    "ce_loss_and_grad",
    "decision_scores",
    "emits_calibrated_probabilities",
    "hinge_loss_and_grad",
    "init_mlp",
    "learning_rate_schedule",
    "load_model",
    "loss_and_grads",
    "model_kind",
    "one_hot",
    "predict_genre",
    "predict_genres",
    "predict_proba",
    "predict_proba_forest",
    "predict_proba_linear",
    "predict_proba_mlp",
    "predict_proba_nb",
    "save_model",
    "softmax",
    "train_forest",
    "train_logreg",
    "train_mlp",
    "train_nb",
    "train_svm",
]
