from .nb import NBModel, predict_nb, train_nb
from .persist import ChecksumError, ModelFormatError, ModelTypeError, load_model, save_model
from .svm import (
    LinearModel,
    balanced_class_weight,
    dual_cd,
    predict_linear,
    train_linear_svm,
)

__all__ = [
    "NBModel", "predict_nb", "train_nb",
    "LinearModel", "balanced_class_weight", "dual_cd", "predict_linear", "train_linear_svm",
    "ChecksumError", "ModelFormatError", "ModelTypeError", "load_model", "save_model",
]
