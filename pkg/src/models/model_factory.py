from src.models.abstract_model import AbstractGroupModel
from src.models.finite.finite_model import FiniteModel
from src.models.matrix.matrix_model import MatrixModel
from src.models.torus.torus_model import TorusModel
from src.utils.io_utils import load_json, require_keys


def get_model_cls(model_type: str):
    if model_type == FiniteModel.model_type:
        return FiniteModel
    elif model_type == TorusModel.model_type:
        return TorusModel
    elif model_type == MatrixModel.model_type:
        return MatrixModel
    else:
        raise ValueError(f"Model type {model_type} is not supported.")


def build_model(config: dict) -> AbstractGroupModel:
    require_keys(config, ("type",), "Model description")
    return get_model_cls(config["type"]).from_config(config)


def load_model(path) -> AbstractGroupModel:
    return build_model(load_json(path))
