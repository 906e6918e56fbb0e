import json
import os
import tempfile
from fractions import Fraction
from typing import Any, Optional, Union

import numpy as np
import yaml

Number = Union[int, float, Fraction]


def load_json(path):
    if not os.path.exists(path):
        raise FileNotFoundError(f"Input file not found at {path}")

    with open(path, 'r') as f:
        return json.load(f)


def load_text(path) -> str:
    if not os.path.exists(path):
        raise FileNotFoundError(f"Input file not found at {path}")

    with open(path, 'r') as f:
        return f.read()


def load_yaml_config(path) -> dict:
    if not os.path.exists(path):
        raise FileNotFoundError(f"Config file not found at {path}")

    with open(path, 'r') as f:
        return yaml.safe_load(f) or {}


def require_keys(config: Any, keys, what: str) -> None:
    if not isinstance(config, dict):
        raise ValueError(f"{what} must be a JSON object, got {type(config).__name__}")
    for key in keys:
        if key not in config:
            raise ValueError(f"{what} is missing '{key}'")


def parse_number(value: Any) -> Number:
    """Accepts ints, floats, "p/q" or decimal strings and [p, q] pairs; strings parse exactly."""
    if isinstance(value, (int, Fraction)) and not isinstance(value, bool):
        return value
    if isinstance(value, float):
        return value
    if isinstance(value, (list, tuple)) and len(value) == 2:
        return Fraction(int(value[0]), int(value[1]))
    if isinstance(value, str):
        try:
            return Fraction(value.strip())
        except ValueError:
            raise ValueError(f"Cannot parse number {value!r}")
    raise ValueError(f"Cannot parse number {value!r}")


def to_jsonable(value: Any) -> Any:
    if isinstance(value, Fraction):
        if value.denominator == 1:
            return value.numerator
        return [value.numerator, value.denominator]
    if isinstance(value, bool) or value is None or isinstance(value, (str, int)):
        return value
    if isinstance(value, float):
        return value
    if isinstance(value, np.generic):
        return to_jsonable(value.item())
    if isinstance(value, complex):
        return [value.real, value.imag]
    if isinstance(value, np.ndarray):
        return [to_jsonable(v) for v in value.tolist()]
    if isinstance(value, dict):
        return {str(k): to_jsonable(v) for k, v in value.items()}
    if isinstance(value, (list, tuple, set, frozenset)):
        items = sorted(value) if isinstance(value, (set, frozenset)) else value
        return [to_jsonable(v) for v in items]
    if hasattr(value, "to_dict"):
        return to_jsonable(value.to_dict())
    raise ValueError(f"Cannot serialize value of type {type(value).__name__}")


def dumps(data: Any) -> str:
    return json.dumps(to_jsonable(data), sort_keys=True, indent=2) + "\n"


def write_atomic(path, text: str):
    directory = os.path.dirname(os.path.abspath(path))
    os.makedirs(directory, exist_ok=True)
    fd, tmp_path = tempfile.mkstemp(dir=directory, prefix=".tmp-", suffix=os.path.basename(path))
    try:
        with os.fdopen(fd, 'w') as f:
            f.write(text)
        os.replace(tmp_path, path)
    except BaseException:
        if os.path.exists(tmp_path):
            os.remove(tmp_path)
        raise


def write_json(path, data: Any):
    write_atomic(path, dumps(data))


def exact_provenance() -> str:
    return "exact"


def sampled_provenance(samples: int, seed: Optional[int]) -> dict:
    return {"sampled": {"n": samples, "seed": seed}}
