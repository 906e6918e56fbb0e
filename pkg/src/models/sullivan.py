from src.utils.io_utils import Number


def sullivan_lambda0(dimension: Number) -> Number:
    """Bottom of the spectrum from the limit set dimension D: D (2 - D), valid for 1 <= D <= 2."""
    if not 1 <= dimension <= 2:
        raise ValueError(f"Limit set dimension must lie in [1, 2], got {dimension}")
    return dimension * (2 - dimension)
