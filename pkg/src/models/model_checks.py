import logging
from typing import Callable, Dict, List

import numpy as np
from tqdm import tqdm

from src.models.abstract_model import AbstractGroupModel

FLOAT_TOLERANCE = 1e-9
MAX_REPORTED_FAILURES = 10


class _Check:
    def __init__(self, name: str):
        self.name = name
        self.count = 0
        self.max_violation = 0
        self.failed = False
        self.failures: List[str] = []

    def record(self, violation, passed: bool, describe: Callable[[], str]):
        self.count += 1
        self.max_violation = max(self.max_violation, violation)
        if not passed:
            self.failed = True
            if len(self.failures) < MAX_REPORTED_FAILURES:
                self.failures.append(describe())

    def report(self) -> dict:
        return {
            "status": "failed" if self.failed else "passed",
            "samples": self.count,
            "max_violation": self.max_violation,
            "failures": self.failures,
        }


def model_checks(model: AbstractGroupModel, samples: int, seed: int) -> Dict:
    """Spot-check the group axioms, left-invariance and symmetry of d, and lattice invariance of the coset map."""
    if samples < 1:
        raise ValueError(f"samples must be positive, got {samples}")
    rng = np.random.default_rng(seed)

    def close(a, b) -> bool:
        return a == b if model.exact else abs(a - b) <= FLOAT_TOLERANCE * max(1.0, abs(a), abs(b))

    left = _Check("left_invariance")
    symmetry = _Check("metric_symmetry")
    identity = _Check("identity_inverse")
    associativity = _Check("associativity")
    projection = _Check("projection_lattice_invariance")
    e = model.identity()

    for _ in tqdm(range(samples), desc="Model checks", disable=None):
        g, x, y = model.sample_element(rng), model.sample_element(rng), model.sample_element(rng)

        d_xy = model.distance(x, y)
        d_shifted = model.distance(model.multiply(g, x), model.multiply(g, y))
        left.record(abs(d_shifted - d_xy), close(d_shifted, d_xy),
                    lambda: f"d(gx, gy) = {d_shifted} but d(x, y) = {d_xy}")

        d_yx = model.distance(y, x)
        d_xx = model.distance(x, x)
        symmetry.record(max(abs(d_xy - d_yx), abs(d_xx)), close(d_xy, d_yx) and close(d_xx, 0),
                        lambda: f"d(x, y) = {d_xy}, d(y, x) = {d_yx}, d(x, x) = {d_xx}")

        ok = model.equal(model.multiply(x, e), x) and model.equal(model.multiply(e, x), x) \
            and model.equal(model.multiply(x, model.invert(x)), e)
        identity.record(model.distance(model.multiply(x, model.invert(x)), e), ok,
                        lambda: f"identity or inverse axiom fails at {model.element_to_json(x)}")

        left_product = model.multiply(model.multiply(g, x), y)
        right_product = model.multiply(g, model.multiply(x, y))
        associativity.record(model.distance(left_product, right_product), model.equal(left_product, right_product),
                             lambda: f"(gx)y != g(xy) for g = {model.element_to_json(g)}")

        if model.has_lattice:
            gamma = model.sample_lattice(rng)
            ok = model.same_coset(model.multiply(gamma, x), x)
            projection.record(0 if ok else 1, ok,
                              lambda: f"lattice element {model.element_to_json(gamma)} moves the coset of "
                                      f"{model.element_to_json(x)}")

    checks = {c.name: c.report() for c in (left, symmetry, identity, associativity)}
    if model.has_lattice:
        checks[projection.name] = projection.report()
    else:
        checks[projection.name] = {"status": "unchecked", "samples": 0, "max_violation": None, "failures": []}
    failed = sorted(name for name, check in checks.items() if check["status"] == "failed")
    if failed:
        logging.warning(f"Model checks failed: {', '.join(failed)}")
    else:
        logging.info(f"All model checks passed on {samples} samples")
    return {"model_type": model.model_type, "samples": samples, "seed": seed, "checks": checks, "failures": failed}
