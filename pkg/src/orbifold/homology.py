from enum import Enum
from fractions import Fraction

import numpy as np
from sympy import isprime

from src.orbifold.presentation import OrbifoldData, Presentation
from src.orbifold.singular_graph import graph_b1, sing_p_extract
from src.words.word import exponent_sums


class GSVerdict(Enum):
    INFINITE = 'infinite'
    INCONCLUSIVE = 'inconclusive'


def rank_mod_p(matrix: np.ndarray, p: int) -> int:
    """Row reduction over GF(p) on an integer object array."""
    a = np.array(matrix, dtype=object) % p
    if a.size == 0:
        return 0
    rows, cols = a.shape
    r = 0
    for c in range(cols):
        pivot = next((i for i in range(r, rows) if a[i, c] % p != 0), None)
        if pivot is None:
            continue
        if pivot != r:
            a[[r, pivot], :] = a[[pivot, r], :]
        inv = pow(int(a[r, c]), -1, p)
        a[r, :] = (a[r, :] * inv) % p
        for i in range(rows):
            if i != r and a[i, c] % p != 0:
                a[i, :] = (a[i, :] - a[i, c] * a[r, :]) % p
        r += 1
        if r == rows:
            break
    return r


def relation_matrix(presentation: Presentation) -> np.ndarray:
    rows = [exponent_sums(r) for r in presentation.relators]
    return np.array(rows, dtype=object).reshape(len(rows), presentation.num_generators)


def dp_rank(presentation: Presentation, p: int) -> int:
    """Dimension of H_1(G; Z/p): generators minus the GF(p) rank of the exponent-sum matrix."""
    if not isprime(p):
        raise ValueError(f"p must be prime, got {p}")
    return presentation.num_generators - rank_mod_p(relation_matrix(presentation), p)


def dp_lower_bound(data: OrbifoldData, p: int) -> int:
    """b_1 of the closure of the order-divisible-by-p singular locus."""
    if not isprime(p):
        raise ValueError(f"p must be prime, got {p}")
    return graph_b1(sing_p_extract(data.singular_graph, p))


def golod_shafarevich_margin(d_p: int, num_gens: int, num_rels: int) -> Fraction:
    for name, value in (("d_p", d_p), ("num_gens", num_gens), ("num_rels", num_rels)):
        if value < 0:
            raise ValueError(f"{name} must be nonnegative, got {value}")
    return Fraction(d_p * d_p, 4) - d_p + num_gens - num_rels


def golod_shafarevich(d_p: int, num_gens: int, num_rels: int) -> GSVerdict:
    if golod_shafarevich_margin(d_p, num_gens, num_rels) > 0:
        return GSVerdict.INFINITE
    return GSVerdict.INCONCLUSIVE
