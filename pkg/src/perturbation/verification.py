import logging
from dataclasses import dataclass
from typing import Any, Dict, List, Optional, Tuple

import numpy as np
from tqdm import tqdm

from src.covers.rose_cover import schreier_basis
from src.perturbation.result import PerturbationResult
from src.words.word import Letter, format_word_letters, invert

MAX_REPORTED_FAILURES = 50


@dataclass
class WordTree:
    """All reduced words up to a length, in shortlex order, with their end vertex and phi_epsilon value."""
    parent: List[int]
    code: List[int]
    depth: List[int]
    vertex: List[int]
    value: List[Any]

    def codes(self, node: int) -> Tuple[int, ...]:
        letters = []
        while node > 0:
            letters.append(self.code[node])
            node = self.parent[node]
        return tuple(reversed(letters))

    def __len__(self) -> int:
        return len(self.parent)


def build_word_tree(result: PerturbationResult, max_len: int) -> WordTree:
    tree = WordTree(parent=[-1], code=[-1], depth=[0], vertex=[result.cover.basepoint],
                    value=[result.model.identity()])
    num_codes = 2 * result.cover.alphabet.size
    start = 0
    for depth in range(max_len):
        end = len(tree)
        for node in range(start, end):
            last = tree.code[node]
            for code in range(num_codes):
                if last >= 0 and code == last ^ 1:
                    continue
                vertex, factor = result.step(tree.vertex[node], code)
                tree.parent.append(node)
                tree.code.append(code)
                tree.depth.append(depth + 1)
                tree.vertex.append(vertex)
                tree.value.append(result.model.multiply(tree.value[node], factor))
        start = end
    return tree


def _describe(result: PerturbationResult, codes) -> str:
    text = format_word_letters([Letter.from_code(c) for c in codes], result.cover.alphabet)
    return text or "1"


def verify_epsilon_perturbation(result: PerturbationResult, max_len: int) -> Dict:
    """
    d(phi_eps(f s^k), phi_eps(f) phi(s^k)) <= epsilon for every reduced f with |f| < max_len and every letter s^k.
    """
    model = result.model
    if max_len <= 0:
        return {"max_len": max_len, "checked": 0, "max_defect": 0, "failure_count": 0, "failures": [],
                "provenance": "exact" if model.exact else "float"}
    tree = build_word_tree(result, max_len - 1)
    num_codes = 2 * result.cover.alphabet.size
    images = [model.image(c >> 1, -1 if c & 1 else 1) for c in range(num_codes)]
    checked, max_defect, failure_count = 0, 0, 0
    failures: List[str] = []
    for node in tqdm(range(len(tree)), desc="Epsilon check", disable=None):
        value = tree.value[node]
        for code in range(num_codes):
            if node > 0 and code == tree.code[node] ^ 1:
                # f s^k reduces to the parent of f
                perturbed = tree.value[tree.parent[node]]
            else:
                perturbed = model.multiply(value, result.step(tree.vertex[node], code)[1])
            target = model.multiply(value, images[code])
            defect = model.distance(perturbed, target)
            checked += 1
            max_defect = max(max_defect, defect)
            if not model.within(perturbed, target, result.epsilon):
                failure_count += 1
                if len(failures) < MAX_REPORTED_FAILURES:
                    failures.append(f"f = {_describe(result, tree.codes(node))}, letter "
                                    f"{_describe(result, [code])}: defect {defect}")
    logging.info(f"Epsilon check: {checked} pairs, max defect {max_defect}, {failure_count} failures")
    return {"max_len": max_len, "checked": checked, "max_defect": max_defect, "failure_count": failure_count,
            "failures": sorted(failures), "provenance": "exact" if model.exact else "float"}


def _reduce_pair(left: Tuple[int, ...], right: Tuple[int, ...]) -> int:
    """Number of letters cancelled between the end of `left` and the start of `right`."""
    c = 0
    while c < len(left) and c < len(right) and left[len(left) - 1 - c] == right[c] ^ 1:
        c += 1
    return c


def _cancellation_checks(result: PerturbationResult, fp_codes: Tuple[int, ...], max_len: int) -> List[str]:
    """
    Pairs (f', f) with f = u^-1 b, where u^-1 cancels the last k letters u of f' = a u and b does not cancel
    further, reduce to f' f = a b. Both sides then evaluate b from the end of a (resp. u^-1), so the pair holds
    for every b exactly when the end vertices of a and u^-1 agree and phi_eps(a) = phi_eps(f') phi_eps(u^-1).
    One check per k covers every f of length <= max_len.
    """
    model = result.model
    prefixes = [(result.cover.basepoint, model.identity())]
    for code in fp_codes:
        vertex, factor = result.step(prefixes[-1][0], code)
        prefixes.append((vertex, model.multiply(prefixes[-1][1], factor)))
    fp_value = prefixes[-1][1]
    m = len(fp_codes)

    failures = []
    vertex, value = result.cover.basepoint, model.identity()
    for k in range(min(m, max_len) + 1):
        if k > 0:
            vertex, factor = result.step(vertex, fp_codes[m - k] ^ 1)
            value = model.multiply(value, factor)
        a_vertex, a_value = prefixes[m - k]
        if a_vertex != vertex or not model.equal(a_value, model.multiply(fp_value, value)):
            inverse_suffix = tuple(c ^ 1 for c in reversed(fp_codes[m - k:]))
            failures.append(f"f' = {_describe(result, fp_codes)}, f = {_describe(result, inverse_suffix)} b: "
                            f"phi_eps(f' f) != phi_eps(f') phi_eps(f)")
    return failures


def verify_virtual_hom(result: PerturbationResult, max_len: int, sample_pairs: Optional[int] = None,
                       seed: int = 0) -> Dict:
    """
    phi_eps(f' f) = phi_eps(f') phi_eps(f) and phi_eps(f') in the lattice, for every accepted f' and every f of
    length <= max_len. Each accepted f' (and each Schreier basis word and its inverse) is enumerated once and
    checked against all f through its cancellation prefixes. `sample_pairs` adds that many seeded (f', f) pairs
    evaluated literally from the reduced product. Also checks that the path of every f ends over the cell of
    beta_1 phi_eps(f).
    """
    model = result.model
    tree = build_word_tree(result, max(max_len, 0))
    accepted = [node for node in range(len(tree)) if tree.vertex[node] == result.cover.basepoint]

    f_primes: Dict[Tuple[int, ...], Any] = {tree.codes(n): tree.value[n] for n in accepted}
    basis = schreier_basis(result.cover)
    for word in basis + [invert(w) for w in basis]:
        if word.codes() not in f_primes:
            f_primes[word.codes()] = result.evaluate_codes(word.codes())[1]

    failures: List[str] = []
    failure_count, checked = 0, 0
    for fp_codes in tqdm(sorted(f_primes), desc="Virtual homomorphism check", disable=None):
        found = _cancellation_checks(result, fp_codes, max_len)
        checked += min(len(fp_codes), max(max_len, 0)) + 1
        failure_count += len(found)
        failures.extend(found[:MAX_REPORTED_FAILURES - len(failures)])

    literal_checked = 0
    if sample_pairs:
        rng = np.random.default_rng(seed)
        for _ in range(sample_pairs):
            fp_node = accepted[int(rng.integers(len(accepted)))]
            node = int(rng.integers(len(tree)))
            fp_codes, f_codes = tree.codes(fp_node), tree.codes(node)
            c = _reduce_pair(fp_codes, f_codes)
            _, direct = result.evaluate_codes(fp_codes[:len(fp_codes) - c] + f_codes[c:])
            literal_checked += 1
            if not model.equal(direct, model.multiply(tree.value[fp_node], tree.value[node])):
                failure_count += 1
                if len(failures) < MAX_REPORTED_FAILURES:
                    failures.append(f"f' = {_describe(result, fp_codes)}, f = {_describe(result, f_codes)}: "
                                    f"phi_eps(f' f) != phi_eps(f') phi_eps(f)")

    lattice_failures: List[str] = []
    cocycle_failures: List[str] = []
    lattice_status = "unchecked"
    if model.has_lattice:
        lattice_status = "checked"
        for fp_codes, fp_value in sorted(f_primes.items()):
            if not model.is_in_lattice(fp_value):
                lattice_failures.append(f"phi_eps({_describe(result, fp_codes)}) is not in the lattice")
        if result.partition is not None:
            beta_1 = result.partition.representative(result.partition.identity_cell)
            for node in range(len(tree)):
                cell = model.locate(result.partition, model.multiply(beta_1, tree.value[node]))
                if cell != result.projection.vertex_map[tree.vertex[node]]:
                    cocycle_failures.append(f"path of {_describe(result, tree.codes(node))} ends over cell "
                                            f"{result.projection.vertex_map[tree.vertex[node]]}, expected {cell}")

    coverage = {
        "accepted_words": len(accepted),
        "accepted_checked": sum(1 for codes in f_primes if len(codes) <= max_len),
        "schreier_basis": len(basis),
        "words": len(tree),
        "pairs": len(accepted) * len(tree),
        "sampled": False,
        "literal_pairs": literal_checked,
        "seed": seed if sample_pairs else None,
    }
    total_failures = failure_count + len(lattice_failures) + len(cocycle_failures)
    logging.info(f"Virtual homomorphism check: {len(f_primes)} words f', {coverage['pairs']} pairs, "
                 f"{total_failures} failures")
    return {
        "max_len": max_len,
        "checked": checked + literal_checked,
        "coverage": coverage,
        "failure_count": failure_count,
        "failures": sorted(failures),
        "lattice": lattice_status,
        "lattice_failures": sorted(lattice_failures)[:MAX_REPORTED_FAILURES],
        "cocycle_failures": sorted(cocycle_failures)[:MAX_REPORTED_FAILURES],
        "total_failures": total_failures,
    }
