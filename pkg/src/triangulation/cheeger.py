import logging
from fractions import Fraction
from typing import List, Optional

import networkx as nx
import numpy as np
from tqdm import tqdm

from src.triangulation.skeleton import SkeletonGraph

DEFAULT_CAP = 20
# finite graphs: the minimum runs over nonempty A with |A| <= |V|/2
CONVENTION = "min over nonempty A with |A| <= |V|/2 of |dA|/|A|; null when |V| < 2 leaves no such A"


def _no_candidate_sets(graph: SkeletonGraph) -> bool:
    if graph.num_vertices < 2:
        logging.warning(f"No vertex set of size at most |V|/2 in a graph with {graph.num_vertices} vertices")
        return True
    return False


def cheeger_exact(graph: SkeletonGraph, cap: int = DEFAULT_CAP) -> Optional[Fraction]:
    """Brute force over all vertex subsets, encoded as bitmasks. None on fewer than 2 vertices."""
    if _no_candidate_sets(graph):
        return None
    n = graph.num_vertices
    if n > cap:
        raise ValueError(f"Exact Cheeger constant is limited to {cap} vertices, got {n}")
    masks = np.arange(1, 2 ** n, dtype=np.int64)
    sizes = np.zeros(len(masks), dtype=np.int64)
    for v in range(n):
        sizes += (masks >> v) & 1
    boundary = np.zeros(len(masks), dtype=np.int64)
    for u, v in tqdm(graph.edges, desc="Cheeger subsets", disable=None):
        boundary += ((masks >> u) ^ (masks >> v)) & 1
    allowed = 2 * sizes <= n
    ratios = np.where(allowed, boundary / np.maximum(sizes, 1), np.inf)
    best = int(np.argmin(ratios))
    value = Fraction(int(boundary[best]), int(sizes[best]))
    logging.debug(f"Exact Cheeger constant {value} attained by mask {int(masks[best]):b}")
    return value


def _laplacian(graph: SkeletonGraph) -> np.ndarray:
    n = graph.num_vertices
    laplacian = np.zeros((n, n))
    for u, v in graph.edges:
        if u == v:
            continue
        laplacian[u, v] -= 1
        laplacian[v, u] -= 1
        laplacian[u, u] += 1
        laplacian[v, v] += 1
    return laplacian


def _ratio(graph: SkeletonGraph, members: np.ndarray) -> Fraction:
    size = int(members.sum())
    boundary = sum(1 for u, v in graph.edges if members[u] != members[v])
    return Fraction(boundary, min(size, graph.num_vertices - size))


def cheeger_sweep(graph: SkeletonGraph) -> Optional[Fraction]:
    """
    Upper bound from the nested prefix sets of the Fiedler vector ordering. A prefix larger than |V|/2 is
    scored through its complement, and every connected component small enough is a zero candidate.
    None on fewer than 2 vertices.
    """
    if _no_candidate_sets(graph):
        return None
    n = graph.num_vertices
    candidates: List[Fraction] = []
    for component in nx.connected_components(graph.to_networkx()):
        if 2 * len(component) <= n and len(component) < n:
            candidates.append(Fraction(0))
    _, eigenvectors = np.linalg.eigh(_laplacian(graph))
    order = np.argsort(eigenvectors[:, 1], kind="stable")
    members = np.zeros(n, dtype=bool)
    for k in range(n - 1):
        members[order[k]] = True
        candidates.append(_ratio(graph, members))
    value = min(candidates)
    logging.debug(f"Sweep Cheeger bound {value} from {len(candidates)} candidates")
    return value
