import logging
from typing import Any, Dict, List, Optional

from src.covers.rose_cover import CoverProjection, RoseCover, schreier_basis, subgroup_rank
from src.perturbation.partition import build_partition, choose_delta
from src.perturbation.result import PerturbationResult
from src.perturbation.transition_graph import assign_psi, build_Y
from src.perturbation.verification import verify_epsilon_perturbation, verify_virtual_hom
from src.utils.io_utils import Number
from src.weighting.digraph import LabeledDigraph, YEdge
from src.weighting.expansion import expand_cover
from src.weighting.solver import solve_integer_weighting
from src.weighting.weighting import Weighting, WeightingMode, haar_weighting, verify_weighting


def _lattice_free_result(model, epsilon: Number) -> PerturbationResult:
    """Without a lattice there is nothing to discretize: Y and X are the rose and psi = phi."""
    logging.warning(f"Model type {model.model_type} has no lattice; running with the rose and psi = phi")
    delta = choose_delta(model, epsilon)
    alphabet = model.alphabet
    graph = LabeledDigraph(alphabet=alphabet, vertices=(0,), edges=tuple(YEdge(0, 0, s) for s in range(alphabet.size)))
    psi = {s: model.generators[s] for s in range(alphabet.size)}
    weighting = Weighting({0: 1}, {s: 1 for s in range(alphabet.size)})
    cover = RoseCover.rose(alphabet)
    projection = CoverProjection(vertex_map=(0,), edge_map={(0, s): s for s in range(alphabet.size)})
    return PerturbationResult(model=model, epsilon=epsilon, delta=delta, partition=None, graph=graph, psi=psi,
                              weighting=weighting, cover=cover, projection=projection)


def run_pipeline(model, epsilon: Number, seed: int = 0, mode: WeightingMode = WeightingMode.EXACT,
                 verify_len: int = 6, samples_per_cell: int = 64, monte_carlo_samples: int = 100_000,
                 sample_pairs: Optional[int] = None) -> PerturbationResult:
    """
    delta -> partition -> Y -> psi -> Haar weighting -> integer weighting -> cover X -> phi_epsilon,
    followed by the epsilon-perturbation and virtual homomorphism checks.
    """
    failures: List[str] = []
    report: Dict[str, Any] = {"epsilon": epsilon, "seed": seed, "mode": mode.value}

    if not model.has_lattice:
        result = _lattice_free_result(model, epsilon)
        report["lattice"] = "unchecked"
        report["epsilon_precheck"] = "unchecked"
    else:
        delta = choose_delta(model, epsilon)
        partition = build_partition(model, delta)
        graph = build_Y(model, partition, samples_per_cell=samples_per_cell, seed=seed)
        assignment = assign_psi(model, partition, graph, epsilon)
        failures.extend(assignment.violations)

        haar = haar_weighting(graph, model, partition, mode=mode, samples=monte_carlo_samples, seed=seed)
        haar_check = verify_weighting(graph, haar)
        if haar_check["violations"]:
            failures.append(f"Haar weighting violates {len(haar_check['violations'])} balance constraints")

        weighting = solve_integer_weighting(graph)
        cover, projection = expand_cover(graph, weighting, seed=seed, base_vertex=partition.identity_cell)
        result = PerturbationResult(model=model, epsilon=epsilon, delta=delta, partition=partition, graph=graph,
                                    psi=assignment.psi, weighting=weighting, cover=cover, projection=projection,
                                    haar=haar)
        report["epsilon_precheck"] = "unchecked" if model.min_lattice_displacement() is None else "passed"
        report["cells"] = len(partition)
        report["psi_max_distance"] = assignment.max_distance
        report["psi_violations"] = assignment.violations
        report["haar"] = {
            "provenance": haar.provenance,
            "total_vertex_weight": haar.total_vertex_weight(),
            "max_residual": haar_check["max_residual"],
            "violations": len(haar_check["violations"]),
        }

    report["delta"] = result.delta
    report["Y"] = {"vertices": len(result.graph.vertices), "edges": len(result.graph.edges)}
    report["integer_weighting"] = {
        "total_vertex_weight": result.weighting.total_vertex_weight(),
        "total_edge_weight": result.weighting.total_edge_weight(),
    }
    report["cover"] = {
        "index": result.index,
        "rank": subgroup_rank(result.cover),
        "basepoint": result.cover.basepoint,
        "schreier_basis": [str(w) or "1" for w in schreier_basis(result.cover)],
    }

    epsilon_report = verify_epsilon_perturbation(result, verify_len)
    if epsilon_report["failure_count"]:
        failures.append(f"{epsilon_report['failure_count']} epsilon-perturbation defects exceed epsilon")
    hom_report = verify_virtual_hom(result, verify_len, sample_pairs=sample_pairs, seed=seed)
    if hom_report["total_failures"]:
        failures.append(f"{hom_report['total_failures']} virtual homomorphism failures")
    report["epsilon_perturbation"] = epsilon_report
    report["virtual_homomorphism"] = hom_report
    report["failures"] = failures
    result.report = report

    logging.info(f"Pipeline finished: index of F' = {result.index}, max defect {epsilon_report['max_defect']}, "
                 f"{len(failures)} failures")
    return result
