import argparse
import logging
import os
import sys
from typing import Any, Dict, List, Optional, Tuple

from src import __version__
from src.covers.rose_cover import is_rose_covering, schreier_basis, subgroup_rank, to_dot
from src.models.model_checks import model_checks
from src.models.model_factory import load_model
from src.models.sullivan import sullivan_lambda0
from src.orbifold.homology import (dp_lower_bound, dp_rank, golod_shafarevich, golod_shafarevich_margin)
from src.orbifold.presentation import (OrbifoldData, deficiency_bound_check, meridional_presentation,
                                       parse_presentation, reduce_meridional_relators)
from src.orbifold.singular_graph import (SingularGraph, chi_lower_bound, graph_b1, non_circle_components,
                                         sing_p_extract, validate_singular_graph)
from src.perturbation.pipeline import run_pipeline
from src.triangulation.cheeger import CONVENTION, cheeger_exact, cheeger_sweep
from src.triangulation.normal_surface import (build_surface, claim_bounds_eval, claim_constants,
                                              d2_upper_bound_surface, face_parity_check)
from src.triangulation.skeleton import boundary_set, one_skeleton, vertex_set
from src.triangulation.triangulation import Triangulation, parse_triangulation
from src.utils.io_utils import dumps, load_json, load_text, load_yaml_config, parse_number, write_atomic
from src.weighting.digraph import LabeledDigraph
from src.weighting.expansion import expand_cover
from src.weighting.solver import solve_integer_weighting
from src.weighting.weighting import UndersamplingError, Weighting, WeightingMode, verify_weighting

DEFAULT_CONFIG = "configs/default.yaml"
SEED_ENV = "PERTURB_SEED"
# left out of the config echo in reports
NON_SEMANTIC_ARGS = ("group", "command", "config", "out", "dot", "verbose")

EXIT_OK = 0
EXIT_FAILURES = 1
EXIT_INPUT_ERROR = 2


class CommandHandler:
    """Runs one subcommand and collects its report. Each `_<group>_<command>` returns (report, failures)."""

    def __init__(self, args) -> None:
        self.args = args
        self.command = f"{args.group} {args.command}"

    def run(self) -> Tuple[Dict[str, Any], List[str]]:
        method = getattr(self, f"_{self.args.group}_{self.args.command}")
        return method()

    def _write_dot(self, text: str):
        if getattr(self.args, "dot", None):
            write_atomic(self.args.dot, text)
            logging.info(f"Wrote DOT graph to {self.args.dot}")

    # === perturb ===
    def _perturb_run(self):
        args = self.args
        model = load_model(args.model)
        result = run_pipeline(model, args.epsilon, seed=args.seed, mode=WeightingMode(args.mode),
                              verify_len=args.verify_len, samples_per_cell=args.samples_per_cell,
                              monte_carlo_samples=args.monte_carlo_samples, sample_pairs=args.sample_pairs)
        self._write_dot(to_dot(result.cover, result.projection))
        report = dict(result.report)
        report["model"] = model.to_config()
        report["psi"] = {str(k): model.element_to_json(v) for k, v in result.psi.items()}
        return report, list(result.report["failures"])

    # === weight ===
    @staticmethod
    def __prepare_graph(path) -> LabeledDigraph:
        return LabeledDigraph.from_dict(load_json(path))

    def _weight_solve(self):
        graph = CommandHandler.__prepare_graph(self.args.graph)
        weighting = solve_integer_weighting(graph)
        self._write_dot(graph.to_dot({"vertices": weighting.vertex_weight, "edges": weighting.edge_weight}))
        return {"graph": graph.to_dict(), "weighting": weighting.to_dict(graph)}, []

    def _weight_verify(self):
        graph = CommandHandler.__prepare_graph(self.args.graph)
        weighting = Weighting.from_dict(load_json(self.args.weighting), graph)
        tolerance = None if self.args.tolerance is None else parse_number(self.args.tolerance)
        check = verify_weighting(graph, weighting, tolerance=tolerance)
        failures = [f"balance violated at vertex {v['vertex']}, label {v['label']} ({v['side']})"
                    for v in check["violations"]]
        failures += [f"non-positive weight on {item}" for item in check["nonpositive"]]
        failures += check["validity"]
        return check, failures

    # === cover ===
    def _cover_expand(self):
        args = self.args
        graph = CommandHandler.__prepare_graph(args.graph)
        if args.weighting:
            weighting = Weighting.from_dict(load_json(args.weighting), graph)
        else:
            weighting = solve_integer_weighting(graph)
        cover, projection = expand_cover(graph, weighting, seed=args.seed, base_vertex=args.base_vertex)
        self._write_dot(to_dot(cover, projection))
        covering = is_rose_covering(cover)
        report = {
            "cover": cover.to_dict(),
            "vertex_map": list(projection.vertex_map),
            "is_rose_covering": covering,
            "index": cover.num_vertices,
            "rank": subgroup_rank(cover) if covering else None,
            "schreier_basis": [str(w) or "1" for w in schreier_basis(cover)] if covering else [],
        }
        return report, [] if covering else ["expanded graph is not a rose covering"]

    # === orb ===
    @staticmethod
    def __prepare_orbifold(path) -> OrbifoldData:
        return OrbifoldData.from_dict(load_json(path))

    def _orb_dp(self):
        args = self.args
        failures = []
        if args.orbifold:
            data = CommandHandler.__prepare_orbifold(args.orbifold)
            presentation = meridional_presentation(data)
            d_p = dp_rank(presentation, args.p)
            reduced = dp_rank(reduce_meridional_relators(data, args.p), args.p)
            lower = dp_lower_bound(data, args.p)
            consistent = not data.consistency_warnings()
            report = {
                "presentation": presentation.to_dict(),
                "d_p": d_p,
                "d_p_reduced": reduced,
                "lower_bound": lower,
                "consistent_data": consistent,
                "deficiency_bound": deficiency_bound_check(presentation, len(data.singular_graph.edges)),
            }
            if reduced != d_p:
                failures.append(f"mod-{args.p} reduction changed d_p from {d_p} to {reduced}")
            if consistent and lower > d_p:
                failures.append(f"lower bound {lower} exceeds d_p = {d_p}")
        elif args.presentation:
            presentation = parse_presentation(load_text(args.presentation))
            report = {"presentation": presentation.to_dict(), "d_p": dp_rank(presentation, args.p)}
        else:
            raise ValueError("orb dp needs --presentation or --orbifold")
        report.update({"p": args.p, "provenance": "exact"})
        return report, failures

    def _orb_gs(self):
        args = self.args
        verdict = golod_shafarevich(args.dp, args.gens, args.rels)
        return {"d_p": args.dp, "generators": args.gens, "relators": args.rels, "verdict": verdict.value,
                "margin": golod_shafarevich_margin(args.dp, args.gens, args.rels), "provenance": "exact"}, []

    def _orb_singp(self):
        args = self.args
        if args.orbifold:
            graph = CommandHandler.__prepare_orbifold(args.orbifold).singular_graph
        elif args.singular_graph:
            graph = SingularGraph.from_dict(load_json(args.singular_graph))
        else:
            raise ValueError("orb singp needs --singular-graph or --orbifold")
        warnings = validate_singular_graph(graph)
        sing_p = sing_p_extract(graph, args.p)
        return {
            "p": args.p,
            "sing_p": sing_p.to_dict(),
            "b1": graph_b1(sing_p),
            "chi_lower_bound": chi_lower_bound(sing_p),
            "non_circle_components": non_circle_components(sing_p),
            "closed_curves": sing_p.closed_curves(),
            "warnings": warnings,
        }, []

    # === tri ===
    @staticmethod
    def __prepare_triangulation(path) -> Triangulation:
        return parse_triangulation(load_text(path))

    def _tri_skeleton(self):
        triangulation = CommandHandler.__prepare_triangulation(self.args.triangulation)
        skeleton = one_skeleton(triangulation)
        self._write_dot(skeleton.to_dot())
        return {"triangulation": triangulation.summary(), "skeleton": skeleton.to_dict()}, []

    def _tri_cheeger(self):
        args = self.args
        skeleton = one_skeleton(CommandHandler.__prepare_triangulation(args.triangulation))
        report: Dict[str, Any] = {"convention": CONVENTION, "vertices": skeleton.num_vertices}
        failures = []
        if not args.sweep:
            report["exact"] = cheeger_exact(skeleton, cap=args.cheeger_cap)
        if not args.exact:
            report["sweep"] = cheeger_sweep(skeleton)
        exact, sweep = report.get("exact"), report.get("sweep")
        if exact is not None and sweep is not None and sweep < exact:
            failures.append(f"sweep bound {sweep} is below the exact value {exact}")
        return report, failures

    def _tri_surface(self):
        args = self.args
        triangulation = CommandHandler.__prepare_triangulation(args.triangulation)
        skeleton = one_skeleton(triangulation)
        chosen = load_json(args.set)
        vertices = vertex_set(skeleton, chosen["vertices"] if isinstance(chosen, dict) else chosen)
        self._write_dot(skeleton.to_dot(highlight=vertices))
        parity = face_parity_check(triangulation, vertices)
        surface = build_surface(triangulation, vertices)
        boundary = boundary_set(skeleton, vertices)
        constants = claim_constants(triangulation)
        bounds = claim_bounds_eval(surface.counts(), len(vertices), len(boundary), parse_number(args.k4), constants)
        report = {
            "set": sorted(vertices),
            "boundary_size": len(boundary),
            "parity": parity,
            "surface": surface.to_dict(),
            "d2_upper_bound": d2_upper_bound_surface(surface),
            "claims": bounds,
        }
        failures = list(parity["violations"]) + [f"count bound {name} violated" for name in bounds["violations"]]
        if surface.b1_mod2 > d2_upper_bound_surface(surface):
            failures.append(f"surface b1 {surface.b1_mod2} exceeds the 1-cell bound")
        return report, failures

    # === model ===
    def _model_check(self):
        report = model_checks(load_model(self.args.model), self.args.model_check_samples, self.args.seed)
        return report, [f"model check {name} failed" for name in report["failures"]]

    # === util ===
    def _util_lambda0(self):
        dimension = parse_number(self.args.dimension)
        return {"dimension": dimension, "lambda0": sullivan_lambda0(dimension)}, []


def _config_echo(args) -> Dict[str, Any]:
    return {key: value for key, value in sorted(vars(args).items()) if key not in NON_SEMANTIC_ARGS}


def resolve_args(args):
    config_path = args.config or DEFAULT_CONFIG
    config_args = {}
    if args.config or os.path.exists(config_path):
        config_args = load_yaml_config(config_path)

    # config fills every argument left unset on the command line
    args_dict = vars(args)
    for key, value in args_dict.items():
        if value is None and key in config_args:
            setattr(args, key, config_args[key])

    if "seed" in args_dict and args.seed is None:
        args.seed = 0
    if hasattr(args, "epsilon") and args.epsilon is not None:
        args.epsilon = parse_number(args.epsilon)
    return args


def main(args) -> int:
    logging.basicConfig(
        format='%(levelname)s: %(message)s',
        level=logging.DEBUG if args.verbose else logging.INFO
    )
    try:
        args = resolve_args(args)
        logging.info(f"Running {args.group} {args.command} with seed {getattr(args, 'seed', None)}")
        report, failures = CommandHandler(args).run()
    except (ValueError, FileNotFoundError, UndersamplingError) as e:
        logging.error(str(e))
        return EXIT_INPUT_ERROR

    output = {"version": __version__, "command": f"{args.group} {args.command}", "config": _config_echo(args),
              "result": report, "failures": failures}
    text = dumps(output)
    if args.out:
        write_atomic(args.out, text)
        logging.info(f"Wrote report to {args.out}")
    else:
        sys.stdout.write(text)
    if failures:
        logging.warning(f"{len(failures)} verification failures")
        return EXIT_FAILURES
    return EXIT_OK


def _seed_default() -> Optional[int]:
    value = os.environ.get(SEED_ENV)
    return int(value) if value is not None and value.strip() else None


def _add_common(parser: argparse.ArgumentParser, dot: bool = False):
    parser.add_argument("--config", type=str, help=f"YAML config; defaults to {DEFAULT_CONFIG} when present")
    parser.add_argument("--verbose", action="store_true")
    parser.add_argument("--out", type=str, help="Write the JSON report here instead of stdout")
    if dot:
        parser.add_argument("--dot", type=str, help="Write a DOT rendering of the resulting graph")


def arg_parser():
    parser = argparse.ArgumentParser(formatter_class=argparse.ArgumentDefaultsHelpFormatter)
    parser.add_argument("--version", action="version", version=__version__)
    groups = parser.add_subparsers(dest="group", required=True)

    # === perturb ===
    perturb = groups.add_parser("perturb").add_subparsers(dest="command", required=True)
    run = perturb.add_parser("run", help="Build the finite cover and epsilon-perturbation for a group model")
    _add_common(run, dot=True)
    run.add_argument("--model", type=str, required=True, help="Model description JSON")
    run.add_argument("--epsilon", type=parse_number)
    run.add_argument("--seed", type=int, default=_seed_default())
    run.add_argument("--verify-len", dest="verify_len", type=int)
    run.add_argument("--mode", type=str, choices=[m.value for m in WeightingMode], default=WeightingMode.EXACT.value,
                     help="Haar weighting by exact cell measures or Monte-Carlo sampling")
    run.add_argument("--samples-per-cell", dest="samples_per_cell", type=int)
    run.add_argument("--monte-carlo-samples", dest="monte_carlo_samples", type=int)
    run.add_argument("--sample-pairs", dest="sample_pairs", type=int,
                     help="Also evaluate this many seeded (f', f) pairs literally")

    # === weight ===
    weight = groups.add_parser("weight").add_subparsers(dest="command", required=True)
    solve = weight.add_parser("solve", help="Smallest positive integer balanced weighting of a labelled digraph")
    _add_common(solve, dot=True)
    solve.add_argument("--graph", type=str, required=True)
    verify = weight.add_parser("verify", help="Check the balance constraints of a weighting")
    _add_common(verify)
    verify.add_argument("--graph", type=str, required=True)
    verify.add_argument("--weighting", type=str, required=True)
    verify.add_argument("--tolerance", type=str)

    # === cover ===
    cover = groups.add_parser("cover").add_subparsers(dest="command", required=True)
    expand = cover.add_parser("expand", help="Expand a weighted digraph into a covering of the rose")
    _add_common(expand, dot=True)
    expand.add_argument("--graph", type=str, required=True)
    expand.add_argument("--weighting", type=str, help="Integer weighting JSON; solved for when omitted")
    expand.add_argument("--seed", type=int, default=_seed_default())
    expand.add_argument("--base-vertex", dest="base_vertex", type=int, default=0)

    # === orb ===
    orb = groups.add_parser("orb").add_subparsers(dest="command", required=True)
    dp = orb.add_parser("dp", help="Dimension of H_1(-; Z/p) of a presentation or meridional presentation")
    _add_common(dp)
    dp.add_argument("-p", type=int, required=True)
    dp.add_argument("--presentation", type=str, help="Presentation text file")
    dp.add_argument("--orbifold", type=str, help="Orbifold data JSON")
    gs = orb.add_parser("gs", help="Golod-Shafarevich infiniteness test")
    _add_common(gs)
    gs.add_argument("--dp", type=int, required=True)
    gs.add_argument("--gens", type=int, required=True)
    gs.add_argument("--rels", type=int, required=True)
    singp = orb.add_parser("singp", help="Singular locus of order divisible by p and its Betti number")
    _add_common(singp)
    singp.add_argument("-p", type=int, required=True)
    singp.add_argument("--singular-graph", dest="singular_graph", type=str)
    singp.add_argument("--orbifold", type=str)

    # === tri ===
    tri = groups.add_parser("tri").add_subparsers(dest="command", required=True)
    skeleton = tri.add_parser("skeleton", help="Vertex and edge classes of a triangulation")
    _add_common(skeleton, dot=True)
    skeleton.add_argument("--triangulation", type=str, required=True)
    cheeger = tri.add_parser("cheeger", help="Cheeger constant of the 1-skeleton")
    _add_common(cheeger)
    cheeger.add_argument("--triangulation", type=str, required=True)
    cheeger_mode = cheeger.add_mutually_exclusive_group()
    cheeger_mode.add_argument("--exact", action="store_true")
    cheeger_mode.add_argument("--sweep", action="store_true")
    cheeger.add_argument("--cheeger-cap", dest="cheeger_cap", type=int)
    surface = tri.add_parser("surface", help="Normal surface around a vertex set and the cell count bounds")
    _add_common(surface, dot=True)
    surface.add_argument("--triangulation", type=str, required=True)
    surface.add_argument("--set", type=str, required=True, help="JSON list of skeleton vertices")
    surface.add_argument("--k4", type=str, default="0", help="Singular locus intersections per normal disc")

    # === model ===
    model = groups.add_parser("model").add_subparsers(dest="command", required=True)
    check = model.add_parser("check", help="Spot-check the group model axioms")
    _add_common(check)
    check.add_argument("--model", type=str, required=True)
    check.add_argument("--samples", dest="model_check_samples", type=int)
    check.add_argument("--seed", type=int, default=_seed_default())

    # === util ===
    util = groups.add_parser("util").add_subparsers(dest="command", required=True)
    lambda0 = util.add_parser("lambda0", help="Bottom of the spectrum from the limit set dimension")
    _add_common(lambda0)
    lambda0.add_argument("--dimension", type=str, required=True)

    return parser


if __name__ == '__main__':
    arguments = arg_parser().parse_args()
    sys.exit(main(arguments))
