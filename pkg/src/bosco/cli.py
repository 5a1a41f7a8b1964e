"""Command line surface: graph, cohomology, skein, and verify.

Inputs come from --fixture tokens or from a file holding either the
planar code text format or the JSON graph schema.  Exit codes: 0 on
success, 1 for usage errors, 2 for parse or validation failures, and 3
when the pipeline finishes but some rank stays an upper bound.
"""

import argparse
import json
import random
import sys

from .analysis import (AnalysisError, certify, certify_e_family,
                       collapse_check, goeritz_det, infer_hf,
                       les_consistency, lspace_test, skein_triple)
from .diagram import (DiagramError, LinkDiagram, black_graph,
                      negative_crossing_count, parse_diagram)
from .fixtures import (FixtureError, basic_knots, fixture_by_name,
                       random_embedded_graph, wheel_graph)
from .planar import PlanarGraph
from .report import (ReportError, canonical_json, cohomology_report,
                     graph_from_json, graph_to_json, render_cohomology,
                     render_graph, render_skein, render_verify,
                     skein_report, verify_report)
from .treecomplex import TreeComplex, spanning_trees, tree_count

USAGE_ERROR = 1
INPUT_ERROR = 2
UNCERTIFIED = 3


class CliError(Exception):
    """Carries the exit code for a failed command."""

    def __init__(self, code, message):
        super().__init__(message)
        self.code = code


class RunConfig:
    """Everything one command invocation depends on."""

    __slots__ = ("command", "path", "fixture", "seed", "retries", "base",
                 "coloring", "fmt", "exact", "edge", "suite")

    def __init__(self, args):
        self.command = args.command
        self.path = getattr(args, "input", None)
        fixture = getattr(args, "fixture", None)
        self.fixture = tuple(fixture) if fixture else None
        self.seed = args.seed
        self.retries = args.retries
        self.base = getattr(args, "base", None)
        self.coloring = getattr(args, "coloring", "standard")
        self.fmt = args.format
        self.exact = getattr(args, "exact", False)
        self.edge = getattr(args, "edge", None)
        self.suite = getattr(args, "suite", None)

    def input_label(self):
        if self.fixture:
            return "fixture " + " ".join(self.fixture)
        if self.path:
            return self.path
        return "verification suite" if self.command == "verify" else "none"


def build_parser():
    parser = argparse.ArgumentParser(
        prog="bosco",
        description="spanning tree cohomology of checkerboard graphs")
    sub = parser.add_subparsers(dest="command", required=True)
    specs = {
        "graph": "serialize the black graph of an input",
        "cohomology": "certified cohomology ranks and Floer readouts",
        "skein": "resolve one edge and compare the three complexes",
        "verify": "run the invariant suites",
    }
    for name, helptext in specs.items():
        p = sub.add_parser(name, help=helptext)
        if name != "verify":
            p.add_argument("input", nargs="?", default=None,
                           help="planar code or graph JSON file")
            p.add_argument("--fixture", nargs="+", metavar="TOKEN",
                           help="named fixture, e.g. D33 or E 4")
            p.add_argument("--base", default=None,
                           help="override the base vertex")
            p.add_argument("--coloring", default="standard",
                           choices=("standard", "flipped"),
                           help="checkerboard coloring of a diagram")
        if name == "cohomology":
            p.add_argument("--exact", action="store_true",
                           help="exact multivariate ranks, tiny graphs only")
        if name == "skein":
            p.add_argument("--edge", required=True,
                           help="edge id to resolve")
        if name == "verify":
            p.add_argument("--suite", default="all",
                           choices=("oracles", "squares", "les", "all"),
                           help="which invariant suite to run")
        p.add_argument("--seed", type=int, default=0,
                       help="specialization seed")
        p.add_argument("--retries", type=int, default=5,
                       help="specialization attempts per differential")
        p.add_argument("--format", default="text", choices=("text", "json"),
                       help="output format")
    return parser


def _parse_base(token, graph):
    # fixture vertices are ints, serialized graphs use strings
    if token is None:
        return None
    for v in graph.rotation:
        if str(v) == token:
            return v
    raise CliError(INPUT_ERROR, f"no vertex {token!r} in the graph")


def _rebase(graph, base):
    return PlanarGraph(graph.edges, graph.rotation, graph.outer_dart,
                       graph.heights, base)


def load_graph(config):
    """Resolve the input to an embedded graph plus its degree shift."""
    if config.fixture and config.path:
        raise CliError(USAGE_ERROR, "give a file or --fixture, not both")
    if config.fixture:
        try:
            obj = fixture_by_name(config.fixture)
        except (FixtureError, ValueError) as err:
            raise CliError(INPUT_ERROR, str(err)) from None
    elif config.path:
        try:
            with open(config.path, encoding="utf-8") as fh:
                text = fh.read()
        except OSError as err:
            raise CliError(INPUT_ERROR, str(err)) from None
        obj = _parse_payload(text)
    else:
        raise CliError(USAGE_ERROR, "an input file or --fixture is required")
    flip = config.coloring == "flipped"
    if isinstance(obj, LinkDiagram):
        shift = negative_crossing_count(obj)
        graph = black_graph(obj, flip=flip)
    else:
        if flip:
            raise CliError(INPUT_ERROR,
                           "coloring applies to diagrams, not graphs")
        shift, graph = 0, obj
    base = _parse_base(config.base, graph)
    if base is not None:
        graph = _rebase(graph, base)
    return graph, shift


def _parse_payload(text):
    head = text.lstrip()
    if head.startswith("{"):
        try:
            doc = json.loads(text)
        except json.JSONDecodeError as err:
            raise CliError(INPUT_ERROR, f"bad JSON: {err}") from None
        try:
            return graph_from_json(doc)
        except ReportError as err:
            raise CliError(INPUT_ERROR, str(err)) from None
    try:
        return parse_diagram(text)
    except DiagramError as err:
        raise CliError(INPUT_ERROR, str(err)) from None


def _is_chain_fixture(config):
    if not config.fixture or config.base:
        return None
    name = config.fixture[0]
    if name == "E" and len(config.fixture) == 2:
        return int(config.fixture[1])
    if len(config.fixture) == 1 and name.startswith("E") and name[1:].isdigit():
        return int(name[1:])
    return None


def _exact_certify(graph, config):
    from .analysis import Certification

    cx = TreeComplex(graph)
    ranks = cx.exact_ranks()
    dims = cx.dims()
    upper = {h: dims[h] - ranks.get(h, 0) - (ranks.get(h - 2, 0) if h - 2 in dims else 0)
             for h in dims}
    cert = Certification(graph, dims, upper, cx.euler(), config.seed,
                         config.retries, ranks, {})
    for h in cert.certified:
        cert.certified[h] = True
    cert.basis.append("exact multivariate elimination over the function field")
    return cert


def cmd_graph(config, out):
    graph, _ = load_graph(config)
    doc = graph_to_json(graph)
    out.write(canonical_json(doc) if config.fmt == "json"
              else render_graph(doc))
    return 0


def cmd_cohomology(config, out):
    chain_k = _is_chain_fixture(config)
    if config.exact:
        graph, shift = load_graph(config)
        cert = _exact_certify(graph, config)
    elif chain_k is not None:
        try:
            cert = certify_e_family(chain_k, config.seed, config.retries)
        except AnalysisError as err:
            raise CliError(INPUT_ERROR, str(err)) from None
        shift = 0
    else:
        graph, shift = load_graph(config)
        cert = certify(graph, config.seed, config.retries)
    collapse = collapse_check(cert.ranks)
    hf = infer_hf(cert)
    lspace = lspace_test(cert)
    doc = cohomology_report(cert, config, shift, collapse, hf, lspace)
    out.write(canonical_json(doc) if config.fmt == "json"
              else render_cohomology(doc))
    return 0 if cert.all_certified else UNCERTIFIED


def cmd_skein(config, out):
    graph, shift = load_graph(config)
    try:
        triple = skein_triple(graph, config.edge, config.seed, config.retries)
    except AnalysisError as err:
        raise CliError(INPUT_ERROR, str(err)) from None
    les = les_consistency(triple)
    doc = skein_report(triple, les, config, shift)
    out.write(canonical_json(doc) if config.fmt == "json"
              else render_skein(doc))
    certified = (triple.cert.all_certified and triple.cert0.all_certified
                 and triple.cert1.all_certified)
    return 0 if certified and les["ok"] else UNCERTIFIED


# -- verification suites ---------------------------------------------------

def _oracle_checks(config):
    checks = []
    for name, diagram in sorted(basic_knots().items()):
        graph = black_graph(diagram)
        det = TreeComplex(graph).determinant()
        gdet = goeritz_det(diagram)
        checks.append((f"goeritz {name}", det == gdet,
                       f"complex determinant {det}, oracle {gdet}"))
    rng = random.Random(config.seed)
    agree = 0
    for _ in range(25):
        graph = random_embedded_graph(rng)
        count = sum(1 for _ in spanning_trees(graph))
        agree += count == tree_count(graph)
    checks.append(("kirchhoff random graphs", agree == 25,
                   f"{agree} of 25 enumerations match the matrix count"))
    return checks


def _square_checks(config):
    checks = []
    for gaps in ((3, 3), (3, 3, 0), (3, 3, 1)):
        cx = TreeComplex(wheel_graph(*gaps))
        ok = cx.verify_d_squared(seed=config.seed, samples=2)
        name = "".join(map(str, gaps))
        checks.append((f"d squared D{name}", ok,
                       "composite vanishes on 2 specializations"))
    return checks


def _les_checks(config):
    checks = []
    for gaps, edge in (((3, 3, 1), "a31"), ((3, 3, 3), "e0")):
        triple = skein_triple(wheel_graph(*gaps), edge,
                              config.seed, config.retries)
        les = les_consistency(triple)
        name = "".join(map(str, gaps))
        checks.append((f"les D{name} at {edge}", les["ok"],
                       les["reason"] or "exact sequence feasible"))
    return checks


def cmd_verify(config, out):
    suites = {
        "oracles": _oracle_checks,
        "squares": _square_checks,
        "les": _les_checks,
    }
    names = list(suites) if config.suite == "all" else [config.suite]
    checks = []
    for name in names:
        checks.extend(suites[name](config))
    doc = verify_report(checks, config)
    out.write(canonical_json(doc) if config.fmt == "json"
              else render_verify(doc))
    return 0 if doc["passed"] else INPUT_ERROR


def main(argv=None):
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as err:
        # argparse uses 2 for usage problems, 0 for --help
        return USAGE_ERROR if err.code else 0
    config = RunConfig(args)
    commands = {
        "graph": cmd_graph,
        "cohomology": cmd_cohomology,
        "skein": cmd_skein,
        "verify": cmd_verify,
    }
    try:
        return commands[config.command](config, sys.stdout)
    except CliError as err:
        print(f"error: {err}", file=sys.stderr)
        return err.code
    except (AnalysisError, DiagramError, FixtureError, ReportError,
            ValueError) as err:
        print(f"error: {err}", file=sys.stderr)
        return INPUT_ERROR


if __name__ == "__main__":
    sys.exit(main())
