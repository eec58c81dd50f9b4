from pathlib import Path

from django.conf import settings

from majority_choosability.choosability.closure import (
    boundary_degree_check,
    closure,
    elimination_order,
    elimination_violation,
    is_closed,
    nbly,
)
from majority_choosability.choosability.exceptions import FileAccessError
from majority_choosability.choosability.graphs import FiniteGraph, induced_finite_subgraph
from majority_choosability.choosability.reports import ReportCommand
from majority_choosability.choosability.renderers import export_dot
from majority_choosability.choosability.utils import sorted_vertices


class Command(ReportCommand):  # noqa: D101
    help = """Compute the closure of a vertex set: the smallest superset in which every vertex
    outside still has a neighbour outside. Reports the stage trace, an elimination order of the
    boundary, and the boundary degree check.
    """  # noqa: A003

    def add_command_arguments(self, parser):
        self.add_graph_arguments(parser)
        parser.add_argument("--set", dest="vertex_set", required=True, help="Vertex set JSON.")
        parser.add_argument("--budget", type=int, help="Maximum number of closure vertices.")
        parser.add_argument(
            "--horizon",
            type=int,
            default=settings.MAJC_NEIGHBOUR_HORIZON,
            help="Neighbours scanned of an infinite-degree vertex.",
        )
        parser.add_argument("--dot", help="Also write the (induced) graph as DOT to this file.")

    def build_outputs(self, **options):
        graph = self.load_graph(options)
        A = self.load_vertex_set(options["vertex_set"], "set")
        budget, horizon = options["budget"], options["horizon"]

        closed, trace = closure(graph, A, budget=budget, horizon=horizon)
        order = elimination_order(graph, A, trace=trace)
        boundary = boundary_degree_check(graph, A, trace=trace)
        verdict = is_closed(graph, closed, horizon=horizon)
        violation = elimination_violation(graph, A, order)

        outputs = {
            "set": sorted_vertices(closed),
            "boundary": sorted_vertices(trace.boundary),
            "nbly": sorted_vertices(nbly(graph, A, horizon=horizon)),
            "trace": trace.as_dict(),
            "eliminationOrder": order.as_dict(),
            "boundaryCheck": boundary.as_dict(),
            "isClosed": {
                "closed": verdict.closed,
                "witness": verdict.witness,
                "exhaustive": verdict.exhaustive,
            },
        }
        checks = {
            "eliminationOrderValid": violation is None,
            "boundaryDegreeCheck": boundary.passed,
        }
        # A budget-truncated closure is not expected to be closed.
        if trace.complete:
            checks["closureIsClosed"] = verdict.closed

        if options["dot"]:
            dot_graph = (
                graph
                if isinstance(graph, FiniteGraph)
                else induced_finite_subgraph(graph, closed, horizon=horizon)
            )
            try:
                Path(options["dot"]).write_text(export_dot(dot_graph), encoding="utf-8")
            except OSError as e:
                raise FileAccessError(
                    f"Cannot write {options['dot']}: {e.strerror}", code="write_failed"
                ) from e
        return outputs, checks
