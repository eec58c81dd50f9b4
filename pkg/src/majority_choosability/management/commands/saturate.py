from django.conf import settings

from majority_choosability.choosability.closure import SaturationStatus, is_saturated, saturate
from majority_choosability.choosability.reports import ReportCommand


class Command(ReportCommand):  # noqa: D101
    help = """Grow B into an A-saturated set B* (adding the whole neighbourhood outside A of every
    new member, round by round) up to a vertex budget, and check the saturation conditions on
    what was materialized. With --check, a given candidate B* is checked as-is.
    """  # noqa: A003

    def add_command_arguments(self, parser):
        self.add_graph_arguments(parser)
        parser.add_argument("--A", dest="A", help="Vertex set JSON of A (default: empty).")
        parser.add_argument("--B", dest="B", required=True, help="Vertex set JSON of B.")
        parser.add_argument("--budget", type=int, help="Maximum number of vertices of B*.")
        parser.add_argument(
            "--horizon",
            type=int,
            default=settings.MAJC_NEIGHBOUR_HORIZON,
            help="Neighbours scanned of an infinite-degree vertex.",
        )
        parser.add_argument("--check", help="Vertex set JSON of a candidate B* to check.")

    def build_outputs(self, **options):
        graph = self.load_graph(options)
        A = self.load_vertex_set(options["A"], "A")
        B = self.load_vertex_set(options["B"], "B")

        result = saturate(graph, A, B, budget=options["budget"])
        verdict = is_saturated(
            graph, A, result.b_star, horizon=options["horizon"], complete=result.complete
        )
        outputs = {"saturation": result.as_dict(), "verdict": verdict.as_dict()}
        checks = {
            "containsB": B <= result.b_star,
            "disjointFromA": not (A & result.b_star),
            "notViolated": verdict.status is not SaturationStatus.VIOLATED,
        }

        if options["check"]:
            candidate = self.load_vertex_set(options["check"], "check")
            outputs["check"] = is_saturated(
                graph, A, candidate, horizon=options["horizon"]
            ).as_dict()
        return outputs, checks
