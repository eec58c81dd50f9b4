from django.conf import settings

from majority_choosability.choosability.extension import (
    audit_extension,
    extend_over_boundary,
    plan_extension,
)
from majority_choosability.choosability.reports import ReportCommand
from majority_choosability.choosability.serializers import ColouringSerializer, GraphSerializer
from majority_choosability.choosability.utils import sorted_vertices


class Command(ReportCommand):  # noqa: D101
    help = """Extend a colouring of A and B* over the boundary of their closure, vertex by
    vertex in elimination order, choosing from 3-lists a colour that keeps the vertex happy
    and differs from the colour of the B' member it witnesses for.

    Without --A the base colouring's domain is A; without --b-star, B* is the rest of the
    base colouring's domain.
    """  # noqa: A003

    def add_command_arguments(self, parser):
        parser.add_argument("--graph", required=True, help="Finite graph JSON file.")
        parser.add_argument("--base", required=True, help="Colouring JSON of A and B*.")
        parser.add_argument("--lists", required=True, help="List system JSON file.")
        parser.add_argument("--A", dest="A", help="Vertex set JSON of A.")
        parser.add_argument("--b-star", dest="b_star", help="Vertex set JSON of B*.")
        parser.add_argument(
            "--horizon",
            type=int,
            default=settings.MAJC_NEIGHBOUR_HORIZON,
            help="Neighbours scanned of an infinite-degree vertex.",
        )

    def build_outputs(self, **options):
        graph = self.load(options["graph"], GraphSerializer, "graph")
        base = self.load(options["base"], ColouringSerializer, "base")
        lists = self.load_lists(options["lists"])
        A = self.load_vertex_set(options["A"], "A") if options["A"] else base.domain
        if options["b_star"]:
            b_star = self.load_vertex_set(options["b_star"], "b_star")
        else:
            b_star = base.domain - A

        plan = plan_extension(graph, A, b_star, base, lists, horizon=options["horizon"])
        result = extend_over_boundary(plan)
        audit = audit_extension(graph, plan, result)
        outputs = {
            "A": sorted_vertices(plan.A),
            "bStar": sorted_vertices(plan.b_star),
            "eliminationOrder": plan.order.as_dict(),
            "bPrime": sorted_vertices(plan.b_prime.members),
            "witnesses": plan.family.as_dict(),
            "extension": result.as_dict(),
            "audit": audit.as_dict(),
        }
        checks = {
            "boundaryHappy": all(audit.boundary_happy.values()),
            "auditPassed": audit.passed,
        }
        return outputs, checks
