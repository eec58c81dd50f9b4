from django.conf import settings

from majority_choosability.choosability.graphs import is_majority_colouring
from majority_choosability.choosability.reports import ReportCommand
from majority_choosability.choosability.serializers import InstanceSerializer
from majority_choosability.choosability.solver import exhaustive_max_cross, solve_finite


class Command(ReportCommand):  # noqa: D101
    help = """Solve a finite instance: colour the free vertices from their lists, keep the frozen
    part fixed, never give b1 the colour cX, and reach a locally maximal number of cross edges.
    Every free vertex is then happy.
    """  # noqa: A003

    def add_command_arguments(self, parser):
        parser.add_argument("--instance", required=True, help="Instance JSON file.")
        parser.add_argument(
            "--exhaustive",
            action="store_true",
            help="Also compute the global maximum of cross edges by enumeration.",
        )

    def build_outputs(self, **options):
        instance = self.load(options["instance"], InstanceSerializer, "instance")
        result = solve_finite(instance)
        happy, unhappy = is_majority_colouring(instance.graph, result.colouring, instance.free)
        outputs = {"result": result.as_dict(), "firstUnhappy": unhappy}
        checks = {"freeVerticesHappy": happy, "locallyOptimal": result.locally_optimal}

        if options["exhaustive"]:
            best = exhaustive_max_cross(instance, guard=settings.MAJC_ENUMERATION_GUARD)
            outputs["exhaustive"] = best.as_dict()
            checks["exhaustiveNotWorse"] = best.objective >= result.objective
        return outputs, checks
