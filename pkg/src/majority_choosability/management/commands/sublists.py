from majority_choosability.choosability.graphs import ListSystem
from majority_choosability.choosability.reports import ReportCommand
from majority_choosability.choosability.runner import enumerate_B, tracked_set_name
from majority_choosability.choosability.serializers import GeneratorSpecSerializer
from majority_choosability.choosability.streams import (
    LazySet,
    LazySetFamily,
    SublistEngine,
    select_sublists,
)
from majority_choosability.choosability.utils import sorted_vertices

DEFAULT_LIST = (1, 2, 3)
SUBLIST_SIZE = 2


class Command(ReportCommand):  # noqa: D101
    help = """Choose 2-element sublists of 3-lists on a generated graph so that x loses colour cX
    and every tracked neighbourhood keeps losing every colour. The tracked neighbourhoods are
    those of --track, or of the vertices of infinite degree when omitted.
    """  # noqa: A003

    def add_command_arguments(self, parser):
        parser.add_argument("--generator", required=True, help="Generator spec JSON file.")
        parser.add_argument("--horizon", type=int, required=True, help="Triples processed.")
        parser.add_argument("--x", required=True, help="Vertex that loses colour cX.")
        parser.add_argument("--cx", dest="c_x", type=int, required=True)
        parser.add_argument("--lists", help="List system JSON (default: {1,2,3} everywhere).")
        parser.add_argument("--track", help="Vertex set JSON of neighbourhoods to track.")
        parser.add_argument(
            "--target",
            type=int,
            help="Also report the horizon at which every tracked pair reaches this coverage.",
        )
        parser.add_argument("--max-steps", type=int, default=100_000)

    def build_outputs(self, **options):
        graph = self.load(options["generator"], GeneratorSpecSerializer, "generator")
        lists: ListSystem = self.load_lists(options["lists"], default=DEFAULT_LIST)
        x, c_x = options["x"], options["c_x"]
        graph.require_vertex(x)
        if options["track"]:
            tracked = sorted_vertices(self.load_vertex_set(options["track"], "track"))
        else:
            tracked = graph.infinite_degree_vertices()

        def vertex_enum():
            return enumerate_B(graph, frozenset(), x)

        def family():
            return LazySetFamily(
                [
                    LazySet(tracked_set_name(v), lambda v=v: graph.neighbours(v), graph.degree(v))
                    for v in tracked
                ]
            )

        table = select_sublists(
            vertex_enum, family(), lists, x, c_x, SUBLIST_SIZE, options["horizon"]
        )
        l_prime_x = table.sublist(x)
        outputs = {"table": table.as_dict(), "sublistOfX": sorted(l_prime_x)}
        checks = {"xLosesCx": l_prime_x == lists[x] - {c_x}}

        if options["target"] is not None:
            horizons = {}
            for name in table.set_names:
                horizons[name] = {}
                for colour in table.colours:
                    engine = SublistEngine(vertex_enum, family(), lists, x, c_x, SUBLIST_SIZE)
                    horizons[name][str(colour)] = engine.horizon_for(
                        name, colour, options["target"], options["max_steps"]
                    )
            outputs["horizonsForTarget"] = horizons
        return outputs, checks
