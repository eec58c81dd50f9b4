from django.conf import settings

from majority_choosability.choosability.reports import ReportCommand
from majority_choosability.choosability.runner import RunConfig, run_prefix
from majority_choosability.choosability.schemas import CERTIFICATE_SCHEMA, validate_document
from majority_choosability.choosability.serializers import (
    ColouringSerializer,
    GeneratorSpecSerializer,
)

DEFAULT_LIST = (1, 2, 3)


class Command(ReportCommand):  # noqa: D101
    help = """Run the countable pipeline on a generated graph: pick 2-element sublists, solve the
    nested finite instances, extract a prefix colouring and certify happiness where the prefix
    decides it. The certificate is written to --out.
    """  # noqa: A003
    artifact_key = "certificate"
    artifact_schema = CERTIFICATE_SCHEMA

    def add_command_arguments(self, parser):
        parser.add_argument("--generator", required=True, help="Generator spec JSON file.")
        parser.add_argument("--A", dest="A", help="Vertex set JSON of a closed finite A.")
        parser.add_argument("--h", dest="h", help="Colouring JSON of A (default: lowest colour).")
        parser.add_argument("--lists", help="List system JSON (default: {1,2,3} everywhere).")
        parser.add_argument("--x", required=True, help="Vertex that may not get colour cX.")
        parser.add_argument("--cx", dest="c_x", type=int, required=True)
        parser.add_argument("--horizon", type=int, required=True, help="Number of instances N.")
        parser.add_argument("--prefix", type=int, required=True, help="Certified prefix size.")
        parser.add_argument("--compare-horizon", type=int, help="Second horizon to compare.")
        parser.add_argument(
            "--neighbour-horizon", type=int, default=settings.MAJC_NEIGHBOUR_HORIZON
        )
        parser.add_argument("--sublist-horizon", type=int, help="Default: the horizon.")
        parser.add_argument(
            "--a-closed-certified",
            action="store_true",
            help="Skip the closedness check of A, for a set that is closed by construction.",
        )
        self.add_threads_argument(parser)

    def build_outputs(self, **options):
        graph = self.load(options["generator"], GeneratorSpecSerializer, "generator")
        A = self.load_vertex_set(options["A"], "A")
        h = self.load(options["h"], ColouringSerializer, "h") if options["h"] else None
        config = RunConfig(
            graph=graph,
            lists=self.load_lists(options["lists"], default=DEFAULT_LIST),
            x=options["x"],
            c_x=options["c_x"],
            horizon=options["horizon"],
            prefix=options["prefix"],
            A=A,
            h=h,
            neighbour_horizon=options["neighbour_horizon"],
            sublist_horizon=options["sublist_horizon"],
            threads=options["threads"],
            a_closed_certified=options["a_closed_certified"],
        )
        certificate = run_prefix(
            config,
            compare_horizon=options["compare_horizon"],
            version=settings.MAJC_CERTIFICATE_VERSION,
        )
        document = certificate.as_dict()
        validate_document(document, CERTIFICATE_SCHEMA)

        checks = {
            "gxDiffersFromCx": certificate.gx_differs_from_cx,
            "noUnhappyCertified": certificate.summary()["unhappy"] == 0,
        }
        return {"certificate": document}, checks
