from django.conf import settings

from majority_choosability.choosability.reports import ReportCommand
from majority_choosability.choosability.serializers import GraphSerializer
from majority_choosability.choosability.solver import majority_choosable_oracle


class Command(ReportCommand):  # noqa: D101
    help = """Check whether a finite graph is majority l-choosable: every system of l-lists
    from the palette (all of them up to renaming colours, or a seeded sample) must admit a
    majority colouring. The first failing list system is reported as witness.
    """  # noqa: A003

    def add_command_arguments(self, parser):
        parser.add_argument("--graph", required=True, help="Finite graph JSON file.")
        parser.add_argument("--l", dest="ell", type=int, default=2, help="List size.")
        parser.add_argument("--mode", choices=["exhaustive", "sampled"], default="exhaustive")
        parser.add_argument("--samples", type=int, default=1000)
        parser.add_argument(
            "--palette",
            type=int,
            default=settings.MAJC_PALETTE_SIZE,
            help="Number of colours to draw lists from (default: MAJC_PALETTE_SIZE).",
        )
        parser.add_argument(
            "--expect",
            choices=["choosable", "not-choosable", "any"],
            default="choosable",
            help="Verdict the run asserts.",
        )
        self.add_seed_argument(parser)
        self.add_threads_argument(parser)

    def build_outputs(self, **options):
        graph = self.load(options["graph"], GraphSerializer, "graph")
        verdict = majority_choosable_oracle(
            graph,
            options["ell"],
            options["palette"],
            mode=options["mode"],
            samples=options["samples"],
            seed=options["seed"],
            guard=settings.MAJC_ENUMERATION_GUARD,
            workers=options["threads"],
        )
        expected = {"choosable": True, "not-choosable": False}.get(options["expect"])
        checks = {}
        if expected is not None:
            checks["verdictAsExpected"] = verdict.choosable is expected
        return {"verdict": verdict.as_dict()}, checks
