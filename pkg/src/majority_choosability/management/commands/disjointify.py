from itertools import combinations

from django.conf import settings

from majority_choosability.choosability.reports import ReportCommand
from majority_choosability.choosability.serializers import FamilySerializer
from majority_choosability.choosability.streams import disjoint_refinement


class Command(ReportCommand):  # noqa: D101
    help = """Refine a finite family of countably infinite sets into pairwise disjoint infinite
    subsets, and list the first k elements of each.
    """  # noqa: A003

    def add_command_arguments(self, parser):
        parser.add_argument("--family", required=True, help="Family JSON file.")
        parser.add_argument("--k", type=int, default=100, help="Elements listed per member.")
        self.add_seed_argument(parser)

    def build_outputs(self, **options):
        family = self.load(options["family"], FamilySerializer, "family")
        refinement = disjoint_refinement(
            family,
            schedule_seed=options["seed"],
            step_budget_factor=settings.MAJC_STEP_BUDGET_FACTOR,
        )
        prefixes = refinement.prefixes(options["k"])

        # Every element was taken from its member's stream within the steps run so far.
        members = {member.name: member for member in family.members()}
        subset = all(
            set(elements) <= set(members[name].prefix(refinement.steps))
            for name, elements in prefixes.items()
        )
        disjoint = all(
            not set(prefixes[a]) & set(prefixes[b]) for a, b in combinations(prefixes, 2)
        )
        outputs = {
            "prefixes": prefixes,
            "steps": refinement.steps,
            "stepBudget": refinement.step_budget(0, options["k"]),
        }
        return outputs, {"pairwiseDisjoint": disjoint, "subsetRespecting": subset}
