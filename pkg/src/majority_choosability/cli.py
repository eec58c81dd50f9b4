"""The ``majc`` front door: ``majc <subcommand> [options]``.

Every subcommand is a Django management command of this app, so ``./manage.py closure ...``
and ``majc closure ...`` behave the same.
"""

import logging
import os
import sys

SUBCOMMANDS = (
    "solve",
    "check-choosable",
    "closure",
    "saturate",
    "extend",
    "prefix",
    "disjointify",
    "sublists",
)

logger = logging.getLogger(__name__)


def setup() -> None:
    import django
    from django.apps import apps

    os.environ.setdefault("DJANGO_SETTINGS_MODULE", "majority_choosability.settings")
    if not apps.ready:
        django.setup()


def usage() -> str:
    return f"usage: majc {{{','.join(SUBCOMMANDS)}}} [options]; see majc <subcommand> --help"


def dispatch(argv):
    """Run one subcommand and return its RunReport.

    Raises a MajorityColouringError for anything that went wrong, usage errors included.
    """
    from django.core.management import CommandError, call_command, load_command_class

    from majority_choosability.choosability.exceptions import InputError

    if not argv or argv[0] not in SUBCOMMANDS:
        given = repr(argv[0]) if argv else "nothing"
        raise InputError(
            f"Unknown subcommand {given}. {usage()}",
            title="Invalid usage.",
            code="unknown_subcommand",
        )

    command = load_command_class("majority_choosability", argv[0].replace("-", "_"))
    try:
        call_command(command, *argv[1:])
    except CommandError as e:
        raise InputError(f"{argv[0]}: {e}", title="Invalid usage.", code="usage") from e
    return command.report


def main(argv=None) -> int:
    argv = sys.argv[1:] if argv is None else list(argv)
    if argv[:1] in (["-h"], ["--help"]):
        sys.stdout.write(usage() + "\n")
        return 0

    setup()
    from majority_choosability.choosability.exceptions import MajorityColouringError
    from majority_choosability.choosability.renderers import render_json

    try:
        dispatch(argv)
    except MajorityColouringError as e:
        logger.debug("majc %s failed", " ".join(argv[:1]), exc_info=True)
        sys.stderr.write(render_json(e.to_problem(instance=" ".join(argv[:1]) or None)))
        return e.status
    return 0


if __name__ == "__main__":
    sys.exit(main())
