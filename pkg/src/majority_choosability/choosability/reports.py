"""Run reports and the base class of the ``majc`` subcommands."""

from __future__ import annotations

import logging
import sys
import time
from dataclasses import dataclass
from datetime import datetime
from typing import Any

from django.conf import settings
from django.core.management import BaseCommand
from django.utils import timezone

from .exceptions import InputError, MajorityColouringError, VerificationError
from .graphs import LazyGraph, ListSystem
from .renderers import render_json, write_document
from .schemas import REPORT_SCHEMA, validate_document
from .serializers import (
    GeneratorSpecSerializer,
    GraphSerializer,
    ListSystemSerializer,
    VertexSetSerializer,
    deserialize,
    read_json,
)
from .utils import config_hash

logger = logging.getLogger(__name__)

# Options every Django command has; they do not change what a run computes.
BASE_OPTIONS = frozenset(
    {"verbosity", "settings", "pythonpath", "traceback", "no_color", "force_color", "skip_checks"}
)


@dataclass(frozen=True)
class RunReport:
    command: dict
    config_hash: str
    outputs: dict
    started_at: datetime
    seconds: float
    checks: dict[str, bool]

    @property
    def passed(self) -> bool:
        return all(self.checks.values())

    @property
    def failed_checks(self) -> list[str]:
        return [name for name, ok in self.checks.items() if not ok]

    def as_dict(self) -> dict:
        return {
            "command": self.command,
            "configHash": self.config_hash,
            "outputs": self.outputs,
            "timing": {"startedAt": self.started_at.isoformat(), "seconds": self.seconds},
            "assertions": {"passed": self.passed, "checks": self.checks},
        }


class ReportCommand(BaseCommand):
    """A subcommand that computes outputs, checks assertions and writes a RunReport.

    Subclasses implement ``build_outputs()`` returning ``(outputs, checks)``. The report goes
    to stdout (or ``--report``); with ``--out`` the artifact (``outputs``, or
    ``outputs[artifact_key]``) is written to that file as well. A failed check raises a
    VerificationError after the report has been written.
    """

    requires_system_checks = []
    artifact_key: str | None = None
    artifact_schema: dict | None = None
    report: RunReport | None = None

    @property
    def command_name(self) -> str:
        return self.__module__.rsplit(".", 1)[-1].replace("_", "-")

    def add_arguments(self, parser):
        parser.add_argument("--out", help="Write the output document to this file.")
        parser.add_argument("--report", help="Write the run report to this file, not stdout.")
        self.add_command_arguments(parser)

    def add_command_arguments(self, parser):
        pass

    def add_seed_argument(self, parser):
        parser.add_argument(
            "--seed",
            type=int,
            default=settings.MAJC_SEED,
            help="Seed of every randomized choice (default: MAJC_SEED).",
        )

    def add_threads_argument(self, parser):
        parser.add_argument(
            "--threads",
            type=int,
            default=settings.MAJC_THREADS,
            help="Number of workers (default: MAJC_THREADS).",
        )

    def add_graph_arguments(self, parser, required=True):
        group = parser.add_mutually_exclusive_group(required=required)
        group.add_argument("--graph", help="Finite graph JSON file.")
        group.add_argument("--generator", help="Generator spec JSON file of a lazy graph.")

    # -- input documents

    def load(self, path, serializer_class, document: str):
        data = read_json(path, document)
        self.inputs[document] = data
        return deserialize(serializer_class, data, document)

    def load_graph(self, options) -> LazyGraph:
        if options.get("graph"):
            return self.load(options["graph"], GraphSerializer, "graph")
        return self.load(options["generator"], GeneratorSpecSerializer, "generator")

    def load_vertex_set(self, path, document: str) -> frozenset:
        if path is None:
            return frozenset()
        return self.load(path, VertexSetSerializer, document)

    def load_lists(self, path, default=None) -> ListSystem:
        if path is None:
            if default is None:
                raise InputError("A lists document is required.", code="missing_lists")
            return ListSystem(default=default)
        return self.load(path, ListSystemSerializer, "lists")

    # -- running

    def run_from_argv(self, argv):
        # Used by manage.py; the majc entry point handles errors itself.
        try:
            super().run_from_argv(argv)
        except MajorityColouringError as e:
            self.stderr.write(render_json(e.to_problem(instance=self.command_name)), ending="")
            sys.exit(e.status)

    def build_outputs(self, **options) -> tuple[dict, dict[str, bool]]:
        raise NotImplementedError

    def handle(self, *args: list[Any], **options: dict[str, Any]) -> None:  # noqa: D102
        self.inputs = {}
        started_at = timezone.now()
        start = time.perf_counter()
        outputs, checks = self.build_outputs(**options)
        seconds = round(time.perf_counter() - start, 6)

        command = {
            "name": self.command_name,
            "options": {k: v for k, v in sorted(options.items()) if k not in BASE_OPTIONS},
        }
        report = RunReport(
            command=command,
            config_hash=config_hash({"command": command, "inputs": self.inputs}),
            outputs=outputs,
            started_at=started_at,
            seconds=seconds,
            checks=checks,
        )
        document = report.as_dict()
        validate_document(document, REPORT_SCHEMA)

        if options.get("out"):
            artifact = outputs if self.artifact_key is None else outputs[self.artifact_key]
            if self.artifact_schema is not None:
                validate_document(artifact, self.artifact_schema)
            write_document(artifact, options["out"])
        write_document(document, options.get("report"), stdout=self.stdout)
        self.report = report

        logger.info(
            "Command %s finished in %.3fs, assertions %s",
            self.command_name,
            seconds,
            "passed" if report.passed else "failed",
        )
        if not report.passed:
            raise VerificationError(
                f"Assertions failed: {', '.join(report.failed_checks)}.",
                code="assertion_failed",
            )
