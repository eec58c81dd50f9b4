"""JSON Schemas of the emitted documents; every document is validated before it is written."""

import jsonschema

from .exceptions import VerificationError

_counter = {"type": "integer", "minimum": 0}
_colouring = {"type": "object", "additionalProperties": {"type": "integer"}}

VERDICT_SCHEMA = {
    "type": "object",
    "required": ["verdict", "same", "diff"],
    "properties": {
        "verdict": {"enum": ["happy", "unhappy", "pending"]},
        "same": _counter,
        "diff": _counter,
        "guaranteedOpposite": _counter,
    },
    "additionalProperties": False,
}

CERTIFICATE_SCHEMA = {
    "$schema": "https://json-schema.org/draft/2020-12/schema",
    "title": "Prefix certificate",
    "type": "object",
    "required": [
        "version",
        "configHash",
        "x",
        "cX",
        "gxDiffersFromCx",
        "horizon",
        "prefix",
        "colouring",
        "sublists",
        "verdicts",
        "summary",
        "extraction",
        "instanceSizes",
        "stabilization",
    ],
    "properties": {
        "version": {"type": "string", "pattern": r"^\d+\.\d+\.\d+$"},
        "configHash": {"type": "string", "pattern": "^[0-9a-f]{64}$"},
        "x": {"type": "string"},
        "cX": {"type": "integer"},
        "gxDiffersFromCx": {"const": True},
        "horizon": {"type": "integer", "minimum": 1},
        "prefix": {"type": "array", "items": {"type": "string"}, "minItems": 1},
        "colouring": _colouring,
        "sublists": {
            "type": "object",
            "additionalProperties": {
                "type": "array",
                "items": {"type": "integer"},
                "minItems": 2,
                "maxItems": 2,
            },
        },
        "verdicts": {"type": "object", "additionalProperties": VERDICT_SCHEMA},
        "summary": {
            "type": "object",
            "required": ["happy", "unhappy", "pending"],
            "additionalProperties": _counter,
        },
        "extraction": {
            "type": "array",
            "items": {
                "type": "object",
                "required": ["vertex", "colour", "survivors", "maxIndex"],
            },
        },
        "instanceSizes": {"type": "array", "items": _counter},
        "stabilization": {
            "oneOf": [
                {"type": "null"},
                {
                    "type": "object",
                    "required": ["horizons", "identical", "firstDifference"],
                    "properties": {
                        "horizons": {"type": "array", "items": {"type": "integer"}},
                        "identical": {"type": "boolean"},
                        "firstDifference": {"type": ["integer", "null"]},
                    },
                },
            ]
        },
    },
}

REPORT_SCHEMA = {
    "$schema": "https://json-schema.org/draft/2020-12/schema",
    "title": "Run report",
    "type": "object",
    "required": ["command", "configHash", "outputs", "timing", "assertions"],
    "properties": {
        "command": {
            "type": "object",
            "required": ["name", "options"],
            "properties": {"name": {"type": "string"}, "options": {"type": "object"}},
        },
        "configHash": {"type": "string", "pattern": "^[0-9a-f]{64}$"},
        "outputs": {"type": "object"},
        "timing": {
            "type": "object",
            "required": ["seconds"],
            "properties": {
                "startedAt": {"type": "string"},
                "seconds": {"type": "number", "minimum": 0},
            },
        },
        "assertions": {
            "type": "object",
            "required": ["passed", "checks"],
            "properties": {
                "passed": {"type": "boolean"},
                "checks": {"type": "object", "additionalProperties": {"type": "boolean"}},
            },
        },
    },
}


def validate_document(document, schema) -> None:
    """Raise a VerificationError when an outgoing document does not match its schema."""
    try:
        jsonschema.validate(document, schema, cls=jsonschema.Draft202012Validator)
    except jsonschema.ValidationError as e:
        path = "/".join(str(part) for part in e.absolute_path)
        raise VerificationError(
            f"{schema.get('title', 'Document')} does not match its schema at '{path}': "
            f"{e.message}",
            code="schema_violation",
        ) from e
