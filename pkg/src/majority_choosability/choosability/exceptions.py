from __future__ import annotations

from .utils import to_camel_case

EXIT_VERIFICATION_FAILED = 1
EXIT_USAGE = 2
EXIT_IO = 3

EXIT_CODE_TITLES = {
    EXIT_VERIFICATION_FAILED: "Verification failed.",
    EXIT_USAGE: "Invalid input or usage.",
    EXIT_IO: "File could not be read or written.",
}


class MajorityColouringError(Exception):
    """Error that dictates exactly how the problem document on stderr looks like.

    The ``status`` doubles as the process exit code of the CLI.
    """

    status = EXIT_VERIFICATION_FAILED
    default_code = "error"

    def __init__(self, detail, title=None, code=None, invalid_params=None):
        super().__init__(detail)
        self.detail = detail
        self.title = title or EXIT_CODE_TITLES[self.status]
        self.code = code or self.default_code
        self.invalid_params = invalid_params

    def to_problem(self, instance=None) -> dict:
        problem = {
            "type": type(self).__name__,
            "title": str(self.title),
            "status": int(self.status),
            "detail": self.detail if isinstance(self.detail, list | dict) else str(self.detail),
            "code": to_camel_case(str(self.code)),  # self_loop -> selfLoop
            "instance": instance,
        }
        if self.invalid_params is not None:
            problem["invalidParams"] = self.invalid_params
        return problem


class InputError(MajorityColouringError):
    status = EXIT_USAGE
    default_code = "invalid_input"


class GraphFormatError(InputError):
    default_code = "invalid_graph"


class PreconditionError(MajorityColouringError):
    status = EXIT_USAGE
    default_code = "precondition"


class VertexNotColouredError(PreconditionError):
    default_code = "vertex_not_coloured"


class HorizonRequiredError(PreconditionError):
    default_code = "horizon_required"


class PartialColouringError(PreconditionError):
    default_code = "partial_colouring"


class GuardExceededError(PreconditionError):
    default_code = "guard_exceeded"


class ListSizeError(PreconditionError):
    default_code = "list_size"


class HypothesisError(MajorityColouringError):
    """A hypothesis the construction depends on does not hold for the input."""

    default_code = "hypothesis_violated"


class VerificationError(MajorityColouringError):
    default_code = "verification_failed"


class StreamStalledError(MajorityColouringError):
    default_code = "stream_stalled"


class FileAccessError(MajorityColouringError):
    status = EXIT_IO
    default_code = "file_access"


def raise_serializer_validation_error(serializer, document="input"):
    invalid_params = []
    for field_name, errors in serializer.errors.items():
        for err in errors if isinstance(errors, list) else [errors]:
            invalid_params.append(
                {
                    "name": field_name,
                    "code": to_camel_case(str(getattr(err, "code", "invalid"))),
                    "reason": str(err),
                }
            )

    raise InputError(
        title="Invalid input document.",
        detail=f"The {document} could not be understood due to malformed content. "
        "Do not repeat the command without modification.",
        code=invalid_params[0]["code"] if invalid_params else None,
        invalid_params=invalid_params,
    )
