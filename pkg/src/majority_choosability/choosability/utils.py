import hashlib
import json
import re

SNAKE_REGEX = re.compile("(?<=[a-z])([A-Z])")
DIGITS_REGEX = re.compile(r"(\d+)")


def vertex_sort_key(vertex: str) -> tuple:
    """Natural ordering of vertex identifiers, so ``v2`` sorts before ``v10``.

    This is the "vertex-id order" used for every tie-break in the package.
    """
    parts = DIGITS_REGEX.split(vertex)
    # Alternating text/number chunks; numbers compare numerically.
    return tuple((0, int(part), "") if part.isdigit() else (1, 0, part) for part in parts)


def sorted_vertices(vertices) -> list[str]:
    return sorted(vertices, key=vertex_sort_key)


def to_camel_case(snake_str):
    """Simple to-camel-case, taken from DRF."""
    components = snake_str.split("_")
    return components[0] + "".join(x.title() for x in components[1:])


def to_snake_case_data(data):
    if isinstance(data, dict):
        return {to_snake_case(k): to_snake_case_data(v) for k, v in data.items()}
    elif isinstance(data, list):
        return [to_snake_case_data(datum) for datum in data]
    else:
        return data


def match_snake(match):
    return f"_{match.group(1).lower()}"


def to_snake_case(text):
    return SNAKE_REGEX.sub(match_snake, text)


def canonical_json(data) -> str:
    """JSON text that is byte-identical across platforms for identical data."""
    return json.dumps(data, sort_keys=True, separators=(",", ":"), ensure_ascii=True)


def config_hash(data) -> str:
    return hashlib.sha256(canonical_json(data).encode("ascii")).hexdigest()
