from pathlib import Path

from rest_framework.renderers import JSONRenderer

from .exceptions import FileAccessError
from .graphs import FiniteGraph, PartialColouring

# Graphviz X11 colour names, cycled for colours beyond the list.
DOT_COLOURS = (
    "red",
    "blue",
    "green",
    "orange",
    "purple",
    "gold",
    "cyan",
    "magenta",
    "brown",
    "gray",
)


class DocumentJSONRenderer(JSONRenderer):
    """Stable, indented JSON for artifact files."""

    media_type = "application/json"
    compact = False

    def render(self, data, accepted_media_type=None, renderer_context=None):
        renderer_context = {"indent": 2, **(renderer_context or {})}
        return super().render(data, accepted_media_type, renderer_context)


def render_json(data) -> str:
    return DocumentJSONRenderer().render(data).decode("utf-8") + "\n"


def write_document(data, path=None, stdout=None) -> str:
    """Render ``data`` and write it to ``path``, or to ``stdout`` when no path is given."""
    text = render_json(data)
    if path is None:
        if stdout is not None:
            stdout.write(text, ending="")
        return text
    try:
        Path(path).write_text(text, encoding="utf-8")
    except OSError as e:
        raise FileAccessError(f"Cannot write {path}: {e.strerror}", code="write_failed") from e
    return text


def _quote(identifier: str) -> str:
    return '"' + identifier.replace("\\", "\\\\").replace('"', '\\"') + '"'


def export_dot(graph: FiniteGraph, colouring: PartialColouring | None = None, name="G") -> str:
    """Undirected DOT text, nodes and edges in vertex-id order."""
    lines = [f"graph {name} {{", "  node [shape=circle, style=filled, fillcolor=white];"]
    for v in graph.vertex_ids:
        attributes = [f"label={_quote(v)}"]
        if colouring is not None and v in colouring:
            colour = colouring[v]
            attributes = [
                f"label={_quote(f'{v}: {colour}')}",
                f"color={DOT_COLOURS[(colour - 1) % len(DOT_COLOURS)]}",
            ]
        lines.append(f"  {_quote(v)} [{', '.join(attributes)}];")
    for u, v in graph.edges():
        lines.append(f"  {_quote(u)} -- {_quote(v)};")
    lines.append("}")
    return "\n".join(lines) + "\n"
