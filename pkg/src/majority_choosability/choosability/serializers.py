"""Input documents: JSON files validated with DRF serializers and turned into domain objects."""

import json
from pathlib import Path

from rest_framework import serializers

from .exceptions import FileAccessError, InputError, raise_serializer_validation_error
from .generators import FAMILY_ALIASES, GENERATORS, GeneratedGraph, instantiate_generator
from .graphs import FiniteGraph, ListSystem, PartialColouring
from .solver import SolveInstance
from .streams import LazySet, LazySetFamily
from .utils import sorted_vertices, to_snake_case, to_snake_case_data

VertexField = serializers.CharField
ColourField = serializers.IntegerField


def snake_case_keys(data):
    """Snake-case the top-level keys only; nested mappings are keyed by vertex ids."""
    if isinstance(data, dict):
        return {to_snake_case(key): value for key, value in data.items()}
    return data


class GraphSerializer(serializers.Serializer):
    vertices = serializers.ListField(child=VertexField())
    edges = serializers.ListField(
        child=serializers.ListField(child=VertexField(), min_length=2, max_length=2),
        required=False,
        default=list,
    )
    allow_isolated = serializers.BooleanField(required=False, default=False)

    def to_internal_value(self, data):
        return super().to_internal_value(snake_case_keys(data))

    def to_representation(self, instance: FiniteGraph):
        data = {
            "vertices": list(instance.vertex_ids),
            "edges": [list(edge) for edge in instance.edges()],
        }
        if instance.allow_isolated:
            data["allowIsolated"] = True
        return data

    def create(self, validated_data) -> FiniteGraph:
        # GraphFormatError carries its own code (selfLoop, duplicateEdge, ...).
        return FiniteGraph(
            validated_data["vertices"],
            validated_data["edges"],
            allow_isolated=validated_data["allow_isolated"],
        )


class GeneratorSpecSerializer(serializers.Serializer):
    family = serializers.ChoiceField(choices=sorted(GENERATORS) + sorted(FAMILY_ALIASES))
    params = serializers.DictField(required=False, default=dict)
    seed = serializers.IntegerField(required=False, default=0)

    def to_internal_value(self, data):
        return super().to_internal_value(to_snake_case_data(data))

    def create(self, validated_data) -> GeneratedGraph:
        return instantiate_generator(validated_data)


class ColouringSerializer(serializers.Serializer):
    colouring = serializers.DictField(child=ColourField())

    def create(self, validated_data) -> PartialColouring:
        return PartialColouring(validated_data["colouring"])


class ListSystemSerializer(serializers.Serializer):
    lists = serializers.DictField(
        child=serializers.ListField(child=ColourField(), allow_empty=False),
        required=False,
        default=dict,
    )
    default = serializers.ListField(child=ColourField(), allow_empty=False, required=False)

    def validate(self, attrs):
        if not attrs["lists"] and "default" not in attrs:
            raise serializers.ValidationError("Give explicit lists, a default list, or both.")
        return attrs

    def create(self, validated_data) -> ListSystem:
        return ListSystem(validated_data["lists"], default=validated_data.get("default"))


class VertexSetSerializer(serializers.Serializer):
    vertices = serializers.ListField(child=VertexField())

    def to_internal_value(self, data):
        # A bare JSON array is accepted as well.
        if isinstance(data, list):
            data = {"vertices": data}
        return super().to_internal_value(data)

    def create(self, validated_data) -> frozenset:
        return frozenset(validated_data["vertices"])


class InstanceSerializer(serializers.Serializer):
    graph = GraphSerializer()
    frozen = serializers.DictField(child=ColourField(), required=False, default=dict)
    lists = serializers.DictField(child=serializers.ListField(child=ColourField()))
    free = serializers.ListField(child=VertexField(), required=False, default=list)
    b1 = VertexField(required=False, allow_null=True, default=None)
    c_x = ColourField(required=False, allow_null=True, default=None)

    def to_internal_value(self, data):
        return super().to_internal_value(snake_case_keys(data))

    def validate(self, attrs):
        if (attrs["b1"] is None) != (attrs["c_x"] is None):
            raise serializers.ValidationError("b1 and cX must be given together.")
        return attrs

    def create(self, validated_data) -> SolveInstance:
        graph = GraphSerializer().create(validated_data["graph"])
        return SolveInstance(
            graph=graph,
            frozen=PartialColouring(validated_data["frozen"]),
            lists=ListSystem(validated_data["lists"]),
            free=tuple(validated_data["free"]),
            b1=validated_data["b1"],
            c_x=validated_data["c_x"],
        )


class FamilyMemberSerializer(serializers.Serializer):
    name = serializers.CharField()
    kind = serializers.ChoiceField(choices=["naturals", "arithmetic", "explicit"])
    start = serializers.IntegerField(required=False, default=0)
    step = serializers.IntegerField(required=False, default=1)
    items = serializers.ListField(child=serializers.JSONField(), required=False, default=list)

    def create(self, validated_data) -> LazySet:
        name = validated_data["name"]
        match validated_data["kind"]:
            case "naturals":
                return LazySet.naturals(name)
            case "arithmetic":
                return LazySet.arithmetic(name, validated_data["start"], validated_data["step"])
            case _:
                return LazySet.explicit(name, validated_data["items"])


class FamilySerializer(serializers.Serializer):
    members = FamilyMemberSerializer(many=True, allow_empty=False)

    def create(self, validated_data) -> LazySetFamily:
        member = FamilyMemberSerializer()
        return LazySetFamily([member.create(data) for data in validated_data["members"]])


def parse_json(text: str, document: str = "input"):
    try:
        return json.loads(text)
    except json.JSONDecodeError as e:
        raise InputError(f"The {document} is not valid JSON: {e}", code="invalid_json") from e


def read_json(path, document: str | None = None):
    path = Path(path)
    try:
        text = path.read_text(encoding="utf-8")
    except OSError as e:
        raise FileAccessError(f"Cannot read {path}: {e.strerror}", code="read_failed") from e
    return parse_json(text, document or path.name)


def deserialize(serializer_class, data, document: str = "input"):
    """Validate ``data`` and build the domain object, raising an InputError when invalid."""
    serializer = serializer_class(data=data)
    if not serializer.is_valid():
        raise_serializer_validation_error(serializer, document)
    return serializer.save()


def parse_graph_json(text: str) -> FiniteGraph:
    return deserialize(GraphSerializer, parse_json(text, "graph"), "graph")


def serialize_graph(graph: FiniteGraph) -> dict:
    return GraphSerializer(graph).data


def serialize_lists(lists: ListSystem) -> dict:
    data = {"lists": lists.as_dict()}
    if lists.default is not None:
        data["default"] = sorted(lists.default)
    return data


def serialize_vertex_set(vertices) -> dict:
    return {"vertices": sorted_vertices(vertices)}
