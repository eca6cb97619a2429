"""JSON document formats for graphs, rules, and constraints.

Emitters produce canonical text: object keys sorted, element lists sorted
by id, two-space indent, trailing newline. Parsing accepts sugar that the
canonical form never uses (a ``forall`` node, a ``false`` node) and
desugars it on load, so ``parse(emit(x)) == x`` and canonical files
re-emit byte for byte.

Condition morphisms are serialized as the extended graph only, with the
anchor's elements repeated under the same ids; only id-preserving
(inclusion) chains can be written out. Parse errors are collected and
raised together as :class:`DocumentError`.
"""

from __future__ import annotations

import json
from typing import Any, Mapping

from .conditions import (
    TRUE,
    And,
    Condition,
    Constraint,
    Exists,
    Not,
    TrueCondition,
    forall,
    negate,
)
from .errors import DocumentError, MismatchError
from .graphs import TypeGraph, TypedGraph, empty_graph, inclusion, validate_graph
from .rewriting import Rule

GRAPH_FORMAT = "gradcons/graph@1"
RULE_FORMAT = "gradcons/rule@1"
CONSTRAINT_FORMAT = "gradcons/constraint@1"
CONSTRAINTS_FORMAT = "gradcons/constraints@1"


def _load(document: str | Mapping[str, Any], problems: list[str]) -> dict:
    if isinstance(document, Mapping):
        return dict(document)
    try:
        value = json.loads(document)
    except json.JSONDecodeError as exc:
        problems.append(f"not valid JSON: {exc}")
        return {}
    if not isinstance(value, dict):
        problems.append("top level is not an object")
        return {}
    return value


def _check_format(doc: dict, expected: str, problems: list[str]) -> None:
    found = doc.get("format")
    if found != expected:
        problems.append(f"expected format {expected!r}, found {found!r}")


def _finish(problems: list[str]) -> None:
    if problems:
        raise DocumentError(problems)


# --- type graphs --------------------------------------------------------------


def parse_type_graph(part: Any, problems: list[str]) -> TypeGraph | None:
    if not isinstance(part, dict):
        problems.append("type_graph is not an object")
        return None
    node_types = part.get("node_types")
    if not isinstance(node_types, list) or not all(isinstance(t, str) for t in node_types):
        problems.append("type_graph.node_types must be a list of strings")
        return None
    edge_types = []
    for i, entry in enumerate(part.get("edge_types", [])):
        if not isinstance(entry, dict) or not {"name", "src", "tgt"} <= entry.keys():
            problems.append(f"type_graph.edge_types[{i}] must have name, src, tgt")
            continue
        edge_types.append((entry["name"], entry["src"], entry["tgt"]))
    try:
        return TypeGraph(node_types, edge_types)
    except ValueError as exc:
        problems.append(f"type_graph: {exc}")
        return None


def emit_type_graph(tg: TypeGraph) -> dict:
    return {
        "node_types": sorted(tg.node_types),
        "edge_types": [
            {"name": name, "src": src, "tgt": tgt}
            for name, (src, tgt) in sorted(tg.edge_types.items())
        ],
    }


# --- graph parts --------------------------------------------------------------


def _parse_graph_part(
    part: Any, tg: TypeGraph, where: str, problems: list[str]
) -> TypedGraph:
    nodes: list[tuple[str, str]] = []
    edges: list[tuple[str, str, str, str]] = []
    if not isinstance(part, dict):
        problems.append(f"{where} is not an object")
        return empty_graph(tg)
    for i, entry in enumerate(part.get("nodes", [])):
        if not isinstance(entry, dict) or not {"id", "type"} <= entry.keys():
            problems.append(f"{where}.nodes[{i}] must have id and type")
            continue
        nodes.append((entry["id"], entry["type"]))
    for i, entry in enumerate(part.get("edges", [])):
        if not isinstance(entry, dict) or not {"id", "type", "src", "tgt"} <= entry.keys():
            problems.append(f"{where}.edges[{i}] must have id, type, src, tgt")
            continue
        edges.append((entry["id"], entry["type"], entry["src"], entry["tgt"]))
    try:
        graph = TypedGraph(tg, nodes, edges)
    except ValueError as exc:
        problems.append(f"{where}: {exc}")
        return empty_graph(tg)
    for message in validate_graph(graph):
        problems.append(f"{where}: {message}")
    return graph


def _emit_graph_part(graph: TypedGraph) -> dict:
    return {
        "nodes": [{"id": nid, "type": t} for nid, t in graph.node_items()],
        "edges": [
            {"id": eid, "type": t, "src": s, "tgt": tt}
            for eid, t, s, tt in graph.edge_items()
        ],
    }


def parse_graph_document(document: str | Mapping[str, Any]) -> TypedGraph:
    problems: list[str] = []
    doc = _load(document, problems)
    _check_format(doc, GRAPH_FORMAT, problems)
    tg = parse_type_graph(doc.get("type_graph"), problems)
    if tg is None:
        _finish(problems)
        raise AssertionError("unreachable")
    graph = _parse_graph_part(doc.get("graph"), tg, "graph", problems)
    _finish(problems)
    return graph


def emit_graph_document(graph: TypedGraph) -> str:
    doc = {
        "format": GRAPH_FORMAT,
        "type_graph": emit_type_graph(graph.type_graph),
        "graph": _emit_graph_part(graph),
    }
    return json.dumps(doc, indent=2, sort_keys=True) + "\n"


# --- conditions ---------------------------------------------------------------


def _parse_condition(
    part: Any, tg: TypeGraph, anchor: TypedGraph, where: str, problems: list[str]
) -> Condition:
    if not isinstance(part, dict) or "kind" not in part:
        problems.append(f"{where} must be an object with a kind")
        return TRUE
    kind = part["kind"]
    if kind == "true":
        return TRUE
    if kind == "false":
        return Not(TRUE)
    if kind in ("exists", "forall"):
        extended = _parse_graph_part(part.get("graph"), tg, f"{where}.graph", problems)
        try:
            morphism = inclusion(anchor, extended)
        except MismatchError as exc:
            problems.append(f"{where}: extended graph does not contain its anchor: {exc}")
            return TRUE
        sub_part = part.get("sub", {"kind": "true"})
        sub = _parse_condition(sub_part, tg, extended, f"{where}.sub", problems)
        try:
            if kind == "exists":
                return Exists(morphism, sub)
            return forall(morphism, sub)
        except MismatchError as exc:
            problems.append(f"{where}: {exc}")
            return TRUE
    if kind == "not":
        return Not(_parse_condition(part.get("sub"), tg, anchor, f"{where}.sub", problems))
    if kind == "and":
        return And(
            _parse_condition(part.get("left"), tg, anchor, f"{where}.left", problems),
            _parse_condition(part.get("right"), tg, anchor, f"{where}.right", problems),
        )
    problems.append(f"{where}: unknown condition kind {kind!r}")
    return TRUE


def _emit_condition(condition: Condition, where: str = "condition") -> dict:
    if isinstance(condition, TrueCondition):
        return {"kind": "true"}
    if isinstance(condition, Not):
        inner = condition.sub
        if isinstance(inner, TrueCondition):
            return {"kind": "false"}
        if isinstance(inner, Exists):
            # Re-sugar genuine universals; a plain forbidden pattern
            # (negated existential with a trivial body) reads better as-is.
            if isinstance(inner.sub, TrueCondition):
                return {"kind": "not", "sub": _emit_condition(inner, f"{where}.sub")}
            _require_id_preserving(inner.morphism, where)
            return {
                "kind": "forall",
                "graph": _emit_graph_part(inner.morphism.codomain),
                "sub": _emit_condition(negate(inner.sub), f"{where}.sub"),
            }
        return {"kind": "not", "sub": _emit_condition(inner, f"{where}.sub")}
    if isinstance(condition, Exists):
        _require_id_preserving(condition.morphism, where)
        return {
            "kind": "exists",
            "graph": _emit_graph_part(condition.morphism.codomain),
            "sub": _emit_condition(condition.sub, f"{where}.sub"),
        }
    if isinstance(condition, And):
        return {
            "kind": "and",
            "left": _emit_condition(condition.left, f"{where}.left"),
            "right": _emit_condition(condition.right, f"{where}.right"),
        }
    raise DocumentError([f"{where}: cannot serialize condition node {type(condition).__name__}"])


def _require_id_preserving(morphism, where: str) -> None:
    if any(x != y for x, y in morphism.node_map.items()) or any(
        x != y for x, y in morphism.edge_map.items()
    ):
        raise DocumentError(
            [f"{where}: only id-preserving condition chains can be serialized"]
        )


# --- constraints --------------------------------------------------------------


def parse_constraint_document(document: str | Mapping[str, Any]) -> Constraint:
    problems: list[str] = []
    doc = _load(document, problems)
    _check_format(doc, CONSTRAINT_FORMAT, problems)
    tg = parse_type_graph(doc.get("type_graph"), problems)
    name = doc.get("name")
    if not isinstance(name, str) or not name:
        problems.append("constraint name must be a nonempty string")
        name = "unnamed"
    if tg is None:
        _finish(problems)
        raise AssertionError("unreachable")
    condition = _parse_condition(
        doc.get("condition"), tg, empty_graph(tg), "condition", problems
    )
    _finish(problems)
    return Constraint(name, condition)


def emit_constraint_document(constraint: Constraint) -> str:
    tg = constraint.type_graph
    if tg is None:
        raise DocumentError(["constraint mentions no graphs; nothing to serialize"])
    doc = {
        "format": CONSTRAINT_FORMAT,
        "name": constraint.name,
        "type_graph": emit_type_graph(tg),
        "condition": _emit_condition(constraint.condition),
    }
    return json.dumps(doc, indent=2, sort_keys=True) + "\n"


def parse_constraints_library(document: str | Mapping[str, Any]) -> list[Constraint]:
    problems: list[str] = []
    doc = _load(document, problems)
    _check_format(doc, CONSTRAINTS_FORMAT, problems)
    tg = parse_type_graph(doc.get("type_graph"), problems)
    if tg is None:
        _finish(problems)
        raise AssertionError("unreachable")
    out = []
    entries = doc.get("constraints")
    if not isinstance(entries, list):
        problems.append("constraints must be a list")
        entries = []
    for i, entry in enumerate(entries):
        if not isinstance(entry, dict) or "name" not in entry:
            problems.append(f"constraints[{i}] must be an object with a name")
            continue
        condition = _parse_condition(
            entry.get("condition"), tg, empty_graph(tg), f"constraints[{i}].condition", problems
        )
        out.append(Constraint(entry["name"], condition))
    _finish(problems)
    return out


def emit_constraints_library(tg: TypeGraph, constraints: list[Constraint]) -> str:
    doc = {
        "format": CONSTRAINTS_FORMAT,
        "type_graph": emit_type_graph(tg),
        "constraints": [
            {"name": c.name, "condition": _emit_condition(c.condition)}
            for c in sorted(constraints, key=lambda c: c.name)
        ],
    }
    return json.dumps(doc, indent=2, sort_keys=True) + "\n"


# --- rules --------------------------------------------------------------------


def parse_rule_document(document: str | Mapping[str, Any]) -> Rule:
    problems: list[str] = []
    doc = _load(document, problems)
    _check_format(doc, RULE_FORMAT, problems)
    tg = parse_type_graph(doc.get("type_graph"), problems)
    name = doc.get("name")
    if not isinstance(name, str) or not name:
        problems.append("rule name must be a nonempty string")
        name = "unnamed"
    if tg is None:
        _finish(problems)
        raise AssertionError("unreachable")
    lhs = _parse_graph_part(doc.get("lhs"), tg, "lhs", problems)
    interface = _parse_graph_part(doc.get("interface"), tg, "interface", problems)
    rhs = _parse_graph_part(doc.get("rhs"), tg, "rhs", problems)
    condition: Condition = TRUE
    if "application_condition" in doc:
        condition = _parse_condition(
            doc["application_condition"], tg, lhs, "application_condition", problems
        )
    _finish(problems)
    try:
        return Rule(name, lhs, interface, rhs, condition)
    except Exception as exc:
        raise DocumentError([str(exc)])


def emit_rule_document(rule: Rule) -> str:
    doc = {
        "format": RULE_FORMAT,
        "name": rule.name,
        "type_graph": emit_type_graph(rule.lhs.type_graph),
        "lhs": _emit_graph_part(rule.lhs),
        "interface": _emit_graph_part(rule.interface),
        "rhs": _emit_graph_part(rule.rhs),
    }
    if not rule.is_plain():
        doc["application_condition"] = _emit_condition(rule.condition, "application_condition")
    return json.dumps(doc, indent=2, sort_keys=True) + "\n"
