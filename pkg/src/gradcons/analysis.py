"""Static conflict and dependency analysis against constraint patterns.

A constraint pattern C is read as the left side of a non-modifying check
rule (identity span, no application condition) whose matches are exactly
the occurrences of C. Whether a rewrite rule can interfere with such a
check reduces to enumerating overlaps:

* a conflict overlap glues the rule's lhs with C so that they share a
  deleted element; applying the rule there can destroy an occurrence;
* a dependency overlap glues the rule's rhs with C so that they share a
  created element; applying the rule there can enable a new occurrence.

Both directions filter out overlaps that no host can realize: a deleted
node may not touch an unidentified C edge (such a match would fail the
gluing condition), and symmetrically a created node may not touch an
unidentified C edge (the edge would have to exist before its endpoint
does). These filters are what make the counts agree with exhaustive
search.

On top of the raw overlaps sit decision procedures for the rule-level
classifications. For sustainment they are sound in both directions on
plain rules; rules with application conditions only ever get positive
proofs, never negative ones, because the overlap enumeration ignores
application conditions and may overapproximate. For improvement the
criteria are necessary conditions: when they fail, no improving
application exists anywhere.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterator

from .conditions import (
    Constraint,
    UNIVERSAL,
    extensions,
    validate_anf,
)
from .errors import UnsupportedShapeError
from .graphs import GraphMorphism, TypedGraph
from .rewriting import Rule, _fresh_id


@dataclass(frozen=True)
class Overlap:
    """One jointly surjective gluing of a rule side with a pattern.

    ``rule_injection`` embeds the rule's lhs (conflict) or rhs
    (dependency); ``pattern_injection`` embeds the constraint pattern.
    Every element of ``graph`` is hit by at least one of the two.
    """

    kind: str  # "conflict" or "dependency"
    graph: TypedGraph
    rule_injection: GraphMorphism
    pattern_injection: GraphMorphism

    def shared_rule_elements(self) -> tuple[frozenset[str], frozenset[str]]:
        """Rule-side node and edge ids glued onto pattern elements."""
        p_nodes = set(self.pattern_injection.node_map.values())
        p_edges = set(self.pattern_injection.edge_map.values())
        r = self.rule_injection
        return (
            frozenset(x for x, y in r.node_map.items() if y in p_nodes),
            frozenset(x for x, y in r.edge_map.items() if y in p_edges),
        )


def _injective_matchings(
    left: tuple[str, ...],
    right: tuple[str, ...],
    compatible,
) -> Iterator[dict[str, str]]:
    """All partial injective maps left -> right honoring ``compatible``."""

    def rec(i: int, used: set[str], acc: dict[str, str]) -> Iterator[dict[str, str]]:
        if i == len(left):
            yield dict(acc)
            return
        x = left[i]
        yield from rec(i + 1, used, acc)
        for y in right:
            if y in used or not compatible(x, y):
                continue
            acc[x] = y
            used.add(y)
            yield from rec(i + 1, used, acc)
            del acc[x]
            used.discard(y)

    yield from rec(0, set(), {})


def _gluings(
    side: TypedGraph, pattern: TypedGraph
) -> Iterator[tuple[dict[str, str], dict[str, str]]]:
    """All ways to identify parts of ``side`` with parts of ``pattern``.

    Yields (node identification, edge identification) pairs, side id to
    pattern id; edges may only be identified when their endpoints are.
    Distinct identifications give non-isomorphic cospans, so this already
    enumerates overlaps up to the relevant notion of equivalence.
    """

    def node_ok(x: str, y: str) -> bool:
        return side.node_type(x) == pattern.node_type(y)

    for node_pairs in _injective_matchings(side.node_ids, pattern.node_ids, node_ok):

        def edge_ok(e: str, f: str) -> bool:
            etype, es, et = side.edge_info(e)
            ftype, fs, ft = pattern.edge_info(f)
            return etype == ftype and node_pairs.get(es) == fs and node_pairs.get(et) == ft

        for edge_pairs in _injective_matchings(side.edge_ids, pattern.edge_ids, edge_ok):
            yield node_pairs, edge_pairs


def _build_overlap(
    kind: str,
    side: TypedGraph,
    pattern: TypedGraph,
    node_pairs: dict[str, str],
    edge_pairs: dict[str, str],
) -> Overlap:
    """Construct the glued graph with side ids kept verbatim and fresh ids
    for unidentified pattern elements."""
    identified_nodes = {y: x for x, y in node_pairs.items()}
    identified_edges = {y: x for x, y in edge_pairs.items()}
    taken = set(side.node_ids) | set(side.edge_ids)

    pattern_node_id: dict[str, str] = {}
    extra_nodes: list[tuple[str, str]] = []
    for y in pattern.node_ids:
        if y in identified_nodes:
            pattern_node_id[y] = identified_nodes[y]
        else:
            fresh = _fresh_id(y, taken)
            taken.add(fresh)
            pattern_node_id[y] = fresh
            extra_nodes.append((fresh, pattern.node_type(y)))

    pattern_edge_id: dict[str, str] = {}
    extra_edges: list[tuple[str, str, str, str]] = []
    for f in pattern.edge_ids:
        if f in identified_edges:
            pattern_edge_id[f] = identified_edges[f]
        else:
            fresh = _fresh_id(f, taken)
            taken.add(fresh)
            pattern_edge_id[f] = fresh
            ftype, fs, ft = pattern.edge_info(f)
            extra_edges.append((fresh, ftype, pattern_node_id[fs], pattern_node_id[ft]))

    glued = side.with_added(extra_nodes, extra_edges)
    rule_injection = GraphMorphism(
        side, glued,
        {n: n for n in side.node_ids},
        {e: e for e in side.edge_ids},
    )
    pattern_injection = GraphMorphism(pattern, glued, pattern_node_id, pattern_edge_id)
    return Overlap(kind, glued, rule_injection, pattern_injection)


def rule_conflicts_on_check(rule: Rule, pattern: TypedGraph) -> tuple[Overlap, ...]:
    """Overlaps where applying the rule damages an occurrence of ``pattern``.

    Requires a deleted element in the identification and rejects gluings
    whose deleted nodes touch an unidentified pattern edge (the match
    could never satisfy the gluing condition there).
    """
    deleted_nodes = set(rule.deleted_nodes)
    deleted_edges = set(rule.deleted_edges)
    found = []
    for node_pairs, edge_pairs in _gluings(rule.lhs, pattern):
        touches_deleted = any(x in deleted_nodes for x in node_pairs) or any(
            x in deleted_edges for x in edge_pairs
        )
        if not touches_deleted:
            continue
        if _unidentified_pattern_edge_at(
            pattern, node_pairs, edge_pairs, deleted_nodes
        ):
            continue
        found.append(_build_overlap("conflict", rule.lhs, pattern, node_pairs, edge_pairs))
    return tuple(found)


def check_depends_on_rule(rule: Rule, pattern: TypedGraph) -> tuple[Overlap, ...]:
    """Overlaps where applying the rule enables a new occurrence of
    ``pattern``: a created element is identified, and no created node
    touches an unidentified pattern edge (such an edge would need to
    predate its endpoint)."""
    created_nodes = set(rule.created_nodes)
    created_edges = set(rule.created_edges)
    found = []
    for node_pairs, edge_pairs in _gluings(rule.rhs, pattern):
        touches_created = any(x in created_nodes for x in node_pairs) or any(
            x in created_edges for x in edge_pairs
        )
        if not touches_created:
            continue
        if _unidentified_pattern_edge_at(
            pattern, node_pairs, edge_pairs, created_nodes
        ):
            continue
        found.append(_build_overlap("dependency", rule.rhs, pattern, node_pairs, edge_pairs))
    return tuple(found)


def _unidentified_pattern_edge_at(
    pattern: TypedGraph,
    node_pairs: dict[str, str],
    edge_pairs: dict[str, str],
    special_nodes: set[str],
) -> bool:
    """Does some pattern edge outside the identification touch the image
    of one of the given rule nodes?"""
    special_images = {node_pairs[x] for x in node_pairs if x in special_nodes}
    if not special_images:
        return False
    identified = set(edge_pairs.values())
    for f in pattern.edge_ids:
        if f in identified:
            continue
        _, fs, ft = pattern.edge_info(f)
        if fs in special_images or ft in special_images:
            return True
    return False


# --- rule-level criteria ------------------------------------------------------

PROVEN_DIRECTLY_SUSTAINING = "proven_directly_sustaining"
PROVEN_NOT_DIRECTLY_SUSTAINING = "proven_not_directly_sustaining"
INCONCLUSIVE = "inconclusive"
CONJECTURED_DIRECTLY_SUSTAINING = "conjectured_directly_sustaining"
CONJECTURED_INCONCLUSIVE = "conjectured_inconclusive"

NECESSARY_CONDITION_FAILS = "necessary_condition_fails"
NECESSARY_CONDITION_HOLDS = "necessary_condition_holds"
PROVEN_IMPROVING = "proven_improving"
CONJECTURED_NECESSARY_HOLDS = "conjectured_necessary_condition_holds"
CONJECTURED_NECESSARY_FAILS = "conjectured_necessary_condition_fails"


@dataclass(frozen=True)
class CriterionResult:
    """Outcome of a static criterion for one rule and constraint.

    Sustain verdicts speak about direct sustainment. The positive proof
    carries over to plain sustainment (direct implies plain), but the
    negative one does not: a rule that always creates a forbidden node,
    say, is never directly sustaining yet can be trivially sustaining
    when every applicable host already violates the constraint.
    Improvement verdicts are necessary conditions against plain
    improvement, hence also against direct improvement.
    """

    verdict: str
    rule_name: str
    constraint_name: str
    evidence: tuple[Overlap, ...] = ()
    notes: tuple[str, ...] = ()
    conjectured: bool = False

    @property
    def decisive(self) -> bool:
        return self.verdict in (
            PROVEN_DIRECTLY_SUSTAINING,
            PROVEN_NOT_DIRECTLY_SUSTAINING,
            NECESSARY_CONDITION_FAILS,
            PROVEN_IMPROVING,
        )


def _require_universal(rule: Rule, constraint: Constraint):
    shape = validate_anf(constraint)
    if shape.polarity != UNIVERSAL:
        raise UnsupportedShapeError(
            f"static criteria cover universal constraints; {constraint.name!r} is existential"
        )
    return shape


def criterion_direct_sustain(
    rule: Rule, constraint: Constraint, allow_conjecture: bool = False
) -> CriterionResult:
    """Decide or bound whether the rule directly sustains the constraint.

    Atomic negative constraints (no occurrence of C): direct sustainment
    holds exactly when the rule has no dependency overlap with C; the
    negative direction is only claimed for plain rules. Level-two universals
    (every C extends to C'): proven when the rule has no conflict overlap
    with C' and either no dependency overlap with C, or every dependency
    overlap already carries the required C' continuation. Deeper chains
    are available only behind ``allow_conjecture`` and come back marked
    as conjectured.
    """
    shape = _require_universal(rule, constraint)
    name = constraint.name

    if shape.level == 1 and shape.ends_with_false:
        deps = check_depends_on_rule(rule, shape.outer_graph)
        if not deps:
            return CriterionResult(PROVEN_DIRECTLY_SUSTAINING, rule.name, name,
                                   notes=("no dependency overlap with the forbidden pattern",))
        if rule.is_plain():
            return CriterionResult(
                PROVEN_NOT_DIRECTLY_SUSTAINING, rule.name, name, evidence=deps,
                notes=("each dependency overlap extends to a counterexample host",),
            )
        return CriterionResult(
            INCONCLUSIVE, rule.name, name, evidence=deps,
            notes=("dependency overlaps exist, but the application condition "
                   "may rule the enabling matches out",),
        )

    if shape.level == 2 and not shape.ends_with_false:
        witness = shape.witness_graph
        assert witness is not None
        conflicts = rule_conflicts_on_check(rule, witness)
        if conflicts:
            return CriterionResult(
                INCONCLUSIVE, rule.name, name, evidence=conflicts,
                notes=("the rule can damage required continuations",),
            )
        deps = check_depends_on_rule(rule, shape.outer_graph)
        if not deps:
            return CriterionResult(
                PROVEN_DIRECTLY_SUSTAINING, rule.name, name,
                notes=("no dependency overlap with the scope pattern and no "
                       "conflict overlap with its continuation",),
            )
        continuation = shape.chain[1][1]
        if all(extensions(ov.pattern_injection, continuation) for ov in deps):
            return CriterionResult(
                PROVEN_DIRECTLY_SUSTAINING, rule.name, name, evidence=deps,
                notes=("every dependency overlap already carries the required "
                       "continuation",),
            )
        return CriterionResult(
            INCONCLUSIVE, rule.name, name, evidence=deps,
            notes=("some enabled occurrence may lack its continuation",),
        )

    if shape.level == 3 and shape.ends_with_false:
        if not allow_conjecture:
            raise UnsupportedShapeError(
                "three-level chains are supported only in conjecture mode"
            )
        scope, witness, forbidden = (m.codomain for _, m in shape.chain)
        clear = (
            not check_depends_on_rule(rule, scope)
            and not rule_conflicts_on_check(rule, witness)
            and not check_depends_on_rule(rule, forbidden)
        )
        verdict = CONJECTURED_DIRECTLY_SUSTAINING if clear else CONJECTURED_INCONCLUSIVE
        return CriterionResult(
            verdict, rule.name, name, conjectured=True,
            notes=("three-level criterion is conjectured, not proven",),
        )

    raise UnsupportedShapeError(
        f"no static criterion for shape {shape.render()!r}"
    )


def criterion_direct_improve(
    rule: Rule,
    constraint: Constraint,
    sustain: CriterionResult | None = None,
    allow_conjecture: bool = False,
) -> CriterionResult:
    """Necessary conditions for the rule to admit improving applications.

    When the verdict is ``necessary_condition_fails`` no application of
    the rule anywhere improves consistency with respect to the
    constraint; that direction is sound unconditionally. The positive
    verdict ``proven_improving`` additionally requires direct
    sustainment (taken from ``sustain`` when supplied, computed
    otherwise) and a plain rule, and only atomic negative constraints
    reach it; elsewhere a holding necessary condition stays just that.
    """
    shape = _require_universal(rule, constraint)
    name = constraint.name

    if shape.level == 1 and shape.ends_with_false:
        conflicts = rule_conflicts_on_check(rule, shape.outer_graph)
        if not conflicts:
            return CriterionResult(
                NECESSARY_CONDITION_FAILS, rule.name, name,
                notes=("the rule cannot destroy occurrences of the forbidden "
                       "pattern, so no application lowers their count",),
            )
        if sustain is None:
            sustain = criterion_direct_sustain(rule, constraint)
        if sustain.verdict == PROVEN_DIRECTLY_SUSTAINING and rule.is_plain():
            return CriterionResult(
                PROVEN_IMPROVING, rule.name, name, evidence=conflicts,
                notes=("sustaining plus a realizable conflict overlap: some "
                       "application strictly lowers the violation count",),
            )
        return CriterionResult(
            NECESSARY_CONDITION_HOLDS, rule.name, name, evidence=conflicts,
            notes=("destruction is possible in principle; improvement is not "
                   "guaranteed",),
        )

    if shape.level == 2 and not shape.ends_with_false:
        conflicts = rule_conflicts_on_check(rule, shape.outer_graph)
        if conflicts:
            return CriterionResult(
                NECESSARY_CONDITION_HOLDS, rule.name, name, evidence=conflicts,
                notes=("the rule can destroy violating scope occurrences",),
            )
        continuation = shape.chain[1][1]
        witness = shape.witness_graph
        assert witness is not None
        repairs = tuple(
            ov for ov in check_depends_on_rule(rule, witness)
            if _created_part_outside_anchor(rule, continuation, ov)
        )
        if repairs:
            return CriterionResult(
                NECESSARY_CONDITION_HOLDS, rule.name, name, evidence=repairs,
                notes=("the rule can supply a missing continuation",),
            )
        return CriterionResult(
            NECESSARY_CONDITION_FAILS, rule.name, name,
            notes=("the rule can neither destroy violating occurrences nor "
                   "supply missing continuations",),
        )

    if shape.level == 3 and shape.ends_with_false:
        if not allow_conjecture:
            raise UnsupportedShapeError(
                "three-level chains are supported only in conjecture mode"
            )
        scope, witness, forbidden = (m.codomain for _, m in shape.chain)
        continuation = shape.chain[1][1]
        possible = (
            rule_conflicts_on_check(rule, scope)
            or tuple(
                ov for ov in check_depends_on_rule(rule, witness)
                if _created_part_outside_anchor(rule, continuation, ov)
            )
            or rule_conflicts_on_check(rule, forbidden)
        )
        verdict = CONJECTURED_NECESSARY_HOLDS if possible else CONJECTURED_NECESSARY_FAILS
        return CriterionResult(
            verdict, rule.name, name, conjectured=True,
            notes=("three-level criterion is conjectured, not proven",),
        )

    raise UnsupportedShapeError(
        f"no static criterion for shape {shape.render()!r}"
    )


def _created_part_outside_anchor(
    rule: Rule, continuation: GraphMorphism, overlap: Overlap
) -> bool:
    """A dependency overlap can repair a violating occurrence only when the
    created elements it shares all lie beyond the continuation's anchor
    image: the anchor part must come from the surviving host."""
    anchor_nodes = set(continuation.node_map.values())
    anchor_edges = set(continuation.edge_map.values())
    created_nodes = set(rule.created_nodes)
    created_edges = set(rule.created_edges)
    p = overlap.pattern_injection
    for y, aid in p.node_map.items():
        if aid in created_nodes and y in anchor_nodes:
            return False
    for y, aid in p.edge_map.items():
        if aid in created_edges and y in anchor_edges:
            return False
    return True


# --- independence tables ------------------------------------------------------

TABLE_GROUPS = ("seq_independent", "par_independent", "par_dependent", "seq_dependent")

_GROUP_COMPONENT = {
    "seq_independent": "scope",
    "par_independent": "continuation",
    "par_dependent": "scope",
    "seq_dependent": "continuation",
}
# Independence columns are positive when no overlap exists; dependence
# columns when at least one does.
_GROUP_POSITIVE_WHEN_EMPTY = {
    "seq_independent": True,
    "par_independent": True,
    "par_dependent": False,
    "seq_dependent": False,
}


@dataclass(frozen=True)
class IndependenceTable:
    """Overlap counts of rules against the component patterns of
    constraints, organized like a compatibility matrix.

    Keys are ``(rule name, group, constraint name)`` with group one of
    ``seq_independent`` (dependency overlaps on the scope pattern),
    ``par_independent`` (conflict overlaps on the continuation pattern),
    ``par_dependent`` (conflicts on the scope), ``seq_dependent``
    (dependencies on the continuation). Continuation columns exist only
    for constraints of nesting level two or deeper.
    """

    rule_names: tuple[str, ...]
    constraint_names: tuple[str, ...]
    columns: tuple[tuple[str, str], ...]  # (group, constraint name)
    counts: dict[tuple[str, str, str], int]

    def sign(self, rule_name: str, group: str, constraint_name: str) -> str:
        count = self.counts[(rule_name, group, constraint_name)]
        positive = (count == 0) == _GROUP_POSITIVE_WHEN_EMPTY[group]
        return "+" if positive else "-"

    def to_dict(self) -> dict:
        cells = {}
        for (rule_name, group, cname), count in sorted(self.counts.items()):
            cells[f"{rule_name}|{group}|{cname}"] = {
                "overlaps": count,
                "sign": self.sign(rule_name, group, cname),
            }
        return {
            "rules": list(self.rule_names),
            "constraints": list(self.constraint_names),
            "cells": cells,
        }

    def render_text(self) -> str:
        headers = ["rule"]
        for group, cname in self.columns:
            headers.append(f"{group[:3]}:{cname}.{_GROUP_COMPONENT[group][:4]}")
        widths = [max(len(h), 12) for h in headers]
        widths[0] = max(len(r) for r in ("rule", *self.rule_names))
        lines = ["  ".join(h.ljust(w) for h, w in zip(headers, widths))]
        for rule_name in self.rule_names:
            row = [rule_name.ljust(widths[0])]
            for (group, cname), w in zip(self.columns, widths[1:]):
                row.append(self.sign(rule_name, group, cname).ljust(w))
            lines.append("  ".join(row).rstrip())
        return "\n".join(lines)


def independence_table(rules, constraints) -> IndependenceTable:
    """Tabulate all four overlap relations for the given rules against the
    component patterns of the given constraints."""
    shapes = {}
    for c in constraints:
        shapes[c.name] = validate_anf(c)

    columns: list[tuple[str, str]] = []
    for group in TABLE_GROUPS:
        for c in constraints:
            if _GROUP_COMPONENT[group] == "continuation" and shapes[c.name].witness_graph is None:
                continue
            columns.append((group, c.name))

    counts: dict[tuple[str, str, str], int] = {}
    for rule in rules:
        for group, cname in columns:
            shape = shapes[cname]
            if _GROUP_COMPONENT[group] == "scope":
                pattern = shape.outer_graph
            else:
                pattern = shape.witness_graph
            if group in ("seq_independent", "seq_dependent"):
                overlaps = check_depends_on_rule(rule, pattern)
            else:
                overlaps = rule_conflicts_on_check(rule, pattern)
            counts[(rule.name, group, cname)] = len(overlaps)

    return IndependenceTable(
        rule_names=tuple(r.name for r in rules),
        constraint_names=tuple(c.name for c in constraints),
        columns=tuple(columns),
        counts=counts,
    )
