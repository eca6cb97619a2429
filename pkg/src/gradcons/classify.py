"""Classifying transformation steps and rules against linear constraints.

A step verdict records six boolean classifications. Four of them compare
consistency measurements of host and result: preserving (satisfaction is
not lost), guaranteeing (the result satisfies the constraint), sustaining
(the consistency index does not drop), improving (sustaining, with strictly
fewer violating occurrences than the host had). The two "direct" variants
look at individual occurrences instead of aggregate counts: a step is
directly sustaining when no surviving valid occurrence turns invalid and
every genuinely new occurrence is valid, and directly improving when it is
directly sustaining, the host was inconsistent, and at least one violating
occurrence is repaired or destroyed. For existential constraints the direct
notions degenerate to preserving resp. preserving-plus-guaranteeing on an
inconsistent host.

Rule-level classification here is empirical: exhaustive search over all
hosts up to a node bound (one representative per isomorphism class) plus a
seeded sample of larger random hosts. Negative verdicts are decisive and
ship a replayable counterexample step; positive ones are bounded evidence.
"""

from __future__ import annotations

import itertools
import random
from dataclasses import dataclass, field
from functools import lru_cache

from .conditions import (
    EXISTENTIAL,
    UNIVERSAL,
    ConsistencyReport,
    Constraint,
    consistency_report,
    satisfies,
    validate_anf,
)
from .errors import BoundError
from .generate import random_host
from .graphs import GraphMorphism, TypeGraph, TypedGraph, compose, enumerate_monomorphisms
from .rewriting import Rule, Transformation, apply, find_matches


@dataclass(frozen=True)
class StepVerdict:
    """All six step classifications plus the measurements and witnesses.

    ``evidence`` maps labels (``invalidated_occurrence``,
    ``new_violating_occurrence``, ``repaired_occurrence``,
    ``destroyed_occurrence``) to the occurrence morphisms that decided the
    direct classifications.
    """

    constraint_name: str
    preserving: bool
    guaranteeing: bool
    sustaining: bool
    improving: bool
    directly_sustaining: bool
    directly_improving: bool
    report_before: ConsistencyReport
    report_after: ConsistencyReport
    evidence: dict[str, GraphMorphism] = field(default_factory=dict)


def _lands_in_context(p: GraphMorphism, t: Transformation) -> bool:
    # The track morphism is the partial identity on the context, so
    # composing with it is total exactly when the occurrence factors
    # through the context (the surviving part of the host).
    return all(t.context.has_node(v) for v in p.node_map.values()) and all(
        t.context.has_edge(e) for e in p.edge_map.values()
    )


def classify_step(
    t: Transformation,
    constraint: Constraint,
    report_before: ConsistencyReport | None = None,
) -> StepVerdict:
    """Classify one step against an ANF constraint.

    ``report_before`` may carry a precomputed measurement of the host to
    avoid recomputation in scans; passing it never changes the outcome.
    """
    shape = validate_anf(constraint)
    before = report_before if report_before is not None else consistency_report(t.host, constraint)
    after = consistency_report(t.result, constraint)

    preserving = after.satisfied or not before.satisfied
    guaranteeing = after.satisfied
    sustaining = before.ci <= after.ci
    improving = sustaining and before.ncv > 0 and before.ncv > after.ncv
    evidence: dict[str, GraphMorphism] = {}

    if shape.polarity == EXISTENTIAL:
        directly_sustaining = preserving
        directly_improving = directly_sustaining and not before.satisfied and guaranteeing
    else:
        # Stored universal form is Not(Exists(a, negated_body)); an
        # occurrence violates exactly when it satisfies negated_body.
        negated_body = constraint.condition.sub.sub  # type: ignore[union-attr]
        outer = shape.outer_graph
        occurrences_before = enumerate_monomorphisms(outer, t.host)
        occurrences_after = enumerate_monomorphisms(outer, t.result)

        directly_sustaining = True
        for p in occurrences_before:
            if satisfies(p, negated_body):
                continue  # already violating; no obligation
            if not _lands_in_context(p, t):
                continue  # destroyed occurrences carry no obligation
            tracked = compose(p, t.track)
            if satisfies(tracked, negated_body):
                directly_sustaining = False
                evidence["invalidated_occurrence"] = p
                break
        if directly_sustaining:
            for q in occurrences_after:
                if _lands_in_context(q, t):
                    continue  # image of a host occurrence, not new
                if satisfies(q, negated_body):
                    directly_sustaining = False
                    evidence["new_violating_occurrence"] = q
                    break

        directly_improving = False
        if directly_sustaining and not before.satisfied:
            for p in before.violating_occurrences:
                if not _lands_in_context(p, t):
                    directly_improving = True
                    evidence["destroyed_occurrence"] = p
                    break
                tracked = compose(p, t.track)
                if not satisfies(tracked, negated_body):
                    directly_improving = True
                    evidence["repaired_occurrence"] = p
                    break

    return StepVerdict(
        constraint_name=constraint.name,
        preserving=preserving,
        guaranteeing=guaranteeing,
        sustaining=sustaining,
        improving=improving,
        directly_sustaining=directly_sustaining,
        directly_improving=directly_improving,
        report_before=before,
        report_after=after,
        evidence=evidence,
    )


# --- bounded host universes --------------------------------------------------

# Refuse universes whose enumeration would be unreasonably expensive in
# pure Python; the acceptance workloads stay far below this.
_MAX_UNIVERSE_WORK = 60_000_000


def _count_vectors(total: int, k: int):
    if k == 0:
        if total == 0:
            yield ()
        return
    for head in range(total + 1):
        for rest in _count_vectors(total - head, k - 1):
            yield (head, *rest)


def _hosts_for_split(tg: TypeGraph, types: tuple[str, ...], counts: tuple[int, ...]):
    node_ids_by_type = {
        t: tuple(f"{t}{i}" for i in range(c)) for t, c in zip(types, counts)
    }
    nodes = [(nid, t) for t in types for nid in node_ids_by_type[t]]

    slots: list[tuple[str, str, str]] = []
    for etype, (src_t, tgt_t) in sorted(tg.edge_types.items()):
        for s in node_ids_by_type[src_t]:
            for t2 in node_ids_by_type[tgt_t]:
                slots.append((etype, s, t2))
    n_slots = len(slots)
    slot_index = {slot: i for i, slot in enumerate(slots)}

    per_type_perms = [
        list(itertools.permutations(node_ids_by_type[t])) for t in types
    ]
    n_perms = 1
    for p in per_type_perms:
        n_perms *= len(p)
    if (2 ** n_slots) * max(1, n_perms) > _MAX_UNIVERSE_WORK:
        raise ValueError(
            f"host universe too large to enumerate (split {counts}, {n_slots} edge slots); "
            "lower the bound"
        )
    seen_mappings: set[tuple[int, ...]] = set()
    for combo in itertools.product(*per_type_perms):
        node_map = {}
        for t, perm in zip(types, combo):
            for orig, img in zip(node_ids_by_type[t], perm):
                node_map[orig] = img
        mapping = tuple(
            slot_index[(etype, node_map[s], node_map[t2])] for etype, s, t2 in slots
        )
        if mapping != tuple(range(n_slots)):
            seen_mappings.add(mapping)
    perms = sorted(seen_mappings)

    for mask in range(2 ** n_slots):
        # Keep only the minimal representative of each isomorphism orbit:
        # masks are compared numerically under every type-preserving
        # node permutation.
        canonical = True
        for mapping in perms:
            permuted = 0
            m = mask
            while m:
                low = m & -m
                permuted |= 1 << mapping[low.bit_length() - 1]
                m ^= low
            if permuted < mask:
                canonical = False
                break
        if not canonical:
            continue
        edges = []
        serial = 0
        for i in range(n_slots):
            if mask >> i & 1:
                etype, s, t2 = slots[i]
                edges.append((f"e{serial}", etype, s, t2))
                serial += 1
        yield TypedGraph(tg, nodes, edges)


def _bounded_hosts_key(tg: TypeGraph, max_nodes: int, mins: tuple[tuple[str, int], ...]):
    return (tg, max_nodes, mins)


@lru_cache(maxsize=32)
def _bounded_hosts_cached(tg: TypeGraph, max_nodes: int, mins: tuple[tuple[str, int], ...]):
    types = tuple(sorted(tg.node_types))
    min_by_type = dict(mins)
    hosts: list[TypedGraph] = []
    for total in range(max_nodes + 1):
        for counts in _count_vectors(total, len(types)):
            if any(counts[i] < min_by_type.get(types[i], 0) for i in range(len(types))):
                continue
            hosts.extend(_hosts_for_split(tg, types, counts))
    return tuple(hosts)


def bounded_hosts(
    tg: TypeGraph,
    max_nodes: int,
    min_nodes_by_type: dict[str, int] | None = None,
) -> tuple[TypedGraph, ...]:
    """Every simple typed graph with at most ``max_nodes`` nodes, one
    representative per isomorphism class, in a fixed canonical order.

    "Simple" means at most one edge per (type, source, target) triple;
    the rewriting engine itself has no such restriction. Splits with fewer
    nodes of some type than ``min_nodes_by_type`` demands are skipped
    (used to prune hosts that cannot contain a match anyway).
    """
    mins = tuple(sorted((min_nodes_by_type or {}).items()))
    return _bounded_hosts_cached(tg, max_nodes, mins)


# --- empirical rule classification -------------------------------------------

PROVEN_NO = "proven_no"
NO_COUNTEREXAMPLE = "no_counterexample_found"
WITNESS_FOUND = "witness_found"
NO_WITNESS = "no_witness_found"

UNIVERSAL_CLAIMS = (
    "preserving",
    "guaranteeing",
    "sustaining",
    "directly_sustaining",
    "strongly_improving",
)
WITNESS_CLAIMS = ("improving", "directly_improving")


@dataclass(frozen=True)
class ClaimResult:
    """Outcome of one rule-level claim search.

    For universal claims the step (if any) is the canonically smallest
    counterexample; for witness claims it is the first witness found. Both
    replay: re-running apply + classify_step on the stored host and match
    reproduces the verdict.
    """

    claim: str
    status: str
    transformation: Transformation | None = None
    step_verdict: StepVerdict | None = None


@dataclass(frozen=True)
class RuleClassification:
    rule_name: str
    constraint_name: str
    bound: int
    samples: int
    seed: int
    hosts_examined: int
    steps_examined: int
    claims: dict[str, ClaimResult]

    def claim(self, name: str) -> ClaimResult:
        return self.claims[name]


def classify_rule_empirical(
    rule: Rule,
    constraint: Constraint,
    bound: int = 4,
    samples: int = 200,
    seed: int = 1,
) -> RuleClassification:
    """Search for counterexamples and witnesses over a bounded universe.

    Exhausts all hosts up to ``bound`` nodes (up to renaming), then tries
    ``samples`` random larger hosts from a generator seeded with ``seed``.
    The five universal claims come back ``proven_no`` with a counterexample
    step or ``no_counterexample_found``; the improving-witness claims come
    back ``witness_found`` or ``no_witness_found``. ``strongly_improving``
    quantifies only over hosts that actually violate the constraint.
    """
    if bound < rule.lhs.node_count:
        raise BoundError(
            f"bound {bound} is below the {rule.lhs.node_count} nodes of the lhs of {rule.name!r}"
        )
    tg = rule.lhs.type_graph
    needed: dict[str, int] = {}
    for v in rule.lhs.node_ids:
        t = rule.lhs.node_type(v)
        needed[t] = needed.get(t, 0) + 1
    exhaustive = bounded_hosts(tg, bound, needed)

    rng = random.Random(seed)
    sampled = [
        random_host(tg, rng, rng.randint(bound + 1, bound + 3), rng.uniform(0.1, 0.5))
        for _ in range(samples)
    ]

    counterexamples: dict[str, tuple[Transformation, StepVerdict]] = {}
    witnesses: dict[str, tuple[Transformation, StepVerdict]] = {}
    hosts_examined = 0
    steps_examined = 0
    for host in itertools.chain(exhaustive, sampled):
        hosts_examined += 1
        matches = find_matches(rule, host)
        if not matches:
            continue
        before = consistency_report(host, constraint)
        for m in matches:
            t = apply(rule, host, m)
            verdict = classify_step(t, constraint, report_before=before)
            steps_examined += 1
            failed = {
                "preserving": not verdict.preserving,
                "guaranteeing": not verdict.guaranteeing,
                "sustaining": not verdict.sustaining,
                "directly_sustaining": not verdict.directly_sustaining,
                "strongly_improving": before.ncv > 0 and not verdict.improving,
            }
            for claim, bad in failed.items():
                if bad and claim not in counterexamples:
                    counterexamples[claim] = (t, verdict)
            if verdict.improving and "improving" not in witnesses:
                witnesses["improving"] = (t, verdict)
            if verdict.directly_improving and "directly_improving" not in witnesses:
                witnesses["directly_improving"] = (t, verdict)
    if steps_examined == 0:
        raise BoundError(
            f"bound {bound} admits no match of rule {rule.name!r} in the searched universe"
        )

    claims: dict[str, ClaimResult] = {}
    for claim in UNIVERSAL_CLAIMS:
        if claim in counterexamples:
            t, v = counterexamples[claim]
            claims[claim] = ClaimResult(claim, PROVEN_NO, t, v)
        else:
            claims[claim] = ClaimResult(claim, NO_COUNTEREXAMPLE)
    for claim in WITNESS_CLAIMS:
        if claim in witnesses:
            t, v = witnesses[claim]
            claims[claim] = ClaimResult(claim, WITNESS_FOUND, t, v)
        else:
            claims[claim] = ClaimResult(claim, NO_WITNESS)

    return RuleClassification(
        rule_name=rule.name,
        constraint_name=constraint.name,
        bound=bound,
        samples=samples,
        seed=seed,
        hosts_examined=hosts_examined,
        steps_examined=steps_examined,
        claims=claims,
    )
