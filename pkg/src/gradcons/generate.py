"""Seeded random generators for hosts, rules, and linear constraints.

All generators take an explicit :class:`random.Random` so callers control
reproducibility; everything else they touch is deterministic. Generated
graphs are simple (at most one edge per type and endpoint pair) because
the bounded search universes are, and a pattern with parallel edges could
never match inside them.
"""

from __future__ import annotations

import random

from .conditions import TRUE, Condition, Constraint, Exists, Not, forall
from .graphs import TypeGraph, TypedGraph, empty_graph, empty_morphism_into, inclusion
from .rewriting import Rule


def random_host(
    tg: TypeGraph,
    rng: random.Random,
    n_nodes: int,
    edge_probability: float = 0.3,
) -> TypedGraph:
    """A random simple typed host: uniform node types, independent edges."""
    types = sorted(tg.node_types)
    nodes = [(f"n{i}", rng.choice(types)) for i in range(n_nodes)]
    by_type: dict[str, list[str]] = {}
    for nid, t in nodes:
        by_type.setdefault(t, []).append(nid)
    edges = []
    serial = 0
    for etype, (src_t, tgt_t) in sorted(tg.edge_types.items()):
        for s in by_type.get(src_t, ()):
            for t2 in by_type.get(tgt_t, ()):
                if rng.random() < edge_probability:
                    edges.append((f"e{serial}", etype, s, t2))
                    serial += 1
    return TypedGraph(tg, nodes, edges)


def random_type_graph(
    rng: random.Random,
    max_node_types: int = 3,
    max_edge_types: int = 3,
    allow_loops: bool = True,
) -> TypeGraph:
    lowest = 1 if allow_loops else 2  # a loop-free type graph needs two node types
    n = rng.randint(lowest, max(lowest, max_node_types))
    node_types = [f"T{i}" for i in range(n)]
    edge_types = []
    for i in range(rng.randint(1, max_edge_types)):
        while True:
            src = rng.choice(node_types)
            tgt = rng.choice(node_types)
            if allow_loops or src != tgt:
                break
        edge_types.append((f"r{i}", src, tgt))
    return TypeGraph(node_types, edge_types)


def _free_slots(graph: TypedGraph, tg: TypeGraph) -> list[tuple[str, str, str]]:
    slots = []
    for etype, (src_t, tgt_t) in sorted(tg.edge_types.items()):
        for s in graph.nodes_of_type(src_t):
            for t2 in graph.nodes_of_type(tgt_t):
                if not graph.edges_with_signature(etype, s, t2):
                    slots.append((etype, s, t2))
    return slots


def _sprinkle_edges(
    graph: TypedGraph,
    rng: random.Random,
    probability: float,
    prefix: str,
    start: int = 0,
) -> TypedGraph:
    """Fill free edge slots independently with the given probability."""
    edges = []
    serial = start
    for etype, s, t2 in _free_slots(graph, graph.type_graph):
        if rng.random() < probability:
            edges.append((f"{prefix}{serial}", etype, s, t2))
            serial += 1
    return graph.with_added([], edges)


def random_graph(
    tg: TypeGraph,
    rng: random.Random,
    max_nodes: int = 3,
    min_nodes: int = 1,
    edge_probability: float = 0.4,
    id_prefix: str = "x",
) -> TypedGraph:
    types = sorted(tg.node_types)
    n = rng.randint(min_nodes, max_nodes)
    g = TypedGraph(tg, [(f"{id_prefix}{i}", rng.choice(types)) for i in range(n)])
    return _sprinkle_edges(g, rng, edge_probability, f"{id_prefix}e")


def random_rule(
    tg: TypeGraph,
    rng: random.Random,
    name: str,
    max_interface_nodes: int = 2,
    max_deleted_nodes: int = 1,
    max_created_nodes: int = 2,
    edge_probability: float = 0.35,
    nac_probability: float = 0.2,
    deleted_edges_need_deleted_endpoint: bool = False,
) -> Rule:
    """A random rule built as interface plus deleted and created parts.

    Interface elements keep their ids on both sides; deleted and created
    parts use disjoint id prefixes so the side overlap is exactly the
    interface. With ``nac_probability`` the rule gets one negative
    application condition, a forbidden extension of the lhs by an extra
    edge (and possibly an extra node). When
    ``deleted_edges_need_deleted_endpoint`` is set, every deleted edge is
    incident to a deleted node; deleting an edge between two preserved
    nodes is then never generated.
    """
    types = sorted(tg.node_types)
    interface = TypedGraph(
        tg, [(f"k{i}", rng.choice(types)) for i in range(rng.randint(0, max_interface_nodes))]
    )
    interface = _sprinkle_edges(interface, rng, edge_probability, "ke")

    lhs = interface.with_added(
        [(f"d{i}", rng.choice(types)) for i in range(rng.randint(0, max_deleted_nodes))]
    )
    deleted_node_ids = {n for n in lhs.node_ids if n.startswith("d")}
    lhs_edges = []
    for etype, s, t2 in _free_slots(lhs, tg):
        if deleted_edges_need_deleted_endpoint and not (
            s in deleted_node_ids or t2 in deleted_node_ids
        ):
            continue
        if rng.random() < edge_probability:
            lhs_edges.append((f"de{len(lhs_edges)}", etype, s, t2))
    lhs = lhs.with_added([], lhs_edges)

    rhs = interface.with_added(
        [(f"m{i}", rng.choice(types)) for i in range(rng.randint(0, max_created_nodes))]
    )
    rhs = _sprinkle_edges(rhs, rng, edge_probability, "me")

    condition: Condition = TRUE
    if rng.random() < nac_probability:
        forbidden = _random_forbidden_extension(lhs, rng)
        if forbidden is not None:
            condition = Not(Exists(inclusion(lhs, forbidden)))
    return Rule(name, lhs, interface, rhs, condition)


def _random_forbidden_extension(lhs: TypedGraph, rng: random.Random) -> TypedGraph | None:
    """Extend the lhs by one edge, adding a node first when necessary."""
    tg = lhs.type_graph
    extended = lhs
    if not _free_slots(extended, tg) or rng.random() < 0.5:
        types = sorted(tg.node_types)
        extended = extended.with_added([("nac_n0", rng.choice(types))])
    slots = _free_slots(extended, tg)
    if not slots:
        return None
    etype, s, t2 = rng.choice(slots)
    return extended.with_added([], [("nac_e0", etype, s, t2)])


def random_linear_constraint(
    tg: TypeGraph,
    rng: random.Random,
    name: str,
    max_level: int = 2,
    max_outer_nodes: int = 3,
    max_growth: int = 2,
) -> Constraint:
    """A random linear constraint in alternating form.

    The chain starts from a nonempty outer pattern and extends it
    strictly, one level at a time; the first quantifier is chosen at
    random and the rest alternate. A chain ending in a universal level
    ends with false, as the normal form requires.
    """
    level = rng.randint(1, max_level)
    graphs = [random_graph(tg, rng, max_nodes=max_outer_nodes, id_prefix="q0_")]
    for i in range(1, level):
        base = graphs[-1]
        grown = base.with_added(
            [(f"q{i}_{j}", rng.choice(sorted(tg.node_types)))
             for j in range(rng.randint(1, max_growth))]
        )
        grown = _sprinkle_edges(grown, rng, 0.5, f"q{i}_e")
        if grown.node_count == base.node_count and grown.edge_count == base.edge_count:
            grown = grown.with_added([(f"q{i}_extra", rng.choice(sorted(tg.node_types)))])
        graphs.append(grown)

    first = rng.choice(("exists", "forall"))
    quantifiers = [first]
    for _ in range(1, level):
        quantifiers.append("forall" if quantifiers[-1] == "exists" else "exists")

    condition: Condition = TRUE
    for i in reversed(range(level)):
        anchor = empty_graph(tg) if i == 0 else graphs[i - 1]
        morphism = (
            empty_morphism_into(graphs[0]) if i == 0 else inclusion(anchor, graphs[i])
        )
        if quantifiers[i] == "exists":
            condition = Exists(morphism, condition)
        else:
            condition = forall(morphism, Not(condition) if i == level - 1 else condition)
    return Constraint(name, condition)


def random_atomic_negative_constraint(
    tg: TypeGraph,
    rng: random.Random,
    name: str,
    max_nodes: int = 3,
) -> Constraint:
    pattern = random_graph(tg, rng, max_nodes=max_nodes, id_prefix="q0_")
    return Constraint(name, Not(Exists(empty_morphism_into(pattern))))


def random_analysis_pair(rng: random.Random, index: int = 0) -> tuple[Rule, Constraint]:
    """A (plain rule, atomic negative constraint) pair for cross-checking
    the static dependency criterion against exhaustive bounded search.

    The shapes are restricted so that whenever the static analysis finds a
    dependency, a counterexample host with at most four nodes exists in
    the simple-graph universe: the type graph is loop-free, at most one
    node is deleted, deleted edges always lose an endpoint, and the rhs
    stays at two nodes when a node is deleted (three otherwise).
    """
    tg = random_type_graph(rng, max_node_types=2, max_edge_types=2, allow_loops=False)
    deleting = rng.random() < 0.5
    rule = random_rule(
        tg,
        rng,
        name=f"probe{index}",
        max_interface_nodes=1 if deleting else 2,
        max_deleted_nodes=1 if deleting else 0,
        max_created_nodes=1,
        nac_probability=0.0,
        deleted_edges_need_deleted_endpoint=True,
    )
    constraint = random_atomic_negative_constraint(tg, rng, f"forbid{index}")
    return rule, constraint
