"""Typed multigraphs, graph morphisms, and injective pattern matching.

Every node and edge carries a stable opaque string id. All constructions
downstream (rewriting, gluing, tracking) follow elements by id; nothing is
ever re-identified structurally. Parallel edges are permitted: two edges of
the same type between the same nodes are distinct elements.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable, Iterator, Mapping

from .errors import MismatchError


class TypeGraph:
    """The shared vocabulary: node types plus directed, typed edge types.

    ``edge_types`` maps each edge type name to its (source type, target type)
    signature. Type names are unique across both kinds.
    """

    __slots__ = ("_node_types", "_edge_types")

    def __init__(
        self,
        node_types: Iterable[str],
        edge_types: Mapping[str, tuple[str, str]] | Iterable[tuple[str, str, str]] = (),
    ):
        nts = tuple(node_types)
        if len(set(nts)) != len(nts):
            raise ValueError("duplicate node type name")
        if isinstance(edge_types, Mapping):
            ets = {name: (src, tgt) for name, (src, tgt) in edge_types.items()}
        else:
            ets = {}
            for name, src, tgt in edge_types:
                if name in ets:
                    raise ValueError(f"duplicate edge type name {name!r}")
                ets[name] = (src, tgt)
        overlap = set(nts) & set(ets)
        if overlap:
            raise ValueError(f"type names used for both nodes and edges: {sorted(overlap)}")
        for name, (src, tgt) in ets.items():
            if src not in nts or tgt not in nts:
                raise ValueError(f"edge type {name!r} references unknown node type")
        self._node_types = frozenset(nts)
        self._edge_types = dict(sorted(ets.items()))

    @property
    def node_types(self) -> frozenset[str]:
        return self._node_types

    @property
    def edge_types(self) -> dict[str, tuple[str, str]]:
        return dict(self._edge_types)

    def signature(self, edge_type: str) -> tuple[str, str]:
        return self._edge_types[edge_type]

    def __eq__(self, other: object) -> bool:
        if self is other:
            return True
        if not isinstance(other, TypeGraph):
            return NotImplemented
        return self._node_types == other._node_types and self._edge_types == other._edge_types

    def __hash__(self) -> int:
        return hash((self._node_types, tuple(self._edge_types.items())))

    def __repr__(self) -> str:
        return f"TypeGraph(node_types={sorted(self._node_types)}, edge_types={self._edge_types})"


class TypedGraph:
    """A finite directed multigraph typed over a :class:`TypeGraph`.

    ``nodes`` is an iterable of ``(id, type)`` pairs, ``edges`` of
    ``(id, type, source id, target id)`` tuples. Construction only rejects
    duplicate ids; full typing is checked by :func:`validate_graph` so that
    broken inputs (e.g. from files) can still be represented and reported on.
    Instances are immutable by convention: no method mutates, derived graphs
    are new objects.
    """

    __slots__ = (
        "_type_graph", "_nodes", "_edges", "_node_ids", "_edge_ids",
        "_by_type", "_triples", "_incident", "_degrees",
    )

    def __init__(
        self,
        type_graph: TypeGraph,
        nodes: Iterable[tuple[str, str]] = (),
        edges: Iterable[tuple[str, str, str, str]] = (),
    ):
        self._type_graph = type_graph
        self._nodes: dict[str, str] = {}
        for nid, ntype in nodes:
            if nid in self._nodes:
                raise ValueError(f"duplicate node id {nid!r}")
            self._nodes[nid] = ntype
        self._edges: dict[str, tuple[str, str, str]] = {}
        for eid, etype, src, tgt in edges:
            if eid in self._edges or eid in self._nodes:
                raise ValueError(f"duplicate element id {eid!r}")
            self._edges[eid] = (etype, src, tgt)
        self._node_ids = tuple(sorted(self._nodes))
        self._edge_ids = tuple(sorted(self._edges))

        by_type: dict[str, list[str]] = {}
        for nid in self._node_ids:
            by_type.setdefault(self._nodes[nid], []).append(nid)
        self._by_type = {t: tuple(ids) for t, ids in by_type.items()}

        # Index edges by (type, src, tgt) and nodes by incident edges;
        # edges with dangling endpoints are skipped here and surface through
        # validate_graph instead.
        triples: dict[tuple[str, str, str], list[str]] = {}
        incident: dict[str, list[str]] = {nid: [] for nid in self._node_ids}
        degrees: dict[str, dict[tuple[str, str], int]] = {nid: {} for nid in self._node_ids}
        for eid in self._edge_ids:
            etype, src, tgt = self._edges[eid]
            if src not in self._nodes or tgt not in self._nodes:
                continue
            triples.setdefault((etype, src, tgt), []).append(eid)
            incident[src].append(eid)
            if tgt != src:
                incident[tgt].append(eid)
            dsrc = degrees[src]
            dsrc[("out", etype)] = dsrc.get(("out", etype), 0) + 1
            dtgt = degrees[tgt]
            dtgt[("in", etype)] = dtgt.get(("in", etype), 0) + 1
        self._triples = {k: tuple(v) for k, v in triples.items()}
        self._incident = {k: tuple(v) for k, v in incident.items()}
        self._degrees = degrees

    @property
    def type_graph(self) -> TypeGraph:
        return self._type_graph

    @property
    def node_ids(self) -> tuple[str, ...]:
        return self._node_ids

    @property
    def edge_ids(self) -> tuple[str, ...]:
        return self._edge_ids

    def has_node(self, nid: str) -> bool:
        return nid in self._nodes

    def has_edge(self, eid: str) -> bool:
        return eid in self._edges

    def node_type(self, nid: str) -> str:
        return self._nodes[nid]

    def edge_info(self, eid: str) -> tuple[str, str, str]:
        """Return ``(type, source id, target id)`` for an edge."""
        return self._edges[eid]

    def edge_type(self, eid: str) -> str:
        return self._edges[eid][0]

    def edge_source(self, eid: str) -> str:
        return self._edges[eid][1]

    def edge_target(self, eid: str) -> str:
        return self._edges[eid][2]

    def nodes_of_type(self, ntype: str) -> tuple[str, ...]:
        return self._by_type.get(ntype, ())

    def edges_with_signature(self, etype: str, src: str, tgt: str) -> tuple[str, ...]:
        return self._triples.get((etype, src, tgt), ())

    def incident_edges(self, nid: str) -> tuple[str, ...]:
        return self._incident.get(nid, ())

    def degree_profile(self, nid: str) -> dict[tuple[str, str], int]:
        """Count incident edges per ``("in"|"out", edge type)`` key."""
        return self._degrees.get(nid, {})

    @property
    def node_count(self) -> int:
        return len(self._nodes)

    @property
    def edge_count(self) -> int:
        return len(self._edges)

    def is_empty(self) -> bool:
        return not self._nodes and not self._edges

    def node_items(self) -> tuple[tuple[str, str], ...]:
        return tuple((nid, self._nodes[nid]) for nid in self._node_ids)

    def edge_items(self) -> tuple[tuple[str, str, str, str], ...]:
        return tuple((eid, *self._edges[eid]) for eid in self._edge_ids)

    def without(self, node_ids: Iterable[str] = (), edge_ids: Iterable[str] = ()) -> TypedGraph:
        """A copy with the given elements removed (ids preserved elsewhere)."""
        drop_n = set(node_ids)
        drop_e = set(edge_ids)
        return TypedGraph(
            self._type_graph,
            ((nid, t) for nid, t in self.node_items() if nid not in drop_n),
            ((eid, t, s, tt) for eid, t, s, tt in self.edge_items() if eid not in drop_e),
        )

    def with_added(
        self,
        nodes: Iterable[tuple[str, str]] = (),
        edges: Iterable[tuple[str, str, str, str]] = (),
    ) -> TypedGraph:
        """A copy extended by fresh nodes and edges."""
        return TypedGraph(
            self._type_graph,
            list(self.node_items()) + list(nodes),
            list(self.edge_items()) + list(edges),
        )

    def __eq__(self, other: object) -> bool:
        if self is other:
            return True
        if not isinstance(other, TypedGraph):
            return NotImplemented
        return (
            self._type_graph == other._type_graph
            and self._nodes == other._nodes
            and self._edges == other._edges
        )

    def __hash__(self) -> int:
        return hash((self._type_graph, tuple(sorted(self._nodes.items())),
                     tuple(sorted(self._edges.items()))))

    def __repr__(self) -> str:
        return f"TypedGraph(nodes={self.node_count}, edges={self.edge_count})"


def empty_graph(type_graph: TypeGraph) -> TypedGraph:
    return TypedGraph(type_graph)


def validate_graph(graph: TypedGraph) -> list[str]:
    """Check well-typedness; returns one message per violation (empty = ok)."""
    problems: list[str] = []
    tg = graph.type_graph
    for nid, ntype in graph.node_items():
        if ntype not in tg.node_types:
            problems.append(f"node {nid!r} has unknown type {ntype!r}")
    for eid, etype, src, tgt in graph.edge_items():
        if etype not in tg.edge_types:
            problems.append(f"edge {eid!r} has unknown type {etype!r}")
            continue
        want_src, want_tgt = tg.signature(etype)
        if not graph.has_node(src):
            problems.append(f"edge {eid!r} has absent source node {src!r}")
        elif graph.node_type(src) != want_src:
            problems.append(f"edge {eid!r} source {src!r} is not of type {want_src!r}")
        if not graph.has_node(tgt):
            problems.append(f"edge {eid!r} has absent target node {tgt!r}")
        elif graph.node_type(tgt) != want_tgt:
            problems.append(f"edge {eid!r} target {tgt!r} is not of type {want_tgt!r}")
    return problems


@dataclass(frozen=True)
class GraphMorphism:
    """A possibly-partial, structure-preserving map between typed graphs.

    ``node_map`` / ``edge_map`` send domain ids to codomain ids; elements
    absent from the maps are where the morphism is undefined. Equality is
    componentwise. Instances are value objects; do not mutate the maps.
    """

    domain: TypedGraph
    codomain: TypedGraph
    node_map: Mapping[str, str]
    edge_map: Mapping[str, str]

    def is_total(self) -> bool:
        return (
            len(self.node_map) == self.domain.node_count
            and len(self.edge_map) == self.domain.edge_count
        )

    def is_injective(self) -> bool:
        return (
            len(set(self.node_map.values())) == len(self.node_map)
            and len(set(self.edge_map.values())) == len(self.edge_map)
        )

    def is_surjective(self) -> bool:
        return (
            set(self.node_map.values()) == set(self.codomain.node_ids)
            and set(self.edge_map.values()) == set(self.codomain.edge_ids)
        )

    def is_isomorphism(self) -> bool:
        return self.is_total() and self.is_injective() and self.is_surjective()

    def node_image(self) -> frozenset[str]:
        return frozenset(self.node_map.values())

    def edge_image(self) -> frozenset[str]:
        return frozenset(self.edge_map.values())

    def check(self) -> list[str]:
        """Validate typing and structure preservation; messages per violation."""
        problems: list[str] = []
        for x, y in self.node_map.items():
            if not self.domain.has_node(x):
                problems.append(f"maps absent node {x!r}")
            elif not self.codomain.has_node(y):
                problems.append(f"node {x!r} sent to absent node {y!r}")
            elif self.domain.node_type(x) != self.codomain.node_type(y):
                problems.append(f"node {x!r} changes type under the map")
        for e, f in self.edge_map.items():
            if not self.domain.has_edge(e):
                problems.append(f"maps absent edge {e!r}")
                continue
            if not self.codomain.has_edge(f):
                problems.append(f"edge {e!r} sent to absent edge {f!r}")
                continue
            etype, src, tgt = self.domain.edge_info(e)
            ftype, fsrc, ftgt = self.codomain.edge_info(f)
            if etype != ftype:
                problems.append(f"edge {e!r} changes type under the map")
            if src not in self.node_map or tgt not in self.node_map:
                problems.append(f"edge {e!r} is mapped but an endpoint is not")
                continue
            if self.node_map[src] != fsrc or self.node_map[tgt] != ftgt:
                problems.append(f"edge {e!r} does not commute with its endpoints")
        return problems

    def sort_key(self) -> tuple[tuple[str, ...], tuple[str, ...]]:
        """Canonical ordering key: images listed over sorted domain ids."""
        return (
            tuple(self.node_map.get(v, "") for v in self.domain.node_ids),
            tuple(self.edge_map.get(e, "") for e in self.domain.edge_ids),
        )

    def __repr__(self) -> str:
        kind = "total" if self.is_total() else "partial"
        return f"GraphMorphism({kind}, nodes={dict(self.node_map)}, edges={dict(self.edge_map)})"


def identity(graph: TypedGraph) -> GraphMorphism:
    return GraphMorphism(
        graph, graph,
        {nid: nid for nid in graph.node_ids},
        {eid: eid for eid in graph.edge_ids},
    )


def inclusion(sub: TypedGraph, sup: TypedGraph) -> GraphMorphism:
    """The id-preserving embedding of ``sub`` into ``sup``."""
    for nid in sub.node_ids:
        if not sup.has_node(nid) or sup.node_type(nid) != sub.node_type(nid):
            raise MismatchError(f"node {nid!r} not present in the larger graph")
    for eid in sub.edge_ids:
        if not sup.has_edge(eid) or sup.edge_info(eid) != sub.edge_info(eid):
            raise MismatchError(f"edge {eid!r} not present in the larger graph")
    return GraphMorphism(
        sub, sup,
        {nid: nid for nid in sub.node_ids},
        {eid: eid for eid in sub.edge_ids},
    )


def empty_morphism_into(graph: TypedGraph) -> GraphMorphism:
    return GraphMorphism(empty_graph(graph.type_graph), graph, {}, {})


def compose(first: GraphMorphism, second: GraphMorphism) -> GraphMorphism:
    """Apply ``first``, then ``second``; defined where both legs are.

    Requires ``first.codomain == second.domain`` (checked structurally).
    """
    if first.codomain != second.domain:
        raise MismatchError("compose: codomain of the first leg is not the domain of the second")
    node_map = {
        x: second.node_map[y]
        for x, y in first.node_map.items()
        if y in second.node_map
    }
    edge_map = {
        e: second.edge_map[f]
        for e, f in first.edge_map.items()
        if f in second.edge_map
    }
    return GraphMorphism(first.domain, second.codomain, node_map, edge_map)


def is_isomorphism(morphism: GraphMorphism) -> bool:
    return morphism.is_isomorphism()


def _degree_fits(pattern: TypedGraph, v: str, host: TypedGraph, w: str) -> bool:
    host_profile = host.degree_profile(w)
    for key, need in pattern.degree_profile(v).items():
        if host_profile.get(key, 0) < need:
            return False
    return True


def enumerate_monomorphisms(
    pattern: TypedGraph,
    host: TypedGraph,
    *,
    node_seed: Mapping[str, str] | None = None,
    edge_seed: Mapping[str, str] | None = None,
) -> list[GraphMorphism]:
    """All total injective morphisms pattern -> host, in canonical order.

    The order is lexicographic over the images of the sorted pattern node ids,
    with ties broken the same way on sorted pattern edge ids, so results are
    reproducible across runs. ``node_seed``/``edge_seed`` pin parts of the map
    in advance (used to enumerate extensions along a fixed anchor); seeded
    entries must be type-correct and injective.

    Duplicate-free: each returned morphism appears exactly once.
    """
    if pattern.type_graph != host.type_graph:
        raise MismatchError("pattern and host are typed over different type graphs")
    node_seed = dict(node_seed or {})
    edge_seed = dict(edge_seed or {})
    if len(set(node_seed.values())) != len(node_seed):
        raise ValueError("node seed is not injective")
    if len(set(edge_seed.values())) != len(edge_seed):
        raise ValueError("edge seed is not injective")
    for v, w in node_seed.items():
        if not pattern.has_node(v):
            raise ValueError(f"seed maps absent pattern node {v!r}")
        if not host.has_node(w) or pattern.node_type(v) != host.node_type(w):
            return []
    for e, f in edge_seed.items():
        if not pattern.has_edge(e):
            raise ValueError(f"seed maps absent pattern edge {e!r}")
        if not host.has_edge(f) or pattern.edge_type(e) != host.edge_type(f):
            return []

    nodes = pattern.node_ids
    candidates: dict[str, tuple[str, ...]] = {}
    for v in nodes:
        if v in node_seed:
            candidates[v] = (node_seed[v],)
        else:
            candidates[v] = tuple(
                w for w in host.nodes_of_type(pattern.node_type(v))
                if _degree_fits(pattern, v, host, w)
            )
        if not candidates[v]:
            return []

    # Group pattern edges by signature; within one group any injective
    # assignment onto same-signature host edges is structure-preserving.
    pattern_groups: dict[tuple[str, str, str], tuple[str, ...]] = {}
    for eid in pattern.edge_ids:
        etype, src, tgt = pattern.edge_info(eid)
        pattern_groups.setdefault((etype, src, tgt), ())
    pattern_groups = {
        key: tuple(e for e in pattern.edge_ids if pattern.edge_info(e) == key)
        for key in pattern_groups
    }

    results: list[GraphMorphism] = []
    node_map: dict[str, str] = {}
    used_nodes: set[str] = set()

    def edge_assignments() -> None:
        groups: list[tuple[tuple[str, ...], tuple[str, ...]]] = []
        for (etype, src, tgt), p_edges in sorted(pattern_groups.items()):
            h_edges = host.edges_with_signature(etype, node_map[src], node_map[tgt])
            if len(h_edges) < len(p_edges):
                return
            groups.append((p_edges, h_edges))

        edge_map: dict[str, str] = {}
        used_edges: set[str] = set()

        def assign_group(gi: int, ei: int) -> None:
            if gi == len(groups):
                results.append(GraphMorphism(pattern, host, dict(node_map), dict(edge_map)))
                return
            p_edges, h_edges = groups[gi]
            if ei == len(p_edges):
                assign_group(gi + 1, 0)
                return
            e = p_edges[ei]
            pinned = edge_seed.get(e)
            for f in h_edges:
                if f in used_edges or (pinned is not None and f != pinned):
                    continue
                edge_map[e] = f
                used_edges.add(f)
                assign_group(gi, ei + 1)
                del edge_map[e]
                used_edges.discard(f)

        assign_group(0, 0)

    def assign_node(i: int) -> None:
        if i == len(nodes):
            edge_assignments()
            return
        v = nodes[i]
        for w in candidates[v]:
            if w in used_nodes:
                continue
            ok = True
            # Early consistency: every pattern edge with both ends placed
            # must have at least one host edge under the partial map.
            for eid in pattern.incident_edges(v):
                etype, src, tgt = pattern.edge_info(eid)
                s = node_map.get(src) if src != v else w
                t = node_map.get(tgt) if tgt != v else w
                if s is None or t is None:
                    continue
                if not host.edges_with_signature(etype, s, t):
                    ok = False
                    break
            if not ok:
                continue
            node_map[v] = w
            used_nodes.add(w)
            assign_node(i + 1)
            del node_map[v]
            used_nodes.discard(w)

    assign_node(0)
    results.sort(key=GraphMorphism.sort_key)
    return results
