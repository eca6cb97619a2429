"""Nested graph conditions, linear constraints, and graduated consistency.

A condition over a graph P is one of: the always-true condition, an
existential extension along an injective morphism ``a: P -> C`` with a
sub-condition over C, a negation, or a conjunction. A constraint is a
condition anchored at the empty graph. Universal quantification is not a
separate node: ``forall(a, d)`` builds its classical encoding, negation
around an existential around the negated body. Reports and renderings
re-sugar the encoding, so users still read the universal form.

Satisfaction follows the standard semantics for injective occurrences: a
total injective ``p: P -> G`` satisfies an existential condition when some
injective ``q: C -> G`` with ``q . a = p`` satisfies the sub-condition.

Graduated consistency refines the yes/no notion. For a universal constraint
over outer pattern C, every occurrence of C in G is relevant and the
violating ones are those whose required continuation is missing; for an
existential constraint there is a single relevant "occurrence" which is
violated when no occurrence of C satisfies the body. The consistency index
is ``1 - ncv/ro`` as an exact rational, with the empty quotient 0/0 read
as 0 (so a graph with no relevant occurrences is fully consistent).
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from typing import Iterator

from .errors import AnfError, MismatchError
from .graphs import (
    GraphMorphism,
    TypedGraph,
    empty_morphism_into,
    enumerate_monomorphisms,
)


class Condition:
    """Abstract base for condition trees. Instances are immutable."""

    __slots__ = ()

    def anchor(self) -> TypedGraph | None:
        """The graph this condition constrains, if it mentions one."""
        raise NotImplementedError

    def nesting_level(self) -> int:
        raise NotImplementedError


class TrueCondition(Condition):
    __slots__ = ()

    def anchor(self) -> TypedGraph | None:
        return None

    def nesting_level(self) -> int:
        return 0

    def __eq__(self, other: object) -> bool:
        return isinstance(other, TrueCondition)

    def __hash__(self) -> int:
        return hash("TrueCondition")

    def __repr__(self) -> str:
        return "TRUE"


TRUE = TrueCondition()


@dataclass(frozen=True, repr=False)
class Exists(Condition):
    """There is an extension of the anchor occurrence along ``morphism``."""

    morphism: GraphMorphism
    sub: Condition = TRUE

    def __post_init__(self) -> None:
        a = self.morphism
        if not (a.is_total() and a.is_injective()):
            raise MismatchError("condition morphisms must be total and injective")
        if a.check():
            raise MismatchError(f"condition morphism is malformed: {a.check()[0]}")
        inner = self.sub.anchor()
        if inner is not None and inner != a.codomain:
            raise MismatchError("sub-condition is not anchored at the extended graph")

    def anchor(self) -> TypedGraph | None:
        return self.morphism.domain

    def nesting_level(self) -> int:
        return 1 + self.sub.nesting_level()

    def __repr__(self) -> str:
        return f"Exists({self.morphism.codomain!r}, {self.sub!r})"


@dataclass(frozen=True, repr=False)
class Not(Condition):
    sub: Condition

    def anchor(self) -> TypedGraph | None:
        return self.sub.anchor()

    def nesting_level(self) -> int:
        return self.sub.nesting_level()

    def __repr__(self) -> str:
        return f"Not({self.sub!r})"


@dataclass(frozen=True, repr=False)
class And(Condition):
    left: Condition
    right: Condition

    def __post_init__(self) -> None:
        la, ra = self.left.anchor(), self.right.anchor()
        if la is not None and ra is not None and la != ra:
            raise MismatchError("conjuncts are anchored at different graphs")

    def anchor(self) -> TypedGraph | None:
        return self.left.anchor() or self.right.anchor()

    def nesting_level(self) -> int:
        return max(self.left.nesting_level(), self.right.nesting_level())

    def __repr__(self) -> str:
        return f"And({self.left!r}, {self.right!r})"


FALSE = Not(TRUE)


def negate(condition: Condition) -> Condition:
    """Negation with double negations collapsed on the way in."""
    if isinstance(condition, Not):
        return condition.sub
    return Not(condition)


def forall(morphism: GraphMorphism, sub: Condition = FALSE) -> Condition:
    """Universal quantification, stored as not-exists-not."""
    return Not(Exists(morphism, negate(sub)))


@dataclass(frozen=True)
class Constraint:
    """A named condition anchored at the empty graph."""

    name: str
    condition: Condition

    def __post_init__(self) -> None:
        root = self.condition.anchor()
        if root is not None and not root.is_empty():
            raise MismatchError(f"constraint {self.name!r} is not anchored at the empty graph")

    @property
    def type_graph(self):
        root = self.condition.anchor()
        return root.type_graph if root is not None else None


def _satisfies(p: GraphMorphism, condition: Condition) -> bool:
    if isinstance(condition, TrueCondition):
        return True
    if isinstance(condition, Not):
        return not _satisfies(p, condition.sub)
    if isinstance(condition, And):
        return _satisfies(p, condition.left) and _satisfies(p, condition.right)
    if isinstance(condition, Exists):
        for q in extensions(p, condition.morphism):
            if _satisfies(q, condition.sub):
                return True
        return False
    raise TypeError(f"unknown condition node {condition!r}")


def extensions(p: GraphMorphism, a: GraphMorphism) -> list[GraphMorphism]:
    """All injective q with q . a = p, in canonical order.

    ``p`` must be a total injective occurrence of the domain of ``a``; the
    results are the occurrences of the extended graph that agree with ``p``
    on the anchor.
    """
    node_seed = {a.node_map[x]: p.node_map[x] for x in a.domain.node_ids}
    edge_seed = {a.edge_map[e]: p.edge_map[e] for e in a.domain.edge_ids}
    return enumerate_monomorphisms(
        a.codomain, p.codomain, node_seed=node_seed, edge_seed=edge_seed
    )


def satisfies(p: GraphMorphism, condition: Condition) -> bool:
    """Does the total injective occurrence ``p`` satisfy ``condition``?"""
    if not p.is_total() or not p.is_injective():
        raise MismatchError("satisfaction is defined for total injective occurrences")
    anchor = condition.anchor()
    if anchor is not None and anchor != p.domain:
        raise MismatchError("occurrence domain differs from the condition anchor")
    return _satisfies(p, condition)


def graph_satisfies(graph: TypedGraph, constraint: Constraint) -> bool:
    """Does ``graph`` satisfy the constraint (via the empty occurrence)?"""
    tg = constraint.type_graph
    if tg is not None and tg != graph.type_graph:
        raise MismatchError("graph and constraint use different type graphs")
    return _satisfies(empty_morphism_into(graph), constraint.condition)


# --- alternating normal form -------------------------------------------------

EXISTENTIAL = "existential"
UNIVERSAL = "universal"


@dataclass(frozen=True)
class AnfShape:
    """Parsed shape of a linear constraint with alternating quantifiers.

    ``chain`` lists ``(quantifier, morphism)`` pairs outermost first, with
    quantifier one of ``"exists"`` / ``"forall"``; ``ends_with_false`` marks
    the universal terminal. The polarity of the whole constraint is decided
    by the first quantifier.
    """

    chain: tuple[tuple[str, GraphMorphism], ...]
    ends_with_false: bool

    @property
    def polarity(self) -> str:
        return EXISTENTIAL if self.chain[0][0] == "exists" else UNIVERSAL

    @property
    def level(self) -> int:
        return len(self.chain)

    @property
    def outer_graph(self) -> TypedGraph:
        """The outermost quantified pattern."""
        return self.chain[0][1].codomain

    @property
    def witness_graph(self) -> TypedGraph | None:
        """The second-level pattern, when the chain is that deep."""
        return self.chain[1][1].codomain if len(self.chain) >= 2 else None

    def render(self) -> str:
        parts = []
        for i, (quant, morphism) in enumerate(self.chain):
            symbol = "∃" if quant == "exists" else "∀"
            parts.append(f"{symbol}C{i + 1}[{morphism.codomain.node_count}n"
                         f"/{morphism.codomain.edge_count}e]")
        tail = ", false" if self.ends_with_false else ""
        return " . ".join(parts) + tail


def validate_anf(constraint: Constraint) -> AnfShape:
    """Parse a constraint as linear + alternating, or raise :class:`AnfError`.

    Rejections name the first offending quantifier position: conjunctions,
    non-alternation, isomorphic chain morphisms, nesting level zero, and the
    degenerate terminals (an existential level ending in false, a universal
    one ending in true).
    """
    chain: list[tuple[str, GraphMorphism]] = []

    def reject(pos: int, reason: str) -> None:
        raise AnfError(pos, reason)

    def check_morphism(pos: int, a: GraphMorphism) -> None:
        if a.is_isomorphism():
            reject(pos, "chain morphism is an isomorphism")

    def parse(node: Condition, pos: int) -> bool:
        """Returns ends_with_false."""
        if isinstance(node, And) or (isinstance(node, Not) and isinstance(node.sub, And)):
            reject(pos, "conjunction inside a linear constraint")
        if isinstance(node, TrueCondition):
            reject(pos, "nesting level 0" if pos == 0 else "malformed chain")
        if isinstance(node, Exists):
            check_morphism(pos, node.morphism)
            chain.append(("exists", node.morphism))
            body = node.sub
            if isinstance(body, TrueCondition):
                return False
            if body == FALSE:
                reject(pos, "existential level ends with false")
            if isinstance(body, Exists):
                reject(pos + 1, "quantifiers do not alternate (exists under exists)")
            if isinstance(body, Not) and isinstance(body.sub, Exists):
                return parse(body, pos + 1)
            reject(pos + 1, "malformed chain body")
        if isinstance(node, Not):
            inner = node.sub
            if isinstance(inner, TrueCondition):
                reject(pos, "nesting level 0" if pos == 0 else "malformed chain")
            if isinstance(inner, Exists):
                # A universal level: not-exists(a, X) with X the negated body.
                check_morphism(pos, inner.morphism)
                chain.append(("forall", inner.morphism))
                body = inner.sub
                if isinstance(body, TrueCondition):
                    return True  # ends with false
                if body == FALSE:
                    reject(pos, "universal level ends with true")
                if isinstance(body, Exists):
                    reject(pos + 1, "quantifiers do not alternate (forall under forall)")
                if isinstance(body, Not) and isinstance(body.sub, Exists):
                    return parse(body.sub, pos + 1)
                reject(pos + 1, "malformed chain body")
            if isinstance(inner, Not):
                reject(pos, "negation is not at the innermost level")
            reject(pos, "malformed chain")
        reject(pos, f"unsupported condition node {type(node).__name__}")
        raise AssertionError  # unreachable

    ends_with_false = parse(constraint.condition, 0)
    # Chain anchoring is enforced by the Exists constructor; the root anchor
    # being empty is enforced by Constraint. Quantifier alternation and the
    # innermost-only negation fell out of the parse above.
    return AnfShape(tuple(chain), ends_with_false)


def is_anf(constraint: Constraint) -> bool:
    try:
        validate_anf(constraint)
        return True
    except AnfError:
        return False


# --- graduated consistency ---------------------------------------------------


@dataclass(frozen=True)
class ConsistencyReport:
    """Occurrence counts and the consistency index for one graph/constraint.

    ``occ`` counts occurrences of the outer pattern, ``ro`` the relevant
    occurrences, ``ncv`` the violating ones among them. ``ci`` is exact;
    render to decimal only at output boundaries.
    """

    constraint_name: str
    polarity: str
    occ: int
    ro: int
    ncv: int
    ci: Fraction
    violating_occurrences: tuple[GraphMorphism, ...] = field(default=())

    @property
    def satisfied(self) -> bool:
        return self.ci == 1


def consistency_report(graph: TypedGraph, constraint: Constraint) -> ConsistencyReport:
    """Measure ``graph`` against an ANF constraint.

    Universal: ro = occurrence count of the outer pattern, ncv = number of
    occurrences violating the remainder of the chain, each violating
    occurrence materialized as evidence in canonical order. Existential:
    ro = 1 and ncv is 0 or 1. ci = 1 - ncv/ro with 0/0 read as 0.
    """
    shape = validate_anf(constraint)
    tg = constraint.type_graph
    if tg is not None and tg != graph.type_graph:
        raise MismatchError("graph and constraint use different type graphs")
    occurrences = enumerate_monomorphisms(shape.outer_graph, graph)
    occ = len(occurrences)
    if shape.polarity == UNIVERSAL:
        # Stored form is Not(Exists(a, negated_body)): an occurrence violates
        # exactly when it satisfies the negated body.
        negated_body = constraint.condition.sub.sub  # type: ignore[attr-defined]
        violating = tuple(p for p in occurrences if _satisfies(p, negated_body))
        ro = occ
        ncv = len(violating)
    else:
        body = constraint.condition.sub  # type: ignore[attr-defined]
        ro = 1
        ncv = 0 if any(_satisfies(p, body) for p in occurrences) else 1
        violating = ()
    ci = Fraction(1) if ro == 0 else 1 - Fraction(ncv, ro)
    return ConsistencyReport(
        constraint_name=constraint.name,
        polarity=shape.polarity,
        occ=occ,
        ro=ro,
        ncv=ncv,
        ci=ci,
        violating_occurrences=violating,
    )


def is_partially_consistent(graph: TypedGraph, constraint: Constraint) -> bool:
    """ci > 0: at least some relevant occurrence is in order."""
    return consistency_report(graph, constraint).ci > 0
