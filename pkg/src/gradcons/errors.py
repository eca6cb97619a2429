"""Exception types shared across the package."""

from __future__ import annotations


class GradconsError(Exception):
    """Base class for all errors raised by this package."""


class MismatchError(GradconsError):
    """Objects that must share a type graph, domain, or codomain do not."""


class AnfError(GradconsError):
    """A constraint is not in alternating normal form.

    Carries the chain position (0-based quantifier index) at which the
    first violation occurs, plus a human-readable reason.
    """

    def __init__(self, position: int, reason: str):
        super().__init__(f"not in alternating normal form at level {position}: {reason}")
        self.position = position
        self.reason = reason


class RuleError(GradconsError):
    """A rule's span or application condition is malformed."""


class MatchError(GradconsError):
    """A morphism offered as a match fails the match preconditions."""


class BoundError(GradconsError):
    """A search bound is too small to admit any match of the rule."""


class UnsupportedShapeError(GradconsError):
    """A constraint shape outside the supported analysis fragment."""


class DocumentError(GradconsError):
    """A document parsed fine as text but fails structural validation.

    ``problems`` lists every violation found.
    """

    def __init__(self, problems: list[str]):
        super().__init__("; ".join(problems))
        self.problems = list(problems)


class ContradictionError(GradconsError):
    """A static proof and a concrete counterexample disagree.

    This cannot happen when the engine is correct; it is raised instead of
    silently preferring one side so the defect surfaces immediately.
    """
