"""Operator registry: built-in functions plus user-synthesized composites.

Built-ins are fixed at import time; synthesized operators extend the registry
functionally (each registration returns a new registry) so a compile always
sees one immutable snapshot. Built-in names can never be shadowed.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import TYPE_CHECKING, Callable, Mapping

from .dtypes import (
    DomainType,
    FLOAT,
    FLOAT_VECTOR,
    INT,
    SCORE_DICT,
    TEXT,
    TOKENS,
)
from .errors import DuplicateNameError

if TYPE_CHECKING:
    from .nodes import OperatorNode


def _is_text(dt: DomainType) -> bool:
    return dt.tag == "Text"


def _is_tokens(dt: DomainType) -> bool:
    return dt.tag == "List" and dt.inner.tag == "String"


def _is_vector(dt: DomainType) -> bool:
    return dt.tag == "Vector"


def _is_numeric(dt: DomainType) -> bool:
    return dt.is_numeric


def _any(dt: DomainType) -> bool:
    return True


@dataclass(frozen=True)
class UdfInfo:
    """Compile-time contract of one built-in function."""

    name: str
    kind: str  # project | mutate | aggregate | set | visualize
    input_check: Callable[[DomainType], bool]
    expected: str  # human name of the accepted input type
    output: Callable[[DomainType], DomainType] | None  # None: no column output
    defaults: Mapping[str, object] = field(default_factory=dict)
    extra_params: tuple[str, ...] = ()


BUILTIN_UDFS: dict[str, UdfInfo] = {
    info.name: info
    for info in [
        UdfInfo("lowercase", "project", _is_text, "Text", lambda _: TEXT),
        UdfInfo("remove_stopwords", "project", _is_text, "Text", lambda _: TEXT),
        UdfInfo("strip_punct", "project", _is_text, "Text", lambda _: TEXT),
        UdfInfo("pca2", "project", _is_vector, "Vector(Float)", lambda _: FLOAT_VECTOR),
        UdfInfo("tokenize", "mutate", _is_text, "Text", lambda _: TOKENS),
        UdfInfo(
            "tfidf",
            "mutate",
            _is_tokens,
            "List(String)",
            lambda _: FLOAT_VECTOR,
            {"min_df": 1, "norm": "l2"},
        ),
        UdfInfo(
            "lda",
            "mutate",
            _is_tokens,
            "List(String)",
            lambda _: FLOAT_VECTOR,
            {"k": 3, "iterations": 200, "seed": 0},
        ),
        UdfInfo("cluster_assign", "mutate", _is_vector, "Vector(Float)", lambda _: INT),
        UdfInfo(
            "unique_tokens",
            "set",
            lambda dt: _is_tokens(dt) or _is_text(dt),
            "Text or List(String)",
            lambda _: TOKENS,
        ),
        UdfInfo("mean", "aggregate", _is_numeric, "Int or Float", lambda _: FLOAT),
        UdfInfo("sum", "aggregate", _is_numeric, "Int or Float", lambda dt: dt),
        UdfInfo("count", "aggregate", _any, "any", lambda _: INT),
        UdfInfo(
            "mean_score_per_token",
            "aggregate",
            _is_vector,
            "Vector(Float)",
            lambda _: SCORE_DICT,
        ),
        UdfInfo(
            "bar",
            "visualize",
            _any,
            "any",
            None,
            {"top_k": 15},
            extra_params=("key", "category", "value"),
        ),
        UdfInfo("scatter", "visualize", _is_vector, "Vector(Float)", None, {}, ("color",)),
    ]
}

_BUILTIN_NAMES = frozenset(BUILTIN_UDFS) | frozenset(
    {"select", "project", "mutate", "aggregate", "set", "visualize", "combine",
     "synthesize", "coordinate", "load", "undo", "checkout", "clear"}
)


@dataclass(frozen=True)
class OperatorRegistry:
    synthesized: Mapping[str, "OperatorNode"] = field(default_factory=dict)

    def is_builtin(self, name: str) -> bool:
        return name in _BUILTIN_NAMES

    def udf(self, name: str) -> UdfInfo | None:
        return BUILTIN_UDFS.get(name)

    def template(self, name: str) -> "OperatorNode | None":
        return self.synthesized.get(name)

    def names(self) -> tuple[str, ...]:
        return tuple(sorted(BUILTIN_UDFS)) + tuple(sorted(self.synthesized))


def register_synthesized(
    registry: OperatorRegistry, name: str, node: "OperatorNode"
) -> OperatorRegistry:
    """Add one composite operator under a fresh name; built-ins are reserved."""
    if registry.is_builtin(name) or name in registry.synthesized:
        raise DuplicateNameError(f"operator name {name!r} is already taken")
    extended = dict(registry.synthesized)
    extended[name] = node
    return OperatorRegistry(extended)
