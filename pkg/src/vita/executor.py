"""Plan execution: applies fully-compiled steps to a session state copy.

Actions place each step's output: ``update`` replaces the input column (and
invalidates its metadata), ``create`` appends a new column or view, ``add``
stores the output as metadata of the input column. Engine routines are pure,
so executing against a copy and swapping on success gives failed operations
no observable effect.
"""

from __future__ import annotations

from dataclasses import dataclass, field

from . import engine
from .coordination import (
    CoordinationLink,
    Effect,
    ViewNode,
    clear,
    coordinate,
    propagate,
)
from .csv_load import load_csv
from .dtypes import (
    FLOAT,
    FLOAT_VECTOR,
    INT,
    SCORE_DICT,
    STRING,
    TEXT,
    TOKENS,
    DomainType,
    list_of,
)
from .errors import EngineError
from .nodes import Predicate, SelectionSpec
from .compiler import Plan, PlanStep
from .state import SessionState
from .viz import visualize_bar, visualize_scatter


@dataclass
class ExecOutcome:
    state: SessionState
    effects: list[Effect] = field(default_factory=list)
    new_views: list[str] = field(default_factory=list)


def execute_plan(plan: Plan, state: SessionState) -> ExecOutcome:
    outcome = ExecOutcome(state.copy())
    for step in plan.steps:
        _execute_step(step, outcome)
    return outcome


_TEXT_UDFS = {"lowercase", "remove_stopwords", "strip_punct"}
_AGGREGATES = {"mean", "sum", "count"}


def _execute_step(step: PlanStep, out: ExecOutcome) -> None:
    op = step.op
    state = out.state
    if op in _TEXT_UDFS:
        col = state.frame.column(step.inputs[0])
        values = engine.project_text(col, op)
        _place_column(state, step, TEXT, values)
    elif op == "tokenize":
        values = engine.tokenize(state.frame.column(step.inputs[0]))
        _place_column(state, step, TOKENS, values)
    elif op == "tfidf":
        col = state.frame.column(step.inputs[0])
        vectors, model = engine.tfidf(col, step.params["min_df"], step.params["norm"])
        _place_column(state, step, FLOAT_VECTOR, vectors)
        target = step.output
        state.frame = (
            state.frame.set_metadata(target, "vocabulary", TOKENS, tuple(model.vocabulary))
            .set_metadata(target, "idf", FLOAT_VECTOR, model.idf)
            .set_metadata(target, "min_df", INT, model.min_df)
            .set_metadata(target, "norm", STRING, model.norm)
            .set_metadata(target, "source_column", STRING, step.inputs[0])
        )
    elif op == "lda":
        col = state.frame.column(step.inputs[0])
        model = engine.lda(col, step.params["k"], step.params["iterations"], step.params["seed"])
        _place_column(state, step, FLOAT_VECTOR, model.theta)
        target = step.output
        state.frame = (
            state.frame.set_metadata(target, "vocabulary", TOKENS, model.vocabulary)
            .set_metadata(target, "topic_word", list_of(FLOAT_VECTOR), model.phi)
            .set_metadata(target, "k", INT, model.k)
            .set_metadata(target, "iterations", INT, step.params["iterations"])
            .set_metadata(target, "seed", INT, model.seed)
            .set_metadata(target, "source_column", STRING, step.inputs[0])
        )
    elif op == "cluster_assign":
        values = engine.cluster_assign(state.frame.column(step.inputs[0]))
        _place_column(state, step, INT, values)
    elif op == "pca2":
        values = engine.pca2(state.frame.column(step.inputs[0]))
        _place_column(state, step, FLOAT_VECTOR, values)
    elif op == "unique_tokens":
        column, key = _split_metadata_output(step)
        tokens = engine.unique_tokens(state.frame.column(column))
        state.frame = state.frame.set_metadata(column, key, TOKENS, tokens)
    elif op in _AGGREGATES:
        column, key = _split_metadata_output(step)
        value = engine.aggregate_column(state.frame.column(column), op)
        dtype = INT if op == "count" else (
            state.frame.column(column).dtype if op == "sum" else FLOAT
        )
        value = float(value) if dtype is FLOAT else value
        state.frame = state.frame.set_metadata(column, key, dtype, value)
    elif op == "mean_score_per_token":
        column, key = _split_metadata_output(step)
        col = state.frame.column(column)
        vocabulary = col.metadata_value("vocabulary")
        scores = engine.mean_score_per_token(col, vocabulary)
        state.frame = state.frame.set_metadata(column, key, SCORE_DICT, scores)
    elif op == "bar":
        spec = visualize_bar(
            state.frame,
            view_id=step.output,
            column=step.inputs[0],
            key=step.params.get("key"),
            category=step.params.get("category"),
            value=step.params.get("value"),
            top_k=step.params["top_k"],
        )
        _place_view(out, spec)
    elif op == "scatter":
        spec = visualize_scatter(
            state.frame, view_id=step.output, column=step.inputs[0], color=step.params.get("color")
        )
        _place_view(out, spec)
    elif op == "select":
        value = step.params["value"]
        selection = SelectionSpec(
            view=step.inputs[0],
            kind=step.params["kind"],
            predicate=Predicate(step.params["field"], step.params["op"], value),
            mapping_tag=step.params["tag"],
        )
        effects, graph = propagate(state.graph, selection, state.frame, state.viz)
        state.graph = graph
        out.effects.extend(effects)
    elif op == "coordinate":
        link = CoordinationLink(
            source=step.inputs[0],
            target=step.inputs[1],
            source_tag=step.params["source_tag"],
            target_tag=step.params["target_tag"],
            triggered_op=step.params["effect"],
        )
        state.graph = coordinate(state.graph, link)
    elif op == "clear":
        effects, graph = clear(state.graph, step.inputs[0])
        state.graph = graph
        out.effects.extend(effects)
    elif op == "load":
        frame = load_csv(
            step.params["path"],
            text_columns=step.params.get("text_columns", ()),
            delimiter=step.params.get("delimiter", ","),
        )
        fresh = SessionState(frame, registry=state.registry)
        out.state = fresh
    else:
        raise EngineError(f"no engine routine for op {step.op!r}")


def _place_column(state: SessionState, step: PlanStep, dtype: DomainType, values: tuple) -> None:
    if step.action == "update":
        state.frame = state.frame.update_column(step.output, values, dtype)
    else:
        state.frame = state.frame.add_column(step.output, dtype, values)


def _split_metadata_output(step: PlanStep) -> tuple[str, str]:
    column, _, key = step.output.partition(".")
    return column, key


def _place_view(out: ExecOutcome, spec) -> None:
    state = out.state
    state.viz[spec.view_id] = spec
    state.graph.views[spec.view_id] = ViewNode(
        spec.view_id, "chart", dict(spec.source_binding.mark_to_rows)
    )
    out.new_views.append(spec.view_id)
