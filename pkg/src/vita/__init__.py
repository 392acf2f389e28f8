"""In-situ visual text analysis: a typed columnar frame, a declarative
operator algebra with JSON and command surfaces, native text/ML routines,
Vega-Lite chart emission, coordinated multi-view selection, and per-operation
session versioning."""

from .command import parse_command
from .compiler import Plan, PlanStep, compile_node, explain
from .coordination import CoordinationLink, Effect, ViewNode, coordinate, propagate
from .csv_load import load_csv, load_csv_text
from .dtypes import DomainType, Null, infer_type
from .frame import Column, VitaFrame, validate
from .nodes import OperatorNode, Predicate, SelectionSpec, parse_json, serialize
from .registry import OperatorRegistry, register_synthesized
from .session import Session
from .versioning import VersionNode, VersionStore
from .viz import VizSpec, to_vegalite

__version__ = "0.1.0"

__all__ = [
    "Column",
    "CoordinationLink",
    "DomainType",
    "Effect",
    "Null",
    "OperatorNode",
    "OperatorRegistry",
    "Plan",
    "PlanStep",
    "Predicate",
    "SelectionSpec",
    "Session",
    "VersionNode",
    "VersionStore",
    "ViewNode",
    "VitaFrame",
    "VizSpec",
    "compile_node",
    "coordinate",
    "explain",
    "infer_type",
    "load_csv",
    "load_csv_text",
    "parse_command",
    "parse_json",
    "propagate",
    "register_synthesized",
    "serialize",
    "to_vegalite",
    "validate",
]
