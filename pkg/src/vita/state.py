"""The live state of one analysis session and its canonical serialization.

State has four parts, snapshotted independently so identical parts share
storage: the frame, the chart catalog, the coordination graph (including the
active selection), and the synthesized-operator registry. Each part
serializes to canonical JSON bytes; digests are sha256 over those bytes.
"""

from __future__ import annotations

import hashlib
import json
from dataclasses import dataclass, field

from .coordination import CoordinationGraph, graph_from_dict, graph_to_dict, new_graph
from .frame import VitaFrame
from .nodes import node_from_dict, node_to_dict
from .registry import OperatorRegistry
from .viz import VizSpec

PARTS = ("frame", "viz", "coordination", "registry")


@dataclass
class SessionState:
    frame: VitaFrame
    viz: dict[str, VizSpec] = field(default_factory=dict)
    graph: CoordinationGraph = field(default_factory=new_graph)
    registry: OperatorRegistry = field(default_factory=OperatorRegistry)

    def copy(self) -> "SessionState":
        return SessionState(self.frame, dict(self.viz), self.graph.copy(), self.registry)

    def bundles(self) -> dict[str, bytes]:
        return {
            "frame": self.frame.to_bytes(),
            "viz": _canonical(
                [self.viz[k].to_dict() for k in sorted(self.viz)]
            ),
            "coordination": _canonical(graph_to_dict(self.graph)),
            "registry": _canonical(
                {name: node_to_dict(t) for name, t in sorted(self.registry.synthesized.items())}
            ),
        }

    def digests(self) -> dict[str, str]:
        return {part: hashlib.sha256(data).hexdigest() for part, data in self.bundles().items()}

    @classmethod
    def restore(cls, bundles: dict[str, bytes]) -> "SessionState":
        viz_list = json.loads(bundles["viz"])
        registry_raw = json.loads(bundles["registry"])
        return cls(
            frame=VitaFrame.from_bytes(bundles["frame"]),
            viz={d["view_id"]: VizSpec.from_dict(d) for d in viz_list},
            graph=graph_from_dict(json.loads(bundles["coordination"])),
            registry=OperatorRegistry(
                {name: node_from_dict(d) for name, d in registry_raw.items()}
            ),
        )


def _canonical(obj) -> bytes:
    return json.dumps(obj, sort_keys=True, separators=(",", ":")).encode()
