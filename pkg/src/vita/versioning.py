"""Per-operation checkpointing: an append-only version tree over full snapshots.

Every committed operation stores the complete state, deduplicated by content
hash: blobs live under ``<session_dir>/store/<hex digest>`` and the tree
itself is one canonical-JSON node per line in ``<session_dir>/graph.jsonl``
(append order is parent-before-child, so reading the file back yields a
stable topological order). Checkout never mutates stored nodes; committing
after a checkout of an older version starts a branch.
"""

from __future__ import annotations

import json
from dataclasses import dataclass
from datetime import datetime, timezone
from pathlib import Path

from .errors import StorageError, UnknownVersionError
from .frame import validate
from .nodes import OperatorNode, serialize
from .state import PARTS, SessionState


@dataclass(frozen=True)
class VersionNode:
    version_id: int
    parent_id: int | None
    operator_record: str  # canonical serialized operator
    snapshot: dict[str, str]  # part name -> content digest
    created_at: str

    def to_dict(self) -> dict:
        return {
            "version_id": self.version_id,
            "parent_id": self.parent_id,
            "operator_record": self.operator_record,
            "snapshot": dict(sorted(self.snapshot.items())),
            "created_at": self.created_at,
        }

    @classmethod
    def from_dict(cls, d: dict) -> "VersionNode":
        return cls(
            d["version_id"], d["parent_id"], d["operator_record"], d["snapshot"], d["created_at"]
        )


class VersionStore:
    """Single-writer blob store plus version tree for one session directory."""

    def __init__(self, session_dir: str | Path):
        self.session_dir = Path(session_dir)
        self.blob_dir = self.session_dir / "store"
        self.graph_path = self.session_dir / "graph.jsonl"
        try:
            self.blob_dir.mkdir(parents=True, exist_ok=True)
        except OSError as e:
            raise StorageError(f"cannot create session directory: {e}") from e
        self.nodes: list[VersionNode] = []
        if self.graph_path.exists():
            with open(self.graph_path, encoding="utf-8") as f:
                for line in f:
                    if line.strip():
                        self.nodes.append(VersionNode.from_dict(json.loads(line)))

    # --- blobs ---

    def _write_blob(self, digest: str, data: bytes) -> None:
        path = self.blob_dir / digest
        if path.exists():
            return  # content addressing: identical state is stored once
        try:
            tmp = path.with_suffix(".tmp")
            tmp.write_bytes(data)
            tmp.rename(path)
        except OSError as e:
            raise StorageError(f"cannot write snapshot blob: {e}") from e

    def _read_blob(self, digest: str) -> bytes:
        path = self.blob_dir / digest
        try:
            return path.read_bytes()
        except OSError as e:
            raise StorageError(f"missing snapshot blob {digest}: {e}") from e

    # --- versions ---

    def commit(
        self, state: SessionState, operator_record: OperatorNode, parent_id: int | None
    ) -> VersionNode:
        validate(state.frame)
        bundles = state.bundles()
        digests = state.digests()
        for part in PARTS:
            self._write_blob(digests[part], bundles[part])
        node = VersionNode(
            version_id=len(self.nodes),
            parent_id=parent_id,
            operator_record=serialize(operator_record).decode(),
            snapshot=digests,
            created_at=datetime.now(timezone.utc).isoformat(),
        )
        try:
            with open(self.graph_path, "a", encoding="utf-8") as f:
                f.write(json.dumps(node.to_dict(), sort_keys=True, separators=(",", ":")) + "\n")
        except OSError as e:
            raise StorageError(f"cannot append to version graph: {e}") from e
        self.nodes.append(node)
        return node

    def node(self, version_id: int) -> VersionNode:
        if not (0 <= version_id < len(self.nodes)):
            raise UnknownVersionError(f"no version {version_id}")
        return self.nodes[version_id]

    def checkout(self, version_id: int) -> SessionState:
        node = self.node(version_id)
        bundles = {part: self._read_blob(digest) for part, digest in node.snapshot.items()}
        state = SessionState.restore(bundles)
        state.frame = state.frame.with_provenance(version_id)
        return state

    def history(self) -> list[VersionNode]:
        return list(self.nodes)
