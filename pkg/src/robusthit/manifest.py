"""Run manifests: enough provenance to replay any artifact bit-for-bit.

The digest covers the command line, config digest, seeds, tool version,
and solver identity, but never the timestamps, so replaying a run yields
the same digest even though the wall clock moved.
"""

from __future__ import annotations

import hashlib
import json
from dataclasses import dataclass, field
from datetime import datetime, timezone
from pathlib import Path
from typing import Dict, List, Optional


def _utc_now() -> str:
    return datetime.now(timezone.utc).isoformat(timespec="seconds")


def file_digest(path: Path) -> str:
    return hashlib.sha256(path.read_bytes()).hexdigest()


@dataclass
class RunManifest:
    command_line: List[str]
    tool_version: str
    seeds: Dict[str, int] = field(default_factory=dict)
    config_digest: Optional[str] = None
    solver_identity: Optional[str] = None
    created: str = field(default_factory=_utc_now)

    def digest(self) -> str:
        payload = {
            "command_line": self.command_line,
            "tool_version": self.tool_version,
            "seeds": self.seeds,
            "config_digest": self.config_digest,
            "solver_identity": self.solver_identity,
        }
        canonical = json.dumps(payload, sort_keys=True, separators=(",", ":"))
        return hashlib.sha256(canonical.encode()).hexdigest()

    def to_json(self) -> dict:
        return {
            "command_line": self.command_line,
            "tool_version": self.tool_version,
            "seeds": self.seeds,
            "config_digest": self.config_digest,
            "solver_identity": self.solver_identity,
            "created": self.created,
            "digest": self.digest(),
        }


def write_artifact(path: Path, payload: dict, manifest: RunManifest) -> str:
    """Write payload as JSON with the manifest embedded; returns the digest."""
    document = {"manifest": manifest.to_json(), **payload}
    path.parent.mkdir(parents=True, exist_ok=True)
    path.write_text(json.dumps(document, indent=2, sort_keys=False) + "\n")
    return manifest.digest()


def write_csv(path: Path, text: str, manifest: RunManifest) -> str:
    """CSV artifacts carry the digest as a leading comment line."""
    path.parent.mkdir(parents=True, exist_ok=True)
    path.write_text(f"# manifest {manifest.digest()}\n{text}")
    return manifest.digest()
