"""Run manifests and deterministic JSON/CSV output."""

from __future__ import annotations

import json
import math
from dataclasses import asdict, dataclass, field
from pathlib import Path
from typing import Any, Optional

import numpy as np

from . import __version__

CSV_MANIFEST_PREFIX = "# manifest: "


@dataclass(frozen=True)
class RunManifest:
    """Everything needed to reproduce an output file; no timestamps on purpose."""

    command: str
    inputs: tuple[str, ...] = ()
    parameters: dict = field(default_factory=dict)
    seed: Optional[int] = None
    output: Optional[str] = None
    version: str = __version__

    def to_dict(self) -> dict:
        d = asdict(self)
        d["inputs"] = list(self.inputs)
        return d

    def csv_header(self) -> str:
        return CSV_MANIFEST_PREFIX + json.dumps(self.to_dict(), sort_keys=True, default=_json_default)


def _json_default(obj: Any):
    if isinstance(obj, np.generic):
        return obj.item()
    if isinstance(obj, np.ndarray):
        return obj.tolist()
    if isinstance(obj, complex):
        return [obj.real, obj.imag]
    if isinstance(obj, tuple):
        return list(obj)
    raise TypeError(f"cannot serialise {type(obj).__name__}")


def _clean(obj: Any):
    # JSON has no NaN/inf; map them to null so files stay standard
    if isinstance(obj, float) and not math.isfinite(obj):
        return None
    if isinstance(obj, dict):
        return {k: _clean(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [_clean(v) for v in obj]
    if isinstance(obj, np.generic):
        return _clean(obj.item())
    return obj


def dumps_json(result: Any, manifest: RunManifest) -> str:
    payload = {"manifest": manifest.to_dict(), "result": result}
    return json.dumps(_clean(payload), indent=2, sort_keys=True, default=_json_default) + "\n"


def load_json(path: str) -> Any:
    """Read JSON; ``OSError`` for unreadable files, ``ValueError`` for bad content."""
    text = Path(path).read_text()
    try:
        return json.loads(text)
    except json.JSONDecodeError as exc:
        raise ValueError(f"{path}: malformed JSON ({exc})") from None


def emit(text: str, out: Optional[str]) -> None:
    """Write to ``out`` or, when it is ``None`` or ``-``, to stdout."""
    if out is None or out == "-":
        print(text, end="")
        return
    with open(out, "w", newline="") as fh:
        fh.write(text)
