"""Check reports and their JSON form."""

from __future__ import annotations

import json
import math
import os
import tempfile
from dataclasses import dataclass, field
from typing import Any

import numpy as np


def slack(scale) -> float:
    """Absolute+relative roundoff allowance 1e-9 (1 + |scale|)."""
    return 1e-9 * (1.0 + abs(float(scale)))


def to_jsonable(obj: Any) -> Any:
    if isinstance(obj, dict):
        return {str(k): to_jsonable(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [to_jsonable(v) for v in obj]
    if isinstance(obj, np.ndarray):
        return to_jsonable(obj.tolist())
    if isinstance(obj, (np.floating, float)):
        v = float(obj)
        return v if math.isfinite(v) else None
    if isinstance(obj, (np.integer,)):
        return int(obj)
    if isinstance(obj, (np.bool_,)):
        return bool(obj)
    return obj


@dataclass
class CheckReport:
    """Outcome of a sampled property check.

    ``worst_residual`` is the smallest residual seen; negative values are
    violations.  For the ``find_*`` witness searches ``passed=False`` means a
    violation was found.
    """

    check_id: str
    passed: bool
    worst_residual: float
    n_samples: int
    witness: dict | None = None
    seed: int | None = None
    notes: list[str] = field(default_factory=list)
    extra: dict = field(default_factory=dict)

    @property
    def violation(self) -> float:
        """Magnitude of the worst violation (0 when none)."""
        return max(0.0, -self.worst_residual)

    def to_dict(self) -> dict:
        out = {
            "check_id": self.check_id,
            "passed": bool(self.passed),
            "worst_residual": self.worst_residual,
            "witness": self.witness,
            "n_samples": int(self.n_samples),
            "seed": self.seed,
        }
        if self.notes:
            out["notes"] = list(self.notes)
        if self.extra:
            out["extra"] = self.extra
        return to_jsonable(out)

    def to_json(self) -> str:
        return json.dumps(self.to_dict(), sort_keys=True)


def dumps(obj) -> str:
    """Stable JSON text (sorted keys, repr floats) for byte-identical artifacts."""
    return json.dumps(to_jsonable(obj), sort_keys=True, indent=2) + "\n"


def atomic_write_text(path, text: str) -> None:
    """Write via a temp file in the target directory, then rename over ``path``."""
    path = os.fspath(path)
    directory = os.path.dirname(os.path.abspath(path))
    os.makedirs(directory, exist_ok=True)
    fd, tmp = tempfile.mkstemp(prefix=".tmp-", dir=directory)
    try:
        with os.fdopen(fd, "w", newline="") as fh:
            fh.write(text)
        os.chmod(tmp, 0o644)  # mkstemp creates 0600
        os.replace(tmp, path)
    except BaseException:
        if os.path.exists(tmp):
            os.unlink(tmp)
        raise
