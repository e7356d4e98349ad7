"""Machine-readable run report shared by every command."""

import json
import platform
import sys
import time
from dataclasses import asdict, dataclass, field
from datetime import datetime, timezone
from importlib import metadata
from pathlib import Path
from typing import Any, Dict, Optional

import numpy as np

from core.errors import DatasetIOError

SCHEMA_VERSION = 1
PACKAGES = ('numpy', 'scipy', 'pandas', 'python-dotenv')


def _versions() -> Dict[str, str]:
    out = {'python': platform.python_version()}
    for name in PACKAGES:
        try:
            out[name] = metadata.version(name)
        except metadata.PackageNotFoundError:
            out[name] = 'unknown'
    return out


def _plain(value: Any) -> Any:
    """Convert numpy scalars and arrays into JSON-native values."""
    if isinstance(value, dict):
        return {str(k): _plain(v) for k, v in value.items()}
    if isinstance(value, (list, tuple)):
        return [_plain(v) for v in value]
    if isinstance(value, np.ndarray):
        return [_plain(v) for v in value.tolist()]
    if isinstance(value, np.bool_):
        return bool(value)
    if isinstance(value, np.integer):
        return int(value)
    if isinstance(value, np.floating):
        value = float(value)
    if isinstance(value, float) and not np.isfinite(value):
        return None if np.isnan(value) else ('inf' if value > 0 else '-inf')
    return value


@dataclass
class RunReport:
    """One document per run.

    Floats are written with Python's shortest round-trip representation, so
    every reported number re-parses to the value used internally.
    """

    command: str
    status: str = 'ok'
    exit_code: int = 0
    seed: Optional[int] = None
    inputs: Dict[str, Any] = field(default_factory=dict)
    results: Dict[str, Any] = field(default_factory=dict)
    error: Optional[Dict[str, Any]] = None
    versions: Dict[str, str] = field(default_factory=_versions)
    schema_version: int = SCHEMA_VERSION
    started_at: str = field(default_factory=lambda: datetime.now(timezone.utc).isoformat())
    elapsed_seconds: float = 0.0
    _t0: float = field(default_factory=time.perf_counter, repr=False, compare=False)

    def finish(self):
        self.elapsed_seconds = time.perf_counter() - self._t0

    def fail(self, error: Exception, exit_code: int):
        self.status = 'error'
        self.exit_code = exit_code
        self.error = {
            'type': type(error).__name__,
            'code': getattr(error, 'error_code', 'UNEXPECTED'),
            'message': str(error),
        }
        line = getattr(error, 'line', None)
        if line is not None:
            self.error['line'] = line

    def as_dict(self) -> Dict[str, Any]:
        out = asdict(self)
        out.pop('_t0')
        return _plain(out)

    def to_json(self) -> str:
        return json.dumps(self.as_dict(), indent=2, allow_nan=False)

    @classmethod
    def from_json(cls, text: str) -> 'RunReport':
        return cls(**json.loads(text))

    def write(self, path: Optional[str] = None, stream=None):
        text = self.to_json() + '\n'
        if path:
            try:
                Path(path).write_text(text, encoding='utf-8')
            except OSError as e:
                raise DatasetIOError(f"cannot write report to {path}: {e}")
        if stream is not None:
            stream.write(text)
            stream.flush()


def stdout_report(report: RunReport, path: Optional[str], stdout_busy: bool):
    """Write to ``path`` if given, and to standard output unless it carries CSV."""
    report.write(path, None if stdout_busy else sys.stdout)
