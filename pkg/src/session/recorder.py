"""
Run Recording Module

Keeps a JSON record of each terminal run: subcommand, arguments, resolved
configuration, files read and written, counts and elapsed time.
"""

import json
import time
import logging
from datetime import datetime
from pathlib import Path
from typing import Dict, List, Optional, Any
from dataclasses import dataclass, asdict, field

logger = logging.getLogger(__name__)


@dataclass
class FileRecord:
    """One file touched by a run"""
    role: str  # 'input' or 'output'
    path: str
    events: Optional[int] = None

    def to_dict(self) -> Dict[str, Any]:
        return asdict(self)

    @classmethod
    def from_dict(cls, data: Dict[str, Any]) -> 'FileRecord':
        return cls(**data)


@dataclass
class RunRecord:
    """Provenance of a single terminal run"""
    run_id: str
    command: str
    started_at: float
    elapsed: float = 0.0
    arguments: Dict[str, Any] = field(default_factory=dict)
    config: Dict[str, Any] = field(default_factory=dict)
    files: List[FileRecord] = field(default_factory=list)
    counts: Dict[str, Any] = field(default_factory=dict)

    def to_dict(self) -> Dict[str, Any]:
        """Convert to dictionary for JSON serialization"""
        return asdict(self)

    @classmethod
    def from_dict(cls, data: Dict[str, Any]) -> 'RunRecord':
        values = dict(data)
        values["files"] = [FileRecord.from_dict(item) for item in data.get("files", [])]
        return cls(**values)

    def paths(self, role: str) -> List[str]:
        return [record.path for record in self.files if record.role == role]


def _jsonable(value: Any) -> Any:
    if isinstance(value, (str, int, float, bool)) or value is None:
        return value
    if isinstance(value, dict):
        return {str(key): _jsonable(item) for key, item in value.items()}
    if isinstance(value, (list, tuple)):
        return [_jsonable(item) for item in value]
    return str(value)


class RunRecorder:
    """Records terminal runs as JSON files"""

    def __init__(self, enabled: bool = False, output_dir: str = "recordings"):
        self.enabled = enabled
        self.output_dir = Path(output_dir)
        self.current: Optional[RunRecord] = None
        self._clock: Optional[float] = None

        if self.enabled:
            self.output_dir.mkdir(parents=True, exist_ok=True)
            logger.info(f"Run recording enabled, output dir: {self.output_dir}")

    def start_run(self, command: str, arguments: Optional[Dict[str, Any]] = None) -> str:
        """Start recording a run and return its id"""
        if not self.enabled:
            return ""

        timestamp = datetime.now().strftime("%Y%m%d_%H%M%S_%f")
        run_id = f"{command}_{timestamp}"
        self._clock = time.perf_counter()
        self.current = RunRecord(
            run_id=run_id,
            command=command,
            started_at=time.time(),
            arguments=_jsonable(arguments or {}),
        )
        logger.info(f"Started recording run: {run_id}")
        return run_id

    def record_config(self, config: Dict[str, Any]) -> None:
        if self.current is not None:
            self.current.config.update(_jsonable(config))

    def record_file(self, role: str, path: Any, events: Optional[int] = None) -> None:
        if self.current is None:
            return
        self.current.files.append(FileRecord(role, str(path), events))
        logger.debug(f"Recorded {role} file {path}")

    def record_counts(self, **counts: Any) -> None:
        if self.current is not None:
            self.current.counts.update(_jsonable(counts))

    def save_run(self) -> str:
        """Save the current run to file; returns the path or '' when nothing was saved"""
        if not self.enabled or self.current is None:
            return ""

        if self._clock is not None:
            self.current.elapsed = time.perf_counter() - self._clock
        filepath = self.output_dir / f"{self.current.run_id}.json"

        try:
            with open(filepath, 'w') as f:
                json.dump(self.current.to_dict(), f, indent=2)
            logger.info(f"Run saved: {filepath}")
            return str(filepath)

        except Exception as e:
            logger.error(f"Failed to save run: {e}")
            return ""

    def load_run(self, filepath: str) -> Optional[RunRecord]:
        """Load a run record from file"""
        try:
            with open(filepath, 'r') as f:
                data = json.load(f)

            logger.info(f"Loaded run: {filepath}")
            return RunRecord.from_dict(data)

        except Exception as e:
            logger.error(f"Failed to load run: {e}")
            return None

    def get_run_summary(self) -> Dict[str, Any]:
        """Get summary of the current run"""
        if self.current is None:
            return {"command": None, "files": 0}

        return {
            "command": self.current.command,
            "files": len(self.current.files),
            "counts": dict(self.current.counts),
            "duration": time.perf_counter() - self._clock if self._clock is not None else 0,
        }
