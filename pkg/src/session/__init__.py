"""
Run Recording Module

Records terminal runs (arguments, resolved configuration, files, counts)
as JSON for provenance.
"""

from .recorder import RunRecorder, RunRecord, FileRecord

__all__ = ["RunRecorder", "RunRecord", "FileRecord"]
