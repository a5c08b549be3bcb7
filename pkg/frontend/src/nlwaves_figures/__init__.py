"""Figure rendering for solver run directories."""

from .render import KINDS, RenderError, render
from .runs import RunDir, RunFormatError, Snapshot, load_run, read_snapshot

__all__ = [
    "KINDS",
    "RenderError",
    "render",
    "RunDir",
    "RunFormatError",
    "Snapshot",
    "load_run",
    "read_snapshot",
]
