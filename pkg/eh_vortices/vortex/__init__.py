"""Vortex lines: the curves where F+ . F+ vanishes."""

from eh_vortices.vortex.extract import (
    ExtractionResult,
    extract_vortex_curves,
    extract_with_shift,
    sample_scalar,
)
from eh_vortices.vortex.refine import refine_crossing
from eh_vortices.vortex.topology import mark_topology_events, topology_report
from eh_vortices.vortex.track import Frame, extract_frame, track, track_frames
from eh_vortices.vortex.winding import FaceWindings, face_windings, plaquette_winding

__all__ = [
    "ExtractionResult",
    "FaceWindings",
    "Frame",
    "extract_frame",
    "extract_vortex_curves",
    "extract_with_shift",
    "face_windings",
    "mark_topology_events",
    "plaquette_winding",
    "refine_crossing",
    "sample_scalar",
    "topology_report",
    "track",
    "track_frames",
]
