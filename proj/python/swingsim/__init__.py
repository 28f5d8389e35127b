"""Swing controller simulator for a powered knee prosthesis.

Angles are radians, lengths metres, unless a name says otherwise.
"""

from ._core import (
    ConfigError,
    LegGeometry,
    default_scenario,
    forward_points,
    mz_boundary_knee,
    presets,
    run_campaign,
    run_scenario,
)

__all__ = [
    "ConfigError",
    "LegGeometry",
    "default_scenario",
    "forward_points",
    "mz_boundary_knee",
    "presets",
    "run_campaign",
    "run_scenario",
]
