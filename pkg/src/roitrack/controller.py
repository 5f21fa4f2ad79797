"""Bang-bang motor schema: map the target's image position to one gimbal rate.

The controller is memoryless.  While the target sits inside the elliptical
ROI (boundary included) it commands nothing; outside, it drives exactly one
axis at the configured magnitude, chosen by the target's angular sector:
right/left select yaw, top/bottom select pitch.  Signs follow the
image-recentering convention: a positive yaw rate swings the view so that a
right-sector target moves back toward the frame center, and likewise a
positive pitch rate for a top-sector target.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable

from .geometry import (
    EllipseRoi,
    FrameSpec,
    ImagePoint,
    Sector,
    classify_sector,
    relative_position,
    to_polar,
)

MAX_RATE_RAD_S = 0.3  # gimbal actuator cap, rad/s


@dataclass(frozen=True)
class GimbalCommand:
    """Single-axis rate command; at most one of the two rates is nonzero."""

    yaw_rate: float = 0.0
    pitch_rate: float = 0.0

    def __post_init__(self) -> None:
        if self.yaw_rate != 0.0 and self.pitch_rate != 0.0:
            raise ValueError(
                f"yaw and pitch are mutually exclusive, got ({self.yaw_rate}, {self.pitch_rate})"
            )

    def is_zero(self) -> bool:
        return self.yaw_rate == 0.0 and self.pitch_rate == 0.0


@dataclass(frozen=True)
class ControllerConfig:
    roi: EllipseRoi
    frame: FrameSpec
    rate_magnitude: float = MAX_RATE_RAD_S

    def __post_init__(self) -> None:
        if not 0.0 < self.rate_magnitude <= MAX_RATE_RAD_S:
            raise ValueError(
                f"rate_magnitude must be in (0, {MAX_RATE_RAD_S}], got {self.rate_magnitude}"
            )
        if not self.roi.fits(self.frame):
            raise ValueError(
                f"ROI ({self.roi.a} x {self.roi.b}) does not fit in half the frame "
                f"({self.frame.width}x{self.frame.height})"
            )


def step(p: ImagePoint, cfg: ControllerConfig) -> GimbalCommand:
    """One control decision for one observed image position.

    Output is one of exactly five values: (0, 0), (+-m, 0), (0, +-m) with
    m = ``cfg.rate_magnitude``.
    """
    if relative_position(p, cfg.roi) <= 1.0:
        return GimbalCommand()
    m = cfg.rate_magnitude
    sector = classify_sector(to_polar(p).theta)
    if sector is Sector.RIGHT:
        return GimbalCommand(yaw_rate=m)
    if sector is Sector.LEFT:
        return GimbalCommand(yaw_rate=-m)
    if sector is Sector.TOP:
        return GimbalCommand(pitch_rate=m)
    return GimbalCommand(pitch_rate=-m)


def step_series(points: Iterable[ImagePoint], cfg: ControllerConfig) -> list[GimbalCommand]:
    """Elementwise ``step`` over a point sequence (batch/replay convenience)."""
    return [step(p, cfg) for p in points]
