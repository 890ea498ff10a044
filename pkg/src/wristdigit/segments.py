"""Domain types for switch-gated inertial recordings.

A recording session is a stream of samples from a wrist-worn IMU: three
acceleration channels (ax, ay, az, in m/s^2), three pitch-angle channels
(gx, gy, gz, in degrees), a momentary switch that gates recording, and an
optional class label. A Segment is one maximal run of switch-engaged
samples; a Dataset is a labeled collection of segments.

All types here are immutable; functions that operate on them are pure.
"""

import math
from dataclasses import dataclass

import numpy as np

CHANNELS = ("ax", "ay", "az", "gx", "gy", "gz")

# A double trapezoid (accel -> velocity -> displacement) needs at least
# this many points to be nondegenerate.
MIN_SEGMENT_SAMPLES = 4

VALID_LABELS = (0, 1)


@dataclass(frozen=True)
class ImuSample:
    """One IMU reading: timestamp, six channels, switch state."""

    t: float
    ax: float
    ay: float
    az: float
    gx: float
    gy: float
    gz: float
    switch: bool = True

    def channel_values(self) -> tuple[float, float, float, float, float, float]:
        return (self.ax, self.ay, self.az, self.gx, self.gy, self.gz)


@dataclass(frozen=True)
class Segment:
    """A maximal switch-engaged run of samples, optionally labeled.

    The constructor only enforces what is needed for the object to be
    meaningful at all (non-empty, sensible label); everything else -- the
    minimum length, monotone time, finite values -- is reported by
    validate_segment so that callers such as the trace parser can hand
    back raw runs for inspection without dying on the first short one.
    """

    samples: tuple[ImuSample, ...]
    label: int | None = None

    def __post_init__(self):
        if not self.samples:
            raise ValueError("a segment needs at least one sample")
        if self.label is not None and self.label not in VALID_LABELS:
            raise ValueError(f"label must be one of {VALID_LABELS} or None, got {self.label!r}")

    def __len__(self) -> int:
        return len(self.samples)

    @property
    def t_start(self) -> float:
        return self.samples[0].t

    @property
    def t_end(self) -> float:
        return self.samples[-1].t

    @property
    def duration(self) -> float:
        return self.t_end - self.t_start

    def times(self) -> np.ndarray:
        return np.array([s.t for s in self.samples], dtype=np.float64)

    def channel(self, name: str) -> np.ndarray:
        """Return one named channel ('ax' ... 'gz') as a float64 array."""
        if name not in CHANNELS:
            raise ValueError(f"unknown channel {name!r}; expected one of {CHANNELS}")
        return np.array([getattr(s, name) for s in self.samples], dtype=np.float64)

    def shifted(self, dt: float) -> "Segment":
        """A copy of this segment with dt added to every timestamp."""
        moved = tuple(
            ImuSample(s.t + dt, s.ax, s.ay, s.az, s.gx, s.gy, s.gz, s.switch)
            for s in self.samples
        )
        return Segment(moved, self.label)


def validate_segment(segment: Segment) -> list[str]:
    """Check segment invariants; return a list of violations (empty == valid).

    Violations reported:
      - "too short": fewer than MIN_SEGMENT_SAMPLES samples
      - "non-monotone time": timestamps not strictly increasing
      - "non-finite values": any NaN/inf in timestamps or channels
      - "switch disengaged": a sample recorded with the switch off
    """
    problems = []
    if len(segment) < MIN_SEGMENT_SAMPLES:
        problems.append("too short")
    ts = [s.t for s in segment.samples]
    if any(b <= a for a, b in zip(ts, ts[1:])):
        problems.append("non-monotone time")
    finite = all(
        math.isfinite(v) for s in segment.samples for v in (s.t, *s.channel_values())
    )
    if not finite:
        problems.append("non-finite values")
    if any(not s.switch for s in segment.samples):
        problems.append("switch disengaged")
    return problems


@dataclass(frozen=True)
class Dataset:
    """A labeled collection of segments."""

    segments: tuple[Segment, ...]

    def __post_init__(self):
        for i, seg in enumerate(self.segments):
            if seg.label is None:
                raise ValueError(f"segment {i} is unlabeled; a Dataset requires labels")

    def __len__(self) -> int:
        return len(self.segments)

    def __iter__(self):
        return iter(self.segments)

    def labels(self) -> np.ndarray:
        return np.array([seg.label for seg in self.segments], dtype=np.int64)

    def class_counts(self) -> dict[int, int]:
        counts: dict[int, int] = {}
        for seg in self.segments:
            counts[seg.label] = counts.get(seg.label, 0) + 1
        return counts

    def subset(self, indices) -> "Dataset":
        return Dataset(tuple(self.segments[i] for i in indices))
