"""Time-decoupled feature engineering for gated IMU segments.

Each segment maps to 31 values that do not depend on where in the session
the segment occurred or how long it lasted, only on the signal content:

  - min/mean/max of the three acceleration channels (9)
  - min/mean/max of the three pitch-angle channels (9)
  - min/mean/max of the three integrated velocity series (9)
  - net displacement per axis dx, dy, dz (3)
  - total displacement magnitude d_total (1)

Velocity is the cumulative trapezoidal integral of acceleration assuming
the wrist is at rest when the switch engages (v = 0 at the first sample);
displacement integrates velocity the same way. The raw timestamp column
feeds only the integrator steps -- no feature is a function of time alone.
"""

import math

import numpy as np

from .segments import Dataset, Segment, validate_segment
from .validation import ParamsMixin

_STATS = ("min", "mean", "max")
_ACCEL = ("ax", "ay", "az")
_ANGLE = ("gx", "gy", "gz")
_VELOCITY = ("vx", "vy", "vz")

FEATURE_NAMES: tuple[str, ...] = tuple(
    f"{channel}_{stat}" for group in (_ACCEL, _ANGLE, _VELOCITY) for stat in _STATS for channel in group
) + ("dx", "dy", "dz", "d_total")

N_FEATURES = len(FEATURE_NAMES)


def feature_names() -> tuple[str, ...]:
    """The 31 feature names in canonical (column) order."""
    return FEATURE_NAMES


def integrate_trapezoid(times: np.ndarray, values: np.ndarray) -> np.ndarray:
    """Cumulative trapezoidal integral of values over times.

    out[0] = 0 and out[i] = out[i-1] + (v[i] + v[i-1])/2 * (t[i] - t[i-1]).
    Times must be strictly increasing with at least two points.
    """
    t = np.asarray(times, dtype=np.float64)
    v = np.asarray(values, dtype=np.float64)
    if t.ndim != 1 or v.ndim != 1 or t.shape != v.shape:
        raise ValueError(f"times and values must be 1-D with equal length, got {t.shape} and {v.shape}")
    if t.shape[0] < 2:
        raise ValueError("need at least two points to integrate")
    dt = np.diff(t)
    if np.any(dt <= 0):
        raise ValueError("times must be strictly increasing")
    out = np.empty_like(t)
    out[0] = 0.0
    np.cumsum((v[1:] + v[:-1]) / 2.0 * dt, out=out[1:])
    return out


def extract_features(segment: Segment) -> np.ndarray:
    """Map one valid segment to its 31-entry feature vector."""
    problems = validate_segment(segment)
    if problems:
        raise ValueError(f"invalid segment: {', '.join(problems)}")
    t = segment.times()
    accel = [segment.channel(name) for name in _ACCEL]
    angle = [segment.channel(name) for name in _ANGLE]
    velocity = [integrate_trapezoid(t, a) for a in accel]
    displacement = [integrate_trapezoid(t, v)[-1] for v in velocity]

    out = np.empty(N_FEATURES, dtype=np.float64)
    pos = 0
    for group in (accel, angle, velocity):
        for stat in (np.min, np.mean, np.max):
            for series in group:
                out[pos] = stat(series)
                pos += 1
    dx, dy, dz = displacement
    out[pos : pos + 3] = (dx, dy, dz)
    out[pos + 3] = math.sqrt(dx * dx + dy * dy + dz * dz)
    return out


def extract_matrix(data: Dataset | list[Segment]) -> tuple[np.ndarray, np.ndarray]:
    """Feature matrix and label vector for a labeled segment collection.

    Rows keep the input order. Extraction errors are re-raised with the
    offending segment's index.
    """
    segments = list(data)
    X = np.empty((len(segments), N_FEATURES), dtype=np.float64)
    y = np.empty(len(segments), dtype=np.int64)
    for i, seg in enumerate(segments):
        if seg.label is None:
            raise ValueError(f"segment {i}: unlabeled; extract_matrix requires labels")
        try:
            X[i] = extract_features(seg)
        except ValueError as err:
            raise ValueError(f"segment {i}: {err}") from err
        y[i] = seg.label
    return X, y


class FeatureExtractor(ParamsMixin):
    """Stateless transformer from segments to the 31-column matrix.

    fit is a no-op (kept for pipeline compatibility); transform accepts
    any iterable of segments, labeled or not.
    """

    _param_names = ()

    def fit(self, X, y=None) -> "FeatureExtractor":
        return self

    def transform(self, X) -> np.ndarray:
        segments = list(X)
        out = np.empty((len(segments), N_FEATURES), dtype=np.float64)
        for i, seg in enumerate(segments):
            try:
                out[i] = extract_features(seg)
            except ValueError as err:
                raise ValueError(f"segment {i}: {err}") from err
        return out

    def fit_transform(self, X, y=None) -> np.ndarray:
        return self.fit(X, y).transform(X)

    def get_feature_names_out(self) -> tuple[str, ...]:
        return FEATURE_NAMES
