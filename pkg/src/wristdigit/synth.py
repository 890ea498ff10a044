"""Seeded synthetic wrist-motion segments for the digits 0 and 1.

Digit 0 is one closed ellipse in the writing plane; digit 1 is one
straight downstroke. Acceleration channels are analytic second derivatives
of the parametric trajectories (no finite differencing), so integration
tests have closed-form targets. Pitch-angle channels carry class-dependent
tilt waveforms spanning the whole segment.

Beyond the two shapes, each segment draws per-sample latent factors that
give the corpus a realistic covariance structure:

  - writing drifts across the pad between strokes, so digit-0 samples get
    a wide lateral and vertical drift while digit 1 is written in place;
  - a posture factor tilts the wrist for the whole stroke, shaping the
    mean pitch angles jointly;
  - hand texture: zero-net-displacement wobble modes per axis at shared
    physical frequencies, so raw acceleration statistics overlap between
    the digits instead of separating them trivially;
  - a small fraction of digit-1 strokes are "sloppy", rolled with a wrist
    tilt comparable to digit 0's, so tilt alone does not fully separate
    the classes.

All randomness flows from a counter-based 64-bit PRNG keyed by
(seed, digit, index): any segment is reproducible in isolation, and
corpora may be generated in any order or in parallel.

The stroke itself occupies a write window at the start of the segment;
the wrist then rests (zero acceleration) for the remainder, which keeps
acceleration statistics decoupled from total duration. The easing
polynomial has zero 1st..3rd derivatives at both window ends, so the
acceleration is continuously differentiable everywhere, rest transitions
are exact, and trapezoidal integration carries no boundary error into the
hold phase.
"""

import math
from dataclasses import dataclass

import numpy as np

from .segments import ImuSample, Dataset, Segment
from .validation import check_seed

# --- stroke geometry (meters, seconds) ---
_ELLIPSE_RX = 0.008
_ELLIPSE_RY = 0.016
_ECCENTRICITY_RANGE = (0.9, 1.1)  # per-axis radius jitter, digit 0
_WRITE_WINDOW_ZERO = 0.55  # nominal stroke time, digit 0
_WRITE_WINDOW_ONE = 0.30
_WINDOW_JITTER_ZERO = 0.06  # log-sd of per-sample write-window scale
_WINDOW_JITTER_ONE = 0.07
_WINDOW_MAX_FRACTION = 0.95  # stroke never exceeds this share of the segment

# inter-stroke drift of the writing position: wide for the circling digit,
# pinned near zero in the plane for the downstroke
_DRIFT_XY_ZERO = 0.058
_DRIFT_Z_ZERO = 0.014
_DRIFT_X_ONE = 0.0015
_DRIFT_Z_ONE = 0.010
_STROKE_SHORTFALL_ONE = (0.001, 0.016)  # downstroke length deficit, x extent

# --- tilt waveforms (degrees) ---
_TILT_JITTER_ZERO = 0.02
_ROCKBACK_ANGLE = 1.2  # degrees, class-neutral
_ROCKBACK_POSTURE = -0.18  # co-moves with the pulse-width response
_ROCKBACK_SHARED = 0.45
_ROCKBACK_LOGSD = 0.06  # uniform relative amplitude jitter, digit 0
_TILT_BODY_LOGSD_ONE = 0.07  # lognormal amplitude spread, typical digit 1
_SLOPPY_FRACTION_ONE = 0.03  # digit-1 strokes rolled like a digit 0
_SLOPPY_RANGE_ONE = (0.88, 1.00)  # sloppy amplitude relative to tilt_gain_zero
_SHAPE_LOG_MEAN_ZERO = 1.75  # tilt-shape exponent location, digit 0
_SHAPE_LOG_MEAN_ONE = 0.40
_SHAPE_LOG_SD = 0.70  # posture-driven spread of the shape exponent
_SHAPE_EXPONENT_RANGE = (0.5, 25.0)
# fundamental amplitude: base * exp(posture_coef * P + logsd * own jitter);
# an independent second harmonic decouples the channel max from its mean
_GX_BASE, _GX_POSTURE, _GX_LOGSD, _GX_SECOND = 1.3, 0.17, 0.22, 1.0
_GY_BASE = {0: 2.05, 1: 0.52}  # the circling digit rolls the wrist more
_GY_POSTURE, _GY_LOGSD, _GY_SECOND = 0.17, 0.18, 0.85
_SECOND_SHARED = 0.22
_SECOND_HARMONIC_LOGSD = 0.20

# --- texture wobble ---
# physical frequencies shared by both classes, so wobble texture carries no
# class information; amplitudes are displacement meters per (axis, mode)
_WOBBLE_FREQ_LOW = (1.6, 2.7)  # Hz
_WOBBLE_FREQ_HIGH = (9.0, 13.0)
_WOBBLE_LOG_JITTER = 0.20
_WOBBLE_POSTURE = -0.18  # relaxed sessions wobble more
_WOBBLE_SHARED = 0.38
_WOBBLE_Z_JITTER = 0.10  # posture scales the texture energy on every axis
_WOBBLE_AMP = {
    # digit: ((x low, x high), (y low, y high), (z low, z high))
    0: ((0.0020, 0.0006), (0.0130, 0.0011), (0.0060, 0.0010)),
    1: ((0.0210, 0.0009), (0.0090, 0.0006), (0.0060, 0.0010)),
}

_CORPUS_SLOT_SECONDS = 2.0  # start-to-start spacing in a generated corpus


@dataclass(frozen=True)
class GeneratorConfig:
    """Externally tunable generation parameters."""

    sample_rate: float = 100.0
    duration_range_zero: tuple[float, float] = (0.8, 1.6)
    duration_range_one: tuple[float, float] = (0.4, 0.9)
    stroke_extent: float = 0.10
    accel_noise_sd: float = 0.05
    angle_noise_sd: float = 0.5
    tilt_gain_zero: float = 12.0
    tilt_gain_one: float = 4.0

    def __post_init__(self):
        if self.sample_rate <= 0:
            raise ValueError(f"sample_rate must be positive, got {self.sample_rate}")
        for name in ("duration_range_zero", "duration_range_one"):
            lo, hi = getattr(self, name)
            if not 0 < lo <= hi:
                raise ValueError(f"{name} must satisfy 0 < low <= high, got ({lo}, {hi})")
        if self.stroke_extent <= 0:
            raise ValueError(f"stroke_extent must be positive, got {self.stroke_extent}")
        if self.accel_noise_sd < 0 or self.angle_noise_sd < 0:
            raise ValueError("noise standard deviations must be >= 0")
        if self.tilt_gain_zero < 0 or self.tilt_gain_one < 0:
            raise ValueError("tilt gains must be >= 0")


def segment_rng(seed: int, digit: int, index: int) -> np.random.Generator:
    """Counter-based generator for one (seed, digit, index) slot."""
    check_seed(seed)
    if digit not in (0, 1):
        raise ValueError(f"digit must be 0 or 1, got {digit}")
    if not 0 <= index < 2**48:
        raise ValueError(f"index must be in [0, 2**48), got {index}")
    return np.random.Generator(np.random.Philox(key=[seed, (digit << 48) | index]))


def _ease(s):
    """Septic smoothstep: 0 -> 1 with zero 1st..3rd derivatives at ends."""
    return s**4 * (35.0 + s * (-84.0 + s * (70.0 - 20.0 * s)))


def _eased(s):
    return 140.0 * (s * (1.0 - s)) ** 3


def _easedd(s):
    return 420.0 * (s * (1.0 - s)) ** 2 * (1.0 - 2.0 * s)


def _bump(s):
    """Smooth bump 0 -> 1 -> 0, flat to third order at both ends."""
    p = _ease(s)
    return 4.0 * p * (1.0 - p)


def _bumpd(s):
    return 4.0 * _eased(s) * (1.0 - 2.0 * _ease(s))


def _bumpdd(s):
    d = _eased(s)
    return 4.0 * (_easedd(s) * (1.0 - 2.0 * _ease(s)) - 2.0 * d * d)


def _wobble_accel(t, s, window, amp, freq_hz, phase):
    """Second time-derivative of amp * sin(2 pi f t + phase) * bump(s).

    The bump envelope zeroes value, slope, and curvature at both window
    ends, so the mode contributes no net velocity or displacement and
    vanishes through the hold.
    """
    w = 2.0 * math.pi * freq_hz
    arg = w * t + phase
    return amp * (
        -w * w * np.sin(arg) * _bump(s)
        + (2.0 * w / window) * np.cos(arg) * _bumpd(s)
        + np.sin(arg) * _bumpdd(s) / (window * window)
    )


def generate_segment(digit: int, config: GeneratorConfig = GeneratorConfig(), seed: int = 0,
                     index: int = 0) -> Segment:
    """One labeled synthetic segment; bit-identical for equal arguments."""
    rng = segment_rng(seed, digit, index)

    # -- latent draws, fixed order and count regardless of parameter values --
    if digit == 0:
        duration = rng.uniform(*config.duration_range_zero)
        window = _WRITE_WINDOW_ZERO * math.exp(_WINDOW_JITTER_ZERO * rng.standard_normal())
        radius_x = _ELLIPSE_RX * rng.uniform(*_ECCENTRICITY_RANGE)
        radius_y = _ELLIPSE_RY * rng.uniform(*_ECCENTRICITY_RANGE)
        drift_x = rng.uniform(-_DRIFT_XY_ZERO, _DRIFT_XY_ZERO)
        drift_y = rng.uniform(-_DRIFT_XY_ZERO, _DRIFT_XY_ZERO)
        drift_z = rng.uniform(-_DRIFT_Z_ZERO, _DRIFT_Z_ZERO)
        stroke = 0.0
    else:
        duration = rng.uniform(*config.duration_range_one)
        window = _WRITE_WINDOW_ONE * math.exp(_WINDOW_JITTER_ONE * rng.standard_normal())
        radius_x = radius_y = 0.0
        drift_x = rng.uniform(-_DRIFT_X_ONE, _DRIFT_X_ONE)
        drift_y = 0.0
        drift_z = rng.uniform(-_DRIFT_Z_ONE, _DRIFT_Z_ONE)
        stroke = config.stroke_extent * (1.0 - rng.uniform(*_STROKE_SHORTFALL_ONE))
    window = min(window, _WINDOW_MAX_FRACTION * duration)

    posture = rng.standard_normal()
    tilt_jitter = rng.uniform(-1.0, 1.0)
    tilt_body = rng.standard_normal()
    sloppy_u = rng.uniform()
    sloppy_level = rng.uniform(*_SLOPPY_RANGE_ONE)
    unsteadiness = rng.standard_normal()  # shared by rock-back and table vibration
    rockback = _ROCKBACK_ANGLE * math.exp(
        _ROCKBACK_POSTURE * posture
        + _ROCKBACK_SHARED * unsteadiness
        + _ROCKBACK_LOGSD * rng.standard_normal()
    )
    rockback_lag = rng.uniform(-_ROCKBACK_LAG, _ROCKBACK_LAG)
    if digit == 0:
        tilt_amp = config.tilt_gain_zero * (1.0 + _TILT_JITTER_ZERO * tilt_jitter)
        shape = math.exp(_SHAPE_LOG_MEAN_ZERO + _SHAPE_LOG_SD * posture)
    else:
        if sloppy_u < _SLOPPY_FRACTION_ONE:
            tilt_amp = config.tilt_gain_zero * sloppy_level
        else:
            tilt_amp = config.tilt_gain_one * math.exp(_TILT_BODY_LOGSD_ONE * tilt_body)
        shape = math.exp(_SHAPE_LOG_MEAN_ONE + _SHAPE_LOG_SD * posture)
    shape = min(max(shape, _SHAPE_EXPONENT_RANGE[0]), _SHAPE_EXPONENT_RANGE[1])

    gx_amp = _GX_BASE * math.exp(_GX_POSTURE * posture + _GX_LOGSD * rng.standard_normal())
    gy_amp = _GY_BASE[digit] * math.exp(_GY_POSTURE * posture + _GY_LOGSD * rng.standard_normal())
    gx_second = _GX_SECOND * math.exp(
        _SECOND_SHARED * unsteadiness + _SECOND_HARMONIC_LOGSD * rng.standard_normal()
    )
    gy_second = _GY_SECOND * math.exp(
        _SECOND_SHARED * unsteadiness + _SECOND_HARMONIC_LOGSD * rng.standard_normal()
    )

    wobbles = []  # (axis, amp, freq Hz, phase), fixed draw order
    for axis in range(3):
        for mode, freq_range in ((0, _WOBBLE_FREQ_LOW), (1, _WOBBLE_FREQ_HIGH)):
            if axis == 2:
                # table-normal vibration tracks the wrist unsteadiness
                log_amp = (
                    _WOBBLE_Z_POSTURE * posture
                    + _WOBBLE_SHARED * unsteadiness
                    + _WOBBLE_Z_JITTER * rng.standard_normal()
                )
            else:
                log_amp = (
                    _WOBBLE_POSTURE * posture
                    + _WOBBLE_LOG_JITTER * rng.standard_normal()
                )
            amp = _WOBBLE_AMP[digit][axis][mode] * math.exp(log_amp)
            freq_hz = rng.uniform(*freq_range)
            phase = rng.uniform(0.0, 2.0 * math.pi)
            wobbles.append((axis, amp, freq_hz, phase))

    # -- deterministic trajectory evaluation --
    n = int(round(duration * config.sample_rate)) + 1
    t = np.arange(n, dtype=np.float64) / config.sample_rate
    s = np.minimum(t / window, 1.0)  # write-window progress; 1 during the hold
    u = t / t[-1]  # whole-segment progress for the tilt channels
    inv_w2 = 1.0 / (window * window)

    accel = np.zeros((3, n), dtype=np.float64)
    if digit == 0:
        theta = 2.0 * math.pi * _ease(s)
        theta_d = 2.0 * math.pi * _eased(s)
        theta_dd = 2.0 * math.pi * _easedd(s)
        accel[0] = -radius_x * (np.cos(theta) * theta_d**2 + np.sin(theta) * theta_dd)
        accel[1] = radius_y * (-np.sin(theta) * theta_d**2 + np.cos(theta) * theta_dd)
    else:
        accel[1] = -stroke * _easedd(s)
    accel[0] += drift_x * _easedd(s)
    accel[1] += drift_y * _easedd(s)
    accel[2] = drift_z * _easedd(s)
    accel *= inv_w2
    for axis, amp, freq_hz, phase in wobbles:
        accel[axis] += _wobble_accel(t, s, window, amp, freq_hz, phase)

    angles = np.empty((3, n), dtype=np.float64)
    angles[0] = gx_amp * np.sin(math.pi * u) + gx_second * np.sin(2.0 * math.pi * u)
    angles[1] = gy_amp * _bump(u) + gy_second * np.sin(2.0 * math.pi * u)
    if digit == 0:
        tilt_progress = (1.0 - np.cos(2.0 * math.pi * u)) / 2.0
    else:
        tilt_progress = _ease(u)
    # smoother gestures rock the wrist back harder around the tilt; the
    # shoulders vanish at the peak, leaving the maximum untouched; the lag
    # term skews lead-in versus follow-through without moving the mean
    shoulders = 4.0 * tilt_progress * (1.0 - tilt_progress)
    skew = 1.0 - rockback_lag * (2.0 * u - 1.0)
    angles[2] = tilt_amp * tilt_progress**shape - rockback * shoulders * skew

    # noise arrays are always drawn so the latent stream does not depend on
    # the noise settings
    accel += config.accel_noise_sd * rng.standard_normal((3, n))
    angles += config.angle_noise_sd * rng.standard_normal((3, n))

    samples = tuple(
        ImuSample(
            t=float(t[i]),
            ax=float(accel[0, i]), ay=float(accel[1, i]), az=float(accel[2, i]),
            gx=float(angles[0, i]), gy=float(angles[1, i]), gz=float(angles[2, i]),
            switch=True,
        )
        for i in range(n)
    )
    return Segment(samples=samples, label=digit)


def corpus_slot_offset(digit: int, index: int) -> float:
    """Global start time of a corpus segment; slots interleave the classes."""
    return (2 * index + digit) * _CORPUS_SLOT_SECONDS


def generate_corpus(
    n_per_class: int,
    config: GeneratorConfig = GeneratorConfig(),
    seed: int = 0,
    start_index: int = 0,
) -> Dataset:
    """2 * n_per_class labeled segments on a shared monotone timeline.

    Segment (digit, index) is seeded independently, so subsets reproduce
    without generating the rest. start_index offsets the per-class indices,
    letting callers draw fresh material never seen in an earlier corpus
    from the same seed.
    """
    if n_per_class < 1:
        raise ValueError(f"n_per_class must be >= 1, got {n_per_class}")
    max_duration = max(config.duration_range_zero[1], config.duration_range_one[1])
    if max_duration >= _CORPUS_SLOT_SECONDS:
        raise ValueError(
            f"durations up to {max_duration}s do not fit the {_CORPUS_SLOT_SECONDS}s corpus slots"
        )
    segments = []
    for index in range(start_index, start_index + n_per_class):
        for digit in (0, 1):
            seg = generate_segment(digit, config, seed, index)
            segments.append(seg.shifted(corpus_slot_offset(digit, index)))
    return Dataset(segments=tuple(segments))
