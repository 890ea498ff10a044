"""Reading and writing the trace CSV format.

One row per IMU sample:

    t,ax,ay,az,gx,gy,gz,switch,label

``switch`` is 0 or 1; ``label`` is 0, 1, or -1 for unlabeled rows. Rows
with switch=0 carry no segment data and are discarded by the parser; a
maximal run of switch=1 rows becomes one Segment. Floats are written with
17 significant digits so that parse(write(segments)) reproduces the exact
same values bit for bit.

Timestamps must increase strictly *within* a run; the format does not
require monotonicity across runs (each segment carries its own clock).
"""

from collections.abc import Iterable, Iterator

from .errors import LabelError, SequencingError, TraceFormatError
from .segments import ImuSample, Segment

TRACE_HEADER = "t,ax,ay,az,gx,gy,gz,switch,label"

_N_FIELDS = 9


def _format_float(x: float) -> str:
    return format(x, ".17g")


def _parse_row(line: str, line_number: int) -> tuple[ImuSample, int]:
    """Parse one data row into (sample, label); label -1 means unlabeled."""
    fields = line.split(",")
    if len(fields) != _N_FIELDS:
        raise TraceFormatError(
            line_number, f"expected {_N_FIELDS} comma-separated fields, got {len(fields)}"
        )
    try:
        numbers = [float(f) for f in fields[:7]]
    except ValueError:
        raise TraceFormatError(line_number, f"non-numeric value in {line!r}") from None
    switch_text = fields[7].strip()
    if switch_text not in ("0", "1"):
        raise TraceFormatError(line_number, f"switch must be 0 or 1, got {switch_text!r}")
    label_text = fields[8].strip()
    if label_text not in ("-1", "0", "1"):
        raise TraceFormatError(line_number, f"label must be -1, 0, or 1, got {label_text!r}")
    t, ax, ay, az, gx, gy, gz = numbers
    sample = ImuSample(t, ax, ay, az, gx, gy, gz, switch=switch_text == "1")
    return sample, int(label_text)


def iter_trace_rows(lines: Iterable[str]) -> Iterator[tuple[int, ImuSample, int]]:
    """Yield (line_number, sample, label) for each data row of a trace.

    Validates the header and row syntax only; run assembly (and the
    within-run time/label rules) is the caller's business. This is the
    row source shared by the batch parser and the streaming replay.
    """
    line_number = 0
    for raw in lines:
        line_number += 1
        line = raw.rstrip("\n").rstrip("\r")
        if line_number == 1:
            if line != TRACE_HEADER:
                raise TraceFormatError(1, f"expected header {TRACE_HEADER!r}, got {line!r}")
            continue
        if not line:
            continue
        sample, label = _parse_row(line, line_number)
        yield line_number, sample, label
    if line_number == 0:
        raise TraceFormatError(1, "empty input: missing header")


def parse_trace_csv(text: str | Iterable[str]) -> list[Segment]:
    """Parse a trace CSV into the list of switch-engaged runs.

    Runs are returned in file order, including runs shorter than the
    minimum segment length (validate_segment reports those); labels must
    be constant within a run, and -1 maps to an unlabeled segment.
    """
    lines = text.splitlines() if isinstance(text, str) else text
    segments: list[Segment] = []
    run: list[ImuSample] = []
    run_label: int | None = None

    def close_run():
        nonlocal run, run_label
        if run:
            segments.append(Segment(tuple(run), None if run_label == -1 else run_label))
        run = []
        run_label = None

    for line_number, sample, label in iter_trace_rows(lines):
        if not sample.switch:
            close_run()
            continue
        if run:
            if sample.t <= run[-1].t:
                raise SequencingError(
                    f"line {line_number}: time must increase within a run "
                    f"({sample.t!r} after {run[-1].t!r})"
                )
            if label != run_label:
                raise LabelError(
                    f"line {line_number}: label changed within a run "
                    f"({label} after {run_label})"
                )
            run.append(sample)
        else:
            run = [sample]
            run_label = label
    close_run()
    return segments


def write_trace_csv(segments: Iterable[Segment], require_labels: bool = False) -> str:
    """Serialize segments to trace CSV text (LF endings, 17-digit floats).

    Consecutive segments are separated by a single switch=0 spacer row, so
    adjacent runs do not merge on re-parse. With require_labels=True an
    unlabeled segment is an error instead of writing label -1.
    """
    out: list[str] = [TRACE_HEADER]
    previous: Segment | None = None
    for i, seg in enumerate(segments):
        if seg.label is None and require_labels:
            raise LabelError(f"segment {i} is unlabeled but labels were requested")
        label = -1 if seg.label is None else seg.label
        if previous is not None:
            gap_t = (previous.t_end + seg.t_start) / 2.0
            out.append(
                ",".join([_format_float(gap_t)] + ["0"] * 6 + ["0", "-1"])
            )
        for s in seg.samples:
            fields = [_format_float(v) for v in (s.t, *s.channel_values())]
            fields.append("1")
            fields.append(str(label))
            out.append(",".join(fields))
        previous = seg
    return "\n".join(out) + "\n"
