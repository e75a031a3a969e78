"""CSV, model-card, and SVG emission for the CLI.

CSV values are written with Python's shortest round-trip float formatting
so that read -> write reproduces a file byte-for-byte.
"""

from __future__ import annotations

import csv
import json
import math
from typing import Dict, Iterable, List, Sequence, Tuple

from .material import Direction, StressStrainSample
from .statics import SweepPoint

SWEEP_HEADER = ["pressure_kpa", "strain", "theta_rad", "R_mm", "curvature_per_m", "wall_tension_n"]
STRESS_HEADER = ["strain", "stress_pa", "direction"]
CAPSTAN_HEADER = ["angle_rad", "force_n"]
PRESTRETCH_HEADER = ["prestretch", "max_extension"]
EVENT_HEADER = ["tick", "event", "detail"]
FRONTIER_HEADER = ["assignment", "pressure_kpa", "cost_mm"]


class TableError(ValueError):
    """Malformed tabular input; message carries the line number."""


def _fmt(value) -> str:
    if isinstance(value, float):
        return repr(value)
    return str(value)


def write_csv(path: str, header: Sequence[str], rows: Iterable[Sequence]) -> None:
    with open(path, "w", encoding="utf-8", newline="") as fh:
        writer = csv.writer(fh, lineterminator="\n")
        writer.writerow(header)
        for row in rows:
            writer.writerow([_fmt(v) for v in row])


def read_csv(path: str, expected_header: Sequence[str]) -> List[List[str]]:
    with open(path, "r", encoding="utf-8", newline="") as fh:
        reader = csv.reader(fh)
        try:
            header = next(reader)
        except StopIteration:
            raise TableError("line 1: empty file") from None
        if header != list(expected_header):
            raise TableError(
                f"line 1: expected header {','.join(expected_header)!r}, got {','.join(header)!r}"
            )
        rows = []
        for lineno, row in enumerate(reader, start=2):
            if not row:
                continue
            if len(row) != len(expected_header):
                raise TableError(f"line {lineno}: expected {len(expected_header)} fields")
            rows.append(row)
        return rows


def _parse_float(value: str, lineno: int, column: str) -> float:
    try:
        return float(value)
    except ValueError:
        raise TableError(f"line {lineno}: {column} is not a number: {value!r}") from None


def read_stress_strain_csv(path: str) -> List[StressStrainSample]:
    samples = []
    for i, row in enumerate(read_csv(path, STRESS_HEADER), start=2):
        direction = row[2].strip().lower()
        if direction not in (Direction.LONGITUDINAL.value, Direction.TRANSVERSE.value):
            raise TableError(f"line {i}: direction must be longitudinal or transverse")
        samples.append(
            StressStrainSample(
                strain=_parse_float(row[0], i, "strain"),
                stress=_parse_float(row[1], i, "stress_pa"),
                direction=Direction(direction),
            )
        )
    return samples


def read_capstan_csv(path: str) -> List[Tuple[float, float]]:
    samples = []
    for i, row in enumerate(read_csv(path, CAPSTAN_HEADER), start=2):
        force = _parse_float(row[1], i, "force_n")
        if force <= 0:
            raise TableError(f"line {i}: force_n must be positive")
        samples.append((_parse_float(row[0], i, "angle_rad"), force))
    return samples


def read_prestretch_csv(path: str) -> List[Tuple[float, float]]:
    return [
        (_parse_float(row[0], i, "prestretch"), _parse_float(row[1], i, "max_extension"))
        for i, row in enumerate(read_csv(path, PRESTRETCH_HEADER), start=2)
    ]


def sweep_rows(points: Sequence[SweepPoint]) -> List[List]:
    rows = []
    for p in points:
        r_mm = math.inf if math.isinf(p.inner_radius) else p.inner_radius * 1e3
        rows.append(
            [p.pressure / 1e3, p.strain, p.bend_angle, r_mm, p.curvature, p.wall_tension]
        )
    return rows


def read_sweep_csv(path: str) -> List[List[float]]:
    return [
        [_parse_float(v, i, SWEEP_HEADER[j]) for j, v in enumerate(row)]
        for i, row in enumerate(read_csv(path, SWEEP_HEADER), start=2)
    ]


def read_event_log_csv(path: str) -> List[Tuple[int, str, str]]:
    rows = []
    for i, row in enumerate(read_csv(path, EVENT_HEADER), start=2):
        try:
            tick = int(row[0])
        except ValueError:
            raise TableError(f"line {i}: tick is not an integer: {row[0]!r}") from None
        rows.append((tick, row[1], row[2]))
    return rows


def read_frontier_csv(path: str) -> List[Tuple[str, float, float]]:
    return [
        (row[0], _parse_float(row[1], i, "pressure_kpa"), _parse_float(row[2], i, "cost_mm"))
        for i, row in enumerate(read_csv(path, FRONTIER_HEADER), start=2)
    ]


def write_model_card(path: str, card: Dict) -> None:
    with open(path, "w", encoding="utf-8") as fh:
        json.dump(card, fh, indent=2, sort_keys=True)
        fh.write("\n")


def svg_line_chart(
    series: Sequence[Tuple[str, Sequence[Tuple[float, float]]]],
    x_label: str,
    y_label: str,
    width: int = 640,
    height: int = 420,
) -> str:
    """Minimal multi-series line chart as standalone SVG markup."""
    margin = 56
    xs = [x for _, pts in series for x, _ in pts]
    ys = [y for _, pts in series for _, y in pts if math.isfinite(y)]
    if not xs or not ys:
        xs, ys = [0.0, 1.0], [0.0, 1.0]
    x_lo, x_hi = min(xs), max(xs)
    y_lo, y_hi = min(ys + [0.0]), max(ys)
    if x_hi == x_lo:
        x_hi = x_lo + 1.0
    if y_hi == y_lo:
        y_hi = y_lo + 1.0

    def sx(x: float) -> float:
        return margin + (x - x_lo) / (x_hi - x_lo) * (width - 2 * margin)

    def sy(y: float) -> float:
        return height - margin - (y - y_lo) / (y_hi - y_lo) * (height - 2 * margin)

    colors = ["#1f6fd0", "#d0571f", "#1fa05a", "#8a4bd0", "#b0b01f"]
    parts = [
        f'<svg xmlns="http://www.w3.org/2000/svg" width="{width}" height="{height}" '
        f'viewBox="0 0 {width} {height}" font-family="sans-serif" font-size="12">',
        f'<rect width="{width}" height="{height}" fill="white"/>',
        f'<line x1="{margin}" y1="{height-margin}" x2="{width-margin}" y2="{height-margin}" stroke="black"/>',
        f'<line x1="{margin}" y1="{margin}" x2="{margin}" y2="{height-margin}" stroke="black"/>',
        f'<text x="{width/2:.0f}" y="{height-12}" text-anchor="middle">{x_label}</text>',
        f'<text x="16" y="{height/2:.0f}" text-anchor="middle" transform="rotate(-90 16 {height/2:.0f})">{y_label}</text>',
        f'<text x="{margin}" y="{height-margin+16}" text-anchor="middle">{x_lo:g}</text>',
        f'<text x="{width-margin}" y="{height-margin+16}" text-anchor="middle">{x_hi:g}</text>',
        f'<text x="{margin-6}" y="{height-margin}" text-anchor="end">{y_lo:g}</text>',
        f'<text x="{margin-6}" y="{margin+4}" text-anchor="end">{y_hi:g}</text>',
    ]
    for i, (label, pts) in enumerate(series):
        finite = [(x, y) for x, y in pts if math.isfinite(y)]
        if not finite:
            continue
        color = colors[i % len(colors)]
        coords = " ".join(f"{sx(x):.2f},{sy(y):.2f}" for x, y in finite)
        parts.append(f'<polyline points="{coords}" fill="none" stroke="{color}" stroke-width="1.5"/>')
        parts.append(
            f'<text x="{width-margin+4}" y="{margin + 16*i}" fill="{color}">{label}</text>'
        )
    parts.append("</svg>")
    return "\n".join(parts)
