"""Grid evaluations behind the region, dominance, curve and threshold plots.

Rows are computed in chunks by the grid kernel (optionally on several
threads; the compiled kernel releases the GIL) and always emitted in row-major
grid order with b² varying fastest.
"""
from __future__ import annotations

import csv
import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from typing import Iterator, Optional

import numpy as np

from xchannel import bounds, kernel
from xchannel.bounds import (
    BoundEvaluation,
    BoundKind,
    ChannelParams,
    Receiver,
    RegionLabel,
)

KINDS = tuple(BoundKind)
_NOT_IN_REGION = {Receiver.ONE: "not in R₁", Receiver.TWO: "not in R₂"}


@dataclass(frozen=True)
class GridRange:
    lo: float
    hi: float
    count: int
    log: bool = False

    def __post_init__(self):
        if not (math.isfinite(self.lo) and math.isfinite(self.hi)):
            raise ValueError("range bounds must be finite")
        if int(self.count) != self.count or self.count < 1:
            raise ValueError(f"count must be a positive integer, got {self.count!r}")
        if self.lo > self.hi:
            raise ValueError(f"range min {self.lo!r} exceeds max {self.hi!r}")
        if self.lo < 0:
            raise ValueError(f"range values must be nonnegative, got min {self.lo!r}")
        if self.log and self.lo <= 0:
            raise ValueError("log spacing needs a positive minimum")

    def values(self) -> np.ndarray:
        if self.log:
            return np.geomspace(self.lo, self.hi, int(self.count))
        return np.linspace(self.lo, self.hi, int(self.count))


@dataclass(frozen=True)
class SweepConfig:
    a2: GridRange
    b2: GridRange
    p1: float
    p2: float
    delta: Optional[float] = None

    def __post_init__(self):
        ChannelParams(1.0, 1.0, self.p1, self.p2)  # validates the powers
        if self.delta is not None and not (math.isfinite(self.delta) and self.delta > 0):
            raise ValueError(f"delta must be positive, got {self.delta!r}")


@dataclass(frozen=True)
class SweepRow:
    a2: float
    b2: float
    region: RegionLabel
    evaluations: tuple  # six BoundEvaluation, kind order A1, B1, C1, A2, B2, C2
    best_kind: Optional[BoundKind]
    best_value_bits: Optional[float]
    r_delta_member: Optional[bool]
    certifying_bounds: Optional[frozenset]


def reported_sides(a2: float, b2: float) -> tuple:
    """Sides whose bounds a sweep row reports: the mixed region(s) containing the point."""
    sides = []
    if a2 >= 1.0 and b2 <= 1.0:
        sides.append(Receiver.ONE)
    if a2 <= 1.0 and b2 >= 1.0:
        sides.append(Receiver.TWO)
    return tuple(sides)


def evaluate_point(params: ChannelParams, delta: Optional[float] = None) -> SweepRow:
    """Sweep row for one point, computed from the scalar bound functions."""
    sides = reported_sides(params.a2, params.b2)
    evals = []
    best = None
    certifying = set()
    for side in Receiver:
        if side not in sides:
            evals += [
                BoundEvaluation(BoundKind.of(tag, side), False, _NOT_IN_REGION[side])
                for tag in "ABC"
            ]
            continue
        for ev in bounds.evaluate_side(params, side):
            evals.append(ev)
            if ev.applicable and (best is None or ev.value_bits < best[1]):
                best = (ev.kind, ev.value_bits)
        if delta is not None:
            certifying |= bounds.in_r_delta(params, delta, side).certifying_bounds
    return SweepRow(
        a2=params.a2,
        b2=params.b2,
        region=bounds.classify_region(params),
        evaluations=tuple(evals),
        best_kind=best[0] if best else None,
        best_value_bits=best[1] if best else None,
        r_delta_member=None if delta is None else bool(certifying),
        certifying_bounds=None if delta is None else frozenset(certifying),
    )


def _rows_for_chunk(a2: np.ndarray, b2: np.ndarray, config: SweepConfig) -> list:
    delta = config.delta if config.delta is not None else 0.0
    _, status, gap, value, cert = kernel.evaluate_grid(a2, b2, config.p1, config.p2, delta)
    rows = []
    a2_list, b2_list = a2.tolist(), b2.tolist()
    status_l, gap_l, value_l, cert_l = status.tolist(), gap.tolist(), value.tolist(), cert.tolist()
    for i, (x, y) in enumerate(zip(a2_list, b2_list)):
        region = bounds.classify_region(ChannelParams(x, y, config.p1, config.p2))
        sides = reported_sides(x, y)
        evals = []
        best = None
        for k, kind in enumerate(KINDS):
            if kind.side not in sides:
                evals.append(BoundEvaluation(kind, False, _NOT_IN_REGION[kind.side]))
                continue
            code = status_l[i][k]
            if code != bounds.OK:
                evals.append(BoundEvaluation(kind, False, bounds.reason_text(code, kind.side)))
                continue
            v = value_l[i][k]
            evals.append(BoundEvaluation(kind, True, value_bits=v, gap_bits=gap_l[i][k]))
            if best is None or v < best[1]:
                best = (kind, v)
        # certificates come from the closed-form thresholds, not from applicability
        certifying = {kind for k, kind in enumerate(KINDS) if kind.side in sides and cert_l[i][k]}
        member = None if config.delta is None else bool(certifying)
        rows.append(
            SweepRow(
                a2=x,
                b2=y,
                region=region,
                evaluations=tuple(evals),
                best_kind=best[0] if best else None,
                best_value_bits=best[1] if best else None,
                r_delta_member=member,
                certifying_bounds=None if config.delta is None else frozenset(certifying),
            )
        )
    return rows


def sweep_plane(config: SweepConfig, workers: int = 1) -> Iterator[SweepRow]:
    """One row per ``(a², b²)`` grid point, a² outer and b² inner."""
    a2_values = config.a2.values()
    b2_values = config.b2.values()
    nb = b2_values.shape[0]

    def chunk(x: float) -> list:
        return _rows_for_chunk(np.full(nb, x), b2_values, config)

    if workers <= 1:
        for x in a2_values:
            yield from chunk(x)
        return
    with ThreadPoolExecutor(max_workers=workers) as pool:
        # map keeps submission order, which is the grid order
        for rows in pool.map(chunk, a2_values):
            yield from rows


@dataclass(frozen=True)
class CurveRow:
    a2: float
    mac_bits: float
    value_a: Optional[float]
    value_c: Optional[float]
    gap_a: Optional[float]
    gap_c: Optional[float]
    r_delta_member: Optional[bool] = None


def sweep_curve_vs_a2(
    p1: float, p2: float, b2: float, a2_range: GridRange, delta: Optional[float] = None
) -> Iterator[CurveRow]:
    """MAC rate at receiver 1 and bounds A and C along a line of a² values."""
    if b2 > 1.0:
        raise ValueError(f"b2 must be <= 1, got {b2!r}")
    ChannelParams(1.0, b2, p1, p2)
    for x in a2_range.values().tolist():
        params = ChannelParams(x, b2, p1, p2)
        ev_a = bounds.bound_a(params)
        ev_c = bounds.bound_c(params)
        member = None
        if delta is not None:
            member = bounds.in_r_delta(params, delta).member
        yield CurveRow(
            a2=x,
            mac_bits=bounds.mac_sum_rate(params),
            value_a=ev_a.value_bits,
            value_c=ev_c.value_bits,
            gap_a=ev_a.gap_bits,
            gap_c=ev_c.gap_bits,
            r_delta_member=member,
        )


def threshold_curve_vs_p1(deltas, p1_range: GridRange) -> Iterator[tuple]:
    """``(p1, delta, a2_threshold)`` for each delta, sweeping P₁."""
    deltas = [float(d) for d in deltas]
    for d in deltas:
        if not (math.isfinite(d) and d > 0):
            raise ValueError(f"deltas must be positive, got {d!r}")
    for d in deltas:
        for p1 in p1_range.values().tolist():
            yield p1, d, bounds.delta_threshold_a(p1, d)


# -- CSV ----------------------------------------------------------------------

SWEEP_HEADER = (
    ["a2", "b2", "region", "boundary"]
    + [f"{k.name}_{field}" for k in KINDS for field in ("applicable", "value_bits", "gap_bits")]
    + ["best_kind", "best_value_bits", "r_delta_member", "certifying_bounds"]
)
CURVE_HEADER = ["a2", "mac_bits", "value_a", "value_c", "gap_a", "gap_c", "r_delta_member"]
THRESHOLD_HEADER = ["p1", "delta", "a2_threshold"]


def fmt(value) -> str:
    """CSV cell: 12 significant digits, 0/1 booleans, empty when absent."""
    if value is None:
        return ""
    if isinstance(value, bool):
        return "1" if value else "0"
    if isinstance(value, float):
        if math.isinf(value):
            return "inf" if value > 0 else "-inf"
        return format(value, ".12g")
    return str(value)


def sweep_row_cells(row: SweepRow) -> list:
    cells = [fmt(row.a2), fmt(row.b2), str(row.region), fmt(row.region.boundary)]
    for ev in row.evaluations:
        cells += [fmt(ev.applicable), fmt(ev.value_bits), fmt(ev.gap_bits)]
    certifying = None
    if row.certifying_bounds is not None:
        certifying = "|".join(k.name for k in KINDS if k in row.certifying_bounds)
    cells += [
        fmt(row.best_kind.name if row.best_kind else None),
        fmt(row.best_value_bits),
        fmt(row.r_delta_member),
        fmt(certifying),
    ]
    return cells


def curve_row_cells(row: CurveRow) -> list:
    return [
        fmt(row.a2),
        fmt(row.mac_bits),
        fmt(row.value_a),
        fmt(row.value_c),
        fmt(row.gap_a),
        fmt(row.gap_c),
        fmt(row.r_delta_member),
    ]


def write_csv(fh, header, cell_rows) -> None:
    writer = csv.writer(fh, lineterminator="\n")
    writer.writerow(header)
    for cells in cell_rows:
        writer.writerow(cells)


def read_csv(fh) -> list:
    """Parse a CSV written by this module into dicts of floats, bools and strings."""

    def parse(name, cell):
        if cell == "":
            return None
        if name in ("region", "best_kind", "certifying_bounds"):
            return cell
        if name == "boundary" or name.endswith("applicable") or name == "r_delta_member":
            return cell == "1"
        return float(cell)

    reader = csv.DictReader(fh)
    return [{k: parse(k, v) for k, v in rec.items()} for rec in reader]
