"""Closed-form sum-rate bounds for the two-user Gaussian X channel.

Receiver 1 sees ``Y1 = X1 + a X2 + Z1`` and receiver 2 sees
``Y2 = b X1 + X2 + Z2`` with unit-variance noise. Everything here works on the
squared cross gains ``a2``, ``b2`` and linear, noise-normalized powers.

Side One covers the mixed region ``a2 >= 1, b2 <= 1`` and compares three upper
bounds (A, B, C) against the sum rate of multiple-access transmission to
receiver 1. Side Two is the same construction with the roles of the two users
swapped, obtained by evaluating side One on :func:`mirror` of the parameters.

All rates are in bits per channel use.
"""
from __future__ import annotations

import enum
import math
from dataclasses import dataclass
from typing import NamedTuple, Optional

# Relative distance from a strict validity boundary under which a bound is
# reported as not applicable: its value diverges on that boundary.
BOUNDARY_RTOL = 1e-12
REGION_ATOL = 1e-12

# Status codes shared with the grid kernels.
OK = 0
B2_ABOVE_ONE = 1
A2_NOT_ABOVE_THRESHOLD = 2
BOUNDARY = 3
A2_BELOW_ONE = 4
B2_NOT_BELOW_THRESHOLD = 5

_REASONS_ONE = {
    B2_ABOVE_ONE: "b² > 1",
    A2_NOT_ABOVE_THRESHOLD: "a² not strictly greater than (P₁+1)²",
    BOUNDARY: "boundary",
    A2_BELOW_ONE: "a² < 1",
    B2_NOT_BELOW_THRESHOLD: "b² ≥ 1/(a²P₂+1)²",
}
_REASONS_TWO = {
    B2_ABOVE_ONE: "a² > 1",
    A2_NOT_ABOVE_THRESHOLD: "b² not strictly greater than (P₂+1)²",
    BOUNDARY: "boundary",
    A2_BELOW_ONE: "b² < 1",
    B2_NOT_BELOW_THRESHOLD: "a² ≥ 1/(b²P₁+1)²",
}


class Receiver(enum.Enum):
    ONE = 1
    TWO = 2

    @property
    def other(self) -> "Receiver":
        return Receiver.TWO if self is Receiver.ONE else Receiver.ONE


class BoundKind(enum.Enum):
    """One of the six bounds: tag A/B/C on receiver side One or Two."""

    A1 = ("A", 1)
    B1 = ("B", 1)
    C1 = ("C", 1)
    A2 = ("A", 2)
    B2 = ("B", 2)
    C2 = ("C", 2)

    @property
    def tag(self) -> str:
        return self.value[0]

    @property
    def side(self) -> Receiver:
        return Receiver(self.value[1])

    @classmethod
    def of(cls, tag: str, side: Receiver) -> "BoundKind":
        return cls[f"{tag}{side.value}"]

    def __str__(self) -> str:
        return self.name


@dataclass(frozen=True)
class ChannelParams:
    """Standard-form channel ``(a², b², P₁, P₂)``; gains are stored squared."""

    a2: float
    b2: float
    p1: float
    p2: float

    def __post_init__(self):
        for name in ("a2", "b2", "p1", "p2"):
            value = getattr(self, name)
            if not isinstance(value, (int, float)) or isinstance(value, bool):
                raise TypeError(f"{name} must be a real number, got {value!r}")
            if not math.isfinite(value):
                raise ValueError(f"{name} must be finite, got {value!r}")
            if value < 0:
                raise ValueError(f"{name} must be nonnegative, got {value!r}")
            object.__setattr__(self, name, float(value))


@dataclass(frozen=True)
class BoundEvaluation:
    kind: BoundKind
    applicable: bool
    inapplicability_reason: Optional[str] = None
    value_bits: Optional[float] = None
    gap_bits: Optional[float] = None


class Region(enum.Enum):
    MIXED_R1 = "MixedR1"
    MIXED_R2 = "MixedR2"
    OUTSIDE = "Outside"


@dataclass(frozen=True)
class RegionLabel:
    tag: Region
    boundary: bool

    def __str__(self) -> str:
        return self.tag.value


@dataclass(frozen=True)
class DeltaCertificate:
    delta: float
    member: bool
    certifying_bounds: frozenset


class DominancePredicates(NamedTuple):
    """Closed-form pairwise comparisons of the side-One bounds.

    Each flag is only meaningful where both compared bounds are applicable.
    ``notes`` records predicates that were decided by a limit argument.
    """

    a_lt_c: bool
    b_lt_c: bool
    b_lt_a: bool
    notes: tuple = ()


# -- scalar formulas ----------------------------------------------------------
# The compiled kernel repeats these expressions operation for operation; keep
# the two in sync or the grid sweep stops matching point evaluations bit for bit.


def _mac1(a2: float, p1: float, p2: float) -> float:
    return 0.5 * math.log2(1.0 + p1 + a2 * p2)


def _gap_a(a2: float, p1: float) -> float:
    q = p1 + 1.0
    return 0.5 * math.log2((1.0 - q / a2) / (1.0 - q * q / a2))


def _gap_b(a2: float, b2: float, p2: float) -> float:
    s = a2 * p2 + 1.0
    return 0.5 * math.log2((1.0 - b2 * s) / (1.0 - b2 * s * s))


def _gap_c(b2: float, p1: float) -> float:
    return 0.5 * math.log2(1.0 + b2 * p1)


def _status_a(a2: float, b2: float, p1: float) -> int:
    if b2 > 1.0:
        return B2_ABOVE_ONE
    q = p1 + 1.0
    lim = q * q
    if a2 <= lim:
        return A2_NOT_ABOVE_THRESHOLD
    if a2 - lim <= BOUNDARY_RTOL * lim:
        return BOUNDARY
    return OK


def _status_b(a2: float, b2: float, p2: float) -> int:
    if a2 < 1.0:
        return A2_BELOW_ONE
    s = a2 * p2 + 1.0
    lim = 1.0 / (s * s)
    if b2 >= lim:
        return B2_NOT_BELOW_THRESHOLD
    if lim - b2 <= BOUNDARY_RTOL * lim:
        return BOUNDARY
    return OK


def _status_c(a2: float) -> int:
    return OK if a2 >= 1.0 else A2_BELOW_ONE


def side_one_raw(a2: float, b2: float, p1: float, p2: float):
    """Status codes and gaps of bounds A, B, C on side One.

    Returns ``(mac, (status_a, status_b, status_c), (gap_a, gap_b, gap_c))``
    with NaN gaps where the status is not ``OK``.
    """
    mac = _mac1(a2, p1, p2)
    sa = _status_a(a2, b2, p1)
    sb = _status_b(a2, b2, p2)
    sc = _status_c(a2)
    ga = _gap_a(a2, p1) if sa == OK else math.nan
    gb = _gap_b(a2, b2, p2) if sb == OK else math.nan
    gc = _gap_c(b2, p1) if sc == OK else math.nan
    return mac, (sa, sb, sc), (ga, gb, gc)


def reason_text(status: int, side: Receiver) -> str:
    table = _REASONS_ONE if side is Receiver.ONE else _REASONS_TWO
    return table[status]


# -- public operations --------------------------------------------------------


def mirror(params: ChannelParams) -> ChannelParams:
    """Swap the roles of the two users: ``(a², b², P₁, P₂) -> (b², a², P₂, P₁)``."""
    return ChannelParams(a2=params.b2, b2=params.a2, p1=params.p2, p2=params.p1)


def mac_sum_rate(params: ChannelParams, receiver: Receiver = Receiver.ONE) -> float:
    """Sum rate of optimal Gaussian multiple access to ``receiver``."""
    if receiver is Receiver.TWO:
        params = mirror(params)
    return _mac1(params.a2, params.p1, params.p2)


def _evaluation(kind: BoundKind, status: int, mac: float, gap: float) -> BoundEvaluation:
    if status != OK:
        return BoundEvaluation(kind, False, reason_text(status, kind.side))
    return BoundEvaluation(kind, True, value_bits=mac + gap, gap_bits=gap)


def bound_a(params: ChannelParams) -> BoundEvaluation:
    """Genie-aided bound with side information ``X2 + W``; needs ``b² <= 1`` and ``a² > (P₁+1)²``."""
    p = params
    mac = _mac1(p.a2, p.p1, p.p2)
    status = _status_a(p.a2, p.b2, p.p1)
    gap = _gap_a(p.a2, p.p1) if status == OK else math.nan
    return _evaluation(BoundKind.A1, status, mac, gap)


def bound_b(params: ChannelParams) -> BoundEvaluation:
    """Genie-aided bound with side information ``b X1 + W``; needs ``a² >= 1`` and ``b² < 1/(a²P₂+1)²``."""
    p = params
    mac = _mac1(p.a2, p.p1, p.p2)
    status = _status_b(p.a2, p.b2, p.p2)
    gap = _gap_b(p.a2, p.b2, p.p2) if status == OK else math.nan
    return _evaluation(BoundKind.B1, status, mac, gap)


def bound_c(params: ChannelParams) -> BoundEvaluation:
    """Z-channel bound plus the rate of the weak cross link; needs ``a² >= 1``."""
    p = params
    mac = _mac1(p.a2, p.p1, p.p2)
    status = _status_c(p.a2)
    gap = _gap_c(p.b2, p.p1) if status == OK else math.nan
    return _evaluation(BoundKind.C1, status, mac, gap)


def evaluate_side(params: ChannelParams, side: Receiver = Receiver.ONE) -> list:
    """Evaluations of bounds A, B, C for ``side``, in that order."""
    if side is Receiver.ONE:
        return [bound_a(params), bound_b(params), bound_c(params)]
    p = mirror(params)
    mac, statuses, gaps = side_one_raw(p.a2, p.b2, p.p1, p.p2)
    return [
        _evaluation(BoundKind.of(tag, side), status, mac, gap)
        for tag, status, gap in zip("ABC", statuses, gaps)
    ]


def best_bound(params: ChannelParams, side: Receiver = Receiver.ONE):
    """Smallest applicable bound as ``(kind, value_bits)``, or None.

    Ties keep the earlier kind in the order A, B, C.
    """
    best = None
    for ev in evaluate_side(params, side):
        if ev.applicable and (best is None or ev.value_bits < best[1]):
            best = (ev.kind, ev.value_bits)
    return best


def classify_region(params: ChannelParams) -> RegionLabel:
    a2, b2 = params.a2, params.b2
    boundary = abs(a2 - 1.0) <= REGION_ATOL or abs(b2 - 1.0) <= REGION_ATOL
    if a2 >= 1.0 and b2 <= 1.0:
        tag = Region.MIXED_R1
    elif a2 <= 1.0 and b2 >= 1.0:
        tag = Region.MIXED_R2
    else:
        tag = Region.OUTSIDE
    return RegionLabel(tag, boundary)


def _check_delta(delta: float) -> None:
    if not (isinstance(delta, (int, float)) and math.isfinite(delta)) or delta <= 0:
        raise ValueError(f"delta must be a positive finite number of bits, got {delta!r}")


def delta_threshold_a(p1: float, delta: float) -> float:
    """Smallest a² above which bound A certifies a gap below ``delta`` (with b² <= 1)."""
    _check_delta(delta)
    if p1 < 0:
        raise ValueError(f"p1 must be nonnegative, got {p1!r}")
    t = 2.0 ** (2.0 * delta)
    q = p1 + 1.0
    return q * (q * t - 1.0) / (t - 1.0)


def delta_threshold_b(a2: float, p2: float, delta: float) -> float:
    """b² below which bound B certifies a gap below ``delta``; requires ``a² >= 1``."""
    _check_delta(delta)
    if a2 < 1.0:
        raise ValueError(f"a2 must be >= 1, got {a2!r}")
    if p2 < 0:
        raise ValueError(f"p2 must be nonnegative, got {p2!r}")
    t = 2.0 ** (2.0 * delta)
    s = a2 * p2 + 1.0
    return (t - 1.0) / ((s * t - 1.0) * s)


def delta_threshold_c(p1: float, delta: float) -> float:
    """b² below which bound C certifies a gap below ``delta``; ``inf`` when ``p1 == 0``."""
    _check_delta(delta)
    if p1 < 0:
        raise ValueError(f"p1 must be nonnegative, got {p1!r}")
    if p1 == 0:
        return math.inf
    t = 2.0 ** (2.0 * delta)
    return (t - 1.0) / p1


def in_r_delta(params: ChannelParams, delta: float, side: Receiver = Receiver.ONE) -> DeltaCertificate:
    """Which bounds certify that MAC to ``side`` is within ``delta`` bits of sum capacity."""
    _check_delta(delta)
    p = params if side is Receiver.ONE else mirror(params)
    certifying = set()
    if p.b2 <= 1.0 and p.a2 > delta_threshold_a(p.p1, delta):
        certifying.add(BoundKind.of("A", side))
    if p.a2 >= 1.0:
        if p.b2 < delta_threshold_b(p.a2, p.p2, delta):
            certifying.add(BoundKind.of("B", side))
        if p.b2 < delta_threshold_c(p.p1, delta):
            certifying.add(BoundKind.of("C", side))
    return DeltaCertificate(delta, bool(certifying), frozenset(certifying))


def dominance_predicates(params: ChannelParams) -> DominancePredicates:
    """Closed-form tests for A < C, B < C and B < A on side One.

    With ``b² = 0`` the A/C threshold is infinite and A < C is false, and
    B and C tie at the MAC rate. With ``P₁ = 0`` bounds A and C both coincide
    with the MAC rate, so no predicate can hold.
    """
    a2, b2, p1, p2 = params.a2, params.b2, params.p1, params.p2
    q = p1 + 1.0
    s = a2 * p2 + 1.0
    notes = []
    if b2 == 0.0:
        a_lt_c = False
        notes.append("A<C vacuous: b² = 0 puts the threshold at infinity")
    else:
        a_lt_c = a2 > q * q + q / b2
    if p1 == 0.0:
        a_lt_c = b_lt_c = b_lt_a = False
        notes.append("all false: P₁ = 0 gives zero gap for A and C")
    else:
        b_lt_c = b2 < (1.0 / s) * (1.0 / s - a2 * p2 / p1)
        d = 1.0 + a2 * p2 * (a2 - q) / (p1 * q)
        if d > 0.0:
            b_lt_a = b2 < (1.0 / s) * (1.0 / d)
        else:
            # only reachable for a² < P₁+1, where bound A never applies
            b_lt_a = False
            notes.append("B<A false: threshold undefined for a² < P₁+1")
        if b2 == 0.0:
            # the B/C threshold is derived after dividing by b²; at b² = 0
            # both gaps are exactly zero
            b_lt_c = False
            notes.append("B<C false: b² = 0 gives zero gap for B and C")
    return DominancePredicates(a_lt_c, b_lt_c, b_lt_a, tuple(notes))


def dominance_margins(params: ChannelParams) -> tuple:
    """Signed distances ``(lhs - threshold)`` behind each dominance predicate.

    Used to keep consistency checks away from predicate boundaries. Entries are
    None where the predicate is decided by a limit.
    """
    a2, b2, p1, p2 = params.a2, params.b2, params.p1, params.p2
    q = p1 + 1.0
    s = a2 * p2 + 1.0
    if p1 == 0.0:
        return None, None, None
    m1 = None if b2 == 0.0 else a2 - (q * q + q / b2)
    m2 = None if b2 == 0.0 else b2 - (1.0 / s) * (1.0 / s - a2 * p2 / p1)
    d = 1.0 + a2 * p2 * (a2 - q) / (p1 * q)
    m3 = b2 - (1.0 / s) * (1.0 / d) if d > 0.0 else None
    return m1, m2, m3


def gap_sandwich(v: float, x: float) -> tuple:
    """Lower bound, exact value and upper bound of the bound-A gap in nats.

    With ``v = P₁`` and ``x = (P₁+1)²/a² in [0, 1)`` the gap is
    ``ln((1 - x/(v+1)) / (1 - x))``, squeezed between ``v/(1+v) ln(1/(1-x))``
    and ``ln(1/(1-x))``.
    """
    if not 0.0 <= x < 1.0:
        raise ValueError(f"x must lie in [0, 1), got {x!r}")
    upper = -math.log1p(-x)
    middle = math.log1p(-x / (v + 1.0)) - math.log1p(-x)
    lower = v / (1.0 + v) * upper
    return lower, middle, upper
