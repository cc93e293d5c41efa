"""Covariance-level check of the genie-aided bounds.

The genie hands receiver 1 a side signal ``S1`` built from a noise ``W`` that is
correlated with ``Z1``. Every quantity in the genie argument is a conditional
mutual information between jointly Gaussian scalars, so it can be computed
exactly from determinants of covariance blocks and compared with the closed
forms used in :mod:`xchannel.bounds`.
"""
from __future__ import annotations

import enum
import math
from dataclasses import dataclass

import numpy as np

from xchannel.bounds import ChannelParams

BASE = ("X1", "X2", "Z1", "W")
NAMES = BASE + ("Y1", "S1")

DET_FLOOR = 1e-30
_LOG_DET_FLOOR = math.log(DET_FLOOR)


class GenieFlavor(enum.Enum):
    THM1 = "Thm1"  # S1 = X2 + eta W
    THM2 = "Thm2"  # S1 = b X1 + eta W


class SingularCovarianceError(ValueError):
    def __init__(self, names):
        self.names = tuple(names)
        super().__init__(f"covariance of {{{', '.join(self.names)}}} is singular")


@dataclass(frozen=True)
class GenieConfig:
    """Side-information parameters: correlation ``rho`` of W with Z1, scale ``eta``."""

    rho: float
    eta: float
    flavor: GenieFlavor

    @property
    def admissible(self) -> bool:
        return self.eta * self.eta <= 1.0 and self.rho * self.rho <= 1.0


@dataclass(frozen=True)
class GaussianSystem:
    """Joint covariance of ``(X1, X2, Z1, W, Y1, S1)``, all zero mean.

    ``factor`` expresses every variable in independent standard normal
    coordinates, so that ``covariance == factor @ factor.T``.
    """

    names: tuple
    covariance: np.ndarray
    factor: np.ndarray

    def index(self, names) -> list:
        lookup = {n: i for i, n in enumerate(self.names)}
        try:
            return [lookup[n] for n in names]
        except KeyError as exc:
            raise KeyError(f"unknown variable {exc.args[0]!r}; have {self.names}") from None

    def block(self, names) -> np.ndarray:
        idx = self.index(names)
        return self.covariance[np.ix_(idx, idx)]

    def variance(self, name: str) -> float:
        i = self.index([name])[0]
        return float(self.covariance[i, i])

    def min_eigenvalue(self) -> float:
        return float(np.linalg.eigvalsh(self.covariance)[0])


def build_system(params: ChannelParams, genie: GenieConfig) -> GaussianSystem:
    """Covariance of the inputs, noises, receiver-1 output and genie signal.

    Uses the nonnegative roots ``a = sqrt(a2)``, ``b = sqrt(b2)``.
    """
    rho, eta = genie.rho, genie.eta
    if not (math.isfinite(rho) and math.isfinite(eta)):
        raise ValueError("rho and eta must be finite")
    if abs(rho) > 1.0:
        raise ValueError(f"|rho| must be <= 1, got {rho!r}")
    a = math.sqrt(params.a2)
    b = math.sqrt(params.b2)
    # Cholesky factor of the base covariance over (X1, X2, Z1, W)
    base = np.diag([math.sqrt(params.p1), math.sqrt(params.p2), 1.0, math.sqrt(1.0 - rho * rho)])
    base[3, 2] = rho
    if genie.flavor is GenieFlavor.THM1:
        s1 = [0.0, 1.0, 0.0, eta]
    else:
        s1 = [b, 0.0, 0.0, eta]
    mix = np.array(
        [
            [1.0, 0.0, 0.0, 0.0],
            [0.0, 1.0, 0.0, 0.0],
            [0.0, 0.0, 1.0, 0.0],
            [0.0, 0.0, 0.0, 1.0],
            [1.0, a, 1.0, 0.0],
            s1,
        ]
    )
    factor = mix @ base
    cov = factor @ factor.T
    cov = 0.5 * (cov + cov.T)
    return GaussianSystem(NAMES, cov, factor)


def _logdet(rows: np.ndarray, system: GaussianSystem, names) -> float:
    """Log-determinant of the correlation block of ``names``.

    The eigenvalues of that block are the squared singular values of the
    unit-normalized factor rows; working on the factor halves the effective
    condition number.
    """
    if not names:
        return 0.0
    sv = np.linalg.svd(rows[system.index(names)], compute_uv=False)
    # numerically rank-deficient blocks are as singular as exact ones
    if sv[-1] <= sv[0] * len(names) * 8 * np.finfo(float).eps:
        raise SingularCovarianceError(names)
    logdet = 2.0 * float(np.sum(np.log(sv)))
    if logdet < _LOG_DET_FLOOR:
        raise SingularCovarianceError(names)
    return logdet


def conditional_mi(system: GaussianSystem, a, b, c=()) -> float:
    """``I(A; B | C)`` in bits for disjoint variable sets of a Gaussian system.

    Variables with zero variance carry no information and are dropped.
    """
    a, b, c = (tuple([x] if isinstance(x, str) else x) for x in (a, b, c))
    system.index(a + b + c)
    if set(a) & set(b) or set(a) & set(c) or set(b) & set(c):
        raise ValueError("variable sets must be disjoint")

    def live(names):
        return tuple(n for n in names if system.variance(n) > 0.0)

    a, b, c = live(a), live(b), live(c)
    if not a or not b:
        return 0.0
    # disjoint supports in the independent coordinates: exactly independent
    support = system.factor != 0.0

    def cols(names):
        return support[system.index(names)].any(axis=0)

    if not (cols(a) & cols(b + c)).any() or not (cols(b) & cols(a + c)).any():
        return 0.0
    # Each variance enters the four determinants below equally often with
    # both signs, so unit-normalizing the variables leaves the result unchanged.
    norms = np.linalg.norm(system.factor, axis=1)
    with np.errstate(divide="ignore", invalid="ignore"):
        rows = system.factor / norms[:, None]
    nats = 0.5 * (
        _logdet(rows, system, a + c)
        + _logdet(rows, system, b + c)
        - _logdet(rows, system, c)
        - _logdet(rows, system, a + b + c)
    )
    bits = nats / math.log(2.0)
    # rounding can leave a tiny negative value for independent sets
    return 0.0 if -1e-12 < bits < 0.0 else bits


def optimal_genie(params: ChannelParams, flavor: GenieFlavor) -> GenieConfig:
    """Genie with the smallest admissible correlation; this forces ``eta = 1``."""
    if flavor is GenieFlavor.THM1:
        q = params.p1 + 1.0
        if not params.a2 > q * q:
            raise ValueError(
                f"Thm1 genie needs a² > (P₁+1)² = {q * q!r}, got a² = {params.a2!r}"
            )
        etarho = q / math.sqrt(params.a2)
        rho = q / math.sqrt(params.a2)
    else:
        s = params.a2 * params.p2 + 1.0
        if not params.b2 < 1.0 / (s * s):
            raise ValueError(
                f"Thm2 genie needs b² < 1/(a²P₂+1)² = {1.0 / (s * s)!r}, got b² = {params.b2!r}"
            )
        etarho = math.sqrt(params.b2) * s
        rho = math.sqrt(params.b2) * s
    # rho = 0 leaves eta free; take the admissible limit value
    eta = 1.0 if rho == 0.0 else etarho / rho
    return GenieConfig(rho=rho, eta=eta, flavor=flavor)


def etarho_target(params: ChannelParams, flavor: GenieFlavor) -> float:
    """Value of ``eta * rho`` that makes the first genie term vanish."""
    if flavor is GenieFlavor.THM1:
        return (params.p1 + 1.0) / math.sqrt(params.a2)
    return math.sqrt(params.b2) * (params.a2 * params.p2 + 1.0)


def verify_zero_term(params: ChannelParams, genie: GenieConfig) -> float:
    """Residual of the term the genie is tuned to cancel (bits)."""
    system = build_system(params, genie)
    if genie.flavor is GenieFlavor.THM1:
        return conditional_mi(system, "X2", "S1", "Y1")
    return conditional_mi(system, "X1", "S1", "Y1")


def closed_form_gap(params: ChannelParams, genie: GenieConfig) -> float:
    """Remaining genie term as a function of ``rho`` (bits)."""
    rho2 = genie.rho * genie.rho
    if rho2 >= 1.0:
        raise ValueError("rho² = 1 makes the genie covariance singular")
    if genie.flavor is GenieFlavor.THM1:
        scale = params.p1 + 1.0
    else:
        scale = params.a2 * params.p2 + 1.0
    return 0.5 * math.log2((1.0 - rho2 / scale) / (1.0 - rho2))


def verify_gap_formula(params: ChannelParams, genie: GenieConfig) -> tuple:
    """``(oracle_bits, closed_form_bits)`` for the genie gap term."""
    closed = closed_form_gap(params, genie)
    system = build_system(params, genie)
    if genie.flavor is GenieFlavor.THM1:
        oracle = conditional_mi(system, "X1", "S1", ("Y1", "X2"))
    else:
        oracle = conditional_mi(system, "X2", "S1", ("Y1", "X1"))
    return oracle, closed


def min_rho2(params: ChannelParams, flavor: GenieFlavor) -> float:
    if flavor is GenieFlavor.THM1:
        q = params.p1 + 1.0
        return q * q / params.a2
    s = params.a2 * params.p2 + 1.0
    return params.b2 * s * s


def gap_monotone_in_rho(params: ChannelParams, flavor: GenieFlavor, rho2_grid) -> bool:
    """True iff the closed-form gap is nondecreasing over increasing ``rho²``."""
    grid = sorted(float(r) for r in rho2_grid)
    lo = min_rho2(params, flavor)
    if grid and (grid[0] < lo or grid[-1] >= 1.0):
        raise ValueError(f"rho² grid must lie in [{lo!r}, 1)")
    gaps = [
        closed_form_gap(params, GenieConfig(math.sqrt(r), 1.0, flavor)) for r in grid
    ]
    return all(g0 <= g1 for g0, g1 in zip(gaps, gaps[1:]))
