"""Randomized cross-checks of the closed-form bounds against the oracle."""
from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Optional

import numpy as np

from xchannel import bounds, oracle
from xchannel.bounds import ChannelParams
from xchannel.oracle import GenieConfig, GenieFlavor

# Draw ranges: powers from -20 dB to +20 dB, a² up to 1000 times its
# validity threshold, and rho² kept below RHO2_MAX so the gap stays finite.
POWER_LOG10_RANGE = (-2.0, 2.0)
A2_EXCESS_LOG10_RANGE = (math.log10(1.001), 3.0)
RHO2_MAX = 0.999


def draw_params(rng: np.random.Generator, flavor: GenieFlavor) -> ChannelParams:
    """Random channel inside the validity region of the given genie bound."""
    p1, p2 = 10.0 ** rng.uniform(*POWER_LOG10_RANGE, size=2)
    if flavor is GenieFlavor.THM1:
        q = p1 + 1.0
        a2 = q * q * 10.0 ** rng.uniform(*A2_EXCESS_LOG10_RANGE)
        b2 = rng.uniform(0.0, 1.0)
    else:
        a2 = 10.0 ** rng.uniform(0.0, A2_EXCESS_LOG10_RANGE[1])
        s = a2 * p2 + 1.0
        b2 = rng.uniform(0.0, RHO2_MAX) / (s * s)
    return ChannelParams(float(a2), float(b2), float(p1), float(p2))


@dataclass
class SuiteResult:
    name: str
    tolerance: float
    trials: int = 0
    max_residual: float = 0.0
    first_failure: Optional[dict] = None

    @property
    def passed(self) -> bool:
        return self.first_failure is None

    def record(self, residual: float, case: dict) -> None:
        self.trials += 1
        if not residual <= self.max_residual:
            self.max_residual = residual
        if self.first_failure is None and not residual <= self.tolerance:
            self.first_failure = dict(case, residual=residual)


@dataclass
class VerificationReport:
    seed: int
    trials: int
    suites: list = field(default_factory=list)

    @property
    def passed(self) -> bool:
        return all(s.passed for s in self.suites)


def _case(params: ChannelParams, genie: Optional[GenieConfig] = None) -> dict:
    case = {"a2": params.a2, "b2": params.b2, "p1": params.p1, "p2": params.p2}
    if genie is not None:
        case.update(flavor=genie.flavor.value, rho=genie.rho, eta=genie.eta)
    return case


def _genie(params: ChannelParams, flavor: GenieFlavor, perturb_etarho: float) -> GenieConfig:
    genie = oracle.optimal_genie(params, flavor)
    if perturb_etarho and genie.rho > 0.0:
        target = oracle.etarho_target(params, flavor) + perturb_etarho
        genie = GenieConfig(genie.rho, target / genie.rho, flavor)
    return genie


def run_verification(
    trials: int,
    seed: int,
    tolerance: float = 1e-9,
    perturb_etarho: float = 0.0,
    mac_rtol: float = 1e-12,
) -> VerificationReport:
    """Run every oracle suite on ``trials`` seeded draws per genie flavor.

    Suites: oracle equivalence (oracle gap vs closed form and vs the bound's
    gap), zero term, MAC identity, chain rule, gap nonnegativity and the
    sandwich on the bound-A gap. ``perturb_etarho`` shifts ``eta * rho`` off
    the value that cancels the zero term, which should make that suite fail.
    """
    if trials < 1:
        raise ValueError("trials must be >= 1")
    rng = np.random.default_rng(seed)
    equiv = SuiteResult("oracle-equivalence", tolerance)
    zero = SuiteResult("zero-term", tolerance)
    mac = SuiteResult("mac-identity", mac_rtol)
    chain = SuiteResult("chain-rule", tolerance)
    nonneg = SuiteResult("gap-nonnegative", 0.0)
    sandwich = SuiteResult("taylor-sandwich", 1e-14)

    for _ in range(trials):
        for flavor in GenieFlavor:
            params = draw_params(rng, flavor)
            genie = _genie(params, flavor, perturb_etarho)
            case = _case(params, genie)
            system = oracle.build_system(params, genie)

            got, closed = oracle.verify_gap_formula(params, genie)
            ev = bounds.bound_a(params) if flavor is GenieFlavor.THM1 else bounds.bound_b(params)
            equiv.record(max(abs(got - closed), abs(got - ev.gap_bits)), case)
            zero.record(oracle.verify_zero_term(params, genie), case)

            rate = bounds.mac_sum_rate(params)
            mi_y = oracle.conditional_mi(system, ("X1", "X2"), "Y1")
            mac.record(abs(mi_y - rate) / rate if rate > 0 else abs(mi_y), case)

            mi_joint = oracle.conditional_mi(system, ("X1", "X2"), ("Y1", "S1"))
            mi_s = oracle.conditional_mi(system, ("X1", "X2"), "S1", "Y1")
            chain.record(abs(mi_joint - (mi_y + mi_s)), case)

            for side in bounds.Receiver:
                for e in bounds.evaluate_side(params, side):
                    if e.applicable:
                        nonneg.record(max(0.0, -e.gap_bits), _case(params))

        v = rng.uniform(0.0, 10.0)
        x = rng.uniform(0.0, 0.99)
        lower, middle, upper = bounds.gap_sandwich(v, x)
        sandwich.record(max(0.0, lower - middle, middle - upper), {"v": v, "x": x})

    report = VerificationReport(seed, trials)
    report.suites = [equiv, zero, mac, chain, nonneg, sandwich]
    return report
