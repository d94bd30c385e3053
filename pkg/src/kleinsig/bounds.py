"""Signature lower bounds on Klein unknotting numbers and Gordian distance."""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction

from .foam import (ChangeScript, LedgerReport, chi_orb, cobordism_ledger, compose_chi_orb,
                   cone_foam)
from .invariants import KleinInvariants
from .orientation import TotalOrientation
from .seifert import LinkSignatureBundle
from .transform import gen_basic


class HypothesisError(ValueError):
    pass


def _ceil(x: Fraction) -> int:
    return math.ceil(x)


def theta_unknotting_bound(inv: KleinInvariants) -> tuple[Fraction, int]:
    """(u_Y ≥ |σ|/4, u ≥ ⌈|σ|/4⌉) for a θ-curve."""
    if inv.V != 2 or inv.mu != 3:
        raise HypothesisError(f"not a θ-curve (V={inv.V}, μ={inv.mu}); need V=2, μ=3")
    uy = Fraction(abs(inv.sigma), 4)
    return uy, _ceil(uy)


def _same_shape(inv1: KleinInvariants, inv2: KleinInvariants) -> None:
    if inv1.V != inv2.V or inv1.mu != inv2.mu:
        raise HypothesisError(f"graphs must share V and μ (got V={inv1.V},{inv2.V}; "
                              f"μ={inv1.mu},{inv2.mu})")


def chain_left(inv1: KleinInvariants, inv2: KleinInvariants) -> int:
    """|σ₁ − σ₂| − β₁ − β₂ + 4μ − 12, unclamped."""
    _same_shape(inv1, inv2)
    return abs(inv1.sigma - inv2.sigma) - inv1.beta - inv2.beta + 4 * inv1.mu - 12


def gordian_lower_bound(inv1: KleinInvariants, inv2: KleinInvariants) -> Fraction:
    """d_Y ≥ max(0, left/4)."""
    return max(Fraction(0), Fraction(chain_left(inv1, inv2), 4))


def gammasig_chi_upper(inv: KleinInvariants) -> Fraction:
    """χ^orb_4 ≤ (3 − V + 2|sv| − 2(μ − 3) + β − |σ|)/4."""
    return Fraction(3 - inv.V + 2 * abs(inv.sv) - 2 * (inv.mu - 3) + inv.beta
                    - abs(inv.sigma), 4)


def constituent_bound(parts: dict[str, LinkSignatureBundle]) -> int:
    """max over constituent knots of ⌈|σ|/2⌉, a classical unknotting bound."""
    if any(b.mu != 1 for b in parts.values()):
        raise HypothesisError("constituent bound needs every bicolored link to be a knot")
    return max((-(-abs(b.sigma) // 2) for b in parts.values()), default=0)


def theta_n_window(n: int) -> tuple[int, int]:
    """Known range for u(θ_n): the signature bound and the bundled script's length."""
    return _ceil(Fraction(3 * n, 2)), 2 * n


@dataclass(frozen=True)
class BoundsReport:
    inputs: tuple[KleinInvariants, ...]
    theta_bound_uY: Fraction | None
    theta_bound_u: int | None
    gordian_bound: Fraction | None
    gammasig_chi_upper: Fraction
    chain_lines: dict
    mcu_style_bound: int | None
    cost: Fraction | None = None
    ledger: LedgerReport | None = None

    @property
    def gap(self) -> Fraction | None:
        if self.cost is None or self.gordian_bound is None:
            return None
        return self.cost - self.gordian_bound

    @property
    def violation(self) -> bool:
        """The signature side exceeds what the script realizes: a bug or a bad script."""
        if self.cost is None:
            return False
        return self.chain_lines["left"] > 4 * self.cost

    def to_json(self) -> dict:
        return {
            "inputs": [inv.to_json() for inv in self.inputs],
            "theta_bound_uY": self.theta_bound_uY,
            "theta_bound_u": self.theta_bound_u,
            "gordian_bound": self.gordian_bound,
            "gammasig_chi_upper": self.gammasig_chi_upper,
            "chain_lines": dict(self.chain_lines),
            "mcu_style_bound": self.mcu_style_bound,
            "cost": self.cost,
            "gap": self.gap,
            "violation": self.violation,
        }


def chain_report(inv1: KleinInvariants, inv2: KleinInvariants,
                 script: ChangeScript | None = None, t: TotalOrientation | None = None,
                 parts: dict[str, LinkSignatureBundle] | None = None) -> BoundsReport:
    """Evaluate the chain from the signature side up to the script's cost.

    The χ^orb_4 of the vertex sum is not computable; its line is left as None.
    The seamed line is bounded above by the realized ledger's value.
    """
    left = chain_left(inv1, inv2)
    lines: dict = {"left": left, "vertex_sum": None, "seamed": None, "distance": None}
    cost = ledger = None
    if script is not None:
        ledger = cobordism_ledger(script, t)
        cost = ledger.cost
        lines["seamed"] = -4 * ledger.chi_orb - 2 * inv1.V
        lines["distance"] = 4 * cost
    uy = u = None
    if inv1.V == 2 and inv1.mu == 3:
        uy, u = theta_unknotting_bound(inv1)
    mcu = None
    if parts is not None and all(b.mu == 1 for b in parts.values()):
        mcu = constituent_bound(parts)
    return BoundsReport((inv1, inv2), uy, u, gordian_lower_bound(inv1, inv2),
                        gammasig_chi_upper(inv1), lines, mcu, cost, ledger)


def realized_slice_chi(ledger: LedgerReport) -> Fraction:
    """χ^orb of an unknotting ledger for a θ-curve capped by the cone on the trivial θ."""
    if ledger.V != 2:
        raise HypothesisError("capping by a cone needs a θ-curve")
    cap = chi_orb(cone_foam(gen_basic("trivial_theta")))
    return compose_chi_orb(ledger.chi_orb, cap, ledger.V)
