"""The invariant bundle (V, μ, λ, σ, ζ, β, sv) of a totally oriented Klein graph."""

from __future__ import annotations

from dataclasses import asdict, dataclass
from functools import lru_cache

from .diagram import ColoredDiagram
from .linkops import PAIRS, component_count
from .orientation import (TotalOrientation, enumerate_orientations, oriented_pair,
                          signed_seam_vertex_count, total_linking)
from .seifert import LinkSignatureBundle, link_signature


@dataclass(frozen=True)
class KleinInvariants:
    V: int
    mu: int
    lam: int
    sigma: int
    zeta: int
    beta: int
    sv: int
    hamiltonian: bool
    name: str | None = None

    def to_json(self) -> dict:
        out = asdict(self)
        out["lambda"] = out.pop("lam")
        return {k: out[k] for k in ("name", "V", "mu", "lambda", "sigma", "zeta",
                                    "beta", "sv", "hamiltonian")}


def constituents(d: ColoredDiagram, t: TotalOrientation) -> dict[str, LinkSignatureBundle]:
    """Signature data of each oriented bicolored link."""
    return {key: link_signature(oriented_pair(d, t, key)) for key, _, _ in PAIRS}


@lru_cache(maxsize=4096)
def compute(d: ColoredDiagram, t: TotalOrientation) -> KleinInvariants:
    t.check(d)
    parts = constituents(d, t)
    sigma = sum(b.sigma for b in parts.values())
    beta = sum(b.beta for b in parts.values())
    lam = total_linking(d, t)
    cc = component_count(d)
    return KleinInvariants(
        V=d.vertex_count, mu=cc.mu, lam=lam, sigma=sigma, zeta=sigma + lam, beta=beta,
        sv=signed_seam_vertex_count(d, t), hamiltonian=cc.hamiltonian, name=d.name)


@dataclass(frozen=True)
class Sweep:
    rows: tuple[tuple[TotalOrientation, KleinInvariants], ...]

    @property
    def min_abs_sigma(self) -> int:
        return min(abs(inv.sigma) for _, inv in self.rows)

    @property
    def max_abs_sigma(self) -> int:
        return max(abs(inv.sigma) for _, inv in self.rows)

    @property
    def sigma_constant(self) -> bool:
        return len({inv.sigma for _, inv in self.rows}) == 1


def orientation_sweep(d: ColoredDiagram) -> Sweep:
    return Sweep(tuple((t, compute(d, t)) for t in enumerate_orientations(d)))
