"""Total orientations of Klein graphs, edge signs and vertex types."""

from __future__ import annotations

import itertools
import re
from dataclasses import dataclass
from functools import lru_cache

from .diagram import Color, ColoredDiagram, End
from .linkops import (PAIR_COLORS, PAIRS, OrientedLinkDiagram, bicolored_link,
                      component_count, link_total_linking, pair_components)

MAX_ENUMERATION_MU = 24


class OrientationError(ValueError):
    pass


@dataclass(frozen=True)
class TotalOrientation:
    """One direction (+1 or −1, relative to canonical traversal) per bicolored component."""

    rb: tuple[int, ...]
    bg: tuple[int, ...]
    rg: tuple[int, ...]

    def __post_init__(self):
        for key in ("rb", "bg", "rg"):
            if any(x not in (1, -1) for x in getattr(self, key)):
                raise OrientationError("directions must be +1 or -1")

    @classmethod
    def default(cls, d: ColoredDiagram) -> "TotalOrientation":
        cc = component_count(d)
        return cls((1,) * cc.rb, (1,) * cc.bg, (1,) * cc.rg)

    def for_pair(self, key: str) -> tuple[int, ...]:
        return getattr(self, key)

    def bits(self) -> tuple[int, ...]:
        return self.rb + self.bg + self.rg

    def reversed(self) -> "TotalOrientation":
        return TotalOrientation(*(tuple(-x for x in getattr(self, k)) for k in ("rb", "bg", "rg")))

    def format(self) -> str:
        parts = []
        for key in ("rb", "bg", "rg"):
            dirs = getattr(self, key)
            parts.append(key + ":" + ",".join(f"c{k}={'+' if x > 0 else '-'}"
                                              for k, x in enumerate(dirs)))
        return " ".join(parts)

    def check(self, d: ColoredDiagram) -> None:
        cc = component_count(d)
        for key, n in cc.by_pair().items():
            if len(self.for_pair(key)) != n:
                raise OrientationError(f"{key} link has {n} component(s), orientation gives "
                                       f"{len(self.for_pair(key))}")


def reverse(t: TotalOrientation) -> TotalOrientation:
    return t.reversed()


_ITEM = re.compile(r"^c(\d+)=([+-])$")


def parse_orientation(spec: str | None, d: ColoredDiagram) -> TotalOrientation:
    """Read `rb:c0=+,c1=- bg:c0=+ rg:c0=-` (unlisted components default to +)."""
    counts = component_count(d).by_pair()
    dirs = {key: [1] * n for key, n in counts.items()}
    spec = (spec or "default").strip()
    if spec.startswith("orient "):
        spec = spec[len("orient "):].strip()
    if spec != "default":
        for group in spec.split():
            if ":" not in group:
                raise OrientationError(f"expected <pair>:c<k>=<+|->, got {group!r}")
            key, items = group.split(":", 1)
            if key not in counts:
                raise OrientationError(f"unknown color pair {key!r}")
            for item in filter(None, items.split(",")):
                m = _ITEM.match(item)
                if not m:
                    raise OrientationError(f"bad orientation entry {item!r}")
                k = int(m.group(1))
                if k >= counts[key]:
                    raise OrientationError(f"{key} link has no component c{k}")
                dirs[key][k] = 1 if m.group(2) == "+" else -1
    return TotalOrientation(tuple(dirs["rb"]), tuple(dirs["bg"]), tuple(dirs["rg"]))


def enumerate_orientations(d: ColoredDiagram):
    """All 2^μ total orientations, + before −, bits ordered rb, bg, rg."""
    cc = component_count(d)
    if cc.mu > MAX_ENUMERATION_MU:
        raise OrientationError(f"μ = {cc.mu} exceeds {MAX_ENUMERATION_MU}; "
                               "give an explicit orientation instead")
    for bits in itertools.product((1, -1), repeat=cc.mu):
        yield TotalOrientation(bits[:cc.rb], bits[cc.rb:cc.rb + cc.bg], bits[cc.rb + cc.bg:])


# ---------------------------------------------------------------- flows


@lru_cache(maxsize=1024)
def _components(d: ColoredDiagram, key: str):
    i, j = PAIR_COLORS[key]
    return pair_components(d, i, j)


@dataclass(frozen=True)
class PairFlow:
    """In/out state of one bicolored link at every node slot it uses."""

    inward: dict
    loops: dict  # free loop arc → direction bit

    def enters(self, end: End) -> bool:
        return self.inward[end]


def pair_flow(d: ColoredDiagram, t: TotalOrientation, key: str) -> PairFlow:
    inward: dict[End, bool] = {}
    loops: dict[int, int] = {}
    dirs = t.for_pair(key)
    comps = _components(d, key)
    if len(dirs) != len(comps):
        raise OrientationError(f"{key} link has {len(comps)} component(s), orientation gives "
                               f"{len(dirs)}")
    for comp, x in zip(comps, dirs):
        for arc, frm, to in comp:
            if frm is None:
                loops[arc] = x
                continue
            inward[to] = x == 1
            inward[frm] = x != 1
    return PairFlow(inward, loops)


def oriented_pair(d: ColoredDiagram, t: TotalOrientation, key: str) -> OrientedLinkDiagram:
    i, j = PAIR_COLORS[key]
    return OrientedLinkDiagram(cached_bicolored_link(d, i, j), t.for_pair(key))


@lru_cache(maxsize=1024)
def cached_bicolored_link(d: ColoredDiagram, i: Color, j: Color):
    return bicolored_link(d, i, j)


def total_linking(d: ColoredDiagram, t: TotalOrientation) -> int:
    """λ: total linking numbers of the three oriented bicolored links, summed."""
    return sum(link_total_linking(oriented_pair(d, t, key)) for key, _, _ in PAIRS)


def transport(old: ColoredDiagram, t: TotalOrientation, new: ColoredDiagram,
              slot_map: dict, loop_map: dict | None = None) -> TotalOrientation:
    """Carry t to `new` through a partial map new (node, slot) → old (node, slot).

    Every new component must meet at least one mapped slot (or be a mapped free
    loop) and all of its mapped slots must agree; otherwise OrientationError.
    """
    loop_map = loop_map or {}
    out = {}
    for key, _, _ in PAIRS:
        flow = pair_flow(old, t, key)
        dirs = []
        for comp in _components(new, key):
            votes = set()
            for arc, frm, to in comp:
                if frm is None:
                    if arc in loop_map:
                        votes.add(flow.loops[loop_map[arc]])
                    continue
                if to in slot_map:
                    votes.add(1 if flow.inward[slot_map[to]] else -1)
                if frm in slot_map:
                    votes.add(-1 if flow.inward[slot_map[frm]] else 1)
            if len(votes) != 1:
                raise OrientationError(
                    f"orientations do not fit together on the {key} link" if votes else
                    f"a {key} component has no counterpart to inherit a direction from")
            dirs.append(votes.pop())
        out[key] = tuple(dirs)
    return TotalOrientation(out["rb"], out["bg"], out["rg"])


# ---------------------------------------------------------------- edges and vertices


def _pairs_with(c: Color) -> list[str]:
    return [key for key, i, j in PAIRS if c in (i, j)]


@dataclass(frozen=True)
class EdgeDoubleOrientation:
    edge: int
    color: Color
    pairs: tuple[str, str]
    ij_dir: int
    ik_dir: int

    @property
    def sign(self) -> int:
        return 1 if self.ij_dir == self.ik_dir else -1


def double_orientations(d: ColoredDiagram, t: TotalOrientation) -> list[EdgeDoubleOrientation]:
    """Directions induced on each edge by its two bicolored links, relative to the edge's run."""
    flows = {key: pair_flow(d, t, key) for key, _, _ in PAIRS}
    out = []
    for e in d.edges:
        keys = _pairs_with(e.color)
        dirs = []
        for key in keys:
            first = e.arcs[0]
            if not d.ends[first]:
                dirs.append(flows[key].loops[first])
                continue
            start = e.start if e.start is not None else min(d.ends[first])
            dirs.append(-1 if flows[key].enters(start) else 1)
        out.append(EdgeDoubleOrientation(e.index, e.color, tuple(keys), dirs[0], dirs[1]))
    return out


@dataclass(frozen=True)
class VertexType:
    vertex: int
    negatives: int
    cyclic: str  # "RGB", "BGR" or "none"
    pattern: tuple[bool, bool, bool]  # rb enters via r, bg enters via b, rg enters via r

    @property
    def sv(self) -> int:
        return {"RGB": 1, "BGR": -1}.get(self.cyclic, 0)


def vertex_types(d: ColoredDiagram, t: TotalOrientation) -> list[VertexType]:
    flows = {key: pair_flow(d, t, key) for key, _, _ in PAIRS}
    colors = d.colors
    out = []
    for n, node in enumerate(d.nodes):
        if not node.is_vertex:
            continue
        slot = {colors[a]: s for s, a in enumerate(node.slots)}
        x1 = flows["rb"].enters((n, slot[Color.R]))
        x2 = flows["bg"].enters((n, slot[Color.B]))
        x3 = flows["rg"].enters((n, slot[Color.R]))
        negatives = (x1 != x3) + (x1 != (not x2)) + (x2 != x3)
        cyclic = "none"
        if negatives == 3:
            cyclic = "RGB" if x3 else "BGR"
        out.append(VertexType(node.id, negatives, cyclic, (x1, x2, x3)))
    return out


def signed_seam_vertex_count(d: ColoredDiagram, t: TotalOrientation) -> int:
    """sv = #RGB − #BGR; |sv| seam vertices are needed by any totally oriented slice foam."""
    return sum(v.sv for v in vertex_types(d, t))


def classify_edges_matched(d: ColoredDiagram, t: TotalOrientation) -> dict[int, bool]:
    """Edge index → matched, for edges joining two distinct vertices."""
    signs = {e.edge: e.sign for e in double_orientations(d, t)}
    at: dict[tuple[int, Color], int] = {}
    for e in d.edges:
        if e.closed:
            continue
        at[(e.start[0], e.color)] = e.index
        at[(e.end[0], e.color)] = e.index
    out = {}
    for e in d.edges:
        if e.closed:
            continue
        v, w = e.start[0], e.end[0]
        if v == w:
            raise OrientationError(f"edge {e.index} is a loop at one vertex")
        i = next(c for c in Color if c != e.color)
        out[e.index] = signs[at[(v, i)]] == signs[at[(w, i)]]
    return out
