"""Link diagrams extracted from Klein graph diagrams: components, signs, linking numbers."""

from __future__ import annotations

from dataclasses import dataclass
from functools import cached_property

from .diagram import Color, ColoredDiagram, End

PAIRS: tuple[tuple[str, Color, Color], ...] = (
    ("rb", Color.R, Color.B),
    ("bg", Color.B, Color.G),
    ("rg", Color.R, Color.G),
)
PAIR_COLORS = {key: (i, j) for key, i, j in PAIRS}

Step = tuple[int, "End | None", "End | None"]  # (arc, from end, to end)


@dataclass(frozen=True)
class LinkDiagram:
    """A vertex-free link diagram.

    `crossings` use the same slot convention as the colored format.  `heads`
    records, for each arc, the (crossing, slot) its canonical traversal runs
    into, or None for a crossingless circle.  Components are listed in
    canonical order with their arcs in traversal order.
    """

    crossings: tuple[tuple[int, int, int, int], ...]
    heads: tuple[tuple[int, End | None], ...]
    components: tuple[tuple[int, ...], ...]

    @cached_property
    def head(self) -> dict[int, End | None]:
        return dict(self.heads)

    @cached_property
    def component_map(self) -> dict[int, int]:
        return {a: c for c, arcs in enumerate(self.components) for a in arcs}

    @cached_property
    def ends(self) -> dict[int, tuple[End, ...]]:
        out: dict[int, list[End]] = {a: [] for a, _ in self.heads}
        for x, slots in enumerate(self.crossings):
            for s, a in enumerate(slots):
                out[a].append((x, s))
        return {a: tuple(v) for a, v in out.items()}

    @property
    def arcs(self) -> list[int]:
        return [a for a, _ in self.heads]

    @property
    def mu(self) -> int:
        return len(self.components)

    def other_end(self, arc: int, end: End) -> End:
        a, b = self.ends[arc]
        return b if a == end else a


@dataclass(frozen=True)
class OrientedLinkDiagram:
    base: LinkDiagram
    direction: tuple[int, ...]

    def __post_init__(self):
        if len(self.direction) != self.base.mu or any(x not in (1, -1) for x in self.direction):
            raise ValueError("need one direction (+1 or -1) per component")

    @classmethod
    def default(cls, base: LinkDiagram) -> "OrientedLinkDiagram":
        return cls(base, (1,) * base.mu)

    def head(self, arc: int) -> End | None:
        h = self.base.head[arc]
        if h is None or self.direction[self.base.component_map[arc]] == 1:
            return h
        return self.base.other_end(arc, h)

    @cached_property
    def signs(self) -> tuple[int, ...]:
        return tuple(crossing_sign(x, self) for x in range(len(self.base.crossings)))

    @property
    def writhe(self) -> int:
        return sum(self.signs)


# ---------------------------------------------------------------- construction


def link_from_pd(crossings, free: int = 0) -> LinkDiagram:
    """Build a LinkDiagram from crossing 4-tuples plus `free` crossingless circles.

    Canonical direction: each component starts at its least arc and runs from
    that arc's smaller (crossing, slot) end.
    """
    crossings = tuple(tuple(x) for x in crossings)
    ends: dict[int, list[End]] = {}
    for x, slots in enumerate(crossings):
        if len(slots) != 4:
            raise ValueError("crossings need four arcs")
        for s, a in enumerate(slots):
            ends.setdefault(a, []).append((x, s))
    for a, e in ends.items():
        if len(e) != 2:
            raise ValueError(f"arc {a} occurs {len(e)} time(s)")
    top = max(ends, default=0)
    heads: dict[int, End | None] = {}
    comps: list[tuple[int, ...]] = []
    for a in sorted(ends):
        if a in heads:
            continue
        start = min(ends[a])
        cur = start
        arcs = []
        while True:
            arc = crossings[cur[0]][cur[1]]
            e0, e1 = ends[arc]
            to = e1 if e0 == cur else e0
            heads[arc] = to
            arcs.append(arc)
            cur = (to[0], (to[1] + 2) % 4)
            if cur == start:
                break
        comps.append(tuple(arcs))
    for k in range(free):
        heads[top + 1 + k] = None
        comps.append((top + 1 + k,))
    return LinkDiagram(crossings, tuple(sorted(heads.items())), tuple(comps))


def braid_closure(strands: int, letters) -> OrientedLinkDiagram:
    """Closure of a braid word (letters ±i for σ_i^{±1}) with strands oriented upward.

    A positive letter is a positive crossing.  Positions no letter touches close
    up into crossingless circles.
    """
    pos = list(range(1, strands + 1))  # arc currently at each position
    fresh = strands + 1
    xs: list[list[int]] = []
    up: dict[int, tuple[int, int]] = {}  # arc → (crossing, slot) it runs into
    for x in letters:
        i = abs(x)
        if not 1 <= i < strands:
            raise ValueError(f"letter {x} out of range for {strands} strands")
        lo, hi = pos[i - 1], pos[i]
        out_lo, out_hi = fresh, fresh + 1
        fresh += 2
        c = len(xs)
        if x > 0:  # the strand from the right passes under
            xs.append([hi, out_hi, out_lo, lo])
            up[hi], up[lo] = (c, 0), (c, 3)
        else:
            xs.append([lo, hi, out_hi, out_lo])
            up[lo], up[hi] = (c, 0), (c, 1)
        pos[i - 1], pos[i] = out_lo, out_hi
    close = {pos[p]: p + 1 for p in range(strands) if pos[p] != p + 1}
    xs = [[close.get(a, a) for a in slots] for slots in xs]
    up = {close.get(a, a): h for a, h in up.items()}
    used = sorted({a for slots in xs for a in slots})
    renum = {a: k + 1 for k, a in enumerate(used)}
    free = sum(1 for p in range(strands) if p + 1 not in renum)
    base = link_from_pd([tuple(renum[a] for a in slots) for slots in xs], free)
    direction = []
    for comp in base.components:
        a = comp[0]
        h = base.head[a]
        if h is None:
            direction.append(1)
            continue
        old = next(b for b, n in renum.items() if n == a)
        direction.append(1 if up[old] == h else -1)
    return OrientedLinkDiagram(base, tuple(direction))


def pair_components(d: ColoredDiagram, i: Color, j: Color) -> list[tuple[Step, ...]]:
    """Canonically directed components of the (i, j) bicolored link, traced on d itself.

    Components are ordered by least arc id; each starts at that arc and leaves
    from its smaller (node, slot) end.  A free loop is a single step with no ends.
    """
    pair = {i, j}
    colors = d.colors
    done: set[int] = set()
    comps: list[tuple[Step, ...]] = []
    for a in sorted(colors):
        if colors[a] not in pair or a in done:
            continue
        ends = d.ends[a]
        if not ends:
            done.add(a)
            comps.append(((a, None, None),))
            continue
        start = min(ends)
        cur = start
        seq: list[Step] = []
        while True:
            arc = d.arc_at(cur)
            to = d.other_end(arc, cur)
            seq.append((arc, cur, to))
            done.add(arc)
            node = d.nodes[to[0]]
            if node.is_crossing:
                cur = (to[0], (to[1] + 2) % 4)
            else:
                want = (pair - {colors[arc]}).pop()
                cur = (to[0], next(s for s, b in enumerate(node.slots) if colors[b] == want))
            if cur == start:
                break
        comps.append(tuple(seq))
    return comps


def bicolored_link(d: ColoredDiagram, i: Color, j: Color) -> LinkDiagram:
    """The link Γ_ij: delete color k, splice through vertices and one-strand crossings."""
    if i == j:
        raise ValueError("a bicolored link needs two distinct colors")
    pair = {i, j}
    colors = d.colors
    kept = [n for n, node in enumerate(d.nodes)
            if node.is_crossing and colors[node.slots[0]] in pair and colors[node.slots[1]] in pair]
    kept_index = {n: x for x, n in enumerate(kept)}
    runs: list[list[Step]] = []
    run_comp: list[int] = []
    for c, seq in enumerate(pair_components(d, i, j)):
        cuts = [k for k, (_, _, to) in enumerate(seq) if to is not None and to[0] in kept_index]
        if not cuts:
            runs.append(list(seq))
            run_comp.append(c)
            continue
        k0 = cuts[-1] + 1
        rot = list(seq[k0:]) + list(seq[:k0])
        cur: list[Step] = []
        for step in rot:
            cur.append(step)
            if step[2][0] in kept_index:
                runs.append(cur)
                run_comp.append(c)
                cur = []
    order = sorted(range(len(runs)), key=lambda r: min(a for a, _, _ in runs[r]))
    new_id = {r: k + 1 for k, r in enumerate(order)}
    end_arc: dict[End, int] = {}
    heads: dict[int, End | None] = {}
    for r, run in enumerate(runs):
        first, last = run[0][1], run[-1][2]
        if first is not None and first[0] in kept_index:
            end_arc[first] = new_id[r]
            end_arc[last] = new_id[r]
            heads[new_id[r]] = (kept_index[last[0]], last[1])
        else:
            heads[new_id[r]] = None
    crossings = tuple(tuple(end_arc[(n, s)] for s in range(4)) for n in kept)
    comps: dict[int, list[int]] = {}
    for r in range(len(runs)):
        comps.setdefault(run_comp[r], []).append(new_id[r])
    components = tuple(tuple(comps[c]) for c in sorted(comps))
    return LinkDiagram(crossings, tuple(sorted(heads.items())), components)


# ---------------------------------------------------------------- counts


@dataclass(frozen=True)
class ComponentCount:
    rb: int
    bg: int
    rg: int
    hamiltonian: bool

    @property
    def mu(self) -> int:
        return self.rb + self.bg + self.rg

    def as_tuple(self) -> tuple[int, int, int, int]:
        return (self.rb, self.bg, self.rg, self.mu)

    def by_pair(self) -> dict[str, int]:
        return {"rb": self.rb, "bg": self.bg, "rg": self.rg}


def diagram_pieces(d: ColoredDiagram) -> int:
    """Connected components of the diagram as a planar graph (free loops count singly)."""
    parent = list(range(len(d.nodes)))

    def find(x):
        while parent[x] != x:
            parent[x] = parent[parent[x]]
            x = parent[x]
        return x

    for a, ends in d.ends.items():
        if len(ends) == 2:
            parent[find(ends[0][0])] = find(ends[1][0])
    return len({find(n) for n in range(len(d.nodes))}) + len(d.free_loops)


def component_count(d: ColoredDiagram) -> ComponentCount:
    counts = {key: len(pair_components(d, i, j)) for key, i, j in PAIRS}
    ham = all(v == 1 for v in counts.values()) and diagram_pieces(d) == 1
    return ComponentCount(counts["rb"], counts["bg"], counts["rg"], ham)


# ---------------------------------------------------------------- signs and linking


def crossing_sign(x: int, o: OrientedLinkDiagram) -> int:
    """Right-handed sign of crossing x under orientation o."""
    a0, _, _, a3 = o.base.crossings[x]
    under = 1 if o.head(a0) == (x, 0) else -1
    over = 1 if o.head(a3) == (x, 3) else -1
    return under * over


def linking_number(o: OrientedLinkDiagram, c1: int, c2: int) -> int:
    if c1 == c2:
        raise ValueError("linking number needs two distinct components")
    comp = o.base.component_map
    total = 0
    for x, slots in enumerate(o.base.crossings):
        if {comp[slots[0]], comp[slots[1]]} == {c1, c2}:
            total += o.signs[x]
    if total % 2:
        raise ValueError("odd crossing sum between two components; the code is not planar")
    return total // 2


def link_total_linking(o: OrientedLinkDiagram) -> int:
    comp = o.base.component_map
    total = sum(o.signs[x] for x, slots in enumerate(o.base.crossings)
                if comp[slots[0]] != comp[slots[1]])
    if total % 2:
        raise ValueError("odd inter-component crossing sum; the code is not planar")
    return total // 2


def mirror_link(l: LinkDiagram) -> LinkDiagram:
    """Swap over and under at every crossing by shifting slots one step."""
    crossings = tuple(s[1:] + s[:1] for s in l.crossings)
    heads = tuple((a, None if h is None else (h[0], (h[1] - 1) % 4)) for a, h in l.heads)
    return LinkDiagram(crossings, heads, l.components)


# ---------------------------------------------------------------- split pieces


def split_decompose(l: LinkDiagram) -> list[LinkDiagram]:
    """Connected pieces of the diagram, ordered by least arc, arc ids kept."""
    parent = {a: a for a in l.arcs}

    def find(x):
        while parent[x] != x:
            parent[x] = parent[parent[x]]
            x = parent[x]
        return x

    for slots in l.crossings:
        for a in slots[1:]:
            parent[find(a)] = find(slots[0])
    groups: dict[int, list[int]] = {}
    for a in l.arcs:
        groups.setdefault(find(a), []).append(a)
    pieces = []
    for root in sorted(groups, key=lambda g: min(groups[g])):
        arcs = set(groups[root])
        xs = [x for x, s in enumerate(l.crossings) if s[0] in arcs]
        xmap = {x: k for k, x in enumerate(xs)}
        heads = tuple((a, None if h is None else (xmap[h[0]], h[1]))
                      for a, h in l.heads if a in arcs)
        comps = tuple(c for c in l.components if c[0] in arcs)
        pieces.append(LinkDiagram(tuple(l.crossings[x] for x in xs), heads, comps))
    return pieces


def split_oriented(o: OrientedLinkDiagram) -> list[OrientedLinkDiagram]:
    comp = o.base.component_map
    out = []
    for piece in split_decompose(o.base):
        out.append(OrientedLinkDiagram(piece, tuple(o.direction[comp[c[0]]] for c in piece.components)))
    return out


def link_serialize(l: LinkDiagram, name: str | None = None) -> str:
    """`.ksg` text for a vertex-free link, every arc colored red."""
    lines = [f"name {name}"] if name else []
    for x, slots in enumerate(l.crossings):
        lines.append(f"crossing {x + 1}: " + " ".join(map(str, slots)))
    lines.append("color " + " ".join(f"{a}=r" for a in l.arcs))
    return "\n".join(lines) + "\n"
