"""Colored planar diagram codes for Klein graphs.

A diagram is a list of nodes.  A crossing lists four arc ids counterclockwise
starting at the incoming end of the under-strand, so slots 0/2 carry the
under-strand and slots 1/3 the over-strand.  A vertex lists its three arcs
counterclockwise.  Every arc id occurs in exactly two slots, except free loops:
an arc that is colored but never used by a node is a crossingless circle.
"""

from __future__ import annotations

import enum
import re
from collections import deque
from dataclasses import dataclass, field
from functools import cached_property

CROSSING = "crossing"
VERTEX = "vertex"

End = tuple[int, int]  # (node index, slot)


class Color(enum.IntEnum):
    R = 0
    G = 1
    B = 2

    @property
    def letter(self) -> str:
        return "rgb"[self]

    @classmethod
    def parse(cls, text: str) -> "Color":
        try:
            return cls("rgb".index(text.strip().lower()))
        except ValueError:
            raise ValueError(f"unknown color {text!r}") from None

    def __str__(self) -> str:
        return self.letter


def third_color(i: Color, j: Color) -> Color:
    (k,) = set(Color) - {i, j}
    return k


class DiagramError(ValueError):
    """Invalid diagram source or structure; carries a source position when known."""

    def __init__(self, message: str, line: int | None = None, col: int | None = None):
        self.message = message
        self.line = line
        self.col = col
        where = f"line {line}, col {col}: " if line is not None else ""
        super().__init__(where + message)


@dataclass(frozen=True)
class Node:
    kind: str
    id: int
    slots: tuple[int, ...]

    @property
    def is_crossing(self) -> bool:
        return self.kind == CROSSING

    @property
    def is_vertex(self) -> bool:
        return self.kind == VERTEX


@dataclass(frozen=True)
class Edge:
    """A graph edge: a maximal strand run between vertex slots, or a closed run."""

    index: int
    color: Color
    arcs: tuple[int, ...]
    start: End | None
    end: End | None

    @property
    def closed(self) -> bool:
        return self.start is None


@dataclass(frozen=True)
class ColoredDiagram:
    nodes: tuple[Node, ...]
    arc_colors: tuple[tuple[int, Color], ...]
    name: str | None = None
    orient: str | None = field(default=None, compare=False)

    @cached_property
    def colors(self) -> dict[int, Color]:
        return dict(self.arc_colors)

    @cached_property
    def ends(self) -> dict[int, tuple[End, ...]]:
        out: dict[int, list[End]] = {a: [] for a in self.colors}
        for n, node in enumerate(self.nodes):
            for s, a in enumerate(node.slots):
                out.setdefault(a, []).append((n, s))
        return {a: tuple(v) for a, v in out.items()}

    @cached_property
    def free_loops(self) -> tuple[int, ...]:
        return tuple(sorted(a for a, e in self.ends.items() if not e))

    @property
    def vertex_count(self) -> int:
        return sum(1 for n in self.nodes if n.is_vertex)

    @property
    def crossing_count(self) -> int:
        return sum(1 for n in self.nodes if n.is_crossing)

    def arc_at(self, end: End) -> int:
        return self.nodes[end[0]].slots[end[1]]

    def other_end(self, arc: int, end: End) -> End:
        a, b = self.ends[arc]
        return b if a == end else a

    def with_name(self, name: str | None) -> "ColoredDiagram":
        return ColoredDiagram(self.nodes, self.arc_colors, name, self.orient)

    def with_orient(self, orient: str | None) -> "ColoredDiagram":
        return ColoredDiagram(self.nodes, self.arc_colors, self.name, orient)

    @cached_property
    def edges(self) -> tuple[Edge, ...]:
        return tuple(_derive_edges(self))


def make_diagram(nodes, colors, name=None, orient=None, canonical=True) -> ColoredDiagram:
    """Build and validate a diagram from (kind, id, slots) triples and an arc→color map."""
    ns = tuple(Node(k, i, tuple(s)) for k, i, s in nodes)
    cs = tuple(sorted((a, Color(c)) for a, c in colors.items()))
    d = ColoredDiagram(ns, cs, name, orient)
    validate(d)
    return canonicalize(d) if canonical else d


# ---------------------------------------------------------------- validation


def validate(d: ColoredDiagram, positions: dict | None = None) -> None:
    """Raise DiagramError unless every local invariant of a diagram code holds."""
    pos = positions or {}

    def fail(msg, key=None):
        line, col = pos.get(key, (None, None))
        raise DiagramError(msg, line, col)

    seen_ids: set[int] = set()
    for n, node in enumerate(d.nodes):
        if node.id in seen_ids:
            fail(f"duplicate node id {node.id}", ("node", n))
        seen_ids.add(node.id)
        want = 4 if node.is_crossing else 3
        if node.kind not in (CROSSING, VERTEX):
            fail(f"unknown node kind {node.kind!r}", ("node", n))
        if len(node.slots) != want:
            fail(f"{node.kind} {node.id} needs {want} arcs, got {len(node.slots)}", ("node", n))
        for a in node.slots:
            if not isinstance(a, int) or a <= 0:
                fail(f"arc ids must be positive integers, got {a!r}", ("node", n))
    counts: dict[int, int] = {}
    for node in d.nodes:
        for a in node.slots:
            counts[a] = counts.get(a, 0) + 1
    colors = d.colors
    for a, c in counts.items():
        if c != 2:
            fail(f"arc {a} occurs {c} time(s); each arc must occur exactly twice", ("arc", a))
        if a not in colors:
            fail(f"arc {a} has no color", ("arc", a))
    for n, node in enumerate(d.nodes):
        cs = [colors[a] for a in node.slots]
        if node.is_crossing:
            if cs[0] != cs[2]:
                fail(f"crossing {node.id}: under-strand arcs {node.slots[0]} and {node.slots[2]} "
                     f"change color ({cs[0]} vs {cs[2]})", ("node", n))
            if cs[1] != cs[3]:
                fail(f"crossing {node.id}: over-strand arcs {node.slots[1]} and {node.slots[3]} "
                     f"change color ({cs[1]} vs {cs[3]})", ("node", n))
        elif len(set(cs)) != 3:
            fail(f"vertex {node.id} must meet three distinct colors, got "
                 f"{''.join(c.letter for c in cs)}", ("node", n))
    present = set(colors.values())
    for c in Color:
        if c not in present:
            fail(f"no arc of color {c}", ("colors",))


# ---------------------------------------------------------------- text format

_NODE_RE = re.compile(r"^(vertex|crossing)\s+(\S+)\s*:(.*)$")


def parse(text: str) -> ColoredDiagram:
    """Parse `.ksg` source into a validated diagram (ids kept as written)."""
    nodes: list[Node] = []
    colors: dict[int, Color] = {}
    positions: dict = {}
    name = None
    orient = None
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].rstrip()
        if not line.strip():
            continue
        indent = len(line) - len(line.lstrip())
        body = line.strip()
        key = body.split(None, 1)[0]
        if key == "name":
            if name is not None:
                raise DiagramError("duplicate name line", lineno, indent + 1)
            rest = body[4:].strip()
            if not rest:
                raise DiagramError("name needs a label", lineno, indent + 1)
            name = rest
        elif key == "orient":
            if orient is not None:
                raise DiagramError("duplicate orient line", lineno, indent + 1)
            orient = body[6:].strip() or "default"
        elif key in (VERTEX, CROSSING):
            m = _NODE_RE.match(body)
            if not m:
                raise DiagramError(f"expected '{key} <id>: <arcs>'", lineno, indent + 1)
            nid = _int(m.group(2), lineno, indent + 1 + body.index(m.group(2)))
            arcs = []
            offset = indent + 1 + body.index(":") + 1
            for tok in re.finditer(r"\S+", m.group(3)):
                arcs.append(_int(tok.group(), lineno, offset + tok.start()))
            want = 4 if key == CROSSING else 3
            if len(arcs) != want:
                raise DiagramError(f"{key} {nid} needs {want} arcs, got {len(arcs)}",
                                   lineno, indent + 1)
            positions[("node", len(nodes))] = (lineno, indent + 1)
            for a in arcs:
                positions.setdefault(("arc", a), (lineno, indent + 1))
            nodes.append(Node(key, nid, tuple(arcs)))
        elif key == "color":
            start = indent + len("color") + 1
            for tok in re.finditer(r"\S+", body[len("color"):]):
                col = start + tok.start()
                item = tok.group()
                if "=" not in item:
                    raise DiagramError(f"expected <arc>=<r|g|b>, got {item!r}", lineno, col)
                left, right = item.split("=", 1)
                a = _int(left, lineno, col)
                try:
                    c = Color.parse(right)
                except ValueError as exc:
                    raise DiagramError(str(exc), lineno, col + len(left) + 1) from None
                if a in colors:
                    raise DiagramError(f"arc {a} colored twice", lineno, col)
                colors[a] = c
                positions[("color", a)] = (lineno, col)
                positions.setdefault(("arc", a), (lineno, col))
            positions.setdefault(("colors",), (lineno, indent + 1))
        else:
            raise DiagramError(f"unknown key {key!r}", lineno, indent + 1)
    if not nodes and not colors:
        raise DiagramError("empty diagram", 1, 1)
    d = ColoredDiagram(tuple(nodes), tuple(sorted(colors.items())), name, orient)
    validate(d, positions)
    return d


def _int(tok: str, line: int, col: int) -> int:
    if not tok.isdigit() or int(tok) <= 0:
        raise DiagramError(f"expected a positive integer, got {tok!r}", line, col)
    return int(tok)


def serialize(d: ColoredDiagram) -> str:
    """Canonical `.ksg` text for d."""
    c, slot_map, arc_back = canonicalize_with_map(d)
    if d.orient and c != d:
        c = c.with_orient(_carry_orient(d, c, slot_map, arc_back))
    lines = []
    if c.name:
        lines.append(f"name {c.name}")
    for node in c.nodes:
        lines.append(f"{node.kind} {node.id}: " + " ".join(map(str, node.slots)))
    items = [f"{a}={col.letter}" for a, col in c.arc_colors]
    for k in range(0, len(items), 12):
        lines.append("color " + " ".join(items[k:k + 12]))
    if c.orient:
        lines.append(f"orient {c.orient}")
    return "\n".join(lines) + "\n"


def _carry_orient(d: ColoredDiagram, c: ColoredDiagram, slot_map, arc_back) -> str:
    """Rewrite d's orientation line in terms of the components of its canonical form c."""
    from .orientation import parse_orientation, transport

    t = parse_orientation(d.orient, d)
    loops = {a: arc_back[a] for a in c.free_loops}
    return transport(d, t, c, slot_map, loops).format()


# ---------------------------------------------------------------- canonical form


def canonicalize(d: ColoredDiagram) -> ColoredDiagram:
    """Renumber nodes and arcs breadth-first from the least node id.

    Vertex slot lists are rotated to start at their red arc; crossings keep an
    under end in slot 0, choosing between the two so that earlier-numbered arcs
    come first.  Arcs are numbered by first appearance in the node/slot scan;
    free loops come last.
    """
    return canonicalize_with_map(d)[0]


def canonicalize_with_map(d: ColoredDiagram):
    """Canonical form plus the maps new (node, slot) → old (node, slot) and new arc → old arc."""
    colors = d.colors
    ends = d.ends
    shift = [0] * len(d.nodes)
    for n, node in enumerate(d.nodes):
        if node.is_vertex:
            shift[n] = next(i for i, a in enumerate(node.slots) if colors[a] == Color.R)
    big = len(colors) + 1
    arc_map: dict[int, int] = {}

    def settle(n: int) -> tuple[int, ...]:
        slots = d.nodes[n].slots
        if d.nodes[n].is_crossing:
            # a crossing reads the same from either under end; pick the rotation whose
            # already-labelled arcs come first, falling back to input ids
            def key(k):
                rot = slots[k:] + slots[:k]
                return tuple(arc_map.get(a, big) for a in rot), rot
            shift[n] = min((0, 2), key=key)
        k = shift[n]
        return slots[k:] + slots[:k]

    order: list[int] = []
    rotated: dict[int, tuple[int, ...]] = {}
    seen = [False] * len(d.nodes)
    for root in sorted(range(len(d.nodes)), key=lambda n: d.nodes[n].id):
        if seen[root]:
            continue
        seen[root] = True
        queue = deque([root])
        while queue:
            n = queue.popleft()
            order.append(n)
            rotated[n] = settle(n)
            for a in rotated[n]:
                if a not in arc_map:
                    arc_map[a] = len(arc_map) + 1
            for a in rotated[n]:
                for m, _ in ends[a]:
                    if not seen[m]:
                        seen[m] = True
                        queue.append(m)
    for a in sorted(d.free_loops):
        arc_map[a] = len(arc_map) + 1
    new_nodes = tuple(
        Node(d.nodes[n].kind, k + 1, tuple(arc_map[a] for a in rotated[n]))
        for k, n in enumerate(order))
    new_colors = tuple(sorted((arc_map[a], c) for a, c in colors.items()))
    slot_map = {}
    for k, n in enumerate(order):
        deg = len(rotated[n])
        for s in range(deg):
            slot_map[(k, s)] = (n, (s + shift[n]) % deg)
    back = {v: a for a, v in arc_map.items()}
    return ColoredDiagram(new_nodes, new_colors, d.name, d.orient), slot_map, back


def is_canonical(d: ColoredDiagram) -> bool:
    return canonicalize(d) == d


# ---------------------------------------------------------------- edges


def _through(d: ColoredDiagram, end: End) -> End | None:
    """The slot where a strand leaves node end[0] after entering at end; None at vertices."""
    n, s = end
    if d.nodes[n].is_vertex:
        return None
    return (n, (s + 2) % 4)


def trace_strand(d: ColoredDiagram, start: End):
    """Follow the strand leaving `start` until it reaches a vertex or returns.

    Yields (arc, from_end, to_end) triples.
    """
    cur = start
    while True:
        a = d.arc_at(cur)
        nxt = d.other_end(a, cur)
        yield a, cur, nxt
        out = _through(d, nxt)
        if out is None or out == start:
            return
        cur = out


def _derive_edges(d: ColoredDiagram) -> list[Edge]:
    colors = d.colors
    used: set[int] = set()
    edges: list[Edge] = []
    for n, node in enumerate(d.nodes):
        if not node.is_vertex:
            continue
        for s in range(3):
            if node.slots[s] in used:
                continue
            run = list(trace_strand(d, (n, s)))
            arcs = tuple(a for a, _, _ in run)
            used.update(arcs)
            edges.append(Edge(len(edges), colors[arcs[0]], arcs, (n, s), run[-1][2]))
    for a in sorted(colors):
        if a in used:
            continue
        ends = d.ends[a]
        if not ends:
            used.add(a)
            edges.append(Edge(len(edges), colors[a], (a,), None, None))
            continue
        run = list(trace_strand(d, min(ends)))
        arcs = tuple(x for x, _, _ in run)
        used.update(arcs)
        edges.append(Edge(len(edges), colors[a], arcs, None, None))
    return edges


def derive_edges(d: ColoredDiagram) -> list[Edge]:
    """Graph edges of d: vertex-to-vertex runs first, then closed knot components."""
    return list(d.edges)


def edge_of_arc(d: ColoredDiagram) -> dict[int, int]:
    return {a: e.index for e in d.edges for a in e.arcs}


def euler_characteristic(d: ColoredDiagram) -> int:
    """χ of the underlying graph; closed components contribute 0."""
    graph_edges = sum(1 for e in d.edges if not e.closed)
    return d.vertex_count - graph_edges
