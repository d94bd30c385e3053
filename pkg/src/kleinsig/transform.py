"""Mirror, reversal, connected sums and generators for example Klein graphs."""

from __future__ import annotations

from dataclasses import dataclass

from .diagram import (CROSSING, VERTEX, Color, ColoredDiagram, DiagramError, Node,
                      canonicalize_with_map, make_diagram, validate)
from .orientation import (OrientationError, TotalOrientation, double_orientations, pair_flow,
                          reverse, transport, vertex_types)

R, G, B = Color.R, Color.G, Color.B


# ---------------------------------------------------------------- helpers


def _finish(raw: ColoredDiagram, old: ColoredDiagram | None, t: TotalOrientation | None,
            raw_to_old: dict, loop_to_old: dict | None = None, canonical: bool = True):
    """Validate and canonicalize `raw`; carry t over from `old` when given."""
    validate(raw)
    if canonical:
        canon, slot_map, arc_back = canonicalize_with_map(raw)
    else:
        canon, slot_map = raw, _identity_slots(raw)
        arc_back = {a: a for a in raw.colors}
    if t is None:
        return canon, None
    full = {k: raw_to_old[v] for k, v in slot_map.items() if v in raw_to_old}
    loops = {}
    for a in canon.free_loops:
        src = arc_back[a]
        if loop_to_old is not None and src in loop_to_old:
            loops[a] = loop_to_old[src]
    return canon, transport(old, t, canon, full, loops)


def _identity_slots(d: ColoredDiagram) -> dict:
    return {(n, s): (n, s) for n, node in enumerate(d.nodes) for s in range(len(node.slots))}


def mirror(d: ColoredDiagram, t: TotalOrientation | None = None):
    """Swap over and under everywhere by shifting each crossing's slots one step."""
    nodes = tuple(Node(n.kind, n.id, n.slots[1:] + n.slots[:1]) if n.is_crossing else n
                  for n in d.nodes)
    raw = ColoredDiagram(nodes, d.arc_colors, d.name, None)
    back = {}
    for n, node in enumerate(d.nodes):
        for s in range(len(node.slots)):
            back[(n, s)] = (n, (s + 1) % 4) if node.is_crossing else (n, s)
    loops = {a: a for a in d.free_loops}
    return _finish(raw, d, t, back, loops)


def disjoint_union(d1: ColoredDiagram, d2: ColoredDiagram, t1=None, t2=None):
    """d1 ⊔ d2 with d2's ids shifted past d1's; orientations concatenate."""
    id_off = max((n.id for n in d1.nodes), default=0)
    arc_off = max(d1.colors)
    nodes = d1.nodes + tuple(Node(n.kind, n.id + id_off, tuple(a + arc_off for a in n.slots))
                             for n in d2.nodes)
    colors = d1.arc_colors + tuple((a + arc_off, c) for a, c in d2.arc_colors)
    u = ColoredDiagram(nodes, colors, None)
    t = None
    if t1 is not None and t2 is not None:
        t = TotalOrientation(t1.rb + t2.rb, t1.bg + t2.bg, t1.rg + t2.rg)
    return u, len(d1.nodes), arc_off, t


def _rebuild(u: ColoredDiagram, drop: set[int], replace: dict, new_arcs: dict, name):
    """Copy u without nodes in `drop`, rewriting slots through `replace` (end → arc)."""
    nodes, back = [], {}
    for n, node in enumerate(u.nodes):
        if n in drop:
            continue
        slots = tuple(replace.get((n, s), a) for s, a in enumerate(node.slots))
        for s in range(len(slots)):
            back[(len(nodes), s)] = (n, s)
        nodes.append(Node(node.kind, node.id, slots))
    used = {a for node in nodes for a in node.slots}
    colors = {a: c for a, c in u.arc_colors if a in used or not u.ends[a]}
    colors.update(new_arcs)
    return ColoredDiagram(tuple(nodes), tuple(sorted(colors.items())), name), back


# ---------------------------------------------------------------- connected sums


def _traversal(d: ColoredDiagram, arc: int, t: TotalOrientation | None, key: str):
    """(tail, head) ends of `arc` along the `key` link, or by slot order without t."""
    e0, e1 = sorted(d.ends[arc])
    if t is None:
        return e0, e1
    flow = pair_flow(d, t, key)
    return (e1, e0) if flow.enters(e0) else (e0, e1)


def edge_sum(d1: ColoredDiagram, e1: int, d2: ColoredDiagram, e2: int,
             t1: TotalOrientation | None = None, t2: TotalOrientation | None = None,
             name: str | None = None):
    """Order-2 connected sum along edge e1 of d1 and edge e2 of d2 (edge indices).

    The first arc of each edge is cut and the ends rejoined by two parallel
    strands.  With orientations, the edges must carry equal double-orientation
    signs; the joins then follow both bicolored links through the band.
    """
    E1, E2 = d1.edges[e1], d2.edges[e2]
    if E1.color != E2.color:
        raise DiagramError(f"edge colors differ ({E1.color} vs {E2.color})")
    if E1.closed or E2.closed:
        raise DiagramError("edge sums need edges with vertex endpoints")
    oriented = t1 is not None and t2 is not None
    if oriented:
        s1 = double_orientations(d1, t1)[e1].sign
        s2 = double_orientations(d2, t2)[e2].sign
        if s1 != s2:
            raise OrientationError("edge sum needs edges with equal double-orientation signs")
    key = next(k for k in ("rb", "bg", "rg") if E1.color.letter in k)
    u, noff, aoff, tu = disjoint_union(d1, d2, t1, t2)
    a1, a2 = E1.arcs[0], E2.arcs[0] + aoff
    p, p2 = _traversal(d1, E1.arcs[0], t1 if oriented else None, key)
    uu, w = _traversal(d2, E2.arcs[0], t2 if oriented else None, key)
    uu, w = (uu[0] + noff, uu[1]), (w[0] + noff, w[1])
    x, y = max(u.colors) + 1, max(u.colors) + 2
    replace = {p: x, w: x, p2: y, uu: y}
    raw, back = _rebuild(u, set(), replace, {x: E1.color, y: E1.color}, name)
    if a1 in raw.colors or a2 in raw.colors:
        raise DiagramError("internal error: cut arcs survived the splice")
    return _finish(raw, u, tu if oriented else None, back,
                   {a: a for a in u.free_loops})


def _ccw_colors(d: ColoredDiagram, n: int) -> tuple[Color, ...]:
    cs = tuple(d.colors[a] for a in d.nodes[n].slots)
    k = cs.index(R)
    return cs[k:] + cs[:k]


def flip_vertex(d: ColoredDiagram, n: int, t: TotalOrientation | None = None,
                canonical: bool = True):
    """Turn vertex n over: its two non-red edges change places across a new crossing."""
    node = d.nodes[n]
    colors = d.colors
    slot = {colors[a]: s for s, a in enumerate(node.slots)}
    sr, s1, s2 = slot[R], (slot[R] + 1) % 3, (slot[R] + 2) % 3
    a1, a2 = node.slots[s1], node.slots[s2]
    c1, c2 = colors[a1], colors[a2]
    top = max(colors)
    n1, n2 = top + 1, top + 2  # n1 leaves slot s1 and continues as a2; n2 continues as a1
    slots = [0, 0, 0]
    slots[sr] = node.slots[sr]
    slots[s1] = n1
    slots[s2] = n2
    nid = max(x.id for x in d.nodes) + 1
    # new crossing below the vertex: n1 (color c2) passes under, n2 (color c1) over
    cross = Node(CROSSING, nid, (n1, a1, a2, n2))
    nodes = list(d.nodes)
    nodes[n] = Node(VERTEX, node.id, tuple(slots))
    nodes.append(cross)
    cols = dict(d.arc_colors)
    cols[n1], cols[n2] = c2, c1
    raw = ColoredDiagram(tuple(nodes), tuple(sorted(cols.items())), d.name)
    back = {k: k for k in _identity_slots(d)}
    back[(n, s1)] = (n, s2)
    back[(n, s2)] = (n, s1)
    return _finish(raw, d, t, back, {a: a for a in d.free_loops}, canonical)


def vertex_sum(d1: ColoredDiagram, v1: int, d2: ColoredDiagram, v2: int,
               t1: TotalOrientation | None = None, t2: TotalOrientation | None = None,
               name: str | None = None):
    """Order-3 connected sum at vertices v1 of d1 and v2 of d2 (node ids).

    With orientations, the two vertices must have opposite types.  If the
    counterclockwise color orders agree, v2 is first turned over so that the
    three joins are planar.
    """
    n1 = _node_index(d1, v1)
    n2 = _node_index(d2, v2)
    oriented = t1 is not None and t2 is not None
    if oriented:
        ty1 = next(v for v in vertex_types(d1, t1) if v.vertex == v1)
        ty2 = next(v for v in vertex_types(d2, t2) if v.vertex == v2)
        if any(a == b for a, b in zip(ty1.pattern, ty2.pattern)):
            raise OrientationError("vertex sum needs vertices of opposite types")
    if _ccw_colors(d1, n1) == _ccw_colors(d2, n2):
        d2, t2f = flip_vertex(d2, n2, t2 if oriented else None, canonical=False)
        t2 = t2f if oriented else t2
    u, noff, aoff, tu = disjoint_union(d1, d2, t1, t2)
    m2 = n2 + noff
    replace, new_arcs = {}, {}
    top = max(u.colors)
    for s, a in enumerate(u.nodes[n1].slots):
        c = u.colors[a]
        b = next(x for x in u.nodes[m2].slots if u.colors[x] == c)
        f1 = u.other_end(a, (n1, s))
        f2 = u.other_end(b, (m2, u.nodes[m2].slots.index(b)))
        top += 1
        replace[f1] = top
        replace[f2] = top
        new_arcs[top] = c
    raw, back = _rebuild(u, {n1, m2}, replace, new_arcs, name)
    return _finish(raw, u, tu if oriented else None, back, {a: a for a in u.free_loops})


def _node_index(d: ColoredDiagram, node_id: int) -> int:
    for n, node in enumerate(d.nodes):
        if node.id == node_id:
            if not node.is_vertex:
                raise DiagramError(f"node {node_id} is not a vertex")
            return n
    raise DiagramError(f"no node with id {node_id}")


# ---------------------------------------------------------------- generators


class _Builder:
    """Assemble a diagram from nodes, twist boxes and wires, then number the arcs."""

    def __init__(self):
        self.nodes: list[tuple[str, list]] = []
        self.color: dict = {}
        self.parent: dict = {}
        self.wires = 0

    def _label(self, label, color):
        self.parent[label] = label
        self.color[label] = color
        return label

    def _find(self, x):
        while self.parent[x] != x:
            self.parent[x] = self.parent[self.parent[x]]
            x = self.parent[x]
        return x

    def join(self, a, b):
        self.parent[self._find(a)] = self._find(b)

    def vertex(self, colors) -> list:
        n = len(self.nodes)
        labels = [self._label(("slot", n, s), c) for s, c in enumerate(colors)]
        self.nodes.append((VERTEX, labels))
        return labels

    def crossing(self, colors) -> list:
        n = len(self.nodes)
        labels = [self._label(("slot", n, s), c) for s, c in enumerate(colors)]
        self.nodes.append((CROSSING, labels))
        return labels

    def wire(self, color):
        self.wires += 1
        return self._label(("wire", self.wires), color)

    def box(self, count: int, positive: bool, left: Color, right: Color) -> dict:
        """Vertical twist region of `count` crossings; ports TL, BL, BR, TR (ccw).

        The strand entering at TL is the left column.  With both strands running
        downward every crossing is positive when `positive` is set.
        """
        tl, tr = self.wire(left), self.wire(right)
        lw, rw = tl, tr
        lc, rc = left, right
        for _ in range(count):
            if positive:
                nw, sw, se, ne = self.crossing([lc, rc, lc, rc])
            else:
                ne, nw, sw, se = self.crossing([rc, lc, rc, lc])
            self.join(nw, lw)
            self.join(ne, rw)
            lw, rw = sw, se
            lc, rc = rc, lc
        bl, br = self.wire(lc), self.wire(rc)
        self.join(bl, lw)
        self.join(br, rw)
        return {"TL": tl, "BL": bl, "BR": br, "TR": tr}

    def build(self, name: str) -> ColoredDiagram:
        groups: dict = {}
        for label in self.parent:
            groups.setdefault(self._find(label), []).append(label)
        slots = [[0] * len(labels) for _, labels in self.nodes]
        colors = {}
        arc = 0
        for members in groups.values():
            cs = {self.color[m] for m in members}
            if len(cs) != 1:
                raise DiagramError("generator joined strands of different colors")
            ends = [m for m in members if m[0] == "slot"]
            if len(ends) not in (0, 2):
                raise DiagramError("generator left a dangling strand")
            arc += 1
            colors[arc] = cs.pop()
            for _, n, s in ends:
                slots[n][s] = arc
        nodes = [(kind, n + 1, slots[n]) for n, (kind, _) in enumerate(self.nodes)]
        return make_diagram(nodes, colors, name=name)


def gen_theta_n(n: int, positive: bool = True) -> ColoredDiagram:
    """θ-curve whose three constituent knots are all T(2, 2n+1).

    The b and g edges twist around each other 2n+1 times below the two
    vertices; the r edge ties a T(2, 2n+1) knot into itself between them.
    """
    if n < 1:
        raise ValueError("n must be at least 1")
    bld = _Builder()
    a_r, a_g, a_b = bld.vertex([R, G, B])
    b_r, b_g, b_b = bld.vertex([R, G, B])
    m = bld.box(2 * n + 1, positive, B, G)
    k = bld.box(2 * n + 1, positive, R, R)
    bld.join(a_b, m["TL"])
    bld.join(b_g, m["TR"])
    bld.join(m["BL"], a_g)
    bld.join(m["BR"], b_b)
    bld.join(a_r, k["BR"])
    bld.join(k["TL"], k["BL"])
    bld.join(k["TR"], b_r)
    return bld.build(f"theta_{n}")


def theta_n_script(n: int) -> str:
    """Reference unknotting script for gen_theta_n(n): n same and n mixed changes."""
    d = gen_theta_n(n)
    e = {edge.color: edge.index for edge in d.edges}
    lines = [f"same r e{e[R]} e{e[R]}"] * n + [f"mixed b g e{e[B]} e{e[G]}"] * n
    return "\n".join(lines) + "\n"


def gen_kinoshita(p: int, q: int, r: int) -> ColoredDiagram:
    """θ(p, q, r): three twist boxes of 2|p|, 2|q|, 2|r| crossings blocking one another.

    Each pair of edges shares exactly one box, so every constituent knot is
    trivial; the boxes cannot slide off through the vertices.
    """
    bld = _Builder()
    n_r, n_b, n_g = bld.vertex([R, B, G])   # inner vertex: e1, e3, e2
    s_g, s_b, s_r = bld.vertex([G, B, R])   # outer vertex: e2, e3, e1
    b12 = bld.box(2 * abs(p), p >= 0, R, G)
    b23 = bld.box(2 * abs(q), q >= 0, G, B)
    b31 = bld.box(2 * abs(r), r >= 0, B, R)
    bld.join(n_r, b12["BL"])
    bld.join(n_g, b23["BL"])
    bld.join(n_b, b31["BL"])
    bld.join(b12["TL"], b31["BR"])
    bld.join(b23["TL"], b12["BR"])
    bld.join(b31["TL"], b23["BR"])
    bld.join(b31["TR"], s_r)
    bld.join(b12["TR"], s_g)
    bld.join(b23["TR"], s_b)
    return bld.build(f"kinoshita_{p}_{q}_{r}")


def kinoshita_script(p: int, q: int, r: int) -> str:
    """Undo the r-g twist box: |p| mixed changes leave a planar θ."""
    d = gen_kinoshita(p, q, r)
    e = {edge.color: edge.index for edge in d.edges}
    return "".join(f"mixed r g e{e[R]} e{e[G]}\n" for _ in range(abs(p)))


def _trivial_theta() -> ColoredDiagram:
    return make_diagram([(VERTEX, 1, [2, 1, 3]), (VERTEX, 2, [1, 2, 3])],
                        {1: R, 2: G, 3: B}, name="trivial_theta")


def _tetrahedron() -> ColoredDiagram:
    return make_diagram(
        [(VERTEX, 1, [1, 5, 3]), (VERTEX, 2, [4, 1, 6]),
         (VERTEX, 3, [6, 3, 2]), (VERTEX, 4, [2, 5, 4])],
        {1: R, 2: R, 3: G, 4: G, 5: B, 6: B}, name="tetrahedron")


def gen_torus2k(k: int) -> ColoredDiagram:
    """Four vertices; the two r-b cycles twist 2k times, so Γ_rb = T(2, 2k)."""
    bld = _Builder()
    v1 = dict(zip((G, B, R), bld.vertex([G, B, R])))
    v2 = dict(zip((R, B, G), bld.vertex([R, B, G])))
    v3 = dict(zip((G, B, R), bld.vertex([G, B, R])))
    v4 = dict(zip((R, B, G), bld.vertex([R, B, G])))
    box = bld.box(2 * k, True, R, B)
    bld.join(v1[R], box["TL"])
    bld.join(box["BL"], v2[R])
    bld.join(v3[B], box["TR"])
    bld.join(box["BR"], v4[B])
    bld.join(v1[B], v2[B])
    bld.join(v3[R], v4[R])
    bld.join(v1[G], v3[G])
    bld.join(v2[G], v4[G])
    return bld.build(f"torus2k_{k}")


def _two_thetas() -> ColoredDiagram:
    return make_diagram(
        [(VERTEX, 1, [2, 1, 3]), (VERTEX, 2, [1, 2, 3]),
         (VERTEX, 3, [5, 4, 6]), (VERTEX, 4, [4, 5, 6])],
        {1: R, 2: G, 3: B, 4: R, 5: G, 6: B}, name="two_thetas")


def _theta_with_kink() -> ColoredDiagram:
    return make_diagram(
        [(VERTEX, 1, [2, 1, 3]), (VERTEX, 2, [1, 2, 3]), (CROSSING, 3, [4, 5, 5, 4])],
        {1: R, 2: G, 3: B, 4: R, 5: R}, name="theta_with_kink")


def _theta_with_loop() -> ColoredDiagram:
    return make_diagram([(VERTEX, 1, [2, 1, 3]), (VERTEX, 2, [1, 2, 3])],
                        {1: R, 2: G, 3: B, 4: G}, name="theta_with_loop")


BASIC = {
    "trivial_theta": _trivial_theta,
    "tetrahedron": _tetrahedron,
    "two_thetas": _two_thetas,
    "theta_with_kink": _theta_with_kink,
    "theta_with_loop": _theta_with_loop,
    "prism": lambda: gen_torus2k(0).with_name("prism"),
}


def gen_basic(name: str) -> ColoredDiagram:
    """Small named diagrams; `torus2k(k)` or `torus2k:k` for the twisted prism."""
    key = name.strip().lower().replace("-", "_")
    for prefix in ("torus2k(", "torus2k:", "torus2k_"):
        if key.startswith(prefix):
            return gen_torus2k(int(key[len(prefix):].rstrip(")")))
    if key not in BASIC:
        raise ValueError(f"unknown diagram {name!r}; known: {', '.join(sorted(BASIC))}, torus2k(k)")
    return BASIC[key]()


@dataclass(frozen=True)
class Generated:
    diagram: ColoredDiagram
    script: str | None = None


def generate(family: str, params: list[str]) -> Generated:
    """CLI-facing generator dispatch: theta-n N, kinoshita P Q R, basic NAME, torus2k K."""
    fam = family.lower().replace("_", "-")
    if fam == "theta-n":
        n = int(params[0])
        return Generated(gen_theta_n(n), theta_n_script(n))
    if fam == "kinoshita":
        p, q, r = (int(x) for x in params[:3])
        return Generated(gen_kinoshita(p, q, r), kinoshita_script(p, q, r))
    if fam == "torus2k":
        return Generated(gen_torus2k(int(params[0])))
    if fam == "basic":
        return Generated(gen_basic(params[0]))
    if fam.replace("-", "_") in BASIC:
        return Generated(gen_basic(fam))
    raise ValueError(f"unknown family {family!r}")


__all__ = ["mirror", "reverse", "edge_sum", "vertex_sum", "flip_vertex", "disjoint_union",
           "gen_theta_n", "gen_kinoshita", "gen_basic", "gen_torus2k", "theta_n_script",
           "kinoshita_script", "generate", "Generated"]
