"""Abstract Klein foams: cell-count descriptors, χ^orb, and crossing-change ledgers.

A foam is never built as a complex here.  A descriptor records the Euler data
every downstream formula needs: facet characteristics, the shape of the seam
graph, and the characteristics of the three bicolored surfaces.
"""

from __future__ import annotations

import re
from dataclasses import dataclass, field, replace
from fractions import Fraction

from .diagram import Color, ColoredDiagram
from .invariants import KleinInvariants
from .linkops import PAIR_COLORS, PAIRS
from .orientation import TotalOrientation, double_orientations
from .orientation import _components as pair_components_cached

PAIR_KEYS = tuple(key for key, _, _ in PAIRS)


class FoamError(ValueError):
    pass


class ScriptError(ValueError):
    def __init__(self, msg: str, line: int | None = None):
        super().__init__(f"line {line}: {msg}" if line is not None else msg)
        self.line = line


# ---------------------------------------------------------------- descriptors


@dataclass(frozen=True)
class FoamDescriptor:
    facets: tuple[tuple[Color, int], ...]
    seam_circles: int
    seam_arcs: int  # edges of the seam graph; circles are counted separately
    seam_vertices: int
    boundary_vertex_total: int
    bicolored_component_eulers: dict = field(default_factory=dict, compare=False)
    sphere_free: bool = True

    def __post_init__(self):
        if 2 * self.seam_arcs != self.boundary_vertex_total + 4 * self.seam_vertices:
            raise FoamError("seam graph must have (|V(∂F)| + 4·seam vertices)/2 edges")

    @property
    def chi_s(self) -> int:
        """χ(s(F)): boundary endpoints and seam vertices minus seam edges; circles add 0."""
        return self.boundary_vertex_total + self.seam_vertices - self.seam_arcs

    @property
    def chi(self) -> int:
        # facets meet along the seam three at a time and six at a seam vertex
        b, v, e = self.boundary_vertex_total, self.seam_vertices, self.seam_arcs
        return sum(x for _, x in self.facets) - 2 * b - 5 * v + 2 * e

    def bicolored_total(self) -> int:
        return sum(sum(self.bicolored_component_eulers.get(k, ())) for k in PAIR_KEYS)

    def to_json(self) -> dict:
        return {
            "facets": [[c.letter, x] for c, x in self.facets],
            "seam_circles": self.seam_circles,
            "seam_arcs": self.seam_arcs,
            "seam_vertices": self.seam_vertices,
            "boundary_vertex_total": self.boundary_vertex_total,
            "bicolored_component_eulers": {k: list(self.bicolored_component_eulers.get(k, ()))
                                           for k in PAIR_KEYS},
            "chi": self.chi,
            "chi_s": self.chi_s,
        }


def chi_orb_from(chi: int, chi_s: int) -> Fraction:
    return Fraction(chi, 2) - Fraction(chi_s, 4)


def chi_orb(f: FoamDescriptor) -> Fraction:
    """½χ(F) − ¼χ(s(F)), exactly."""
    return chi_orb_from(f.chi, f.chi_s)


def chiorb_identity_check(f: FoamDescriptor) -> bool:
    """4χ^orb = Σ χ(F_ij) − |V(∂F)|; only meaningful without seam vertices."""
    if f.seam_vertices:
        raise FoamError("identity check needs a foam without seam vertices")
    return 4 * chi_orb(f) == f.bicolored_total() - f.boundary_vertex_total


def product_foam(d: ColoredDiagram) -> FoamDescriptor:
    """Γ × I: a square per edge (an annulus per closed edge), a seam arc per vertex."""
    facets = tuple((e.color, 0 if e.closed else 1) for e in d.edges)
    eulers = {key: (0,) * len(pair_components_cached(d, key)) for key in PAIR_KEYS}
    v = d.vertex_count
    return FoamDescriptor(facets, 0, v, 0, 2 * v, eulers)


def cone_foam(d: ColoredDiagram) -> FoamDescriptor:
    """Cone on a connected knot-free graph with at most two vertices (or on the tetrahedron).

    Facets are cones on edges (disks), seam edges are cones on vertices; for
    four vertices the cone point is a seam vertex.  Bicolored surfaces are
    cones on the bicolored links, so each component is a disk.
    """
    v = d.vertex_count
    if any(e.closed for e in d.edges) or v not in (2, 4):
        raise FoamError("cone foams are provided for θ-curves and the tetrahedral graph")
    sv = 1 if v == 4 else 0
    facets = tuple((e.color, 1) for e in d.edges)
    eulers = {key: (1,) * len(pair_components_cached(d, key)) for key in PAIR_KEYS}
    arcs = 1 if v == 2 else 4
    return FoamDescriptor(facets, 0, arcs, sv, v, eulers)


def bubble(f: FoamDescriptor, colors: tuple[Color, Color, Color] = (Color.R, Color.G, Color.B)
           ) -> FoamDescriptor:
    """Connected sum with the suspended tetrahedral foam at an interior seam point.

    Adds three disk facets, two seam vertices and four seam edges; χ^orb rises by 1.
    """
    return replace(f, facets=f.facets + tuple((c, 1) for c in colors),
                   seam_arcs=f.seam_arcs + 4, seam_vertices=f.seam_vertices + 2)


def compose_chi_orb(c1: Fraction, c2: Fraction, vertices: int) -> Fraction:
    """χ^orb of two cobordisms stacked along a graph with the given vertex count.

    The shared graph has χ^orb = −V/2 and is counted in both pieces.
    """
    return c1 + c2 + Fraction(vertices, 2)


# ---------------------------------------------------------------- scripts


@dataclass(frozen=True)
class Step:
    kind: str  # "same" or "mixed"
    colors: tuple[Color, ...]
    refs: tuple[int, int]  # edge indices
    line: int | None = None

    def format(self) -> str:
        cs = " ".join(c.letter for c in self.colors)
        return f"{self.kind} {cs} e{self.refs[0]} e{self.refs[1]}"


@dataclass(frozen=True)
class ChangeScript:
    steps: tuple[Step, ...]
    source: ColoredDiagram

    @property
    def s(self) -> int:
        return sum(1 for st in self.steps if st.kind == "same")

    @property
    def m(self) -> int:
        return sum(1 for st in self.steps if st.kind == "mixed")

    def __add__(self, other: "ChangeScript") -> "ChangeScript":
        if other.source != self.source:
            raise ScriptError("scripts act on different diagrams")
        return ChangeScript(self.steps + other.steps, self.source)


_REF = re.compile(r"^([ea])(\d+)$")


def _resolve(ref: str, d: ColoredDiagram, line: int) -> int:
    m = _REF.match(ref)
    if not m:
        raise ScriptError(f"bad edge reference {ref!r} (use e<k> or a<arc>)", line)
    k = int(m.group(2))
    if m.group(1) == "e":
        if k >= len(d.edges):
            raise ScriptError(f"no edge e{k}", line)
        return k
    for e in d.edges:
        if k in e.arcs:
            return e.index
    raise ScriptError(f"no arc a{k}", line)


def make_step(d: ColoredDiagram, kind: str, colors, refs, line: int | None = None) -> Step:
    colors = tuple(colors)
    e1, e2 = refs
    got = (d.edges[e1].color, d.edges[e2].color)
    if kind == "same":
        if len(colors) != 1:
            raise ScriptError("a same step names one color", line)
        if got != (colors[0], colors[0]):
            raise ScriptError(f"same step of color {colors[0].letter} on edges colored "
                              f"{got[0].letter}, {got[1].letter}", line)
    elif kind == "mixed":
        if len(colors) != 2 or colors[0] == colors[1]:
            raise ScriptError("a mixed step names two distinct colors", line)
        if got != colors:
            raise ScriptError(f"mixed step {colors[0].letter} {colors[1].letter} on edges "
                              f"colored {got[0].letter}, {got[1].letter}", line)
    else:
        raise ScriptError(f"unknown step kind {kind!r}", line)
    return Step(kind, colors, (e1, e2), line)


def parse_script(text: str, d: ColoredDiagram) -> ChangeScript:
    """Lines `same <c> <ref> <ref>` or `mixed <c> <c> <ref> <ref>`; `#` starts a comment."""
    steps = []
    for no, raw in enumerate(text.splitlines(), 1):
        words = raw.split("#", 1)[0].split()
        if not words:
            continue
        kind = words[0]
        ncol = {"same": 1, "mixed": 2}.get(kind)
        if ncol is None:
            raise ScriptError(f"unknown step kind {kind!r}", no)
        if len(words) != 1 + ncol + 2:
            raise ScriptError(f"{kind} takes {ncol} color(s) and two edge references", no)
        try:
            colors = [Color.parse(w) for w in words[1:1 + ncol]]
        except ValueError as exc:
            raise ScriptError(str(exc), no) from None
        refs = tuple(_resolve(w, d, no) for w in words[1 + ncol:])
        steps.append(make_step(d, kind, colors, refs, no))
    return ChangeScript(tuple(steps), d)


def format_script(script: ChangeScript) -> str:
    return "".join(st.format() + "\n" for st in script.steps)


# ---------------------------------------------------------------- ledger


@dataclass(frozen=True)
class LedgerReport:
    descriptor: FoamDescriptor
    V: int
    s: int
    m: int
    rewritten: tuple[int, ...]  # indices of same steps realized as two mixed steps
    warnings: tuple[str, ...]

    @property
    def cost(self) -> Fraction:
        return self.s + Fraction(self.m, 2)

    @property
    def chi_orb(self) -> Fraction:
        return chi_orb(self.descriptor)

    @property
    def closed_form(self) -> Fraction:
        return -Fraction(self.V, 2) - self.cost

    def to_json(self) -> dict:
        return {"V": self.V, "s": self.s, "m": self.m, "cost": self.cost,
                "chi_orb": self.chi_orb, "rewritten": list(self.rewritten),
                "warnings": list(self.warnings), "descriptor": self.descriptor.to_json()}


class _Ledger:
    """Running cell counts while elementary cobordisms are stacked on Γ × I."""

    def __init__(self, d: ColoredDiagram):
        self.d = d
        base = product_foam(d)
        self.facet_of = list(range(len(d.edges)))  # edge → facet id (union-find root)
        self.facets: dict[int, list] = {i: [c, x] for i, (c, x) in enumerate(base.facets)}
        self.next_facet = len(d.edges)
        self.circles = 0
        self.comp_parent: dict[tuple[str, int], tuple[str, int]] = {}
        self.comp_euler: dict[tuple[str, int], int] = {}
        self.edge_comp: dict[tuple[str, int], tuple[str, int]] = {}
        for key in PAIR_KEYS:
            comps = pair_components_cached(d, key)
            arc_comp = {a: k for k, comp in enumerate(comps) for a, _, _ in comp}
            for k in range(len(comps)):
                self.comp_parent[(key, k)] = (key, k)
                self.comp_euler[(key, k)] = 0
            i, j = PAIR_COLORS[key]
            for e in d.edges:
                if e.color in (i, j):
                    self.edge_comp[(key, e.index)] = (key, arc_comp[e.arcs[0]])

    def _facet(self, e: int) -> int:
        while self.facet_of[e] != e:
            e = self.facet_of[e]
        return e

    def _comp(self, c):
        while self.comp_parent[c] != c:
            c = self.comp_parent[c]
        return c

    def handle_facets(self, e1: int, e2: int) -> None:
        """A 1-handle between the facets of two same-colored edges."""
        f1, f2 = self._facet(e1), self._facet(e2)
        if f1 != f2:
            self.facets[f1][1] += self.facets.pop(f2)[1]
            self.facet_of[f2] = f1
        self.facets[f1][1] -= 2

    def handle_surface(self, key: str, e1: int, e2: int, loss: int = 2) -> None:
        c1, c2 = self._comp(self.edge_comp[(key, e1)]), self._comp(self.edge_comp[(key, e2)])
        if c1 != c2:
            self.comp_euler[c1] += self.comp_euler.pop(c2)
            self.comp_parent[c2] = c1
        self.comp_euler[c1] -= loss

    def new_facet(self, color: Color, euler: int) -> None:
        self.facets[self.next_facet] = [color, euler]
        self.next_facet += 1

    def same(self, c: Color, e1: int, e2: int) -> None:
        self.handle_facets(e1, e2)
        for key in PAIR_KEYS:
            if c in PAIR_COLORS[key]:
                self.handle_surface(key, e1, e2)

    def mixed(self, ci: Color, cj: Color, e1: int, e2: int) -> None:
        # zip/unzip: 1-handle between the two facets whose co-core is a disk of the third color
        ck = next(x for x in Color if x not in (ci, cj))
        self.facets[self._facet(e1)][1] -= 1
        self.facets[self._facet(e2)][1] -= 1
        self.new_facet(ck, 1)
        self.circles += 1
        key = next(k for k in PAIR_KEYS if set(PAIR_COLORS[k]) == {ci, cj})
        self.handle_surface(key, e1, e2)

    def split_same(self, c: Color, e1: int, e2: int) -> None:
        """A same change between opposite-sign edges, realized as two mixed pieces.

        Each piece carries one seam circle and half of the handle's Euler cost.
        """
        for e in (e1, e2):
            self.facets[self._facet(e)][1] -= 1
            self.circles += 1
        for key in PAIR_KEYS:
            if c in PAIR_COLORS[key]:
                self.handle_surface(key, e1, e2)

    def descriptor(self) -> FoamDescriptor:
        facets = tuple((Color(c), x) for c, x in
                       (self.facets[k] for k in sorted(self.facets)))
        eulers = {}
        for key in PAIR_KEYS:
            eulers[key] = tuple(self.comp_euler[c] for c in sorted(self.comp_euler)
                                if c[0] == key)
        v = self.d.vertex_count
        return FoamDescriptor(facets, self.circles, v, 0, 2 * v, eulers)


def cobordism_ledger(script: ChangeScript, t: TotalOrientation | None = None) -> LedgerReport:
    """Stack elementary crossing-change cobordisms on Γ × I and count cells.

    With a total orientation, a same step between edges of opposite double
    orientation sign is realized as two mixed pieces and reported.
    """
    d = script.source
    signs = {}
    if t is not None:
        signs = {e.edge: e.sign for e in double_orientations(d, t)}
    led = _Ledger(d)
    rewritten, warnings = [], []
    for k, st in enumerate(script.steps):
        e1, e2 = st.refs
        if st.kind == "same":
            if signs and e1 != e2 and signs[e1] != signs[e2]:
                led.split_same(st.colors[0], e1, e2)
                rewritten.append(k)
                warnings.append(f"step {k + 1} ({st.format()}) joins edges of opposite sign; "
                                "realized as two mixed changes")
            else:
                led.same(st.colors[0], e1, e2)
        else:
            led.mixed(st.colors[0], st.colors[1], e1, e2)
    return LedgerReport(led.descriptor(), d.vertex_count, script.s, script.m,
                        tuple(rewritten), tuple(warnings))


# ---------------------------------------------------------------- upper bounds


def slice_chi_upper_bound(inv: KleinInvariants, knot_free: bool = False) -> Fraction:
    """Upper bound on χ^orb_4 of a seamless slice foam: (μ − V)/4, or V/8 if smaller and knot-free."""
    bound = Fraction(inv.mu - inv.V, 4)
    if knot_free:
        bound = min(bound, Fraction(inv.V, 8))
    return bound


def seamed_cobordism_upper_bound(inv1: KleinInvariants, inv2: KleinInvariants) -> Fraction:
    """(μ₀ + μ₁ − 2V)/4 for graphs with equal vertex counts."""
    if inv1.V != inv2.V:
        raise FoamError(f"vertex counts differ ({inv1.V} vs {inv2.V})")
    return Fraction(inv1.mu + inv2.mu - 2 * inv1.V, 4)


def is_knot_free(d: ColoredDiagram) -> bool:
    return not any(e.closed for e in d.edges)
