"""Seifert matrices, signatures and nullities of oriented link diagrams.

A connected diagram is braided by Vogel's moves, the braid closure gets the
disk-and-band Seifert surface, and the signature of V + Vᵀ is counted by exact
congruence diagonalization over the rationals.
"""

from __future__ import annotations

import json
import random
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from graphlib import CycleError, TopologicalSorter

from .linkops import OrientedLinkDiagram, split_oriented


class BraidingError(RuntimeError):
    """Vogel's algorithm could not braid the diagram (budget exceeded or broken code)."""


@dataclass(frozen=True)
class BraidWord:
    strands: int
    letters: tuple[int, ...]  # ±i stands for σ_i^{±1}

    def __post_init__(self):
        if self.strands < 1:
            raise ValueError("a braid needs at least one strand")
        for x in self.letters:
            if x == 0 or abs(x) >= self.strands:
                raise ValueError(f"letter {x} out of range for {self.strands} strands")

    def permutation(self) -> list[int]:
        perm = list(range(self.strands))
        for x in self.letters:
            i = abs(x) - 1
            perm[i], perm[i + 1] = perm[i + 1], perm[i]
        return perm

    def closure_components(self) -> int:
        perm = self.permutation()
        seen = [False] * self.strands
        count = 0
        for s in range(self.strands):
            if not seen[s]:
                count += 1
                while not seen[s]:
                    seen[s] = True
                    s = perm[s]
        return count


@dataclass(frozen=True)
class SeifertData:
    V: tuple[tuple[int, ...], ...]
    r: int
    mu: int = 1

    @property
    def size(self) -> int:
        return len(self.V)

    def symmetrized(self) -> list[list[int]]:
        n = self.size
        return [[self.V[i][j] + self.V[j][i] for j in range(n)] for i in range(n)]


@dataclass(frozen=True)
class LinkSignatureBundle:
    sigma: int
    beta: int
    mu: int


# ---------------------------------------------------------------- exact signature


@dataclass(frozen=True)
class Inertia:
    positive: int
    negative: int
    zero: int
    diagonal: tuple[Fraction, ...]

    @property
    def signature(self) -> int:
        return self.positive - self.negative


def congruence_inertia(M, rng: random.Random | None = None) -> Inertia:
    """Inertia of a symmetric rational matrix by symmetric Gaussian elimination.

    Nonzero diagonal pivots are used when available; otherwise a 2×2 block
    [[0, a], [a, 0]] is split off, contributing one positive and one negative
    square.  `rng` randomizes the pivot choice.
    """
    n = len(M)
    A = [[Fraction(x) for x in row] for row in M]
    for i in range(n):
        if len(A[i]) != n or any(A[i][j] != A[j][i] for j in range(n)):
            raise ValueError("matrix is not square symmetric")
    idx = list(range(n))
    pos = neg = 0
    diag: list[Fraction] = []
    while idx:
        cands = [i for i in idx if A[i][i] != 0]
        if cands:
            p = rng.choice(cands) if rng else cands[0]
            d = A[p][p]
            diag.append(d)
            if d > 0:
                pos += 1
            else:
                neg += 1
            idx.remove(p)
            row = A[p]
            for i in idx:
                f = A[i][p] / d
                if f:
                    Ai = A[i]
                    for j in idx:
                        if row[j]:
                            Ai[j] -= f * row[j]
            continue
        pairs = [(i, j) for i in idx for j in idx if i < j and A[i][j] != 0]
        if not pairs:
            break
        p, q = rng.choice(pairs) if rng else pairs[0]
        a = A[p][q]
        diag.extend((2 * a, -a / 2))
        pos += 1
        neg += 1
        idx.remove(p)
        idx.remove(q)
        rp, rq = A[p], A[q]
        for i in idx:
            if A[i][p] or A[i][q]:
                Ai = A[i]
                cp, cq = A[i][p], A[i][q]
                for j in idx:
                    Ai[j] -= (cp * rq[j] + cq * rp[j]) / a
    return Inertia(pos, neg, n - pos - neg, tuple(diag))


# ---------------------------------------------------------------- braid → Seifert matrix


def seifert_matrix(w: BraidWord) -> SeifertData:
    """Seifert pairing of the disk-and-band surface of the closed braid.

    One disk per strand and one band per letter; a generator runs through two
    consecutive bands of the same index.
    """
    by_index: dict[int, list[tuple[int, int]]] = {i: [] for i in range(1, w.strands)}
    for p, x in enumerate(w.letters):
        by_index[abs(x)].append((p, 1 if x > 0 else -1))
    gens: dict[int, list[tuple[int, int, int, int]]] = {}
    flat: list[tuple[int, int]] = []
    for i in range(1, w.strands):
        row = by_index[i]
        gens[i] = []
        for t in range(len(row) - 1):
            gens[i].append((row[t][0], row[t + 1][0], row[t][1], row[t + 1][1]))
            flat.append((i, t))
    where = {g: k for k, g in enumerate(flat)}
    m = len(flat)
    V = [[0] * m for _ in range(m)]
    for i, gl in gens.items():
        for t, (_, _, s1, s2) in enumerate(gl):
            g = where[(i, t)]
            if s1 == s2:
                V[g][g] = -s1
            if t + 1 < len(gl):
                h = where[(i, t + 1)]
                if s2 > 0:
                    V[h][g] = 1
                else:
                    V[g][h] = -1
        for t, (a, b, _, _) in enumerate(gl):
            g = where[(i, t)]
            for u, (c, e, _, _) in enumerate(gens.get(i + 1, ())):
                h = where[(i + 1, u)]
                if c < a < e < b:
                    V[h][g] = 1
                elif a < c < b < e:
                    V[h][g] = -1
    parent = list(range(w.strands))

    def find(x):
        while parent[x] != x:
            parent[x] = parent[parent[x]]
            x = parent[x]
        return x

    for x in w.letters:
        parent[find(abs(x) - 1)] = find(abs(x))
    r = len({find(s) for s in range(w.strands)})
    Vt = tuple(tuple(V[j][i] for j in range(m)) for i in range(m))
    return SeifertData(Vt, r, w.closure_components())


def signature_nullity(s: SeifertData, split_extra: int = 0, dump=None,
                      rng: random.Random | None = None) -> LinkSignatureBundle:
    """σ and β from Seifert data; `dump` (a text stream) receives V and the diagonal form."""
    inertia = congruence_inertia(s.symmetrized(), rng)
    beta = inertia.zero + s.r - 1 + split_extra
    if dump is not None:
        json.dump({"V": [list(r) for r in s.V],
                   "diagonal": [str(x) for x in inertia.diagonal],
                   "r": s.r, "sigma": inertia.signature, "beta": beta}, dump)
        dump.write("\n")
    return LinkSignatureBundle(inertia.signature, beta, s.mu)


# ---------------------------------------------------------------- Vogel braiding


class _Code:
    """Mutable oriented crossing code: slot 0 is the incoming under end."""

    def __init__(self, xs: list[list[int]], over_in: list[int]):
        self.xs = xs
        self.over_in = over_in
        self.refresh()

    def refresh(self):
        head, tail = {}, {}
        for c, slots in enumerate(self.xs):
            o = self.over_in[c]
            head[slots[0]] = (c, 0)
            head[slots[o]] = (c, o)
            tail[slots[2]] = (c, 2)
            tail[slots[4 - o]] = (c, 4 - o)
        self.head, self.tail = head, tail
        succ = {}
        for a, (c, s) in head.items():
            out = 4 - self.over_in[c] if s == 0 else 2
            succ[a] = self.xs[c][out]
        circ = {}
        circles = []
        for a in sorted(head):
            if a in circ:
                continue
            cyc = []
            while a not in circ:
                circ[a] = len(circles)
                cyc.append(a)
                a = succ[a]
            circles.append(cyc)
        self.circ, self.circles = circ, circles

    def faces(self):
        seen = set()
        out = []
        for a in sorted(self.head):
            for fwd in (True, False):
                if (a, fwd) in seen:
                    continue
                face = []
                h = (a, fwd)
                while h not in seen:
                    seen.add(h)
                    face.append(h)
                    arc, f = h
                    c, s = self.head[arc] if f else self.tail[arc]
                    s2 = (s - 1) % 4
                    b = self.xs[c][s2]
                    h = (b, self.tail[b] == (c, s2))
                out.append(face)
        return out

    def defect(self):
        for face in self.faces():
            for k, (x, fx) in enumerate(face):
                for y, fy in face[k + 1:]:
                    if fx == fy and self.circ[x] != self.circ[y]:
                        return x, y, fx
        return None

    def vogel_move(self, x: int, y: int, face_left: bool, fresh: int) -> int:
        a2, a3, b2, b3 = fresh, fresh + 1, fresh + 2, fresh + 3
        cq, sq = self.head[x]
        cw, sw = self.head[y]
        self.xs[cq][sq] = a3
        self.xs[cw][sw] = b3
        if face_left:
            self.xs.append([b2, a2, b3, x])
            self.over_in.append(3)
            self.xs.append([y, a2, b2, a3])
            self.over_in.append(1)
        else:
            self.xs.append([b2, x, b3, a2])
            self.over_in.append(1)
            self.xs.append([y, a3, b2, a2])
            self.over_in.append(3)
        self.refresh()
        return fresh + 4

    def sign(self, c: int) -> int:
        return 1 if self.over_in[c] == 3 else -1


def _code_from(o: OrientedLinkDiagram) -> _Code:
    xs, over_in = [], []
    for c, slots in enumerate(o.base.crossings):
        slots = list(slots)
        under0 = o.head(slots[0]) == (c, 0)
        over3 = o.head(slots[3]) == (c, 3)
        if not under0:
            slots = slots[2:] + slots[:2]
            over3 = not over3
        xs.append(slots)
        over_in.append(3 if over3 else 1)
    return _Code(xs, over_in)


def to_braid(o: OrientedLinkDiagram, budget: int | None = None) -> BraidWord:
    """Braid word whose closure is the connected oriented diagram o."""
    if not o.base.crossings:
        if o.base.mu != 1:
            raise ValueError("to_braid needs a connected diagram")
        return BraidWord(1, ())
    code = _code_from(o)
    if budget is None:
        budget = 10 * (len(code.xs) + len(code.circles)) ** 2
    fresh = max(code.head) + 1
    moves = 0
    while True:
        found = code.defect()
        if found is None:
            break
        if moves >= budget:
            raise BraidingError(f"Vogel move budget of {budget} exceeded; the crossing code "
                                "is probably not a planar diagram")
        fresh = code.vogel_move(*found, fresh=fresh)
        moves += 1
    return _read_braid(code)


def _read_braid(code: _Code) -> BraidWord:
    n = len(code.circles)
    if n == 1:
        raise BraidingError("a single Seifert circle carries crossings; the code is not planar")
    ends = []
    nbrs: dict[int, set[int]] = {k: set() for k in range(n)}
    for c, slots in enumerate(code.xs):
        p, q = code.circ[slots[0]], code.circ[slots[code.over_in[c]]]
        if p == q:
            raise BraidingError("crossing joins a Seifert circle to itself after braiding")
        ends.append((p, q))
        nbrs[p].add(q)
        nbrs[q].add(p)
    leaves = [k for k in range(n) if len(nbrs[k]) == 1]
    if any(len(v) > 2 for v in nbrs.values()) or len(leaves) != 2:
        raise BraidingError("Seifert circles are not nested coherently")
    path = [leaves[0]]
    while len(path) < n:
        nxt = [k for k in nbrs[path[-1]] if k not in path]
        if not nxt:
            raise BraidingError("Seifert graph is not connected")
        path.append(nxt[0])
    level = {k: i for i, k in enumerate(path)}
    index = {}
    for c, (p, q) in enumerate(ends):
        if abs(level[p] - level[q]) != 1:
            raise BraidingError("crossing between non-adjacent Seifert circles")
        index[c] = min(level[p], level[q]) + 1
    cyclic = []
    for k in path:
        cyclic.append([code.head[a][0] for a in code.circles[k]])
    lin = [cyclic[0]]
    for k in range(1, n):
        first = next(c for c in lin[k - 1] if index[c] == k)
        cyc = cyclic[k]
        t = cyc.index(first)
        lin.append(cyc[t:] + cyc[:t])
    ts: TopologicalSorter = TopologicalSorter()
    for c in range(len(code.xs)):
        ts.add(c)
    for row in lin:
        for u, v in zip(row, row[1:]):
            ts.add(v, u)
    try:
        order = list(ts.static_order())
    except CycleError as exc:
        raise BraidingError("inconsistent crossing order between Seifert circles") from exc
    return BraidWord(n, tuple(index[c] * code.sign(c) for c in order))


# ---------------------------------------------------------------- link signature


@lru_cache(maxsize=4096)
def link_signature(o: OrientedLinkDiagram) -> LinkSignatureBundle:
    """σ, β and μ of an oriented link diagram, combining split pieces."""
    pieces = split_oriented(o)
    sigma = beta = mu = 0
    for piece in pieces:
        if not piece.base.crossings:
            b = LinkSignatureBundle(0, 0, piece.base.mu)
        else:
            b = signature_nullity(seifert_matrix(to_braid(piece)))
            if b.mu != piece.base.mu:
                raise BraidingError("braid closure has the wrong number of components")
        sigma += b.sigma
        beta += b.beta
        mu += b.mu
    return LinkSignatureBundle(sigma, beta + max(len(pieces) - 1, 0), mu)
