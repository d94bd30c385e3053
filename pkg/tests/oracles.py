"""Independent reference computations used only by the tests.

Nothing here imports the signature engine: link signatures are recomputed from
Goeritz matrices with the Gordon–Litherland correction, and matrix inertia from
the exact characteristic polynomial.
"""

from __future__ import annotations

import sympy


def charpoly_inertia(M) -> tuple[int, int, int]:
    """(positive, negative, zero) eigenvalue counts of a symmetric integer matrix.

    All roots are real, so Descartes' rule of signs is exact.
    """
    n = len(M)
    if n == 0:
        return (0, 0, 0)
    x = sympy.Symbol("x")
    coeffs = sympy.Matrix(M).charpoly(x).all_coeffs()
    zero = 0
    while coeffs and coeffs[-1] == 0:
        coeffs.pop()
        zero += 1

    def changes(cs):
        signs = [1 if c > 0 else -1 for c in cs if c != 0]
        return sum(1 for a, b in zip(signs, signs[1:]) if a != b)

    d = len(coeffs) - 1
    pos = changes(coeffs)
    neg = changes([c * (-1) ** (d - k) for k, c in enumerate(coeffs)])
    assert pos + neg + zero == n
    return pos, neg, zero


def _reduced_form(G, mu):
    """Signature and nullity of the Goeritz form with one row and column deleted."""
    R = [row[1:] for row in G[1:]]
    p, q, z = charpoly_inertia(R)
    return p - q - mu, z


def braid_goeritz(strands: int, letters, white: int = 0) -> tuple[int, int]:
    """(σ, β) of a non-split braid closure from its checkerboard surface.

    Levels 0..strands are the vertical channels (level ℓ lies left of strand ℓ+1);
    channels of parity `white` are white.  Every index must occur.
    """
    assert {abs(x) for x in letters} == set(range(1, strands))
    regions: dict[int, list[int]] = {}
    count = 0
    for lev in range(strands + 1):
        if lev % 2 == white:
            k = sum(1 for x in letters if abs(x) == lev)
            ids = list(range(count, count + max(k, 1)))
            count += max(k, 1)
            regions[lev] = ids
    seen = {lev: 0 for lev in regions}
    G = [[0] * count for _ in range(count)]
    mu = 0
    for x in letters:
        i, eps = abs(x), (1 if x > 0 else -1)
        if i % 2 == white:
            eta = -eps
            ids = regions[i]
            a = ids[seen[i]]
            seen[i] += 1
            b = ids[seen[i] % len(ids)]
        else:
            eta = eps
            mu += eta
            a = _current(regions, seen, i - 1)
            b = _current(regions, seen, i + 1)
        if a != b:
            G[a][b] -= eta
            G[b][a] -= eta
    for a in range(count):
        G[a][a] = -sum(G[a][b] for b in range(count) if b != a)
    return _reduced_form(G, mu)


def _current(regions, seen, lev):
    ids = regions[lev]
    return ids[seen[lev] % len(ids)]


def braid_pd(strands: int, letters):
    """Crossing code of a braid closure with strands running upward.

    Returns (crossings, free_loops); positions never touched by a letter become
    crossingless circles.
    """
    cur = list(range(1, strands + 1))
    nxt = strands + 1
    xs = []
    for x in letters:
        i = abs(x)
        left, right = cur[i - 1], cur[i]
        nl, nr = nxt, nxt + 1
        nxt += 2
        if x > 0:
            xs.append([right, nr, nl, left])
        else:
            xs.append([left, right, nr, nl])
        cur[i - 1], cur[i] = nl, nr
    rename = {cur[p]: p + 1 for p in range(strands)}
    xs = [[rename.get(a, a) for a in slots] for slots in xs]
    used = {a for slots in xs for a in slots}
    free = sum(1 for p in range(strands) if p + 1 not in used)
    ids = sorted(used)
    compact = {a: k + 1 for k, a in enumerate(ids)}
    return [tuple(compact[a] for a in slots) for slots in xs], free


def pd_goeritz(crossings, heads) -> tuple[int, int]:
    """(σ, β) of a connected oriented crossing code via Gordon–Litherland.

    `heads[a]` is the (crossing, slot) where arc a ends.  Faces come from the
    counterclockwise rotation system; white is the color class of the face
    containing corner 0 of crossing 0.
    """
    ends: dict[int, list] = {}
    for c, slots in enumerate(crossings):
        for s, a in enumerate(slots):
            ends.setdefault(a, []).append((c, s))
    corner_face = {}
    faces = 0
    for c in range(len(crossings)):
        for k in range(4):
            if (c, k) in corner_face:
                continue
            cc, kk = c, k
            while (cc, kk) not in corner_face:
                corner_face[(cc, kk)] = faces
                s = (kk + 1) % 4
                a = crossings[cc][s]
                e0, e1 = ends[a]
                cc, s2 = e1 if e0 == (cc, s) else e0
                kk = s2
            faces += 1
    color = {corner_face[(0, 0)]: 0}
    stack = [corner_face[(0, 0)]]
    adj: dict[int, set] = {f: set() for f in range(faces)}
    for c in range(len(crossings)):
        for k in range(4):
            f, g = corner_face[(c, k)], corner_face[(c, (k + 1) % 4)]
            adj[f].add(g)
            adj[g].add(f)
    while stack:
        f = stack.pop()
        for g in adj[f]:
            if g not in color:
                color[g] = 1 - color[f]
                stack.append(g)
            assert color[g] != color[f], "faces are not checkerboard colorable"
    whites = sorted(f for f in range(faces) if color[f] == 0)
    wi = {f: k for k, f in enumerate(whites)}
    G = [[0] * len(whites) for _ in whites]
    mu = 0
    for c, slots in enumerate(crossings):
        wc = [k for k in range(4) if color[corner_face[(c, k)]] == 0]
        eta = -1 if set(wc) == {1, 3} else 1
        o = 3 if heads[slots[3]] == (c, 3) else 1
        if heads[slots[0]] != (c, 0):
            o = 4 - o
        # the oriented smoothing joins corners 1 and 3 exactly when the over-strand enters at slot 3
        merged = {1, 3} if o == 3 else {0, 2}
        if set(wc) != merged:
            mu += eta
        a, b = (wi[corner_face[(c, k)]] for k in wc)
        if a != b:
            G[a][b] -= eta
            G[b][a] -= eta
    for a in range(len(whites)):
        G[a][a] = -sum(G[a][b] for b in range(len(whites)) if b != a)
    return _reduced_form(G, mu)


def torus_2_seifert(n: int) -> list[list[int]]:
    """Closed-form Seifert matrix of σ₁^(2n+1): −1 diagonal, +1 just above it."""
    m = 2 * n
    return [[-1 if i == j else (1 if j == i + 1 else 0) for j in range(m)] for i in range(m)]


def burau_alexander(strands: int, letters):
    """Alexander polynomial of a braid closure from the reduced Burau matrix.

    det(I − ρ(β)) = (1 + t + … + t^(n−1)) Δ(t); returned normalized so the
    lowest power is t^0 and the leading coefficient is positive.
    """
    t = sympy.Symbol("t")
    m = strands - 1
    if m == 0:
        return sympy.Integer(1)
    rho = sympy.eye(m)
    for x in letters:
        i = abs(x) - 1
        g = sympy.eye(m)
        g[i, i] = -t
        if i > 0:
            g[i - 1, i] = t
        if i < m - 1:
            g[i + 1, i] = 1
        rho = rho * (g if x > 0 else g.inv())
    num = sympy.factor((sympy.eye(m) - rho).det())
    delta = sympy.cancel(num / sum(t ** k for k in range(strands)))
    return normalize_laurent(delta, t)


def seifert_alexander(V):
    """det(V − t Vᵀ), normalized like burau_alexander."""
    t = sympy.Symbol("t")
    M = sympy.Matrix(V) if V else sympy.zeros(0, 0)
    if M.shape[0] == 0:
        return sympy.Integer(1)
    return normalize_laurent((M - t * M.T).det(), t)


def normalize_laurent(p, t):
    """p up to units ±t^k: lowest power t^0, positive leading coefficient."""
    num, _ = sympy.fraction(sympy.together(sympy.expand(p)))
    num = sympy.expand(num)
    if num == 0:
        return sympy.Integer(0)
    poly = sympy.Poly(num, t)
    low = min(m[0] for m in poly.monoms())
    out = sympy.expand(num / t ** low)
    return -out if sympy.Poly(out, t).LC() < 0 else out
