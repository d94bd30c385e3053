"""The generator corpus and the property suite behind `kleinsig corpus check`."""

from __future__ import annotations

import random
import time
from dataclasses import dataclass
from fractions import Fraction

from .bounds import (gammasig_chi_upper, gordian_lower_bound, realized_slice_chi,
                     theta_unknotting_bound)
from .diagram import Color, ColoredDiagram
from .foam import (ChangeScript, chi_orb, chiorb_identity_check, cobordism_ledger,
                   compose_chi_orb, cone_foam, is_knot_free, make_step, parse_script,
                   seamed_cobordism_upper_bound, slice_chi_upper_bound)
from .invariants import compute, constituents
from .linkops import braid_closure, component_count
from .orientation import TotalOrientation, enumerate_orientations, reverse, vertex_types
from .seifert import (BraidWord, SeifertData, congruence_inertia, link_signature,
                      seifert_matrix, signature_nullity)
from .transform import (edge_sum, gen_basic, gen_kinoshita, gen_theta_n, gen_torus2k,
                        kinoshita_script, mirror, theta_n_script, vertex_sum)

MAX_TABLE_MU = 6


@dataclass(frozen=True)
class Entry:
    diagram: ColoredDiagram
    script: str | None = None  # unknotting script towards the trivial θ

    @property
    def name(self) -> str:
        return self.diagram.name or "?"


def build_corpus() -> list[Entry]:
    out = [Entry(gen_basic(name)) for name in
           ("trivial_theta", "tetrahedron", "two_thetas", "theta_with_kink",
            "theta_with_loop", "prism")]
    out += [Entry(gen_torus2k(k)) for k in (1, 2, 3)]
    out += [Entry(gen_theta_n(n), theta_n_script(n)) for n in (1, 2, 3, 4)]
    out += [Entry(gen_kinoshita(*p), kinoshita_script(*p))
            for p in ((0, 0, 0), (1, 1, 1), (1, 1, 3), (1, 3, 5), (2, -1, 3))]
    return out


@dataclass(frozen=True)
class CheckResult:
    label: str
    passed: bool
    detail: str
    seconds: float = 0.0


def _default(d: ColoredDiagram) -> TotalOrientation:
    return TotalOrientation.default(d)


# ---------------------------------------------------------------- θ_n and Kinoshita


def check_theta(n: int, sigma: int, uy: Fraction, u: int, cost: Fraction) -> tuple[bool, str]:
    d = gen_theta_n(n)
    t = _default(d)
    inv = compute(d, t)
    got_uy, got_u = theta_unknotting_bound(inv)
    ledger = cobordism_ledger(parse_script(theta_n_script(n), d), t)
    trivial = gen_basic("trivial_theta")
    gap = ledger.cost - gordian_lower_bound(inv, compute(trivial, _default(trivial)))
    ok = (abs(inv.sigma) == sigma and (got_uy, got_u) == (uy, u) and ledger.cost == cost
          and gap == 0)
    return ok, f"|σ|={abs(inv.sigma)} u_Y≥{got_uy} u≥{got_u} cost={ledger.cost} gap={gap}"


def torus_seifert(n: int) -> SeifertData:
    """Closed form for T(2, 2n+1): −1 on the diagonal, +1 just above it."""
    size = 2 * n
    rows = tuple(tuple(-1 if c == r else 1 if c == r + 1 else 0 for c in range(size))
                 for r in range(size))
    return SeifertData(rows, 1)


def check_family() -> tuple[bool, str]:
    bad = []
    for n in (1, 2, 3, 4):
        d = gen_theta_n(n)
        inv = compute(d, _default(d))
        uy, _ = theta_unknotting_bound(inv)
        if abs(inv.sigma) != 6 * n or uy != Fraction(3 * n, 2):
            bad.append(f"θ_{n}: |σ|={abs(inv.sigma)} bound={uy}")
    for n in range(1, 11):
        piped = link_signature(braid_closure(2, [1] * (2 * n + 1)))
        closed = signature_nullity(torus_seifert(n))
        if not (abs(piped.sigma) == 2 * n == abs(closed.sigma) and piped.sigma == closed.sigma):
            bad.append(f"T(2,{2 * n + 1}): pipeline {piped.sigma}, closed form {closed.sigma}")
    return not bad, "; ".join(bad) or "θ_1..θ_4 and T(2,3)..T(2,21) agree"


def check_kinoshita() -> tuple[bool, str]:
    bad = []
    for q, r in ((1, 1), (1, 3), (3, 5)):
        d = gen_kinoshita(1, q, r)
        t = _default(d)
        parts = constituents(d, t)
        if compute(d, t).sigma != 0 or any(b.sigma for b in parts.values()):
            bad.append(f"θ(1,{q},{r})")
    return not bad, "nonzero: " + ", ".join(bad) if bad else "σ = 0 with unknotted constituents"


# ---------------------------------------------------------------- tables and sums


def _orientations(d: ColoredDiagram):
    if component_count(d).mu > MAX_TABLE_MU:
        return []
    return list(enumerate_orientations(d))


def check_tables(corpus: list[Entry]) -> tuple[bool, str]:
    """Mirror and reversal laws for λ, μ, β, σ, sv over every orientation."""
    rows = 0
    bad = []
    for entry in corpus:
        d = entry.diagram
        for t in _orientations(d):
            rows += 1
            i = compute(d, t)
            m, tm = mirror(d, t)
            im = compute(m, tm)
            ir = compute(d, reverse(t))
            ok = (im.lam == -i.lam and ir.lam == i.lam and im.mu == ir.mu == i.mu
                  and im.beta == ir.beta == i.beta and im.sigma == -i.sigma
                  and ir.sigma == i.sigma and im.sv == i.sv and ir.sv == -i.sv)
            if not ok:
                bad.append(f"{entry.name} {t.format()}")
    return not bad, f"{rows} oriented graphs" + (f"; failures: {bad[:3]}" if bad else "")


def _sum_pool(corpus: list[Entry]) -> list[ColoredDiagram]:
    return [e.diagram for e in corpus if component_count(e.diagram).mu <= MAX_TABLE_MU]


def random_vertex_sum(rng: random.Random, pool):
    """A random #₃ with compatible orientations, or None if the draw has none."""
    d1, d2 = rng.choice(pool), rng.choice(pool)
    t1 = rng.choice(list(enumerate_orientations(d1)))
    v1 = rng.choice(vertex_types(d1, t1))
    options = [(t2, w) for t2 in enumerate_orientations(d2) for w in vertex_types(d2, t2)
               if all(a != b for a, b in zip(v1.pattern, w.pattern))]
    if not options:
        return None
    t2, w = rng.choice(options)
    s, ts = vertex_sum(d1, v1.vertex, d2, w.vertex, t1, t2)
    return (d1, t1), (d2, t2), (s, ts)


def random_edge_sum(rng: random.Random, pool):
    d1, d2 = rng.choice(pool), rng.choice(pool)
    t1 = rng.choice(list(enumerate_orientations(d1)))
    e1 = rng.choice([e for e in d1.edges if not e.closed])
    options = []
    for t2 in enumerate_orientations(d2):
        for e2 in d2.edges:
            if e2.closed or e2.color != e1.color:
                continue
            try:
                options.append((t2, e2, edge_sum(d1, e1.index, d2, e2.index, t1, t2)))
            except ValueError:
                continue
    if not options:
        return None
    t2, _, (s, ts) = rng.choice(options)
    return (d1, t1), (d2, t2), (s, ts)


def check_sums(corpus: list[Entry], seed: int = 0, pairs: int = 24) -> tuple[bool, str]:
    rng = random.Random(seed)
    pool = _sum_pool(corpus)
    small = [d for d in pool if component_count(d).mu <= 4 and d.vertex_count <= 4]
    bad = []
    done3 = done2 = 0
    while done3 < pairs:
        got = random_vertex_sum(rng, small)
        if got is None:
            continue
        done3 += 1
        (d1, t1), (d2, t2), (s, ts) = got
        i1, i2, i = compute(d1, t1), compute(d2, t2), compute(s, ts)
        if not (i.sigma == i1.sigma + i2.sigma and i.sv == i1.sv + i2.sv
                and i.mu == i1.mu + i2.mu - 3 and i.beta == i1.beta + i2.beta):
            bad.append(f"#3 {d1.name} {d2.name}")
    while done2 < pairs:
        got = random_edge_sum(rng, small)
        if got is None:
            continue
        done2 += 1
        (d1, t1), (d2, t2), (s, ts) = got
        i1, i2, i = compute(d1, t1), compute(d2, t2), compute(s, ts)
        if not (i.mu == i1.mu + i2.mu - 2 and i.beta == i1.beta + i2.beta + 1
                and i.sv == i1.sv + i2.sv):
            bad.append(f"#2 {d1.name} {d2.name}")
    return not bad, f"{done3} vertex sums, {done2} edge sums" + (f"; failures: {bad[:3]}"
                                                                   if bad else "")


# ---------------------------------------------------------------- foams


def random_script(rng: random.Random, d: ColoredDiagram, length: int) -> ChangeScript:
    steps = []
    by_color = {c: [e.index for e in d.edges if e.color == c] for c in Color}
    for _ in range(length):
        if rng.random() < 0.5:
            c = rng.choice([c for c in Color if by_color[c]])
            refs = (rng.choice(by_color[c]), rng.choice(by_color[c]))
            steps.append(make_step(d, "same", (c,), refs))
        else:
            ci, cj = rng.sample([c for c in Color if by_color[c]], 2)
            refs = (rng.choice(by_color[ci]), rng.choice(by_color[cj]))
            steps.append(make_step(d, "mixed", (ci, cj), refs))
    return ChangeScript(tuple(steps), d)


def check_foam(corpus: list[Entry], seed: int = 0, scripts: int = 200) -> tuple[bool, str]:
    rng = random.Random(seed)
    pool = _sum_pool(corpus)
    bad = []
    rewrites = 0
    for k in range(scripts):
        d = rng.choice(pool)
        t = rng.choice(list(enumerate_orientations(d)))
        script = random_script(rng, d, rng.randint(0, 12))
        rep = cobordism_ledger(script, t)
        rewrites += len(rep.rewritten)
        cut = rng.randint(0, len(script.steps))
        a = cobordism_ledger(ChangeScript(script.steps[:cut], d), t)
        b = cobordism_ledger(ChangeScript(script.steps[cut:], d), t)
        ok = (rep.chi_orb == rep.closed_form
              and chiorb_identity_check(rep.descriptor)
              and -rep.chi_orb == rep.cost + Fraction(rep.V, 2)
              and a.cost + b.cost == rep.cost
              and compose_chi_orb(a.chi_orb, b.chi_orb, d.vertex_count) == rep.chi_orb)
        if not ok:
            bad.append(f"script {k} on {d.name}")
    return not bad, f"{scripts} scripts, {rewrites} same steps rewritten" + (
        f"; failures: {bad[:3]}" if bad else "")


# ---------------------------------------------------------------- bound consistency


def check_bounds(corpus: list[Entry]) -> tuple[bool, str]:
    """Every realized χ^orb sits under the applicable upper bounds; no chain inverts."""
    trivial = gen_basic("trivial_theta")
    inv_trivial = compute(trivial, _default(trivial))
    bad = []
    positive_self: set[str] = set()
    checked = 0
    for entry in corpus:
        d = entry.diagram
        for t in _orientations(d):
            inv = compute(d, t)
            checked += 1
            # the μ-term of the chain only cancels for μ = 3; larger μ gives a
            # positive self-distance bound, which is reported rather than checked
            if inv.mu == 3 and gordian_lower_bound(inv, inv) != 0:
                bad.append(f"{entry.name}: d(Γ,Γ) bound")
            elif inv.mu != 3 and gordian_lower_bound(inv, inv) != 0:
                positive_self.add(entry.name)
            # Γ × I
            prod = cobordism_ledger(ChangeScript((), d), t)
            if prod.chi_orb > seamed_cobordism_upper_bound(inv, inv):
                bad.append(f"{entry.name}: Γ×I above the seamed bound")
            slice_chi = None
            if entry.script is not None:
                led = cobordism_ledger(parse_script(entry.script, d), t)
                if led.chi_orb > seamed_cobordism_upper_bound(inv, inv_trivial):
                    bad.append(f"{entry.name}: ledger above the seamed bound")
                if gordian_lower_bound(inv, inv_trivial) > led.cost:
                    bad.append(f"{entry.name}: chain inverts")
                if theta_unknotting_bound(inv)[0] > led.cost:
                    bad.append(f"{entry.name}: θ bound above cost")
                slice_chi, seam_vertices = realized_slice_chi(led), 0
            elif d.vertex_count in (2, 4) and is_knot_free(d) and _is_cone_target(d):
                cone = cone_foam(d)
                slice_chi, seam_vertices = chi_orb(cone), cone.seam_vertices
            if slice_chi is None or seam_vertices != abs(inv.sv):
                continue
            if slice_chi > gammasig_chi_upper(inv):
                bad.append(f"{entry.name}: slice foam above the signature bound")
            if seam_vertices == 0 and slice_chi > slice_chi_upper_bound(inv, is_knot_free(d)):
                bad.append(f"{entry.name}: slice foam above the seamless bound")
    detail = f"{checked} oriented graphs"
    if positive_self:
        detail += f"; self-distance bound positive (μ > 3): {', '.join(sorted(positive_self))}"
    return not bad, detail + (f"; failures: {bad[:3]}" if bad else "")


def _is_cone_target(d: ColoredDiagram) -> bool:
    """Crossingless θ or tetrahedron, where the cone is a genuine slice foam."""
    return not any(n.is_crossing for n in d.nodes) and component_count(d).mu == 3


# ---------------------------------------------------------------- signature engine


def _charpoly(M) -> list[int]:
    """Coefficients of det(xI − M), leading first (Faddeev–LeVerrier, exact)."""
    n = len(M)
    coeffs = [1]
    acc = [[0] * n for _ in range(n)]
    for k in range(1, n + 1):
        c = coeffs[-1]
        acc = [[sum(M[i][l] * acc[l][j] for l in range(n)) + (c if i == j else 0)
                for j in range(n)] for i in range(n)]
        trace = sum(M[i][l] * acc[l][i] for i in range(n) for l in range(n))
        coeffs.append(-trace // k)
    return coeffs


def descartes_inertia(M) -> tuple[int, int, int]:
    """(positive, negative, zero) counts from the characteristic polynomial's sign pattern."""
    n = len(M)
    cs = _charpoly(M)
    zero = 0
    while len(cs) > 1 and cs[-1] == 0:
        cs.pop()
        zero += 1

    def changes(seq):
        s = [x > 0 for x in seq if x]
        return sum(1 for a, b in zip(s, s[1:]) if a != b)

    deg = len(cs) - 1
    pos = changes(cs)
    neg = changes([c if (deg - k) % 2 == 0 else -c for k, c in enumerate(cs)])
    return pos, neg, n - pos - neg


def _bundle(strands: int, letters) -> tuple[int, int]:
    b = link_signature(braid_closure(strands, letters))
    w = signature_nullity(seifert_matrix(BraidWord(strands, tuple(letters))))
    if (b.sigma, b.beta) != (w.sigma, w.beta):
        raise AssertionError(f"routes disagree on {letters}")
    return b.sigma, b.beta


def check_engine(seed: int = 0, words: int = 200, matrices: int = 100) -> tuple[bool, str]:
    rng = random.Random(seed)
    bad = []
    for _ in range(words):
        n = rng.randint(2, 8)
        word = [rng.choice((1, -1)) * rng.randint(1, n - 1) for _ in range(rng.randint(0, 16))]
        base = _bundle(n, word)
        a = rng.choice((1, -1)) * rng.randint(1, n - 1)
        variants = [
            (n, [a] + word + [-a]),
            (n, word[1:] + word[:1]),
            (n + 1, word + [rng.choice((1, -1)) * n]),
        ]
        for strands, w in variants:
            if _bundle(strands, w) != base:
                bad.append(f"{n}:{word}")
                break
    for _ in range(matrices):
        size = rng.randint(1, 12)
        M = [[0] * size for _ in range(size)]
        for i in range(size):
            for j in range(i, size):
                M[i][j] = M[j][i] = rng.randint(-4, 4) if rng.random() < 0.7 else 0
        if rng.random() < 0.3 and size > 1:  # force a kernel
            M[-1] = list(M[0])
            for i in range(size):
                M[i][-1] = M[i][0]
            M[-1][-1] = M[0][0]
        got = congruence_inertia(M)
        if (got.positive, got.negative, got.zero) != descartes_inertia(M):
            bad.append(f"matrix {M}")
    return not bad, f"{words} braid words, {matrices} matrices" + (
        f"; failures: {bad[:2]}" if bad else "")


# ---------------------------------------------------------------- driver


def _timed(label: str, fn, limit: float | None = None) -> CheckResult:
    start = time.perf_counter()
    ok, detail = fn()
    took = time.perf_counter() - start
    if limit is not None and took > limit:
        ok = False
        detail += f"; took {took:.2f}s > {limit}s"
    return CheckResult(label, ok, detail, took)


def run_checks(seed: int = 0) -> list[CheckResult]:
    corpus = build_corpus()
    return [
        _timed("theta_2 reproduction",
               lambda: check_theta(2, 12, Fraction(3), 3, Fraction(3)), 1.0),
        _timed("theta_3 reproduction",
               lambda: check_theta(3, 18, Fraction(9, 2), 5, Fraction(9, 2)), 1.0),
        _timed("theta_n family law", check_family, 5.0),
        _timed("Kinoshita-Wolcott blindness", check_kinoshita, 2.0),
        _timed("mirror and reversal tables", lambda: check_tables(corpus)),
        _timed("connected sum laws", lambda: check_sums(corpus, seed)),
        _timed("foam arithmetic", lambda: check_foam(corpus, seed)),
        _timed("bound consistency", lambda: check_bounds(corpus)),
        _timed("signature engine soundness", lambda: check_engine(seed)),
    ]
