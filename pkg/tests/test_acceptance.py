"""The nine acceptance criteria, each checked at its stated tolerance.

Every criterion prints one PASS/FAIL line with its wall time.  Caches are
cleared first so runtime limits are measured cold.  Where a value comes out of
the engine it is confirmed by a route that does not share its code: Goeritz
forms for link signatures, characteristic polynomials for matrix inertia.
"""

import random
import time
from fractions import Fraction

import pytest

from kleinsig import invariants as _inv_mod, orientation as _or_mod
from kleinsig.bounds import (chain_report, gammasig_chi_upper, gordian_lower_bound,
                             realized_slice_chi, theta_unknotting_bound)
from kleinsig.corpus import build_corpus, random_edge_sum, random_script, random_vertex_sum
from kleinsig.foam import (chi_orb, chiorb_identity_check, cobordism_ledger, cone_foam,
                           parse_script, seamed_cobordism_upper_bound, slice_chi_upper_bound)
from kleinsig.invariants import compute, constituents
from kleinsig.linkops import PAIRS, braid_closure, component_count, split_oriented
from kleinsig.orientation import (TotalOrientation, enumerate_orientations, oriented_pair,
                                  reverse)
from kleinsig.seifert import (BraidWord, congruence_inertia, link_signature, seifert_matrix,
                              signature_nullity)
from kleinsig.transform import gen_basic, gen_kinoshita, gen_theta_n, mirror, theta_n_script

from oracles import charpoly_inertia, pd_goeritz, torus_2_seifert


def _cold():
    _inv_mod.compute.cache_clear()
    _or_mod._components.cache_clear()
    _or_mod.cached_bicolored_link.cache_clear()


def _report(capsys, number, label, ok, detail, seconds, limit=None):
    within = limit is None or seconds < limit
    verdict = "PASS" if ok and within else "FAIL"
    budget = f" (limit {limit:g}s)" if limit is not None else ""
    with capsys.disabled():
        print(f"\n[acceptance {number}] {verdict}  {label}  {seconds:.2f}s{budget}  {detail}")
    assert ok, detail
    assert within, f"took {seconds:.2f}s, limit {limit}s"


def _default(d):
    return d, TotalOrientation.default(d)


def goeritz_signature(d, t):
    """σ of a totally oriented graph summed over bicolored pieces via Gordon–Litherland."""
    total = 0
    for key, _, _ in PAIRS:
        for piece in split_oriented(oriented_pair(d, t, key)):
            if piece.base.crossings:
                total += pd_goeritz(piece.base.crossings,
                                    {a: piece.head(a) for a in piece.base.arcs})[0]
    return total


TRIVIAL = gen_basic("trivial_theta")


def _theta_case(n):
    d, t = _default(gen_theta_n(n))
    inv = compute(d, t)
    uy, u = theta_unknotting_bound(inv)
    script = parse_script(theta_n_script(n), d)
    rep = chain_report(inv, compute(*_default(TRIVIAL)), script, t)
    return inv, (uy, u), script, rep, goeritz_signature(d, t)


def test_criterion_1_theta2(capsys):
    _cold()
    start = time.perf_counter()
    inv, bound, script, rep, oracle = _theta_case(2)
    secs = time.perf_counter() - start
    ok = (abs(inv.sigma) == 12 and oracle == inv.sigma and bound == (3, 3)
          and (script.s, script.m) == (2, 2) and rep.gap == 0 and rep.cost == 3)
    _report(capsys, 1, "θ_2 reproduction", ok,
            f"|σ|={abs(inv.sigma)} (Goeritz {abs(oracle)}) bound={bound[0]},{bound[1]} "
            f"s={script.s} m={script.m} cost={rep.cost} gap={rep.gap}", secs, 1.0)


def test_criterion_2_theta3(capsys):
    _cold()
    start = time.perf_counter()
    inv, (uy, u), script, rep, oracle = _theta_case(3)
    secs = time.perf_counter() - start
    ok = (abs(inv.sigma) == 18 and oracle == inv.sigma and uy == Fraction(9, 2) and u == 5
          and rep.cost == Fraction(9, 2) and rep.gap == 0)
    _report(capsys, 2, "θ_3 reproduction", ok,
            f"|σ|={abs(inv.sigma)} u_Y≥{float(uy)} u≥{u} cost={float(rep.cost)} gap={rep.gap}",
            secs, 1.0)


def test_criterion_3_theta_family(capsys):
    _cold()
    start = time.perf_counter()
    bad = []
    for n in (1, 2, 3, 4):
        d, t = _default(gen_theta_n(n))
        inv = compute(d, t)
        if abs(inv.sigma) != 6 * n or theta_unknotting_bound(inv)[0] != Fraction(3 * n, 2):
            bad.append(f"θ_{n}")
    for n in range(1, 11):
        V = torus_2_seifert(n)
        p, q, _ = charpoly_inertia([[V[i][j] + V[j][i] for j in range(2 * n)]
                                    for i in range(2 * n)])
        piped = link_signature(braid_closure(2, [1] * (2 * n + 1)))
        if not abs(piped.sigma) == 2 * n == abs(p - q) or piped.sigma != p - q:
            bad.append(f"T(2,{2 * n + 1})")
    secs = time.perf_counter() - start
    _report(capsys, 3, "θ_n family law", not bad,
            "failures: " + ", ".join(bad) if bad else
            "|σ(θ_n)|=6n, bound 3n/2 (n≤4); |σ(T(2,2n+1))|=2n (n≤10)", secs, 5.0)


def test_criterion_4_kinoshita(capsys):
    _cold()
    start = time.perf_counter()
    bad = []
    for q, r in ((1, 1), (1, 3), (3, 5)):
        d, t = _default(gen_kinoshita(1, q, r))
        parts = constituents(d, t)
        if (compute(d, t).sigma != 0 or goeritz_signature(d, t) != 0
                or any(b.sigma != 0 or b.mu != 1 for b in parts.values())):
            bad.append(f"θ(1,{q},{r})")
    secs = time.perf_counter() - start
    _report(capsys, 4, "Kinoshita–Wolcott blindness", not bad,
            "failures: " + ", ".join(bad) if bad else "σ = 0, constituents σ = 0", secs, 2.0)


CORPUS = build_corpus()


def test_criterion_5_tables(capsys):
    _cold()
    start = time.perf_counter()
    rows, bad = 0, []
    for e in CORPUS:
        d = e.diagram
        if component_count(d).mu > 6:
            continue
        for t in enumerate_orientations(d):
            rows += 1
            i = compute(d, t)
            m = compute(*mirror(d, t))
            r = compute(d, reverse(t))
            if not (m.lam == -i.lam and r.lam == i.lam and m.mu == r.mu == i.mu
                    and m.beta == r.beta == i.beta and m.sigma == -i.sigma and r.sigma == i.sigma
                    and m.sv == i.sv and r.sv == -i.sv):
                bad.append(f"{d.name} {t.format()}")
    secs = time.perf_counter() - start
    _report(capsys, 5, "mirror/reversal tables", not bad and rows > 0,
            f"{rows} oriented graphs, {len(bad)} failures", secs)


def test_criterion_6_sum_laws(capsys):
    _cold()
    start = time.perf_counter()
    rng = random.Random(6)
    pool = [e.diagram for e in CORPUS
            if component_count(e.diagram).mu <= 4 and e.diagram.vertex_count <= 4]
    bad, n3, n2 = [], 0, 0
    while n3 < 20:
        got = random_vertex_sum(rng, pool)
        if got is None:
            continue
        n3 += 1
        (d1, t1), (d2, t2), (s, ts) = got
        a, b, c = compute(d1, t1), compute(d2, t2), compute(s, ts)
        if not (c.sigma == a.sigma + b.sigma and c.sv == a.sv + b.sv
                and c.mu == a.mu + b.mu - 3 and c.beta == a.beta + b.beta
                and goeritz_signature(s, ts) == c.sigma):
            bad.append(f"#3 {d1.name},{d2.name}")
    while n2 < 20:
        got = random_edge_sum(rng, pool)
        if got is None:
            continue
        n2 += 1
        (d1, t1), (d2, t2), (s, ts) = got
        a, b, c = compute(d1, t1), compute(d2, t2), compute(s, ts)
        if not (c.mu == a.mu + b.mu - 2 and c.beta == a.beta + b.beta + 1):
            bad.append(f"#2 {d1.name},{d2.name}")
    secs = time.perf_counter() - start
    _report(capsys, 6, "sum laws", not bad,
            f"{n3} vertex sums, {n2} edge sums" + (f"; failures {bad}" if bad else ""), secs)


def test_criterion_7_foam_arithmetic(capsys):
    _cold()
    start = time.perf_counter()
    rng = random.Random(7)
    graphs = [e.diagram for e in CORPUS if e.diagram.edges]
    bad, seamless = [], 0
    for k in range(200):
        d = rng.choice(graphs)
        script = random_script(rng, d, rng.randint(0, 10))
        ts = list(enumerate_orientations(d)) if component_count(d).mu <= 6 else []
        t = rng.choice(ts) if ts and rng.random() < 0.7 else None
        rep = cobordism_ledger(script, t)
        half_v = Fraction(d.vertex_count, 2)
        ok = rep.chi_orb == -half_v - (rep.s + Fraction(rep.m, 2))
        ok &= -rep.chi_orb == rep.cost + half_v
        if rep.descriptor.seam_vertices == 0:
            seamless += 1
            ok &= chiorb_identity_check(rep.descriptor)
        if not ok:
            bad.append(f"script {k} on {d.name}")
    secs = time.perf_counter() - start
    _report(capsys, 7, "foam arithmetic", not bad,
            f"200 scripts, identity checked on {seamless} seamless ledgers"
            + (f"; failures {bad[:3]}" if bad else ""), secs)


def test_criterion_8_bound_consistency(capsys):
    _cold()
    start = time.perf_counter()
    trivial = compute(*_default(TRIVIAL))
    rng = random.Random(8)
    bad, checked, self_positive = [], 0, []
    for e in CORPUS:
        d = e.diagram
        for t in enumerate_orientations(d) if component_count(d).mu <= 6 else [_default(d)[1]]:
            inv = compute(d, t)
            checked += 1
            # seamed cobordisms: crossing changes keep every bicolored component count
            for _ in range(3):
                led = cobordism_ledger(random_script(rng, d, rng.randint(0, 6)), t)
                if led.chi_orb > seamed_cobordism_upper_bound(inv, inv):
                    bad.append(f"seamed {d.name}")
            if e.script and inv.V == 2:
                led = cobordism_ledger(parse_script(e.script, d), t)
                rep = chain_report(inv, trivial, parse_script(e.script, d), t)
                slice_chi = realized_slice_chi(led)
                if rep.violation or slice_chi > gammasig_chi_upper(inv) \
                        or slice_chi > slice_chi_upper_bound(inv, knot_free=True):
                    bad.append(f"chain {d.name}")
            if d.name in ("trivial_theta", "tetrahedron"):
                f = cone_foam(d)
                if f.seam_vertices != abs(inv.sv) or chi_orb(f) > gammasig_chi_upper(inv):
                    bad.append(f"cone {d.name}")
                if f.seam_vertices == 0 and chi_orb(f) > slice_chi_upper_bound(inv, True):
                    bad.append(f"cone slice {d.name}")
            if inv.mu == 3 and gordian_lower_bound(inv, inv) != 0:
                bad.append(f"self {d.name}")
            if inv.mu > 3 and gordian_lower_bound(inv, inv) > 0 and d.name not in self_positive:
                self_positive.append(d.name)
    secs = time.perf_counter() - start
    detail = f"{checked} oriented graphs; no inversion on scripted pairs"
    if self_positive:
        detail += f"; literal self-distance bound positive for μ > 3: {', '.join(self_positive)}"
    _report(capsys, 8, "bound consistency", not bad,
            detail + (f"; failures {bad[:3]}" if bad else ""), secs)


def test_criterion_9_engine(capsys):
    _cold()
    start = time.perf_counter()
    rng = random.Random(9)
    bad = []

    def sb(n, letters):
        b = signature_nullity(seifert_matrix(BraidWord(n, tuple(letters))))
        return b.sigma, b.beta

    for k in range(200):
        n = rng.randint(2, 8)
        letters = [rng.choice([1, -1]) * rng.randint(1, n - 1) for _ in range(rng.randint(0, 16))]
        base = sb(n, letters)
        c = rng.randrange(len(letters)) if letters else 0
        conj = letters[c:] + letters[:c]
        if sb(n, conj) != base or sb(n + 1, letters + [rng.choice([n, -n])]) != base:
            bad.append(f"word {k}")
    for k in range(100):
        size = rng.randint(1, 12)
        M = [[0] * size for _ in range(size)]
        for i in range(size):
            for j in range(i, size):
                M[i][j] = M[j][i] = rng.randint(-4, 4) if rng.random() < 0.6 else 0
        inert = congruence_inertia(M, random.Random(k))
        if (inert.positive, inert.negative, inert.zero) != charpoly_inertia(M):
            bad.append(f"matrix {k}")
    secs = time.perf_counter() - start
    _report(capsys, 9, "signature engine soundness", not bad,
            "200 braid words, 100 matrices" + (f"; failures {bad[:3]}" if bad else ""), secs)
