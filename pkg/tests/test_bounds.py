from fractions import Fraction

import pytest

from kleinsig.bounds import (HypothesisError, chain_report, constituent_bound, gammasig_chi_upper,
                             gordian_lower_bound, realized_slice_chi, theta_n_window,
                             theta_unknotting_bound)
from kleinsig.corpus import build_corpus
from kleinsig.foam import (ChangeScript, chi_orb, cobordism_ledger, cone_foam, parse_script,
                           slice_chi_upper_bound)
from kleinsig.invariants import compute, constituents
from kleinsig.linkops import component_count
from kleinsig.orientation import TotalOrientation, enumerate_orientations
from kleinsig.transform import gen_basic, gen_kinoshita, gen_theta_n, kinoshita_script, theta_n_script


def _dt(d):
    return d, TotalOrientation.default(d)


def _inv(d):
    return compute(*_dt(d))


TRIVIAL = _inv(gen_basic("trivial_theta"))


@pytest.mark.parametrize("n, expect", [(2, (3, 3)), (3, (Fraction(9, 2), 5)), (0, (0, 0))])
def test_theta_bound(n, expect):
    d = gen_theta_n(n) if n else gen_basic("trivial_theta")
    assert theta_unknotting_bound(_inv(d)) == expect


def test_theta_bound_rejects_other_graphs():
    with pytest.raises(HypothesisError, match="θ-curve"):
        theta_unknotting_bound(_inv(gen_basic("tetrahedron")))


def test_gordian_examples():
    t2, t3 = _inv(gen_theta_n(2)), _inv(gen_theta_n(3))
    assert gordian_lower_bound(t2, TRIVIAL) == 3
    assert gordian_lower_bound(t3, t2) == Fraction(3, 2)
    assert gordian_lower_bound(TRIVIAL, TRIVIAL) == 0


def test_gordian_hypotheses():
    with pytest.raises(HypothesisError):
        gordian_lower_bound(TRIVIAL, _inv(gen_basic("tetrahedron")))
    with pytest.raises(HypothesisError):
        gordian_lower_bound(TRIVIAL, _inv(gen_basic("theta_with_loop")))


def test_gordian_clamps_at_zero():
    tet = _inv(gen_basic("tetrahedron"))
    assert gordian_lower_bound(tet, tet) == 0


def test_self_distance_formula_with_many_components():
    # the signature side keeps its 4μ − 12 term even when both graphs coincide
    d = gen_basic("two_thetas")
    inv = _inv(d)
    assert inv.mu == 6
    assert gordian_lower_bound(inv, inv) == Fraction(4 * inv.mu - 12 - 2 * inv.beta, 4)


@pytest.mark.parametrize("name, value", [("trivial_theta", Fraction(1, 4)),
                                         ("tetrahedron", Fraction(1, 4))])
def test_gammasig_basic(name, value):
    assert gammasig_chi_upper(_inv(gen_basic(name))) == value


def test_gammasig_theta2():
    assert gammasig_chi_upper(_inv(gen_theta_n(2))) == Fraction(-11, 4)


def test_chain_theta2_is_sharp():
    d, t = _dt(gen_theta_n(2))
    rep = chain_report(compute(d, t), TRIVIAL, parse_script(theta_n_script(2), d), t,
                       constituents(d, t))
    assert (rep.gordian_bound, rep.cost, rep.gap) == (3, 3, 0)
    assert not rep.violation
    assert rep.chain_lines["left"] == 12
    assert rep.chain_lines["seamed"] == 12
    assert rep.chain_lines["vertex_sum"] is None
    assert rep.mcu_style_bound == 2


@pytest.mark.parametrize("n", range(1, 5))
def test_chain_theta_n(n):
    d, t = _dt(gen_theta_n(n))
    rep = chain_report(compute(d, t), TRIVIAL, parse_script(theta_n_script(n), d), t)
    assert rep.gordian_bound == rep.cost == Fraction(3 * n, 2)
    assert rep.gap == 0


def test_chain_empty_script():
    d, t = _dt(gen_basic("trivial_theta"))
    rep = chain_report(TRIVIAL, TRIVIAL, ChangeScript((), d), t)
    assert (rep.gordian_bound, rep.cost) == (0, 0)


def test_chain_flags_violation():
    d, t = _dt(gen_theta_n(2))
    rep = chain_report(compute(d, t), TRIVIAL, parse_script("same r e0 e0", d), t)
    assert rep.violation
    assert rep.to_json()["violation"] is True


@pytest.mark.parametrize("n, expect", [(2, 2), (3, 3), (0, 0)])
def test_constituent_bound(n, expect):
    d, t = _dt(gen_theta_n(n) if n else gen_basic("trivial_theta"))
    assert constituent_bound(constituents(d, t)) == expect


def test_constituent_bound_needs_knots():
    d, t = _dt(gen_basic("two_thetas"))
    with pytest.raises(HypothesisError):
        constituent_bound(constituents(d, t))


@pytest.mark.parametrize("n", range(2, 9))
def test_theta_bound_beats_constituent_bound(n):
    d, t = _dt(gen_theta_n(n))
    _, u = theta_unknotting_bound(compute(d, t))
    assert u == theta_n_window(n)[0] > constituent_bound(constituents(d, t)) == n


def test_theta_n_window():
    assert theta_n_window(3) == (5, 6)
    assert theta_n_window(2) == (3, 4)


def test_kinoshita_bounds_are_blind():
    d, t = _dt(gen_kinoshita(1, 1, 1))
    rep = chain_report(compute(d, t), TRIVIAL, parse_script(kinoshita_script(1, 1, 1), d), t)
    assert rep.gordian_bound == 0 and not rep.violation


@pytest.mark.parametrize("n", range(1, 5))
def test_realized_slice_foams_respect_upper_bounds(n):
    d, t = _dt(gen_theta_n(n))
    inv = compute(d, t)
    led = cobordism_ledger(parse_script(theta_n_script(n), d), t)
    got = realized_slice_chi(led)
    assert got == gammasig_chi_upper(inv)  # sharp on θ_n
    assert got <= slice_chi_upper_bound(inv, knot_free=True)


@pytest.mark.parametrize("name", ["trivial_theta", "tetrahedron"])
def test_cones_respect_upper_bounds(name):
    d = gen_basic(name)
    f = cone_foam(d)
    for t in enumerate_orientations(d):
        inv = compute(d, t)
        assert f.seam_vertices == abs(inv.sv)
        assert chi_orb(f) <= gammasig_chi_upper(inv)
        if f.seam_vertices == 0:
            assert chi_orb(f) <= slice_chi_upper_bound(inv, knot_free=True)


@pytest.mark.parametrize("entry", [e for e in build_corpus() if e.script],
                         ids=lambda e: e.diagram.name)
def test_chain_never_inverts_on_bundled_scripts(entry):
    d, t = _dt(entry.diagram)
    rep = chain_report(compute(d, t), TRIVIAL, parse_script(entry.script, d), t)
    assert not rep.violation
    assert rep.gordian_bound <= rep.cost


@pytest.mark.parametrize("entry", [e for e in build_corpus() if component_count(e.diagram).mu == 3],
                         ids=lambda e: e.diagram.name)
def test_self_distance_vanishes_for_three_components(entry):
    d = entry.diagram
    for t in enumerate_orientations(d):
        inv = compute(d, t)
        assert gordian_lower_bound(inv, inv) == 0
