import pytest

from thetapoly.bracket import jones, kauffman_bracket, writhe
from thetapoly.diagram import delete_strands, double_link_diagram, link_components, parse_diagram
from thetapoly.fixtures import MOVE_PAIRS, PortDiagram, build_fixture, fixture_text, hopf_link, trefoil_link
from thetapoly.laurent import ONE, PHI, LaurentPoly, RationalFn
from thetapoly.theta import (
    BRUNNIAN_DIFFERENCE,
    OmegaMatrix,
    ParityError,
    ThetaError,
    associated_link,
    band_twist_diagrams,
    boundary_link,
    corollary1_check,
    doubled_components,
    f_n,
    normalized_jaeger,
    normalized_yamada,
    omega_matrix,
    subknot,
    theorem1_report,
    twist_numbers,
    twist_region_diagrams,
    twist_sum_rule,
    validate_theta,
    verify_prop1,
    verify_prop2,
    verify_prop3,
    verify_twist_reduction,
    verify_twists,
)
from thetapoly.yamada import jaeger, normalized_jaeger_knot, yamada_state_sum

from conftest import SMALL_THETA, THETA_FIXTURES

PHI2 = PHI * PHI
TRIVIAL_JAEGER = RationalFn(PHI2 - 3) + RationalFn(LaurentPoly({0: 2}), PHI2)
UNKNOT_J = RationalFn(-PHI) + RationalFn(ONE, PHI)
NAIVE = {"method": "naive"}


def theta(name):
    return validate_theta(build_fixture(name))


# -- structure -------------------------------------------------------------------


def test_trivial_theta_is_valid():
    t = theta("trivial-theta")
    assert set(t.edges) == {"e1", "e2", "e3"}


def test_wrong_cyclic_order_at_v1():
    text = fixture_text("curl-theta").replace("vertex v1 e3:out e2:out a1:out", "vertex v1 a1:out e2:out e3:out")
    with pytest.raises(ThetaError, match="cyclic order at v1"):
        validate_theta(parse_diagram(text))


def test_edge_split_into_separate_arcs():
    text = fixture_text("curl-theta").replace("edge e1 a1 a2 e1", "edge e1 a1 e1").replace("edge e2 e2", "edge e2 e2 a2")
    with pytest.raises(ThetaError):
        validate_theta(parse_diagram(text))


def test_link_is_not_a_theta():
    with pytest.raises(ThetaError):
        validate_theta(hopf_link())


@pytest.mark.parametrize(
    "name, omega, n",
    [
        ("trivial-theta", OmegaMatrix(), (0, 0, 0)),
        ("curl-theta", OmegaMatrix(w11=1), (-1, 0, 0)),
        ("clasp-theta", OmegaMatrix(w12=2), (1, 1, -1)),
        ("trefoil-theta", OmegaMatrix(w11=-3), (3, 0, 0)),
    ],
)
def test_omega_and_twist_numbers(name, omega, n):
    t = theta(name)
    assert omega_matrix(t) == omega
    assert twist_numbers(t).as_tuple() == n


def test_parity_violation_is_an_error():
    # one crossing between e1 and e2 cannot be drawn in the plane
    p = PortDiagram()
    p.crossing("x", "e1a", "e2a", "e1b", "e2b")
    p.vertex("v1", "e3", "e2a", "e1a")
    p.vertex("v2", "e1b", "e2b", "e3")
    t = validate_theta(p.to_diagram("theta"))
    with pytest.raises(ParityError):
        twist_numbers(t)


@pytest.mark.parametrize("name", THETA_FIXTURES)
def test_twist_number_formula(name):
    t = theta(name)
    w = omega_matrix(t)
    n = twist_numbers(t).as_tuple()
    for i, j, k in ((1, 2, 3), (2, 1, 3), (3, 1, 2)):
        assert 2 * n[i - 1] == -2 * w.get(i, i) + w.get(i, j) + w.get(i, k) - w.get(j, k)
        assert n[j - 1] + n[k - 1] == -(w.get(j, j) + w.get(k, k) - w.get(j, k))


def test_subknots_of_small_fixtures():
    for i in (1, 2, 3):
        assert subknot(theta("trivial-theta"), i).n_crossings == 0
    k = subknot(theta("clasp-theta"), 3)
    assert k.n_crossings == 2 and abs(writhe(k)) == 2
    assert jones(k) == ONE
    assert subknot(theta("curl-theta"), 1).n_crossings == 0
    with pytest.raises(ValueError):
        subknot(theta("trivial-theta"), 4)


def test_trefoil_theta_subknots():
    t = theta("trefoil-theta")
    v = jones(trefoil_link())
    assert jones(subknot(t, 1)) == ONE
    assert {jones(subknot(t, 2)), jones(subknot(t, 3))} == {v}


# -- boundary and associated links --------------------------------------------------


def test_boundary_link_of_trivial_theta():
    L = boundary_link(theta("trivial-theta"))
    assert L.n_crossings == 0
    assert len(link_components(L)) == 3
    assert set(L.components) == {"l1", "l2", "l3"}


@pytest.mark.parametrize("name", THETA_FIXTURES)
def test_boundary_link_counts(name):
    t = theta(name)
    L = boundary_link(t)
    assert L.n_crossings == 4 * t.base.n_crossings
    assert len(link_components(L)) == 3


@pytest.mark.parametrize("name", THETA_FIXTURES)
def test_writhe_law(name):
    t = theta(name)
    n = twist_numbers(t)
    assert writhe(associated_link(t, n)) == -2 * n.total


@pytest.mark.parametrize("name", THETA_FIXTURES)
def test_component_writhes(name):
    t = theta(name)
    n = twist_numbers(t).as_tuple()
    L = boundary_link(t)
    for i in (1, 2, 3):
        li = delete_strands(L, [f"l{i}"])
        j, k = (m for m in (1, 2, 3) if m != i)
        assert n[j - 1] + n[k - 1] == -writhe(li)


def test_associated_link_examples():
    L = associated_link(theta("trivial-theta"))
    assert jones(L) == PHI2
    assert associated_link(theta("clasp-theta")).n_crossings == 4 * 2 + 2 * (1 + 1 + 1)


def test_doubled_components_are_blackboard_doubles():
    L = boundary_link(theta("clasp-theta"))
    doubled = doubled_components(L)
    for k in ("l1", "l2", "l3"):
        expected = double_link_diagram(delete_strands(L, [k]))
        assert kauffman_bracket(doubled[k]) == kauffman_bracket(expected)
        assert len(link_components(doubled[k])) == 2


# -- twist calculus --------------------------------------------------------------------


def test_f_n_examples():
    assert f_n(0) == RationalFn(LaurentPoly())
    assert f_n(1) == RationalFn(ONE - LaurentPoly({-4: 1}))
    assert f_n(-1) == RationalFn(LaurentPoly({-4: 1}) * (ONE - LaurentPoly({8: 1})), LaurentPoly({0: 1, -4: 1}))


@pytest.mark.parametrize("n", range(-3, 4))
@pytest.mark.parametrize("m", range(-3, 4))
def test_twist_sum_rules(n, m):
    assert twist_sum_rule(n, m) == {"averaged": True, "left": True, "right": True}


TWO_CIRCLES = parse_diagram("format link-v1\narc a\narc b\ncomponent k a\ncomponent m b\n")
CIRCLE = parse_diagram("format link-v1\narc a\ncomponent k a\n")


@pytest.mark.parametrize("n", range(-3, 4))
@pytest.mark.parametrize(
    "d, region",
    [
        (TWO_CIRCLES, ("a", "b")),
        (CIRCLE, ("a", "a")),
        (hopf_link(), ("h1", "h4")),
        (trefoil_link(), (trefoil_link().arcs[0], trefoil_link().arcs[2])),
    ],
)
def test_twist_reduction(d, region, n):
    assert verify_twist_reduction(d, region, n, **NAIVE)


@pytest.mark.parametrize("n", [1, 2, 3])
def test_twisted_closure_is_a_torus_link(n):
    a_n, a_0, a_inf = twist_region_diagrams(TWO_CIRCLES, ("a", "b"), n)
    assert a_n.n_crossings == 2 * n
    assert len(link_components(a_n)) == 2
    assert len(link_components(a_inf)) == 1
    assert abs(writhe(a_n)) == 2 * n


def test_twist_region_needs_known_arcs():
    with pytest.raises(Exception):
        twist_region_diagrams(CIRCLE, ("a", "zz"), 1)


@pytest.mark.parametrize("label", ["e1", "e2", "e3"])
@pytest.mark.parametrize("n", [-2, -1, 1, 2])
def test_band_twists(label, n):
    a_n, a_0, a_inf = band_twist_diagrams(theta("curl-theta"), label, n)
    assert a_n.n_crossings == a_0.n_crossings + 2 * abs(n)
    lhs = kauffman_bracket(a_n)
    rhs = RationalFn(kauffman_bracket(a_0).shift(2 * n)) + f_n(n) * kauffman_bracket(a_inf)
    assert RationalFn(lhs) == rhs


def test_verify_twists_report():
    report = verify_twists(theta("clasp-theta"), ns=range(-2, 3))
    assert report.ok
    assert len(report.checks) == 3 * 5 + 25


# -- normalizations -----------------------------------------------------------------------


def test_normalized_yamada_examples():
    t = theta("trivial-theta")
    assert normalized_yamada(t) == yamada_state_sum(t.base)
    c = theta("clasp-theta")
    assert normalized_yamada(c) == yamada_state_sum(c.base).shift(2)


def test_normalized_jaeger_examples():
    assert normalized_jaeger(theta("trivial-theta")) == TRIVIAL_JAEGER
    assert normalized_jaeger(theta("curl-theta")) == TRIVIAL_JAEGER


@pytest.mark.parametrize("name", THETA_FIXTURES)
def test_normalizations_related_by_substitution(name):
    t = theta(name)
    assert RationalFn(normalized_yamada(t).substitute_power(4)) == normalized_jaeger(t) * (-PHI2)


@pytest.mark.parametrize("pair", sorted(MOVE_PAIRS))
def test_move_invariance(pair):
    before, after = (validate_theta(f()) for f in MOVE_PAIRS[pair])
    assert normalized_yamada(after) == normalized_yamada(before)
    assert normalized_jaeger(after) == normalized_jaeger(before)


def test_kinoshita_is_distinguished_from_trivial():
    assert normalized_yamada(theta("kinoshita-theta")) != normalized_yamada(theta("trivial-theta"))


# -- identities ----------------------------------------------------------------------------


@pytest.mark.parametrize("name", SMALL_THETA)
def test_prop1(name):
    report = verify_prop1(theta(name))
    assert report.ok


def test_prop2_trivial_value():
    report = verify_prop2(theta("trivial-theta"), **NAIVE)
    assert report.ok
    assert report["lhs"] == PHI2


@pytest.mark.parametrize("name", SMALL_THETA)
def test_prop2(name):
    assert verify_prop2(theta(name)).ok


def test_prop3_trivial_value():
    report = verify_prop3(theta("trivial-theta"), **NAIVE)
    assert report.ok
    assert report["lhs"] == TRIVIAL_JAEGER


@pytest.mark.parametrize("name", SMALL_THETA)
def test_prop3(name):
    assert verify_prop3(theta(name)).ok


def test_theorem1_trivial():
    report = theorem1_report(theta("trivial-theta"), **NAIVE)
    assert report.ok
    assert report["difference"] == BRUNNIAN_DIFFERENCE
    assert BRUNNIAN_DIFFERENCE == RationalFn(LaurentPoly({0: -3})) + RationalFn(LaurentPoly({0: 2}), PHI2)


@pytest.mark.parametrize("name", SMALL_THETA)
def test_theorem1(name):
    assert theorem1_report(theta(name)).ok


def test_theorem1_trefoil_difference():
    t = theta("trefoil-theta")
    report = theorem1_report(t)
    assert report.ok
    jt = normalized_jaeger_knot(trefoil_link())
    expected = (jt * 2 + UNKNOT_J) / PHI - RationalFn(ONE, PHI2)
    assert report["difference"] == expected


def test_corollary1_on_trivial_and_trefoil():
    trivial = corollary1_check(theta("trivial-theta"))
    assert trivial["subknots_trivial_proxy"] and trivial["matches"]
    knotted = corollary1_check(theta("trefoil-theta"))
    assert not knotted["subknots_trivial_proxy"]
    assert not knotted["matches"]


def test_jaeger_of_theta_uses_exponent_two():
    t = theta("clasp-theta")
    assert jaeger(t.base) == RationalFn(-yamada_state_sum(t.base).substitute_power(4), PHI2)
