import pytest
from hypothesis import given, strategies as st

from thetapoly.bracket import kauffman_bracket
from thetapoly.diagram import (
    AbstractGraph,
    Diagram,
    DiagramError,
    Node,
    ParseError,
    apply_reidemeister,
    delete_strands,
    diagram_to_text,
    double_link_diagram,
    graph_mu_beta,
    link_components,
    parse_diagram,
    resolve_bracket_state,
    resolve_yamada_state,
    underlying_graph,
    validate_diagram,
    writhe,
)
from thetapoly.fixtures import build_fixture, fixture_names, fixture_text, hopf_link, trefoil_link, trivial_theta
from thetapoly.laurent import DELTA, LaurentPoly
from thetapoly.theta import boundary_link, subknot, validate_theta

from conftest import LINK_FIXTURES, THETA_FIXTURES, euler_characteristic_ok

CIRCLE = "format link-v1\narc a\ncomponent k a\n"
TRIVIAL_THETA = """\
format theta-v1
arc p
arc q
arc r
vertex v1 r:out q:out p:out
vertex v2 p:in q:in r:in
edge e1 p
edge e2 q
edge e3 r
"""


def circle() -> Diagram:
    return parse_diagram(CIRCLE)


def signature(d: Diagram):
    """Relabel-invariant form of a connected diagram: breadth-first arc
    numbering from each starting arc, keeping the lexicographically least."""
    best = None
    for start in d.arcs:
        order = {start: 0}
        queue = [start]
        while queue:
            arc = queue.pop(0)
            for end in (d.tail(arc), d.head(arc)):
                if end is None:
                    continue
                for a, _ in d.node(end[0]).slots:
                    if a not in order:
                        order[a] = len(order)
                        queue.append(a)
        if len(order) != len(d.arcs):
            raise ValueError("signature needs a connected diagram")
        nodes = []
        for n in d.nodes:
            refs = tuple((order[a], e) for a, e in n.slots)
            if n.kind == "vertex":
                refs = min(refs[i:] + refs[:i] for i in range(len(refs)))
            nodes.append((n.kind, refs))
        sig = tuple(sorted(nodes))
        best = sig if best is None or sig < best else best
    return best


# -- parsing ---------------------------------------------------------------


def test_parse_single_circle():
    d = circle()
    assert d.n_crossings == 0
    assert len(link_components(d)) == 1
    assert validate_diagram(d).ok


def test_parse_trivial_theta():
    d = parse_diagram(TRIVIAL_THETA)
    assert len(d.vertices) == 2 and len(d.arcs) == 3
    validate_theta(d)


def test_parse_unknown_arc_names_it():
    text = TRIVIAL_THETA.replace("edge e3 r", "edge e3 a9")
    with pytest.raises(ParseError, match="a9"):
        parse_diagram(text)


def test_parse_error_carries_line_number():
    text = TRIVIAL_THETA.replace("vertex v2 p:in q:in r:in", "vertex v2 p:in q:in a9:in")
    with pytest.raises(ParseError) as info:
        parse_diagram(text)
    assert info.value.line == 6


@pytest.mark.parametrize(
    "text, fragment",
    [
        ("arc a\n", "format"),
        ("format link-v2\n", "format"),
        ("format link-v1\narc a\narc a\n", "declared twice"),
        ("format link-v1\narc a\ncrossing x a:in a:out\n", "4 arc references"),
        ("format link-v1\narc a\nblob a\n", "unknown keyword"),
        ("format link-v1\narc a\narc b\ncrossing x a:in b:in a:out a:in\n", "used twice"),
        ("format link-v1\narc a\nedge e1 a\n", "only allowed"),
        ("format link-v1\narc a\narc b\ncrossing x a:in b:in a:out b:sideways\n", ":in or :out"),
    ],
)
def test_parse_errors(text, fragment):
    with pytest.raises(ParseError, match=fragment):
        parse_diagram(text)


# -- validation --------------------------------------------------------------


def test_validate_trivial_theta():
    assert validate_diagram(trivial_theta()).ok


def test_validate_under_strand_direction():
    text = "format link-v1\narc a\narc b\ncrossing x a:out b:in a:in b:out\n"
    report = validate_diagram(parse_diagram(text))
    assert not report.ok
    assert any("under-strand must enter at slot 0" in e for e in report.errors)


def test_arc_attached_twice_at_head():
    nodes = [Node("x", "crossing", (("a", "in"), ("b", "in"), ("a", "in"), ("b", "out")))]
    with pytest.raises(DiagramError, match="attached twice"):
        Diagram(["a", "b"], nodes)


def test_validate_component_order():
    d = trefoil_link()
    comps = {k: tuple(reversed(v)) for k, v in d.components.items()}
    bad = Diagram(d.arcs, d.nodes, "link", components=comps)
    assert not validate_diagram(bad).ok


@pytest.mark.parametrize("name", fixture_names())
def test_fixtures_validate_and_are_planar(name):
    d = build_fixture(name)
    assert validate_diagram(d).ok
    assert euler_characteristic_ok(d)


def test_planarity_helper_rejects_a_virtual_code():
    # the Hopf code with one crossing reflected is not a plane diagram
    d = hopf_link()
    x1, x2 = d.nodes
    flipped = Node(x2.id, x2.kind, (x2.slots[0], x2.slots[3], x2.slots[2], x2.slots[1]))
    assert not euler_characteristic_ok(Diagram(d.arcs, [x1, flipped], "link"))


# -- state resolution ----------------------------------------------------------


def test_bracket_state_circle():
    assert resolve_bracket_state(circle(), ()) == 1


def test_bracket_states_hopf():
    d = hopf_link()
    assert resolve_bracket_state(d, "AA") == 2
    assert resolve_bracket_state(d, "AB") == 1
    assert resolve_bracket_state(d, "BA") == 1
    assert resolve_bracket_state(d, "BB") == 2


def test_bracket_states_trefoil():
    d = trefoil_link()
    assert resolve_bracket_state(d, "AAA") + resolve_bracket_state(d, "BBB") == 3 + 2


def test_bracket_state_rejects_graphs():
    with pytest.raises(DiagramError):
        resolve_bracket_state(trivial_theta(), ())


@st.composite
def link_and_state(draw):
    d = draw(st.sampled_from(_state_diagrams()))
    return d, draw(st.lists(st.sampled_from("AB"), min_size=d.n_crossings, max_size=d.n_crossings))


_STATE_DIAGRAMS = []


def _state_diagrams():
    if not _STATE_DIAGRAMS:
        _STATE_DIAGRAMS.extend([hopf_link(), trefoil_link(), double_link_diagram(trefoil_link())])
        _STATE_DIAGRAMS.append(boundary_link(validate_theta(build_fixture("clasp-theta"))))
        _STATE_DIAGRAMS.append(apply_reidemeister(circle(), "R1+", "a"))
    return _STATE_DIAGRAMS


@given(link_and_state())
def test_loop_count_bounds(case):
    d, state = case
    loops = resolve_bracket_state(d, state)
    assert 1 <= loops <= d.n_crossings + len(link_components(d))


def test_yamada_state_theta():
    g = resolve_yamada_state(trivial_theta(), ())
    assert g.n_vertices == 2
    assert sorted(g.edges) == [(0, 1)] * 3


def test_yamada_states_of_a_curl():
    d = apply_reidemeister(circle(), "R1+", "a")
    vertex = resolve_yamada_state(d, "0")
    assert vertex.n_vertices == 1 and vertex.edges == ((0, 0), (0, 0))
    smoothings = [resolve_yamada_state(d, s) for s in "+-"]
    assert sorted(len(g.edges) for g in smoothings) == [1, 2]
    single = next(g for g in smoothings if len(g.edges) == 1)
    assert single == AbstractGraph.loop()


@pytest.mark.parametrize("name", ["clasp-theta", "trefoil-theta", "move3-before", "hopf", "trefoil"])
def test_all_vertex_state(name):
    d = build_fixture(name)
    g = resolve_yamada_state(d, "0" * d.n_crossings)
    assert g.n_vertices == len(d.vertices) + d.n_crossings
    degree_sum = sum(v.degree for v in d.vertices) + 4 * d.n_crossings
    assert 2 * len(g.edges) == degree_sum
    mu, beta = graph_mu_beta(g)
    assert beta == len(g.edges) - g.n_vertices + mu


@pytest.mark.parametrize(
    "g, expected",
    [
        (AbstractGraph.loop(), (1, 1)),
        (AbstractGraph.theta(), (1, 2)),
        (AbstractGraph(2), (2, 0)),
    ],
)
def test_mu_beta(g, expected):
    assert graph_mu_beta(g) == expected


def test_underlying_graph_of_theta_ignores_crossings():
    g = underlying_graph(build_fixture("clasp-theta"))
    assert g.n_vertices == 2 and len(g.edges) == 3


# -- doubling and deletion -----------------------------------------------------


def test_double_circle():
    d2 = double_link_diagram(circle())
    assert d2.n_crossings == 0
    assert len(link_components(d2)) == 2
    assert kauffman_bracket(d2, method="naive") == DELTA


def test_double_curl():
    d2 = double_link_diagram(apply_reidemeister(circle(), "R1+", "a"))
    assert d2.n_crossings == 4
    assert len(link_components(d2)) == 2


@pytest.mark.parametrize("make", [hopf_link, trefoil_link, lambda: subknot(validate_theta(build_fixture("clasp-theta")), 3)])
def test_doubling_counts(make):
    d = make()
    d2 = double_link_diagram(d)
    assert d2.n_crossings == 4 * d.n_crossings
    assert len(link_components(d2)) == 2 * len(link_components(d))
    assert validate_diagram(d2).ok


def test_doubling_rejects_graphs():
    with pytest.raises(DiagramError):
        double_link_diagram(trivial_theta())


def test_delete_hopf_component():
    d = hopf_link()
    k = delete_strands(d, [sorted(d.components)[0]])
    assert k.n_crossings == 0
    assert len(link_components(k)) == 1


def test_delete_theta_edge():
    k = delete_strands(trivial_theta(), ["e2", "e3"])
    assert k.n_crossings == 0 and not k.vertices
    assert len(link_components(k)) == 1


def test_delete_unknown_label():
    with pytest.raises(DiagramError, match="unknown labels"):
        delete_strands(hopf_link(), ["nope"])


def test_extract_boundary_component_of_clasp():
    t = validate_theta(build_fixture("clasp-theta"))
    L = boundary_link(t)
    l1 = delete_strands(L, ["l1"])
    assert len(link_components(l1)) == 1
    # l1 runs along e2 and e3; only e2 meets the clasp, so no crossings survive
    assert l1.n_crossings == 0
    l3 = delete_strands(L, ["l3"])
    # l3 runs along e1 and e2, one strand of each through both clasp crossings
    assert l3.n_crossings == 2
    assert writhe(l3) == writhe(subknot(t, 3))


# -- Reidemeister moves and writhe ---------------------------------------------


def test_writhe_examples():
    assert writhe(circle()) == 0
    assert writhe(apply_reidemeister(circle(), "R1+", "a")) == 1
    assert abs(writhe(trefoil_link())) == 3


def test_r1_multiplies_bracket():
    d = apply_reidemeister(circle(), "R1+", "a")
    assert kauffman_bracket(d, method="naive") == LaurentPoly({3: -1})


def test_r1_undo():
    d = trefoil_link()
    curled = apply_reidemeister(d, "R1-", d.arcs[0])
    new = next(x.id for x in curled.crossings if x.id not in {y.id for y in d.crossings})
    back = apply_reidemeister(curled, "R1undo", new)
    assert signature(back) == signature(d)


def test_r2_and_inverse():
    d = trefoil_link()
    a, b = d.arcs[0], d.arcs[3]
    pushed = apply_reidemeister(d, "R2", (a, b, True))
    assert pushed.n_crossings == d.n_crossings + 2
    assert kauffman_bracket(pushed, method="naive") == kauffman_bracket(d, method="naive")
    new = [x.id for x in pushed.crossings if x.id not in {y.id for y in d.crossings}]
    back = apply_reidemeister(pushed, "R2undo", tuple(new))
    assert signature(back) == signature(d)


def test_move_site_errors():
    d = hopf_link()
    with pytest.raises(DiagramError):
        apply_reidemeister(d, "R1+", "zz")
    with pytest.raises(DiagramError):
        apply_reidemeister(d, "R2", (d.arcs[0], d.arcs[0], True))
    with pytest.raises(DiagramError):
        apply_reidemeister(d, "R1undo", d.crossings[0].id)
    with pytest.raises(ValueError):
        apply_reidemeister(d, "R7", None)


# -- round trip -----------------------------------------------------------------


@pytest.mark.parametrize("name", fixture_names())
def test_round_trip(name):
    d = build_fixture(name)
    again = parse_diagram(diagram_to_text(d))
    assert diagram_to_text(again) == diagram_to_text(d)
    assert signature(again) == signature(d)


@pytest.mark.parametrize("name", THETA_FIXTURES + LINK_FIXTURES)
def test_shipped_file_matches_builder(name):
    shipped = parse_diagram(fixture_text(name))
    assert diagram_to_text(shipped) == diagram_to_text(build_fixture(name))
