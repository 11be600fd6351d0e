import sympy
from hypothesis import settings, strategies as st

from thetapoly.diagram import Diagram, count_components
from thetapoly.fixtures import build_fixture, fixture_names
from thetapoly.laurent import LaurentPoly

settings.register_profile("default", max_examples=60, deadline=None)
settings.load_profile("default")

A_SYM = sympy.Symbol("A")

THETA_FIXTURES = [n for n in fixture_names() if build_fixture(n).kind == "theta"]
LINK_FIXTURES = [n for n in fixture_names() if build_fixture(n).kind == "link"]
SMALL_THETA = [n for n in THETA_FIXTURES if build_fixture(n).n_crossings <= 3]


laurent_polys = st.dictionaries(
    st.integers(-6, 6), st.integers(-5, 5).filter(bool), max_size=5
).map(LaurentPoly)
nonzero_polys = laurent_polys.filter(lambda p: not p.is_zero())


def to_sympy(p: LaurentPoly):
    return sum((c * A_SYM**e for e, c in p.items()), sympy.Integer(0))


def from_sympy(expr) -> LaurentPoly:
    expr = sympy.expand(expr)
    lo = min((t.as_coeff_exponent(A_SYM)[1] for t in sympy.Add.make_args(expr)), default=0)
    poly = sympy.Poly(sympy.expand(expr * A_SYM ** (-lo)), A_SYM)
    return LaurentPoly({int(m[0]) + int(lo): int(c) for m, c in poly.terms()})


def euler_characteristic_ok(d: Diagram) -> bool:
    """V - E + F = 1 + (connected pieces) for the rotation system of ``d``.

    Faces are traced by entering a node at slot j and leaving at slot j - 1.
    Free loops are ignored.
    """
    arcs = [a for a in d.arcs if not d.is_free_loop(a)]
    if not arcs:
        return True
    node_index = {n.id: k for k, n in enumerate(d.nodes)}
    seen = set()
    faces = 0
    for start in ((a, +1) for a in arcs):
        for dart in (start, (start[0], -1)):
            if dart in seen:
                continue
            faces += 1
            cur = dart
            while cur not in seen:
                seen.add(cur)
                arc, direction = cur
                node, slot = d.head(arc) if direction > 0 else d.tail(arc)
                n = d.node(node)
                out_slot = (slot - 1) % n.degree
                nxt_arc, end = n.slots[out_slot]
                cur = (nxt_arc, +1 if end == "out" else -1)
    pieces = count_components(
        len(d.nodes), [(node_index[d.tail(a)[0]], node_index[d.head(a)[0]]) for a in arcs]
    )
    return len(d.nodes) - len(arcs) + faces == 1 + pieces


# one line per acceptance criterion, printed in the terminal summary
ACCEPTANCE: dict[int, str] = {}


def record_criterion(number: int, ok: bool, detail: str) -> None:
    line = f"criterion {number}: {'PASS' if ok else 'FAIL'} ({detail})"
    ACCEPTANCE[number] = line
    print(line)


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE:
        terminalreporter.section("acceptance criteria")
        for k in sorted(ACCEPTANCE):
            terminalreporter.write_line(ACCEPTANCE[k])
