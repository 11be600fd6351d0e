"""h-polynomial, flow polynomial, Yamada polynomial and its Jaeger specialization."""

from __future__ import annotations

from collections import Counter
from functools import lru_cache

from .bracket import ResourceLimitError, kauffman_bracket
from .diagram import (
    CROSSING,
    AbstractGraph,
    Diagram,
    DiagramBuilder,
    DiagramError,
    _find,
    _yamada_graph,
    count_components,
    double_link_diagram,
    graph_mu_beta,
    underlying_graph,
    writhe,
)
from .laurent import ONE, PHI, LaurentPoly, RationalFn

__all__ = [
    "Y_VAR",
    "DEFAULT_YAMADA_MAX_CROSSINGS",
    "h_eval",
    "h_subsets",
    "h_flow",
    "flow_polynomial",
    "flow_polynomial_subsets",
    "flow_polynomial_dc",
    "yamada_state_sum",
    "yamada_skein",
    "yamada",
    "jaeger",
    "jaeger_knot",
    "normalized_jaeger_knot",
]

Y_VAR = LaurentPoly({1: -1, 0: -2, -1: -1})  # y = -A - 2 - A^-1
T = LaurentPoly({1: 1})
DEFAULT_YAMADA_MAX_CROSSINGS = 9
SUBSET_EDGE_LIMIT = 24


def _subset_stats(g: AbstractGraph) -> Counter:
    # (|F|, mu(G-F), beta(G-F)) over all edge subsets F
    m = len(g.edges)
    if m > SUBSET_EDGE_LIMIT:
        raise ResourceLimitError(f"subset expansion over {m} edges exceeds {SUBSET_EDGE_LIMIT}")
    stats: Counter = Counter()
    n = g.n_vertices
    for mask in range(1 << m):
        kept = [e for k, e in enumerate(g.edges) if not mask >> k & 1]
        mu = count_components(n, kept)
        stats[(m - len(kept), mu, len(kept) - n + mu)] += 1
    return stats


def h_subsets(g: AbstractGraph, y: LaurentPoly = Y_VAR) -> LaurentPoly:
    """Sum over edge subsets F of (-1)^mu(G-F) y^beta(G-F)."""
    if g.n_vertices == 0:
        return ONE
    total = LaurentPoly()
    by_beta: Counter = Counter()
    for (_, mu, beta), c in _subset_stats(g).items():
        by_beta[beta] += -c if mu % 2 else c
    for beta, c in by_beta.items():
        if c:
            total = total + (y ** beta) * c
    return total


def flow_polynomial_subsets(g: AbstractGraph) -> LaurentPoly:
    """F(G; t) = sum over F of (-1)^|F| t^beta(G-F)."""
    terms: Counter = Counter()
    for (f, _, beta), c in _subset_stats(g).items():
        terms[beta] += -c if f % 2 else c
    p = LaurentPoly(terms)
    if p.valuation() < 0:
        raise AssertionError("flow polynomial has negative powers of t")
    return p


def _canonical(n: int, edges) -> tuple[int, tuple[tuple[int, int], ...]]:
    used = sorted({v for e in edges for v in e})
    relabel = {v: i for i, v in enumerate(used)}
    return len(used), tuple(sorted(tuple(sorted((relabel[u], relabel[v]))) for u, v in edges))


def _is_bridge(n: int, edges: tuple[tuple[int, int], ...], k: int) -> bool:
    rest = edges[:k] + edges[k + 1:]
    parent = list(range(n))
    for u, v in rest:
        ru, rv = _find(parent, u), _find(parent, v)
        if ru != rv:
            parent[ru] = rv
    u, v = edges[k]
    return _find(parent, u) != _find(parent, v)


@lru_cache(maxsize=1 << 16)
def _flow_dc(n: int, edges: tuple[tuple[int, int], ...]) -> LaurentPoly:
    if not edges:
        return ONE
    loops = sum(1 for u, v in edges if u == v)
    if loops:
        rest = tuple(e for e in edges if e[0] != e[1])
        return (T - 1) ** loops * _flow_dc(*_canonical(n, rest))
    deg = Counter()
    for u, v in edges:
        deg[u] += 1
        deg[v] += 1
    if any(d == 1 for d in deg.values()):
        return LaurentPoly()
    # a vertex of degree 2: its two edges are in series, contract one
    for w, d in deg.items():
        if d == 2:
            k = next(i for i, e in enumerate(edges) if w in e)
            return _contract(n, edges, k)
    k = 0
    if _is_bridge(n, edges, k):
        return LaurentPoly()
    deleted = edges[1:]
    return _contract(n, edges, k) - _flow_dc(*_canonical(n, deleted))


def _contract(n: int, edges, k: int) -> LaurentPoly:
    u, v = edges[k]
    merged = tuple((u if a == v else a, u if b == v else b) for i, (a, b) in enumerate(edges) if i != k)
    return _flow_dc(*_canonical(n, merged))


def flow_polynomial_dc(g: AbstractGraph) -> LaurentPoly:
    """Flow polynomial by deletion-contraction (bridge gives 0, loop gives t - 1)."""
    return _flow_dc(*_canonical(g.n_vertices, g.edges))


def flow_polynomial(g: AbstractGraph, method: str = "dc") -> LaurentPoly:
    if method == "subsets":
        return flow_polynomial_subsets(g)
    return flow_polynomial_dc(g)


def h_flow(g: AbstractGraph, y: LaurentPoly = Y_VAR) -> LaurentPoly:
    """h(G; -1, y) = (-1)^(|E|-|V|) F(G; -y)."""
    if g.n_vertices == 0:
        return ONE
    sign = -1 if (len(g.edges) - g.n_vertices) % 2 else 1
    return flow_polynomial_dc(g).evaluate(-y) * sign


def h_eval(g: AbstractGraph, y: LaurentPoly = Y_VAR, method: str = "auto") -> LaurentPoly:
    """h(G; -1, y).  ``method``: ``subsets`` (the oracle), ``flow`` or ``auto``."""
    if method == "subsets":
        return h_subsets(g, y)
    if method in ("flow", "auto"):
        return h_flow(g, y)
    raise ValueError(f"unknown h method {method!r}")


def _check_limit(d: Diagram, max_crossings: int) -> None:
    if d.n_crossings > max_crossings:
        raise ResourceLimitError(f"{d.n_crossings} crossings exceeds the Yamada limit of {max_crossings}")


def yamada_state_sum(
    d: Diagram, max_crossings: int = DEFAULT_YAMADA_MAX_CROSSINGS, h_method: str = "auto"
) -> LaurentPoly:
    """Sum over {+, -, 0}^c of A^(p - m) h(D_s; -1, y).  ``+`` is the A-smoothing."""
    _check_limit(d, max_crossings)
    ix = d.indexed
    if ix.n_arcs == 0 and ix.free_loops == 0 and not ix.vertices:
        return ONE
    c = len(ix.crossings)
    # group states by resulting graph so h is evaluated once per graph
    weights: dict[tuple, Counter] = {}
    h_cache: dict[tuple, LaurentPoly] = {}
    from itertools import product

    for state in product("+-0", repeat=c):
        g = _yamada_graph(ix, state)
        key = _canonical(g.n_vertices, g.edges)
        key = (g.n_vertices, key[1], key[0])
        e = state.count("+") - state.count("-")
        weights.setdefault(key, Counter())[e] += 1
        if key not in h_cache:
            h_cache[key] = h_eval(g, method=h_method)
    total = LaurentPoly()
    for key, w in weights.items():
        total = total + LaurentPoly(w) * h_cache[key]
    return total


def yamada_skein(d: Diagram, max_crossings: int = DEFAULT_YAMADA_MAX_CROSSINGS) -> LaurentPoly:
    """Resolve one crossing at a time: Y = A Y(A-smoothing) + A^-1 Y(B-smoothing) + Y(vertex)."""
    _check_limit(d, max_crossings)
    return _skein(DiagramBuilder.from_diagram(d))


def _skein(b: DiagramBuilder) -> LaurentPoly:
    x = next((nid for nid, (k, _) in b.nodes.items() if k == CROSSING), None)
    if x is None:
        g = underlying_graph(b.build("graph"))
        return h_eval(g, method="subsets") if len(g.edges) <= 12 else h_eval(g)
    out = LaurentPoly()
    for kind, coeff in (("A", LaurentPoly({1: 1})), ("B", LaurentPoly({-1: 1})), ("0", ONE)):
        nb = _copy_builder(b)
        nb.smooth(x, kind)
        out = out + coeff * _skein(nb)
    return out


def _copy_builder(b: DiagramBuilder) -> DiagramBuilder:
    nb = DiagramBuilder()
    nb.arcs = {a: list(v) for a, v in b.arcs.items()}
    nb.nodes = {n: [k, list(s)] for n, (k, s) in b.nodes.items()}
    nb._counter = b._counter
    return nb


def yamada(d: Diagram, method: str = "state-sum", **kwargs) -> LaurentPoly:
    if method == "skein":
        return yamada_skein(d, **kwargs)
    return yamada_state_sum(d, **kwargs)


def jaeger(d: Diagram, **kwargs) -> RationalFn:
    """-Y(D; A^4) / phi^(|E| - |V| + 1) for a diagram of a connected graph."""
    g = underlying_graph(d)
    if g.n_vertices == 0:
        raise DiagramError("jaeger needs a nonempty diagram")
    mu, beta = graph_mu_beta(g)
    if mu != 1:
        raise DiagramError("jaeger needs a connected underlying graph")
    y = yamada_state_sum(d, **kwargs)
    return RationalFn(-y.substitute_power(4), PHI ** beta)


def _require_knot(k: Diagram) -> None:
    if k.vertices:
        raise DiagramError("expected a knot diagram (graph vertices present)")
    from .diagram import link_components

    if len(link_components(k)) != 1:
        raise DiagramError("expected a knot diagram (one component)")


def jaeger_knot(k: Diagram, **kwargs) -> RationalFn:
    """<K^(2)> + 1/phi."""
    _require_knot(k)
    return RationalFn(kauffman_bracket(double_link_diagram(k), **kwargs)) + RationalFn(ONE, PHI)


def normalized_jaeger_knot(k: Diagram, **kwargs) -> RationalFn:
    return jaeger_knot(k, **kwargs) * LaurentPoly({-8 * writhe(k): 1})
